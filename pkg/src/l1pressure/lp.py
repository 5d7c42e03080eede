"""Dense two-phase tableau simplex method with Bland's anti-cycling rule.

Solves ``min c @ x`` subject to ``A_ub @ x <= b_ub``, ``A_eq @ x = b_eq`` and
``x >= 0``. Problems in this package have at most a few dozen variables, so
the whole tableau is kept dense.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import LPDegenerate, LPInfeasible, LPUnbounded

_TOL = 1e-11


class LPResult(NamedTuple):
    x: np.ndarray
    fun: float
    iterations: int


def _pivot(tab: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    others = np.arange(tab.shape[0]) != row
    tab[others] -= np.outer(tab[others, col], tab[row])


def _run(tab: np.ndarray, basis: list[int], n_cols: int, budget: int) -> int:
    """Optimise the tableau in place; the last row is the reduced-cost row."""
    steps = 0
    m = tab.shape[0] - 1
    while True:
        cost = tab[-1, :n_cols]
        entering = next((j for j in range(n_cols) if cost[j] < -_TOL), None)
        if entering is None:
            return steps
        column = tab[:m, entering]
        rows = [i for i in range(m) if column[i] > _TOL]
        if not rows:
            raise LPUnbounded("objective is unbounded below")
        ratios = [tab[i, -1] / column[i] for i in rows]
        best = min(ratios)
        # Bland: among tied rows leave on the smallest basic variable index.
        leaving = min(
            (i for i, r in zip(rows, ratios) if r <= best + _TOL * max(1.0, abs(best))),
            key=lambda i: basis[i],
        )
        _pivot(tab, leaving, entering)
        basis[leaving] = entering
        steps += 1
        if steps > budget:
            raise LPDegenerate("simplex iteration budget exhausted")


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, max_iter: int = 50000) -> LPResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq

    # Columns: original vars | slacks | artificials.
    a = np.zeros((m, n + m_ub))
    a[:m_ub, :n] = A_ub
    a[:m_ub, n:] = np.eye(m_ub)
    a[m_ub:, :n] = A_eq
    rhs = np.concatenate([b_ub, b_eq])
    flip = rhs < 0
    a[flip] *= -1.0
    rhs = np.abs(rhs)

    basis: list[int] = []
    need_art = []
    for i in range(m):
        if i < m_ub and not flip[i]:
            basis.append(n + i)
        else:
            basis.append(-1)
            need_art.append(i)
    n_real = n + m_ub
    n_art = len(need_art)
    tab = np.zeros((m + 1, n_real + n_art + 1))
    tab[:m, :n_real] = a
    tab[:m, -1] = rhs
    for k, i in enumerate(need_art):
        tab[i, n_real + k] = 1.0
        basis[i] = n_real + k

    steps = 0
    if n_art:
        tab[-1, n_real:n_real + n_art] = 1.0
        for i in need_art:
            tab[-1] -= tab[i]
        steps += _run(tab, basis, n_real + n_art, max_iter)
        if -tab[-1, -1] > 1e-9 * max(1.0, float(rhs.max(initial=0.0))):
            raise LPInfeasible("constraints admit no nonnegative solution")
        # Drive remaining (zero-level) artificials out of the basis.
        keep = []
        for i in range(m):
            if basis[i] >= n_real:
                col = next((j for j in range(n_real) if abs(tab[i, j]) > 1e-9), None)
                if col is None:
                    continue  # redundant row
                _pivot(tab, i, col)
                basis[i] = col
            keep.append(i)
        tab = np.vstack([tab[keep][:, list(range(n_real)) + [-1]], np.zeros(n_real + 1)])
        basis = [basis[i] for i in keep]
    m = len(basis)

    tab[-1, :] = 0.0
    tab[-1, :n] = c
    for i, bv in enumerate(basis):
        if tab[-1, bv] != 0.0:
            tab[-1] -= tab[-1, bv] * tab[i]
    steps += _run(tab, basis, n_real, max_iter)

    x = np.zeros(n_real)
    for i, bv in enumerate(basis):
        x[bv] = tab[i, -1]
    x = x[:n]
    return LPResult(x, float(c @ x), steps)
