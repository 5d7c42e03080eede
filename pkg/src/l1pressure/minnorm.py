"""Minimum-norm point of the convex hull of finitely many vectors.

All solvers minimise ``||W.T @ w||`` over the standard simplex, where the rows
of ``W`` are the vectors. The Euclidean case uses Wolfe's active-set
algorithm, polyhedral norms an exact linear programme, and general ``lp``
norms an away-step conditional-gradient scheme polished by SLSQP.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .lp import solve_lp
from .vectorspace import NormSpec, norm_rows

WOLFE_TOL = 1e-10
MAX_ITER = 10000


class HullMin(NamedTuple):
    value: float
    weights: np.ndarray
    exact: bool


def _affine_min(pts: np.ndarray) -> np.ndarray:
    """Weights (summing to one) of the min-norm point of the affine hull of ``pts``."""
    s = pts.shape[0]
    border = np.zeros((s + 1, s + 1))
    border[:s, :s] = pts @ pts.T
    border[:s, s] = 1.0
    border[s, :s] = 1.0
    rhs = np.zeros(s + 1)
    rhs[s] = 1.0
    sol = np.linalg.lstsq(border, rhs, rcond=None)[0]
    alpha = sol[:s]
    return alpha / alpha.sum()


def wolfe_min_norm(vs: np.ndarray, tol: float = WOLFE_TOL, max_iter: int = MAX_ITER) -> HullMin:
    """Wolfe's min-norm-point algorithm (Euclidean norm)."""
    vs = np.asarray(vs, dtype=float)
    k = vs.shape[0]
    sq = np.einsum("ij,ij->i", vs, vs)
    scale = max(float(sq.max()), np.finfo(float).tiny)
    active = [int(np.argmin(sq))]
    lam = np.array([1.0])
    x = vs[active[0]].copy()
    for _ in range(max_iter):
        xx = float(x @ x)
        if xx <= tol * tol * scale:
            break
        dots = vs @ x
        j = int(np.argmin(dots))
        if xx - dots[j] <= tol * scale or j in active:
            break
        active.append(j)
        lam = np.append(lam, 0.0)
        while True:
            alpha = _affine_min(vs[active])
            if np.all(alpha > 1e-14):
                lam = alpha
                break
            neg = alpha <= 1e-14
            ratios = lam[neg] / (lam[neg] - alpha[neg])
            theta = float(np.min(ratios)) if ratios.size else 1.0
            lam = lam + theta * (alpha - lam)
            keep = lam > 1e-14
            keep[np.argmax(lam)] = True
            active = [a for a, kp in zip(active, keep) if kp]
            lam = lam[keep]
            lam = lam / lam.sum()
        x = lam @ vs[active]
    weights = np.zeros(k)
    weights[active] = lam
    value = float(np.linalg.norm(weights @ vs))
    return HullMin(value, weights, True)


def lp_min_norm(vs: np.ndarray, n: NormSpec) -> HullMin:
    """Exact min-norm point over the hull for the l1 or linf norm."""
    vs = np.asarray(vs, dtype=float)
    k, d = vs.shape
    w = vs.T
    if n.kind == "linf":
        # variables: weights (k), t
        c = np.zeros(k + 1)
        c[-1] = 1.0
        ones = -np.ones((d, 1))
        a_ub = np.vstack([np.hstack([w, ones]), np.hstack([-w, ones])])
    elif n.kind == "l1":
        # variables: weights (k), r (d)
        c = np.concatenate([np.zeros(k), np.ones(d)])
        eye = -np.eye(d)
        a_ub = np.vstack([np.hstack([w, eye]), np.hstack([-w, eye])])
    else:
        raise ValueError("lp_min_norm only handles polyhedral norms")
    a_eq = np.zeros((1, c.size))
    a_eq[0, :k] = 1.0
    res = solve_lp(c, a_ub, np.zeros(2 * d), a_eq, [1.0])
    weights = np.clip(res.x[:k], 0.0, None)
    weights /= weights.sum()
    value = float(norm_rows(weights @ vs, n))
    return HullMin(value, weights, True)


def _lp_grad(y: np.ndarray, p: float) -> np.ndarray:
    a = np.abs(y)
    top = a.max()
    if top == 0.0:
        return np.zeros_like(y)
    r = a / top
    total = np.sum(r ** p)
    return np.sign(y) * r ** (p - 1) / total ** ((p - 1) / p)


def frank_wolfe_min_norm(vs: np.ndarray, n: NormSpec, tol: float = 1e-10,
                         max_iter: int = 2000) -> HullMin:
    """Away-step conditional gradient over the simplex (approximate)."""
    vs = np.asarray(vs, dtype=float)
    k = vs.shape[0]
    f = lambda wt: float(norm_rows(wt @ vs, n))
    lengths = norm_rows(vs, n)
    scale = max(float(lengths.max()), np.finfo(float).tiny)
    tol = tol * scale
    start = int(np.argmin(lengths))
    w = np.zeros(k)
    w[start] = 1.0
    for _ in range(max_iter):
        y = w @ vs
        if f(w) <= 1e-3 * tol:
            break
        grad = vs @ _lp_grad(y, n.p)
        s = int(np.argmin(grad))
        support = np.flatnonzero(w > 0)
        away = support[int(np.argmax(grad[support]))]
        fw_gap = float(grad @ w - grad[s])
        if fw_gap <= tol:
            break
        if fw_gap >= float(grad[away] - grad @ w) or len(support) == 1:
            direction = -w.copy()
            direction[s] += 1.0
            top = 1.0
        else:
            direction = w.copy()
            direction[away] -= 1.0
            top = w[away] / (1.0 - w[away]) if w[away] < 1.0 else 1.0
        step = minimize_scalar(lambda g: f(w + g * direction), bounds=(0.0, top),
                               method="bounded", options={"xatol": 1e-14}).x
        w = np.clip(w + step * direction, 0.0, None)
        w /= w.sum()
    return HullMin(f(w), w, False)


def _polish(vs: np.ndarray, n: NormSpec, w0: np.ndarray) -> HullMin:
    # ||.||_p ** p is C^1 for p > 1, unlike the norm itself at the origin.
    p = n.p
    obj = lambda w: float(np.sum(np.abs(w @ vs) ** p))
    jac = lambda w: vs @ (p * np.sign(w @ vs) * np.abs(w @ vs) ** (p - 1))
    res = minimize(obj, w0, jac=jac, method="SLSQP", bounds=[(0.0, 1.0)] * len(w0),
                   constraints=[{"type": "eq", "fun": lambda w: w.sum() - 1.0,
                                 "jac": lambda w: np.ones_like(w)}],
                   options={"ftol": 1e-16, "maxiter": 500})
    w = np.clip(res.x, 0.0, None)
    w /= w.sum()
    return HullMin(float(norm_rows(w @ vs, n)), w, False)


def simplex_grid(k: int, resolution: int) -> np.ndarray:
    """All weight vectors with entries ``i / resolution`` summing to one."""
    rows = []
    for bars in itertools.combinations(range(resolution + k - 1), k - 1):
        edges = (-1,) + bars + (resolution + k - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(k)])
    return np.asarray(rows, dtype=float) / resolution


def grid_min_norm(vs: np.ndarray, n: NormSpec, resolution: int = 200) -> HullMin:
    vs = np.asarray(vs, dtype=float)
    grid = simplex_grid(vs.shape[0], resolution)
    vals = norm_rows(grid @ vs, n)
    i = int(np.argmin(vals))
    return HullMin(float(vals[i]), grid[i], False)


def hull_min_norm(vs: np.ndarray, n: NormSpec) -> HullMin:
    """Dispatch on the norm; only ``lp`` norms give an approximate answer."""
    vs = np.asarray(vs, dtype=float)
    if vs.shape[0] == 1:
        w = np.ones(1)
        return HullMin(float(norm_rows(vs[0], n)), w, True)
    if n.kind == "l2":
        return wolfe_min_norm(vs)
    if n.is_polyhedral:
        return lp_min_norm(vs, n)
    best = frank_wolfe_min_norm(vs, n, max_iter=300)
    polished = _polish(vs, n, best.weights)
    if polished.value < best.value:
        best = polished
    if vs.shape[0] <= 3:
        check = grid_min_norm(vs, n, 60)
        if check.value < best.value:
            best = check
    return best
