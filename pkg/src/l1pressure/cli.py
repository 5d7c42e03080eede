"""Command-line front end.

Exit codes: 0 success, 2 unreadable or invalid input, 3 a computation
rejected its input, 4 at least one replication case failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import certificates, dynamics, pressure, replication
from .errors import PressureError, UnknownCase
from .vectorspace import NormSpec, PointSet

EXIT_OK, EXIT_PARSE, EXIT_COMPUTE, EXIT_REPLICATION = 0, 2, 3, 4


class InputError(Exception):
    """Raised for anything wrong with the files or flags a user supplied."""


@dataclass
class InputDocument:
    dim: int
    norm: NormSpec
    points: np.ndarray
    base: np.ndarray | None = None
    delta: float | None = None


def _numbers(row, what: str) -> list[float]:
    try:
        vals = [float(x) for x in row]
    except (TypeError, ValueError):
        raise InputError(f"{what} must be a list of numbers") from None
    if not all(math.isfinite(v) for v in vals):
        raise InputError(f"{what} contains a non-finite number")
    return vals


def _parse_norm(tag: str) -> NormSpec:
    try:
        return NormSpec.parse(tag)
    except (ValueError, TypeError, AttributeError) as exc:
        raise InputError(f"bad norm tag {tag!r}: {exc}") from None


def parse_document(text: str, norm_flag: str | None = None) -> InputDocument:
    """Read either a JSON document or whitespace-separated rows (one point per line)."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            raw = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        if not isinstance(raw.get("points"), list):
            raise InputError("document needs a 'points' list")
        rows = [_numbers(p, "point") for p in raw["points"]]
        dim = raw.get("dim", len(rows[0]) if rows else None)
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise InputError("'dim' must be a positive integer")
        tag = norm_flag or raw.get("norm", "l2")
        base = raw.get("base")
        delta = raw.get("delta")
    else:
        rows = [_numbers(line.split(), "row") for line in stripped.splitlines()
                if line.strip() and not line.lstrip().startswith("#")]
        dim = len(rows[0]) if rows else 0
        tag, base, delta = norm_flag or "l2", None, None
    if not rows:
        raise InputError("no points given")
    if any(len(r) != dim for r in rows):
        raise InputError(f"every point must have {dim} coordinates")
    if base is not None:
        base = _numbers(base, "base")
        if len(base) != dim:
            raise InputError("base has the wrong dimension")
    if delta is not None:
        delta = _numbers([delta], "delta")[0]
        if delta <= 0:
            raise InputError("delta must be positive")
    return InputDocument(dim, _parse_norm(tag), np.array(rows, dtype=float),
                         None if base is None else np.array(base), delta)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(args) -> InputDocument:
    doc = parse_document(_read(args.input), args.norm)
    if args.base is not None:
        doc.base = np.array(_vector_flag(args.base, "--base"))
        if doc.base.size != doc.dim:
            raise InputError("--base has the wrong dimension")
    if args.delta is not None:
        if not args.delta > 0:
            raise InputError("--delta must be positive")
        doc.delta = args.delta
    return doc


def _vector_flag(text: str, flag: str) -> list[float]:
    return _numbers(text.replace(",", " ").split(), flag)


def _query(doc: InputDocument, **kw) -> pressure.PressureQuery:
    base = doc.base if doc.base is not None else np.zeros(doc.dim)
    return pressure.PressureQuery(PointSet(doc.points, doc.norm), base, doc.delta, **kw)


def _config(doc: InputDocument) -> dict:
    return {"dim": doc.dim, "norm": doc.norm.tag, "m": int(doc.points.shape[0]),
            "base": None if doc.base is None else doc.base, "delta": doc.delta}


# --- subcommands ------------------------------------------------------------


def _krecord(r: pressure.KRecord) -> dict:
    return {"k": r.k, "value": r.value, "witness": list(r.witness), "bound_kind": r.bound_kind,
            "admissible": r.admissible,
            "coefficients": None if r.coefficients is None else r.coefficients}


def cmd_pressure(args) -> dict:
    doc = _load(args)
    k_max = args.k if args.k is not None else args.k_max
    q = _query(doc, k_max=k_max, eta=args.eta, search_budget=args.budget, seed=args.seed)
    if args.k is not None:
        fn = {"signed": lambda: pressure.phi_k(q, args.k, _mode(args, q, args.k, True)),
              "unsigned": lambda: pressure.psi_k(q, args.k, _mode(args, q, args.k, False)),
              "separated": lambda: pressure.phi_k_separated(q, args.k)}[args.variant]
        rec = fn()
        rows, inf, rule = [rec], rec.value, False
    else:
        rep = pressure.pressure_P(q, args.variant, args.mode)
        rows, inf, rule = rep.per_k, rep.truncated_inf, rep.exact_zero_rule_applied
    return {
        "config": {**_config(doc), "scale": q.scale, "variant": args.variant, "mode": args.mode,
                   "k": args.k, "k_max": k_max, "eta": args.eta, "budget": args.budget,
                   "seed": args.seed, "tolerance": args.tolerance},
        "per_k": [_krecord(r) for r in rows],
        "truncated_inf": inf,
        "vanishes": inf <= args.tolerance,
        "exact": all(r.bound_kind == pressure.EXACT for r in rows),
        "exact_zero_rule_applied": rule,
    }


def _mode(args, q, k, repetition) -> str:
    return pressure._resolve_mode(q, k, args.mode, repetition)


def cmd_certificate(args) -> dict:
    doc = _load(args)
    q = _query(doc)
    vs = q.normalized()
    cert = certificates.solve_certificate(vs, doc.norm)
    check = certificates.verify_certificate(cert, vs)
    m = vs.shape[0]
    pipe = certificates.certificate_pipeline(q, {m: tuple(range(m))}, {m: cert})
    entry = pipe.entries[0]
    return {
        "config": {**_config(doc), "scale": q.scale},
        "certificate": {"f": cert.f, "gamma": cert.gamma, "dual_norm": cert.norm_of_f.tag},
        "checks": {"dual_norm_ok": check.dual_norm_ok, "level_ok": check.level_ok,
                   "abs_level_ok": check.abs_level_ok},
        "unsigned_bound": entry.gamma if entry.unsigned_certified else None,
        "signed_inner": entry.signed_inner,
        "signed_claim": entry.signed_claim,
    }


def cmd_coherence(args) -> dict:
    doc = _load(args)
    ps = PointSet(doc.points, doc.norm)
    rep = certificates.coherence_report(ps)
    out = {"config": _config(doc), "mu": rep.mu, "lambda_min": rep.lambda_min,
           "clamped": rep.clamped, "phi_lower": rep.phi_lower}
    if args.cross_check:
        m = len(ps)
        if m > 6:
            raise InputError("--cross-check supports at most 6 points")
        q = _query(doc, k_max=m)
        vals = [pressure.phi_k(q, k).value for k in range(1, m + 1)]
        out["cross_check"] = [{"k": k, "phi": v, "bound_ok": rep.phi_lower <= v + 1e-8}
                              for k, v in enumerate(vals, start=1)]
    return out


def _load_map(path: str, norm_flag: str | None) -> dynamics.MapSpec:
    try:
        raw = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid map JSON: {exc}") from None
    if not isinstance(raw, dict) or "b" not in raw:
        raise InputError("map needs at least 'b'")
    norm = _parse_norm(norm_flag or raw.get("norm", "l2"))
    kind = raw.get("kind", "affine" if "A" in raw else "translation")
    b = _numbers(raw["b"], "b")
    if kind == "translation":
        return dynamics.MapSpec.translation(b, norm)
    if kind != "affine" or not isinstance(raw.get("A"), list):
        raise InputError("affine map needs a matrix 'A'")
    a = [_numbers(row, "A row") for row in raw["A"]]
    if len(a) != len(b) or any(len(r) != len(b) for r in a):
        raise InputError("'A' must be square and match 'b'")
    return dynamics.MapSpec.affine(a, b, norm)


def cmd_dynamics(args) -> dict:
    m = _load_map(args.map, args.norm)
    x0 = _vector_flag(args.x0, "--x0") if args.x0 else [0.0] * m.dim
    if len(x0) != m.dim:
        raise InputError("--x0 has the wrong dimension")
    rec = dynamics.orbit(m, x0, args.steps, args.scheme)
    out = {
        "config": {"kind": m.kind, "norm": m.ambient_norm.tag, "dim": m.dim, "x0": x0,
                   "steps": args.steps, "scheme": args.scheme},
        "nonexpansive": m.nonexpansive,
        "lipschitz": m.lipschitz,
        "orbit": {"final": rec.iterates[-1], "residuals": rec.residuals,
                  "hull_diameter": rec.hull_diameter,
                  "displacement_estimate": rec.displacement_estimate},
    }
    if args.fixed_point:
        out["fixed_point"] = dynamics.fixed_point_affine(m)
    if args.check_lemmas:
        if args.region:
            region = parse_document(_read(args.region), m.ambient_norm.tag).points
        else:
            region = rec.iterates
        chk = dynamics.displacement_diameter_check(m, PointSet(region, m.ambient_norm))
        out["bounds"] = {"delta_est": chk.delta_est, "diam": chk.diam,
                         "displacement_le_diameter": chk.within_diameter,
                         "displacement_le_twice_orbit_hull": chk.within_orbit_hull}
    return out


def cmd_replicate(args) -> dict:
    if args.all:
        cases = replication.run_all()
    else:
        try:
            cases = [replication.run_case(args.case)]
        except UnknownCase as exc:
            raise InputError(str(exc)) from None
    passed = sum(c.passed for c in cases)
    return {
        "config": {"selection": "all" if args.all else args.case},
        "cases": [{"name": c.name, "expected": c.expected, "computed": c.computed,
                   "deviation": c.deviation, "tolerance": c.tolerance, "passed": c.passed,
                   "location": c.location} for c in cases],
        "passed": passed,
        "total": len(cases),
    }


# --- output -----------------------------------------------------------------


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


def render(report: dict, fmt: str) -> str:
    data = _plain(report)
    if fmt == "structured":
        return json.dumps(data, sort_keys=True, indent=2)
    lines: list[str] = []

    def walk(prefix: str, v):
        if isinstance(v, dict):
            for k in v:
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for i, item in enumerate(v):
                walk(f"{prefix}[{i}]", item)
        else:
            lines.append(f"{prefix}: {v}")

    walk("", data)
    return "\n".join(lines)


# --- parser -----------------------------------------------------------------


def _eta(text: str) -> float:
    v = float(text)
    if not 0.0 < v <= 1.0:
        raise argparse.ArgumentTypeError(f"eta must lie in (0, 1], got {v}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="l1pressure", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "structured"], default="text")
    common.add_argument("--timing", action="store_true", help="add wall time to the report")
    common.add_argument("--norm", help="norm tag: l1, l2, linf or lp:<p>")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--input", required=True, help="JSON document or rows of numbers")
    data.add_argument("--base", help="base point, comma or space separated")
    data.add_argument("--delta", type=float)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pressure", parents=[common, data], help="signed/unsigned/separated pressure")
    level = p.add_mutually_exclusive_group()
    level.add_argument("--k", type=_positive_int)
    level.add_argument("--k-max", type=_positive_int, default=3)
    p.add_argument("--variant", choices=["signed", "unsigned", "separated"], default="signed")
    p.add_argument("--eta", type=_eta)
    p.add_argument("--mode", choices=["auto", "exhaustive", "search"], default="auto")
    p.add_argument("--budget", type=_positive_int, default=pressure.DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.set_defaults(func=cmd_pressure)

    c = sub.add_parser("certificate", parents=[common, data], help="dual certificate for the whole set")
    c.set_defaults(func=cmd_certificate)

    h = sub.add_parser("coherence", parents=[common, data], help="coherence and Gram bounds")
    h.add_argument("--cross-check", action="store_true")
    h.set_defaults(func=cmd_coherence)

    d = sub.add_parser("dynamics", parents=[common], help="orbits of affine maps and translations")
    d.add_argument("--map", required=True, help="JSON with kind, A, b")
    d.add_argument("--x0")
    d.add_argument("--steps", type=_nonneg_int, default=10)
    d.add_argument("--scheme", choices=["plain", "krasnoselskii"], default="plain")
    d.add_argument("--fixed-point", action="store_true")
    d.add_argument("--check-lemmas", action="store_true")
    d.add_argument("--region", help="points used as region samples for --check-lemmas")
    d.set_defaults(func=cmd_dynamics)

    r = sub.add_parser("replicate", parents=[common], help="recompute the worked examples")
    which = r.add_mutually_exclusive_group(required=True)
    which.add_argument("--all", action="store_true")
    which.add_argument("--case")
    r.set_defaults(func=cmd_replicate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if args.command == "pressure" and args.variant == "separated" and args.eta is None:
        print("error: --variant separated needs --eta", file=sys.stderr)
        return EXIT_PARSE
    started = time.perf_counter()
    try:
        report = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PressureError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    report = {"command": args.command, **report}
    if args.timing:
        report["wall_time_s"] = time.perf_counter() - started
    print(render(report, args.format))
    if args.command == "replicate" and report["passed"] != report["total"]:
        return EXIT_REPLICATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
