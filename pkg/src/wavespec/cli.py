"""The ``wavespec`` command line."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import NoThresholdError, WavespecError
from .presets import PRESETS, preset_rows
from .profiles import WaveFamily, eval_phi, make_profile, omega_to_k
from .stability import Verdict, analyze
from .threshold import find_k0

EXIT_STABLE = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_UNSTABLE = 10
EXIT_INDETERMINATE = 20
EXIT_NO_THRESHOLD = 30

SIG_DIGITS = 12

_VERDICT_EXIT = {
    Verdict.STABLE: EXIT_STABLE,
    Verdict.UNSTABLE: EXIT_UNSTABLE,
    Verdict.INDETERMINATE: EXIT_INDETERMINATE,
}


class UsageError(Exception):
    pass


# -- serialization ---------------------------------------------------------


def canonical(obj):
    """Round floats to 12 significant digits; non-finite floats become None."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.{SIG_DIGITS}g}") + 0.0  # drops the sign of -0.0
    return obj


def dumps_json(obj) -> str:
    return json.dumps(canonical(obj), sort_keys=True, separators=(",", ": "), indent=2,
                      ensure_ascii=False) + "\n"


def _cell(v) -> str:
    v = canonical(v)
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for key, v in d.items():
        name = f"{prefix}{key}"
        if isinstance(v, dict):
            out.update(flatten(v, name + "."))
        else:
            out[name] = v
    return out


def dumps_csv(rows: list, columns: list | None = None) -> str:
    columns = columns or list(rows[0]) if rows else (columns or [])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def dumps_md(rows: list, columns: list | None = None) -> str:
    columns = columns or list(rows[0]) if rows else (columns or [])
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for r in rows:
        lines.append("| " + " | ".join(_cell(r.get(c)) for c in columns) + " |")
    return "\n".join(lines) + "\n"


def render(payload, fmt: str, columns: list | None = None) -> str:
    """JSON keeps the nesting; CSV and Markdown flatten to dotted columns."""
    if fmt == "json":
        return dumps_json(payload)
    rows = payload if isinstance(payload, list) else [payload]
    rows = [flatten(r) for r in rows]
    if columns is None and rows:
        columns = []
        for r in rows:
            columns.extend(c for c in r if c not in columns)
    return dumps_csv(rows, columns) if fmt == "csv" else dumps_md(rows, columns)


def emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- argument handling -----------------------------------------------------


def _family(value: str) -> WaveFamily:
    try:
        return WaveFamily.parse(value)
    except WavespecError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _period(value: str) -> float:
    v = value.strip().lower()
    if v in ("2pi", "2*pi", "twopi"):
        return 2.0 * math.pi
    L = float(v)
    if not (L > 0.0 and math.isfinite(L)):
        raise argparse.ArgumentTypeError(f"period must be positive, got {value!r}")
    return L


def _sweep(value: str) -> list[float]:
    try:
        lo, hi, step = (float(s) for s in value.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEP, got {value!r}") from None
    if not (0.0 < lo <= hi < 1.0 and step > 0.0):
        raise argparse.ArgumentTypeError(f"need 0 < LO <= HI < 1 and STEP > 0, got {value!r}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) for i in range(n)]


def _k_list(value: str) -> list[float]:
    try:
        return [float(s) for s in value.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated moduli, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wavespec",
                                 description="Spectral stability of periodic critical KdV and Gardner waves.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, point=True, fmt="json", required=None):
        required = point if required is None else required
        p.add_argument("--family", type=_family, required=required,
                       help="ckdv-dnoidal, ckdv-cnoidal or gardner")
        p.add_argument("--L", type=_period, required=required, help="period (a number or 2pi)")
        if point:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--k", type=float, help="elliptic modulus in (0, 1)")
            g.add_argument("--omega", type=float, help="wave speed; converted to k")
        p.add_argument("--grid-n", type=int, default=None, help="IVP grid size (default from WAVESPEC_GRID_N)")
        p.add_argument("--format", choices=("json", "csv", "md"), default=fmt)
        p.add_argument("--out", default=None, help="write here instead of standard output")

    p = sub.add_parser("analyze", help="stability report for one wave")
    common(p)
    p.add_argument("--no-spectral", action="store_true", help="skip the Fourier eigenvalue check")

    p = sub.add_parser("table", help="reports for a list of moduli")
    common(p, point=False, fmt="csv")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS))
    src.add_argument("--k-list", type=_k_list)
    src.add_argument("--sweep-k", type=_sweep)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")
    p.add_argument("--no-spectral", action="store_true")

    p = sub.add_parser("threshold", help="modulus where I changes sign")
    common(p, point=False)
    p.add_argument("--k-lo", type=float, default=0.3)
    p.add_argument("--k-hi", type=float, default=0.99)

    p = sub.add_parser("profile", help="samples of phi and the Hill potential, or an I(k) sweep")
    common(p, fmt="csv")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--sweep-k", type=_sweep, default=None)
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("spectrum", help="lowest eigenvalues and inertial index")
    common(p, required=False)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--modes", type=int, default=None, help="Fourier cutoff N")
    p.add_argument("--constant", type=float, default=None,
                   help="use the constant potential q = C instead of a wave")
    return ap


def _resolve_k(args) -> float:
    if args.k is None and args.omega is None:
        raise UsageError("give one of --k or --omega")
    if args.k is not None:
        if not 0.0 < args.k < 1.0:
            raise UsageError(f"--k must lie in (0, 1), got {args.k}")
        return args.k
    return omega_to_k(args.family, args.L, args.omega)


# -- commands --------------------------------------------------------------


def _report_row(task):
    family, L, k, grid_n, spectral = task
    try:
        d = analyze(family, L, k=k, N=grid_n, spectral=spectral).to_dict()
    except WavespecError as exc:
        p = make_profile(family, L, k)
        d = {"family": p.family.value, "L": L, "k": k, "omega": p.omega,
             "verdict": Verdict.INDETERMINATE.value, "notes": [f"{type(exc).__name__}: {exc}"]}
    return d


TABLE_COLUMNS = ["family", "L", "k", "omega", "I", "D.det_D", "D.det_raw", "D.det_prefactored",
                 "inner_products.lphi_phi", "inner_products.lphi_one", "nL", "nI", "nD", "K_Ham",
                 "verdict"]


def _pool_map(fn, tasks, jobs):
    jobs = jobs or os.cpu_count() or 1
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as ex:
        # map preserves input order
        return list(ex.map(fn, tasks))


def cmd_analyze(args) -> int:
    k = _resolve_k(args)
    rep = analyze(args.family, args.L, k=k, N=args.grid_n, spectral=not args.no_spectral)
    emit(render(rep.to_dict(), args.format), args.out)
    return _VERDICT_EXIT[rep.verdict]


def cmd_table(args) -> int:
    spectral = not args.no_spectral
    if args.preset:
        family, _ = PRESETS[args.preset]
        if args.family is not None and args.family.value != family:
            raise UsageError(f"preset {args.preset} is for {family}")
        rows = preset_rows(args.preset, args.L)
        if not rows:
            raise UsageError(f"preset {args.preset} has no rows for L={args.L}")
    else:
        if args.family is None or args.L is None:
            raise UsageError("--family and --L are required without --preset")
        ks = args.k_list or args.sweep_k
        bad = [k for k in ks if not 0.0 < k < 1.0]
        if bad or not ks:
            raise UsageError(f"moduli must lie in (0, 1), got {bad or ks}")
        rows = [(args.family.value, args.L, k) for k in ks]
    tasks = [(f, L, k, args.grid_n, spectral) for f, L, k in rows]
    out = _pool_map(_report_row, tasks, args.jobs)
    if args.format == "json":
        emit(dumps_json(out), args.out)
    else:
        flat = [flatten(r) for r in out]
        text = dumps_csv(flat, TABLE_COLUMNS) if args.format == "csv" else dumps_md(flat, TABLE_COLUMNS)
        emit(text, args.out)
    return EXIT_STABLE


def cmd_threshold(args) -> int:
    if args.family is None or args.L is None:
        raise UsageError("--family and --L are required")
    try:
        res = find_k0(args.family, args.L, args.k_lo, args.k_hi, N=args.grid_n)
    except NoThresholdError as exc:
        print(f"wavespec: no threshold: {exc}", file=sys.stderr)
        return EXIT_NO_THRESHOLD
    emit(render(res.to_dict(), args.format), args.out)
    return EXIT_STABLE


def _sweep_row(task):
    family, L, k, grid_n = task
    try:
        d = analyze(family, L, k=k, N=grid_n, spectral=False).to_dict()
        det = d["D"]["det_D"] if d["D"] else None
        return {"k": k, "omega": d["omega"], "I": d["I"], "det_D": det, "verdict": d["verdict"]}
    except WavespecError as exc:
        return {"k": k, "omega": make_profile(family, L, k).omega, "I": None, "det_D": None,
                "verdict": f"error: {type(exc).__name__}"}


def cmd_profile(args) -> int:
    if args.sweep_k:
        tasks = [(args.family.value, args.L, k, args.grid_n) for k in args.sweep_k]
        rows = _pool_map(_sweep_row, tasks, args.jobs)
        emit(render(rows, args.format, ["k", "omega", "I", "det_D", "verdict"]), args.out)
        return EXIT_STABLE
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    p = make_profile(args.family, args.L, _resolve_k(args))
    xs = np.linspace(0.0, p.L, args.samples + 1)
    phi, dphi, d2phi = eval_phi(p, xs)
    q = p.potential(xs)
    cols = ["x", "phi", "dphi", "d2phi", "q"]
    if args.format == "json":
        payload = {"family": p.family.value, "L": p.L, "k": p.k, "omega": p.omega, "A": p.A,
                   **{c: v.tolist() for c, v in zip(cols, (xs, phi, dphi, d2phi, q))}}
        emit(dumps_json(payload), args.out)
    else:
        rows = [dict(zip(cols, r)) for r in zip(xs, phi, dphi, d2phi, q)]
        emit(render(rows, args.format, cols), args.out)
    return EXIT_STABLE


def cmd_spectrum(args) -> int:
    from .spectral import (DEFAULT_MODES, assemble_hill, check_profile, eigen_symmetric,
                           inertial_index)

    if args.count < 1:
        raise UsageError("--count must be positive")
    if args.constant is not None:
        if args.L is None:
            raise UsageError("--L is required")
        N = args.modes or DEFAULT_MODES
        H = assemble_hill(args.constant, args.L, N)
        eigs = eigen_symmetric(H.M)
        scale = abs(args.constant) + (2.0 * math.pi / args.L) ** 2
        idx = inertial_index(eigs, scale, count=args.count)
        payload = {"potential": "constant", "C": args.constant, "L": args.L, "modes": N,
                   "n_neg": idx.n_neg, "n_zero": idx.n_zero, "eigenvalues": idx.eigensample,
                   "z_tol": idx.z_tol}
    else:
        if args.family is None or args.L is None:
            raise UsageError("--family and --L are required")
        p = make_profile(args.family, args.L, _resolve_k(args))
        idx = check_profile(p, N=args.modes, check_expected=False, count=args.count)
        payload = {"family": p.family.value, "L": p.L, "k": p.k, "omega": p.omega,
                   "modes": idx.N, "n_neg": idx.n_neg, "n_zero": idx.n_zero,
                   "n_expected": p.family.n_expected, "eigenvalues": idx.eigensample,
                   "z_tol": idx.z_tol, "kernel_correlation": idx.kernel_correlation}
    emit(render(payload, args.format), args.out)
    return EXIT_STABLE


COMMANDS = {
    "analyze": cmd_analyze,
    "table": cmd_table,
    "threshold": cmd_threshold,
    "profile": cmd_profile,
    "spectrum": cmd_spectrum,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_STABLE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        # DomainError and RangeError derive from ValueError
        print(f"wavespec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WavespecError as exc:
        print(f"wavespec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"wavespec: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
