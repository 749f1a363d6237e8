"""Command-line front end.

Every command prints JSON (or CSV for tabular output) on stdout; floats
are rendered with 17 significant digits so they round-trip exactly.  File
outputs get a sibling <name>.manifest.json recording the invocation,
versions, wall time and an sha256 of the bytes written.  Domain errors
exit 1 with a single diagnostic line on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from typing import Sequence

import numpy as np

from . import __version__, dickman, hull, predictor, scanner, smooth, squares
from .errors import (
    AccuracyError,
    CapacityError,
    CheckpointError,
    ConfigError,
    CutoffError,
    DomainError,
)
from .implicit_params import solve_nu, solve_omega

_ERRORS = (
    DomainError,
    ConfigError,
    AccuracyError,
    CutoffError,
    CapacityError,
    CheckpointError,
    OSError,
)


def _render(obj, indent: int = 0) -> str:
    # json with floats at 17 significant digits
    pad = "  " * indent
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return format(obj, ".17g")
    if isinstance(obj, int):
        return str(obj)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ", ".join(_render(v, indent + 1) for v in obj)
        return f"[{inner}]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f'{pad}  {json.dumps(str(k))}: {_render(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    raise TypeError(f"cannot render {type(obj)}")


def _emit(obj: dict) -> None:
    print(_render(obj))


def _versions() -> dict:
    try:
        import numba

        numba_version = numba.__version__
    except ImportError:
        numba_version = None
    return {
        "package": __version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "numba": numba_version,
    }


def _manifest(path: str, data: bytes, args: argparse.Namespace, t0: float) -> None:
    manifest = {
        "command": args.command,
        "argv": sys.argv[1:],
        "versions": _versions(),
        "wall_time_s": time.time() - t0,
        "output": {
            "path": path,
            "bytes": len(data),
            "sha256": hashlib.sha256(data).hexdigest(),
        },
    }
    with open(path + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _write_output(path: str, text: str, args: argparse.Namespace, t0: float) -> None:
    data = text.encode()
    with open(path, "wb") as fh:
        fh.write(data)
    _manifest(path, data, args, t0)


_TABLE = None


def _rho_table() -> dickman.RhoTable:
    global _TABLE
    if _TABLE is None:
        _TABLE = dickman.build_rho_table()
    return _TABLE


def _cmd_rho(args, t0):
    if args.order == "exact":
        lv = _rho_table().log_rho(args.u)
    else:
        lv = dickman.log_rho_asymptotic(args.u, int(args.order))
    out = {"u": args.u, "order": args.order, "log_rho": lv}
    if lv >= -700.0:
        out["rho"] = math.exp(lv)
    _emit(out)


def _cmd_xi(args, t0):
    r = dickman.xi(args.u)
    _emit({"u": r.u, "xi": r.value, "residual": r.residual, "iterations": r.iterations})


def _cmd_nu(args, t0):
    r = solve_nu(args.x)
    _emit({"x": args.x, "nu": r.value, "residual": r.residual,
           "iterations": r.iterations, "double_log_approx": r.approx})


def _cmd_omega(args, t0):
    r = solve_omega(args.x)
    _emit({"x": args.x, "omega": r.value, "residual": r.residual,
           "iterations": r.iterations, "double_log_approx": r.approx})


def _cmd_psi(args, t0):
    if args.method == "exact":
        value: float | int = smooth.psi_exact(int(args.x), int(args.y))
    elif args.method == "hildebrand":
        value = smooth.psi_hildebrand(args.x, args.y, _rho_table())
    else:
        value = smooth.psi_saias(args.x, args.y, _rho_table())
    _emit({"x": args.x, "y": args.y, "method": args.method, "psi": value})


def _cmd_scan(args, t0):
    result = scanner.scan(
        args.xmax,
        cutoff=args.cutoff,
        sample_at=args.sample,
        checkpoint_path=args.checkpoint,
        checkpoint_every=args.checkpoint_every,
        resume_from=args.resume,
    )
    csv_text = scanner.records_to_csv(result.records)
    if args.csv:
        _write_output(args.csv, csv_text, args, t0)
    print(csv_text, end="")
    for s in result.snapshots:
        print(f"# x={s.x} mode_count={s.mode_count} popular={','.join(map(str, s.mode_primes))}")
    if args.checkpoint:
        with open(args.checkpoint, "rb") as fh:
            _manifest(args.checkpoint, fh.read(), args, t0)


def _cmd_convex(args, t0):
    points = hull.convex_classify(args.n)
    summary = hull.hull_summary(points)
    interior = sum(1 for p in points if p.classification == hull.INTERIOR)
    if args.csv:
        lines = ["n,prime,classification"]
        lines += [f"{p.n},{p.prime},{p.classification}" for p in points]
        _write_output(args.csv, "\n".join(lines) + "\n", args, t0)
    _emit({
        "n": args.n,
        "vertices": summary[hull.VERTEX],
        "edge": summary[hull.EDGE],
        "unconfirmed": summary[hull.UNCONFIRMED],
        "interior_count": interior,
    })


def _cmd_predict(args, t0):
    mp = predictor.predict_mode(args.x)
    py = predictor.predict_psi_over_y_peak(args.x)
    pp = predictor.predict_psi_over_pi_peak(args.x)
    hh = predictor.h_asymptotic(args.x)
    _emit({
        "x": args.x,
        "nu": mp.nu,
        "omega": solve_omega(args.x).value,
        "mode": {
            "log_p": mp.log_p,
            "p": math.exp(mp.log_p),
            "band": mp.band,
            "log_count": mp.log_height,
            "log_count_double_log_form": mp.log_height_double_log,
        },
        "psi_over_y_peak": {"log_y_omega_form": py.log_y_omega_form,
                            "log_y_nu_form": py.log_y_nu_form},
        "psi_over_pi_peak": {"log_y_omega_form": pp.log_y_omega_form,
                             "log_y_nu_form": pp.log_y_nu_form},
        "h": {"log_h_omega_form": hh.log_h_omega_form,
              "log_h_nu_form": hh.log_h_nu_form},
    })


def _cmd_hx(args, t0):
    hh = predictor.h_asymptotic(args.x)
    out = {
        "x": args.x,
        "log_h_omega_form": hh.log_h_omega_form,
        "log_h_nu_form": hh.log_h_nu_form,
    }
    if args.exact:
        opt = predictor.exact_optimum(int(args.x), predictor.PSI_OVER_PI)
        out["exact"] = {
            "y": opt.y,
            "psi": opt.psi,
            "value": float(opt.value),
            "value_fraction": f"{opt.value.numerator}/{opt.value.denominator}",
        }
    _emit(out)


def _cmd_simulate(args, t0):
    s = squares.run_ensemble(args.x, args.trials, args.seed, threads=args.threads)
    if args.csv:
        lines = ["trial,stopping_time"]
        lines += [f"{i},{t}" for i, t in enumerate(s.stopping_times)]
        _write_output(args.csv, "\n".join(lines) + "\n", args, t0)
    _emit({
        "x": s.x,
        "trials": s.trials,
        "seed": s.seed,
        "generator": s.generator,
        "mean": s.mean,
        "median": s.median,
        "q25": s.q25,
        "q75": s.q75,
        "min": s.min,
        "max": s.max,
        "smooth_fraction_mean": s.smooth_fraction_mean,
        "h": s.h_value,
        "interval": [s.interval_lo, s.interval_hi],
        "mean_position": s.mean_position,
    })


def _cmd_stats(args, t0):
    s = scanner.empirical_stats(args.x, cutoff=args.cutoff)
    _emit({
        "x": s.x,
        "mean": s.mean,
        "median": s.median,
        "mode_count": s.mode_count,
        "mean_prediction": s.mean_prediction,
        "mean_ratio": s.mean_ratio,
        "median_prediction": s.median_prediction,
        "median_exponent": s.median_exponent,
    })


def _default_threads() -> int:
    env = os.environ.get("LPFSTAT_THREADS")
    if env is not None:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lpfstat", description="largest-prime-factor statistics")
    ap.add_argument(
        "--threads",
        type=int,
        default=_default_threads(),
        help="worker processes for parallel commands (default: LPFSTAT_THREADS or all cores)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rho", help="Dickman rho")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--order", choices=["exact", "0", "1"], default="exact")
    p.set_defaults(func=_cmd_rho)

    p = sub.add_parser("xi", help="saddle point of e^t = 1 + u t")
    p.add_argument("--u", type=float, required=True)
    p.set_defaults(func=_cmd_xi)

    for name, fn in (("nu", _cmd_nu), ("omega", _cmd_omega)):
        p = sub.add_parser(name, help=f"implicit parameter {name}(x)")
        p.add_argument("--x", type=float, required=True)
        p.set_defaults(func=fn)

    p = sub.add_parser("psi", help="smooth count Psi(x, y)")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--method", choices=["exact", "hildebrand", "saias"], default="exact")
    p.set_defaults(func=_cmd_psi)

    p = sub.add_parser("scan", help="popular-prime scan of [2, xmax]")
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--cutoff", type=int, default=100_000)
    p.add_argument("--sample", type=int, nargs="*", default=None, help="snapshot at these x")
    p.add_argument("--checkpoint", type=str, default=None)
    p.add_argument("--checkpoint-every", type=int, default=0)
    p.add_argument("--resume", type=str, default=None)
    p.add_argument("--csv", type=str, default=None)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("convex", help="classify (n, p_n) against the lower hull")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--csv", type=str, default=None)
    p.set_defaults(func=_cmd_convex)

    p = sub.add_parser("predict", help="closed-form predictions at x")
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("hx", help="smoothness-bound objective h(x)")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=_cmd_hx)

    p = sub.add_parser("simulate", help="random-squares stopping times")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--csv", type=str, default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("stats", help="mean/median/mode of P(n) on [2, x]")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--cutoff", type=int, default=100_000)
    p.set_defaults(func=_cmd_stats)

    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.time()
    try:
        args.func(args, t0)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
