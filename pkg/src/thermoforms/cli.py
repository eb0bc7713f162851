"""Command-line interface.

Subcommands: ``forms``, ``processes``, ``curve``, ``domains``, ``oracle``.
All file output is deterministic: floats are printed with 17 significant
digits and scan results do not depend on the worker count (cap workers with
the THERMOFORMS_THREADS environment variable).

Exit codes: 0 success, 1 runtime error (message on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from typing import Optional, Sequence

from . import __version__
from .domains import GridSpec, scan
from .entropy import make_model
from .exceptions import SingularSigma2Error, ThermoformsError
from .forms import sigma2, sigma3, sigma4
from .oracle import make_family
from .processes import integrate_process

_FMT = ".17g"


def _fmt(x) -> str:
    return format(float(x) + 0.0, _FMT)  # +0.0 folds -0.0 into 0.0


def _json_dumps(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if obj != obj or obj in (float("inf"), float("-inf")):
            return "null"
        return _fmt(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {_json_dumps(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[" + ", ".join(_json_dumps(v, indent + 1) for v in obj) + "]"
    return _json_dumps(float(obj), indent)


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            yield f


# -- argument parsing ---------------------------------------------------------


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not x > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _nonnegative(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if x < 0.0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return x


def _point(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two numbers, got {text!r}")


def _grid(text: str) -> GridSpec:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'min:max:steps', got {text!r}")
    try:
        spec = GridSpec(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return spec


def _grid_pair(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"expected 'Tmin:Tmax:steps,vmin:vmax:steps', got {text!r}"
        )
    return (_grid(parts[0]), _grid(parts[1]))


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=("ideal", "vdw"), required=True,
                   help="entropy model")
    p.add_argument("--n", type=_positive, required=True,
                   help="degrees of freedom (> 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermoforms",
        description="Central-moment forms, symmetric processes and "
                    "applicability domains for gas entropy models.",
        epilog="Scans parallelize over grid rows; cap the worker count with "
               "the THERMOFORMS_THREADS environment variable (default: all "
               "cores). Output is byte-identical for any worker count.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forms", help="form components at one state point (JSON)")
    _add_model_args(p)
    p.add_argument("--at", type=_point, required=True, metavar="E,V",
                   help="state point e,v")
    p.add_argument("--out", default="-", help="output path (default stdout)")

    p = sub.add_parser("processes", help="root counts over a (T,v) grid (CSV)")
    _add_model_args(p)
    p.add_argument("--grid", type=_grid_pair, required=True,
                   metavar="TMIN:TMAX:STEPS,VMIN:VMAX:STEPS")
    p.add_argument("--out", default="-", help="output path (default stdout)")

    p = sub.add_parser("curve", help="integrate one symmetric-process branch (CSV)")
    _add_model_args(p)
    p.add_argument("--start", type=_point, required=True, metavar="E,V")
    p.add_argument("--branch", type=int, default=0, help="root index, ascending")
    p.add_argument("--step", type=_nonnegative, required=True, help="RK4 step")
    p.add_argument("--max-len", type=_nonnegative, default=1.0,
                   help="parameter length to integrate (default 1)")
    p.add_argument("--out", default="-", help="output path (default stdout)")

    p = sub.add_parser("domains", help="classify a (T,v) grid (CSV or JSON)")
    _add_model_args(p)
    p.add_argument("--T", type=_grid, required=True, metavar="MIN:MAX:STEPS")
    p.add_argument("--v", type=_grid, required=True, metavar="MIN:MAX:STEPS")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output path (default stdout)")

    p = sub.add_parser("oracle", help="1-D family moments, analytic vs quadrature (JSON)")
    p.add_argument("--family", choices=("gaussian", "exponential"), required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="tilt parameter")
    p.add_argument("--out", default="-", help="output path (default stdout)")

    return parser


# -- subcommand bodies --------------------------------------------------------


def _cmd_forms(args) -> int:
    model = make_model(args.model, args.n)
    e, v = args.at
    st = model.state(e, v)
    s2 = sigma2(model, e, v)
    s3 = sigma3(model, e, v)
    try:
        s4 = list(sigma4(model, e, v).components)
    except SingularSigma2Error:
        s4 = None
    doc = {
        "model": args.model,
        "n": args.n,
        "e": e,
        "v": v,
        "state": {"s": st.s, "T": st.T, "p": st.p},
        "sigma2": list(s2.components),
        "sigma3": list(s3.components),
        "sigma4": s4,
    }
    with _open_out(args.out) as f:
        f.write(_json_dumps(doc) + "\n")
    return 0


def _cmd_processes(args) -> int:
    model = make_model(args.model, args.n)
    t_grid, v_grid = args.grid
    result = scan(model, t_grid, v_grid)
    with _open_out(args.out) as f:
        f.write("T,v,root_count,disc\n")
        nt, nv = result.shape
        for i in range(nt):
            tstr = _fmt(result.t_values[i])
            for j in range(nv):
                if result.valid[i, j]:
                    f.write(f"{tstr},{_fmt(result.v_values[j])},"
                            f"{int(result.count[i, j])},{_fmt(result.disc[i, j])}\n")
                else:
                    f.write(f"{tstr},{_fmt(result.v_values[j])},invalid,nan\n")
    return 0


def _cmd_curve(args) -> int:
    model = make_model(args.model, args.n)
    curve = integrate_process(model, args.start, args.branch, args.step, args.max_len)
    with _open_out(args.out) as f:
        f.write("e,v,T\n")
        for e, v in curve.points:
            T = model.state(float(e), float(v)).T
            f.write(f"{_fmt(e)},{_fmt(v)},{_fmt(T)}\n")
    return 0


def _cmd_domains(args) -> int:
    model = make_model(args.model, args.n)
    result = scan(model, args.T, args.v)
    with _open_out(args.out) as f:
        if args.format == "csv":
            result.write_csv(f)
        else:
            f.write(_json_dumps(result.to_json_obj()) + "\n")
    return 0


def _cmd_oracle(args) -> int:
    family = make_family(args.family)
    analytic = family.central_moments_analytic(args.lam)
    numeric = family.central_moments_numeric(args.lam)
    doc = {
        "family": args.family,
        "lambda": args.lam,
        "analytic": list(analytic),
        "numeric": list(numeric),
        "normalization": family.normalization(args.lam),
        "info_gain_residual": family.info_gain_residual(args.lam),
    }
    with _open_out(args.out) as f:
        f.write(_json_dumps(doc) + "\n")
    return 0


_COMMANDS = {
    "forms": _cmd_forms,
    "processes": _cmd_processes,
    "curve": _cmd_curve,
    "domains": _cmd_domains,
    "oracle": _cmd_oracle,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ThermoformsError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"thermoforms {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
