"""Command-line interface.

Exit codes: 0 success, 1 argument error, 2 numerical failure,
3 every sweep point unstable.
"""
from __future__ import annotations

import argparse
import configparser
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .entanglement import measures, reduce_modes, symplectic_eigenvalues
from .errors import AllPointsUnstable, ArgumentError, NumericalFailure
from .experiments import FIGURES, SweepSpec, evaluate_point, figure_preset, report_lines, run_sweep
from .model import SystemParams, build_diffusion, build_drift
from .nonreciprocity import bidirectional_report
from .steady_state import check_stability, lyapunov_residual, physicality_margin, solve_lyapunov

EXIT_OK, EXIT_ARGUMENT, EXIT_NUMERICAL, EXIT_UNSTABLE = 0, 1, 2, 3

PARAM_FIELDS = [f.name for f in dataclasses.fields(SystemParams)]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGUMENT, f"{self.prog}: error: {message}\n")


def _add_param_flags(parser):
    group = parser.add_argument_group("system parameters (rates in units of omega_b)")
    group.add_argument("--config", type=Path, help="key = value file with SystemParams fields")
    for name in PARAM_FIELDS:
        flag = "--" + name.replace("_", "-")
        group.add_argument(flag, dest=name, type=float, default=None)


def read_config(path: Path) -> dict:
    """Read a flat ``key = value`` file whose keys are SystemParams fields."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string("[params]\n" + Path(path).read_text())
    except (OSError, configparser.Error) as exc:
        raise ArgumentError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for key, raw in cp["params"].items():
        if key not in PARAM_FIELDS:
            raise ArgumentError(f"unknown parameter {key!r} in {path}")
        try:
            out[key] = float(raw)
        except ValueError as exc:
            raise ArgumentError(f"parameter {key!r} in {path} is not a number: {raw!r}") from exc
    return out


def params_from_args(args, base: SystemParams = SystemParams()) -> SystemParams:
    values = read_config(args.config) if args.config else {}
    values.update({k: getattr(args, k) for k in PARAM_FIELDS if getattr(args, k) is not None})
    return base.replace(**values)


def _write(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="")


def cmd_point(args) -> int:
    params = params_from_args(args)
    if args.json:
        print(json.dumps(evaluate_point(params), indent=2))
    else:
        print("\n".join(report_lines(bidirectional_report(params))))
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        variable=args.var, start=args.start, stop=args.stop, count=args.count,
        base=params_from_args(args), directions=args.directions, spacing=args.spacing,
    )
    _write(run_sweep(spec, workers=args.workers).to_csv(), args.out)
    return EXIT_OK


def cmd_figure(args) -> int:
    spec = figure_preset(args.name, count=args.count)
    _write(run_sweep(spec, workers=args.workers).to_csv(), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    """Stability and physicality diagnostics for the signed parameters given."""
    params = params_from_args(args)
    A, D = build_drift(params), build_diffusion(params)
    verdict = check_stability(A)
    print(f"stable: {verdict.stable}")
    print(f"spectral_abscissa: {verdict.spectral_abscissa:.17g}")
    if not verdict.stable:
        return EXIT_NUMERICAL
    V = solve_lyapunov(A, D)
    margin = physicality_margin(V)
    nu_min = min(symplectic_eigenvalues(reduce_modes(V, "amb")))
    print(f"lyapunov_residual: {lyapunov_residual(A, V, D):.3e}")
    print(f"physicality_margin: {margin:.3e}")
    print(f"min_symplectic_eigenvalue: {nu_min:.17g}")
    for name, value in measures(V).items():
        print(f"{name}: {value:.17g}")
    return EXIT_OK if margin >= -1e-9 and nu_min >= 0.5 - 1e-9 else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="magnonkerr", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("point", help="evaluate both field directions at one point")
    _add_param_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="one-dimensional sweep to CSV")
    _add_param_flags(p)
    p.add_argument("--var", required=True, choices=["Delta_m", "K", "T"])
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, default=201)
    p.add_argument("--directions", default="both", choices=["both", "positive", "negative"])
    p.add_argument("--spacing", choices=["linear", "log"])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="reproduce the data behind a figure panel")
    p.add_argument("name", choices=FIGURES)
    p.add_argument("--count", type=int, default=201)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("check", help="stability and physicality diagnostics")
    _add_param_flags(p)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    except AllPointsUnstable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
