"""Command-line driver.

Usage:
    hinf-energy energy --model burgers --n 8 --eta 0.9 --degree 3 --kind future --out w.nlef
    hinf-energy eval --coeffs w.nlef --x 0.1
    hinf-energy residual --coeffs w.nlef --model example1 --x 0.1
    hinf-energy control --coeffs w.nlef --model example2 --x=0.5,-0.5 --R 2
    hinf-energy table burgers-degrees --compare
    hinf-energy grid --model example2 --eta 0.1 --degree 4 --range=-1:1 --steps 51

Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import get_args

import numpy as np

from src.config import FORMULATIONS, LOG_LEVELS, Settings, load_settings
from src.energy import approx_future_energy, approx_past_energy, feedback_control, hjb_residual
from src.errors import CoefficientFileError, InvalidArgumentError, NumericalError
from src.kron import EnergyKind, poly_eval
from src.models import ScalarParams, get_model, model_names
from src.models.registry import BuiltModel
from src.reporting import (
    TableName,
    energy_grid,
    load_coefficients,
    parse_range,
    reports_to_frame,
    run_table,
    save_coefficients,
    write_reports,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("model")
    group.add_argument("--model", choices=model_names(), required=True)
    group.add_argument("--n", type=int, help="state dimension (burgers, ks)")
    group.add_argument("--m", type=int, help="input channels (burgers, ks)")
    group.add_argument("--p", type=int, help="output channels (burgers, ks)")
    group.add_argument("--epsilon", type=float, help="PDE parameter (burgers, ks)")
    group.add_argument("--a", type=float, help="linear coefficient (example1)")
    group.add_argument("--n-coef", type=float, help="quadratic coefficient (example1)")
    group.add_argument("--b", type=float, help="input coefficient (example1)")
    group.add_argument("--c", type=float, help="output coefficient (example1)")


def _add_settings_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key=value settings file")
    parser.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS)
    parser.add_argument("--max-n", type=int, help="largest n in mesh sweeps")
    parser.add_argument("--formulation", choices=FORMULATIONS)
    parser.add_argument(
        "--skip-gamma-check",
        action="store_true",
        help="do not reject gains below the computable H-infinity bound",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hinf-energy",
        description="Polynomial H-infinity past and future energy functions",
    )
    _add_settings_flags(parser)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    energy = commands.add_parser("energy", help="compute and store energy coefficients")
    _add_model_flags(energy)
    energy.add_argument("--eta", type=float, required=True)
    energy.add_argument("--degree", type=int, required=True)
    energy.add_argument("--kind", choices=["past", "future", "both"], default="both")
    energy.add_argument("--out", type=Path, help="NLEF output path")
    energy.set_defaults(handler=cmd_energy)

    for name, handler, needs_model in (
        ("eval", cmd_eval, False),
        ("residual", cmd_residual, True),
        ("control", cmd_control, True),
    ):
        sub = commands.add_parser(name, help=f"{name} at a state from stored coefficients")
        sub.add_argument("--coeffs", type=Path, required=True)
        sub.add_argument("--x", required=True, help="comma-separated state")
        if needs_model:
            _add_model_flags(sub)
        sub.set_defaults(handler=handler)
        if name == "control":
            sub.add_argument(
                "--R",
                dest="weight",
                help="SPD input weight: m diagonal entries or m*m row-major entries",
            )

    table = commands.add_parser("table", help="run a mesh or degree sweep")
    table.add_argument("name", choices=get_args(TableName))
    table.add_argument("--out", type=Path)
    table.add_argument("--compare", action="store_true", help="add published values")
    table.set_defaults(handler=cmd_table)

    grid = commands.add_parser("grid", help="energies on a grid (example1, example2)")
    _add_model_flags(grid)
    grid.add_argument("--eta", type=float, required=True)
    grid.add_argument("--degree", type=int, required=True)
    grid.add_argument("--range", dest="bounds", default="-1:1", help="lo:hi")
    grid.add_argument("--steps", type=int, default=51)
    grid.add_argument("--out", type=Path)
    grid.set_defaults(handler=cmd_grid)
    return parser


def _model_from_args(args: argparse.Namespace) -> BuiltModel:
    params = {
        "n": args.n,
        "m": args.m,
        "p": args.p,
        "epsilon": args.epsilon,
        "a": args.a,
        "n_coef": args.n_coef,
        "b": args.b,
        "c": args.c,
    }
    return get_model(args.model, **params)


def _parse_state(text: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",")])
    except ValueError as exc:
        raise InvalidArgumentError(f"State must be comma-separated reals, got '{text}'") from exc


def _parse_weight(text: str | None, m: int) -> np.ndarray | None:
    """``--R`` entries as an m x m matrix; m entries give a diagonal weight."""
    if text is None:
        return None
    try:
        entries = np.array([float(part) for part in text.split(",")])
    except ValueError as exc:
        raise InvalidArgumentError(f"R must be comma-separated reals, got '{text}'") from exc
    if entries.size == m:
        return np.diag(entries)
    if entries.size == m * m:
        return entries.reshape(m, m)
    raise InvalidArgumentError(
        f"R needs {m} or {m * m} entries for {m} input(s), got {entries.size}"
    )


def _output_paths(out: Path | None, kinds: list[EnergyKind]) -> dict[EnergyKind, Path | None]:
    if out is None:
        return dict.fromkeys(kinds)
    if len(kinds) == 1:
        return {kinds[0]: out}
    return {kind: out.with_name(f"{out.stem}_{kind}{out.suffix}") for kind in kinds}


def cmd_energy(args: argparse.Namespace, settings: Settings) -> int:
    model = _model_from_args(args)
    kinds = list(EnergyKind) if args.kind == "both" else [EnergyKind(args.kind)]
    for kind, path in _output_paths(args.out, kinds).items():
        solver = approx_future_energy if kind is EnergyKind.FUTURE else approx_past_energy
        started = time.perf_counter()
        options = {
            "formulation": settings.formulation,
            "residual_tol": settings.residual_tol,
            "condition_limit": settings.condition_limit,
            "imag_tol": settings.imag_tol,
        }
        if kind is EnergyKind.FUTURE:
            options["check_gamma"] = settings.check_gamma
        ec = solver(model.system, args.eta, args.degree, **options)
        elapsed = time.perf_counter() - started
        if path is not None:
            save_coefficients(path, ec)
        print(f"{kind} {poly_eval(ec, model.x0):.8e} {elapsed:.3f}s")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, settings: Settings) -> int:
    ec = load_coefficients(args.coeffs)
    print(f"{poly_eval(ec, _parse_state(args.x)):.8e}")
    return EXIT_OK


def cmd_residual(args: argparse.Namespace, settings: Settings) -> int:
    ec = load_coefficients(args.coeffs)
    model = _model_from_args(args)
    print(f"{hjb_residual(model.system, ec, _parse_state(args.x)):.8e}")
    return EXIT_OK


def cmd_control(args: argparse.Namespace, settings: Settings) -> int:
    ec = load_coefficients(args.coeffs)
    model = _model_from_args(args)
    weight = _parse_weight(args.weight, model.system.m)
    control = feedback_control(model.system, ec, _parse_state(args.x), R=weight)
    print(",".join(f"{value:.8e}" for value in control))
    return EXIT_OK


def cmd_table(args: argparse.Namespace, settings: Settings) -> int:
    reports = run_table(args.name, settings)
    text = write_reports(reports_to_frame(args.name, reports, compare=args.compare), args.out)
    if args.out is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_grid(args: argparse.Namespace, settings: Settings) -> int:
    params = ScalarParams(
        **{
            key: value
            for key, value in (("a", args.a), ("n_coef", args.n_coef), ("b", args.b), ("c", args.c))
            if value is not None
        }
    )
    frame = energy_grid(
        args.model,
        args.eta,
        args.degree,
        parse_range(args.bounds),
        args.steps,
        settings,
        params,
    )
    text = write_reports(frame, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(
            args.config,
            log_level=args.log_level,
            max_n=args.max_n,
            formulation=args.formulation,
            check_gamma=False if args.skip_gamma_check else None,
        )
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        return args.handler(args, settings)
    except (InvalidArgumentError, CoefficientFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        logger.debug("Numerical failure", exc_info=True)
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
