"""Energy sweeps over mesh size and degree, and energy grids for the small examples.

Every sweep evaluates energies at the model's initial state and emits
:class:`ModelReport` rows. Mesh sweeps double ``n`` up to ``max_n``; degree sweeps
solve once at the largest degree and truncate, since lower coefficients do not
depend on higher ones.

Usage:
    from src.reporting import run_table, reports_to_frame

    rows = run_table("burgers-degrees", settings)
    reports_to_frame("burgers-degrees", rows).to_csv(sys.stdout, index=False)
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Final, Literal, get_args

import numpy as np
import pandas as pd

from src.config import Settings
from src.energy import PolySystem, approx_future_energy, approx_past_energy
from src.errors import DomainError, EnergyError, InvalidArgumentError
from src.kron import EnergyCoefficients, EnergyKind, poly_eval
from src.models import ScalarParams, analytic_energy_example1, get_model
from src.reporting.references import reference_value

logger = logging.getLogger(__name__)

TableName = Literal["burgers-deg3", "burgers-degrees", "ks-deg3", "ks-degrees"]

FLOAT_FORMAT: Final = "%.8e"
MESH_COLUMNS: Final = ("n", "n_cubed", "cpu_sec", "energy")
DEGREE_COLUMNS: Final = ("d", "past_energy", "future_energy")


@dataclass(slots=True, frozen=True)
class SweepSpec:
    model: str
    eta: float
    sizes: tuple[int, ...]
    degrees: tuple[int, ...]
    kinds: tuple[EnergyKind, ...]

    @property
    def by_degree(self) -> bool:
        return len(self.degrees) > 1


def _doublings(start: int, max_n: int) -> tuple[int, ...]:
    sizes = []
    n = start
    while n <= max_n:
        sizes.append(n)
        n *= 2
    return tuple(sizes)


def sweep_spec(name: str, max_n: int = 128) -> SweepSpec:
    both = (EnergyKind.PAST, EnergyKind.FUTURE)
    future = (EnergyKind.FUTURE,)
    match name:
        case "burgers-deg3":
            return SweepSpec("burgers", 0.9, _doublings(8, max_n), (3,), future)
        case "burgers-degrees":
            return SweepSpec("burgers", 0.9, (8,), tuple(range(2, 7)), both)
        case "ks-deg3":
            return SweepSpec("ks", 0.1, _doublings(16, max_n), (3,), future)
        case "ks-degrees":
            return SweepSpec("ks", 0.1, (16,), tuple(range(2, 7)), both)
    raise InvalidArgumentError(f"Unknown table '{name}'. Choose from {get_args(TableName)}")


@dataclass(slots=True)
class ModelReport:
    """One table row: energies at the initial state and the coefficient solve time."""

    model: str
    n: int
    d: int
    eta: float
    past_energy: float | None = None
    future_energy: float | None = None
    cpu_sec: float = math.nan
    note: str = ""

    def __post_init__(self) -> None:
        for name in ("past_energy", "future_energy"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise InvalidArgumentError(f"{name} must be finite, got {value}")


def _solve(
    system: PolySystem, kind: EnergyKind, eta: float, d: int, settings: Settings
) -> EnergyCoefficients:
    options = {
        "formulation": settings.formulation,
        "residual_tol": settings.residual_tol,
        "condition_limit": settings.condition_limit,
        "imag_tol": settings.imag_tol,
    }
    if kind is EnergyKind.FUTURE:
        return approx_future_energy(system, eta, d, check_gamma=settings.check_gamma, **options)
    return approx_past_energy(system, eta, d, **options)


def run_table(name: str, settings: Settings | None = None) -> list[ModelReport]:
    """Run a named sweep.

    Each energy kind is solved separately; a failure blanks only that kind's column
    and is recorded in the row's ``note``.
    """
    settings = settings or Settings()
    spec = sweep_spec(name, settings.max_n)
    d_max = max(spec.degrees)
    reports: list[ModelReport] = []
    for n in spec.sizes:
        model = get_model(spec.model, n=n)
        energies: dict[EnergyKind, EnergyCoefficients] = {}
        failures: list[str] = []
        started = time.perf_counter()
        for kind in spec.kinds:
            try:
                energies[kind] = _solve(model.system, kind, spec.eta, d_max, settings)
            except EnergyError as exc:
                failures.append(f"{kind} {type(exc).__name__}: {exc}")
                logger.warning("%s n=%d %s energy failed: %s", name, n, kind, exc)
        elapsed = time.perf_counter() - started
        note = "; ".join(failures)

        for d in spec.degrees:
            values = {
                kind: poly_eval(ec.truncate(d), model.x0) for kind, ec in energies.items()
            }
            reports.append(
                ModelReport(
                    model=spec.model,
                    n=n,
                    d=d,
                    eta=spec.eta,
                    past_energy=values.get(EnergyKind.PAST),
                    future_energy=values.get(EnergyKind.FUTURE),
                    cpu_sec=elapsed,
                    note=note,
                )
            )
        logger.info("%s n=%d done in %.3fs", name, n, elapsed)
    return reports


def reports_to_frame(
    name: str, reports: list[ModelReport], *, compare: bool = False
) -> pd.DataFrame:
    """Table layout of ``reports``; ``compare`` adds published values and relative errors."""
    spec = sweep_spec(name)
    if spec.by_degree:
        frame = pd.DataFrame(
            {
                "d": [r.d for r in reports],
                "past_energy": [r.past_energy for r in reports],
                "future_energy": [r.future_energy for r in reports],
            },
            columns=list(DEGREE_COLUMNS),
        )
    else:
        frame = pd.DataFrame(
            {
                "n": [r.n for r in reports],
                "n_cubed": [r.n**3 for r in reports],
                "cpu_sec": [r.cpu_sec for r in reports],
                "energy": [r.future_energy for r in reports],
            },
            columns=list(MESH_COLUMNS),
        )
    frame = frame.astype({col: "float64" for col in frame.columns if "energy" in col})

    if compare:
        _add_comparison(frame, name, reports, spec.by_degree)
    if any(r.note for r in reports):
        frame["note"] = [r.note for r in reports]
    return frame


def _add_comparison(
    frame: pd.DataFrame, name: str, reports: list[ModelReport], by_degree: bool
) -> None:
    columns = ("past_energy", "future_energy") if by_degree else ("energy",)
    for column in columns:
        position = 0 if column == "past_energy" else 1
        prefix = "" if column == "energy" else column.removesuffix("_energy") + "_"
        published = []
        for report in reports:
            entry = reference_value(name, report.n, report.d)
            value = None if entry is None else entry[position]
            published.append(math.nan if value is None else value)
        reference = np.asarray(published, dtype=np.float64)
        frame[f"{prefix}reference"] = reference
        frame[f"{prefix}rel_error"] = np.abs(frame[column].to_numpy() - reference) / np.abs(
            reference
        )


def write_reports(frame: pd.DataFrame, target: Path | None = None) -> str:
    """CSV text of ``frame`` with 9 significant digits; written to ``target`` when given."""
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT)
    if target is not None:
        target.write_text(text)
    return text


def read_reports(path: Path, name: str) -> list[ModelReport]:
    """Parse a table CSV written by :func:`write_reports` back into rows."""
    spec = sweep_spec(name, max_n=2**31)
    frame = pd.read_csv(path, keep_default_na=False, na_values=[""])
    expected = DEGREE_COLUMNS if spec.by_degree else MESH_COLUMNS
    missing = set(expected) - set(frame.columns)
    if missing:
        raise InvalidArgumentError(f"{path} lacks column(s): {', '.join(sorted(missing))}")

    def _value(row: pd.Series, column: str) -> float | None:
        value = row[column]
        return None if pd.isna(value) else float(value)

    notes = frame["note"].fillna("") if "note" in frame.columns else [""] * len(frame)
    reports = []
    for (_, row), note in zip(frame.iterrows(), notes):
        if spec.by_degree:
            report = ModelReport(
                model=spec.model,
                n=spec.sizes[0],
                d=int(row["d"]),
                eta=spec.eta,
                past_energy=_value(row, "past_energy"),
                future_energy=_value(row, "future_energy"),
                note=str(note),
            )
        else:
            report = ModelReport(
                model=spec.model,
                n=int(row["n"]),
                d=spec.degrees[0],
                eta=spec.eta,
                future_energy=_value(row, "energy"),
                cpu_sec=float(row["cpu_sec"]),
                note=str(note),
            )
        reports.append(report)
    return reports


def parse_range(text: str) -> tuple[float, float]:
    """``"lo:hi"`` -> ``(lo, hi)`` with ``lo < hi``."""
    parts = text.split(":")
    if len(parts) != 2:
        raise InvalidArgumentError(f"Range must look like lo:hi, got '{text}'")
    try:
        lo, hi = (float(part) for part in parts)
    except ValueError as exc:
        raise InvalidArgumentError(f"Range bounds must be numbers, got '{text}'") from exc
    if not lo < hi:
        raise InvalidArgumentError(f"Range needs lo < hi, got '{text}'")
    return lo, hi


def energy_grid(
    model_name: str,
    eta: float,
    degree: int,
    bounds: tuple[float, float],
    steps: int,
    settings: Settings | None = None,
    params: ScalarParams | None = None,
) -> pd.DataFrame:
    """Past and future energies on a uniform grid over ``bounds`` in every coordinate.

    ``example1`` rows also carry the closed-form energies (NaN where undefined).
    """
    settings = settings or Settings()
    if steps < 2:
        raise InvalidArgumentError(f"steps must be at least 2, got {steps}")
    params = params or ScalarParams()
    if model_name == "example1":
        model = get_model(model_name, a=params.a, n_coef=params.n_coef, b=params.b, c=params.c)
    else:
        model = get_model(model_name)
    n = model.system.n
    if n > 2:
        raise InvalidArgumentError(f"Grids are only emitted for 1-D and 2-D models, got n={n}")

    past = _solve(model.system, EnergyKind.PAST, eta, degree, settings)
    future = _solve(model.system, EnergyKind.FUTURE, eta, degree, settings)
    axis = np.linspace(bounds[0], bounds[1], steps)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    points = np.column_stack([coord.ravel() for coord in mesh])

    frame = pd.DataFrame(points, columns=[f"x{i + 1}" for i in range(n)])
    frame["E_past"] = [poly_eval(past, point) for point in points]
    frame["E_future"] = [poly_eval(future, point) for point in points]
    if model_name == "example1":
        for kind in EnergyKind:
            frame[f"analytic_{kind}"] = [
                _analytic_or_nan(point[0], params, eta, kind) for point in points
            ]
    return frame


def _analytic_or_nan(x: float, params: ScalarParams, eta: float, kind: EnergyKind) -> float:
    try:
        return analytic_energy_example1(x, params, eta, kind)
    except DomainError:
        return math.nan
