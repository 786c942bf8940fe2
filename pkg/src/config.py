"""Run settings for the CLI.

Defaults live on :class:`Settings`. An optional plain-text ``key=value`` file can
override them, and explicit CLI flags override the file. Environment variables are
never read.

Usage:
    from src.config import load_settings

    settings = load_settings(Path("energy.conf"), max_n=256)
    settings.residual_tol  # 1e-09 unless the file says otherwise
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Final

from dotenv import dotenv_values

from src.errors import InvalidArgumentError

FORMULATIONS: Final = ("closed_loop", "shifted")
LOG_LEVELS: Final = ("DEBUG", "INFO", "WARNING", "ERROR")
TRUE_WORDS: Final = ("1", "true", "yes", "on")
FALSE_WORDS: Final = ("0", "false", "no", "off")


@dataclass(slots=True, frozen=True)
class Settings:
    """Tolerances and sweep limits used by the CLI."""

    max_n: int = 128
    residual_tol: float = 1e-9
    condition_limit: float = 1e12
    imag_tol: float = 1e-8
    formulation: str = "closed_loop"
    check_gamma: bool = True
    log_level: str = "WARNING"


def load_settings(path: Path | None = None, **overrides: Any) -> Settings:
    """Build settings from defaults, an optional config file and overrides.

    Args:
        path: Optional ``key=value`` file. Keys are case-insensitive and must name a
            field of :class:`Settings`.
        **overrides: Field values from the command line; ``None`` means "not given".

    Returns:
        The merged, validated settings.
    """
    settings = Settings()
    if path is not None:
        if not path.is_file():
            raise InvalidArgumentError(f"Config file not found: {path}")
        settings = replace(settings, **_parse_file_values(dotenv_values(path)))
    given = {key: value for key, value in overrides.items() if value is not None}
    unknown = set(given) - _field_names()
    if unknown:
        raise InvalidArgumentError(f"Unknown setting(s): {', '.join(sorted(unknown))}")
    settings = replace(settings, **given)
    _validate(settings)
    return settings


def _field_names() -> set[str]:
    return {field.name for field in fields(Settings)}


def _parse_file_values(raw: dict[str, str | None]) -> dict[str, Any]:
    parsers = {
        "max_n": _as_int,
        "residual_tol": _as_float,
        "condition_limit": _as_float,
        "imag_tol": _as_float,
        "formulation": lambda value: _as_choice(value, FORMULATIONS),
        "check_gamma": _as_bool,
        "log_level": lambda value: _as_choice(value.upper(), LOG_LEVELS),
    }
    parsed: dict[str, Any] = {}
    for key, value in raw.items():
        name = key.strip().lower()
        if name not in parsers:
            raise InvalidArgumentError(f"Unknown config key '{key}'")
        if value is None or not value.strip():
            raise InvalidArgumentError(f"Config key '{key}' has no value")
        parsed[name] = parsers[name](value.strip())
    return parsed


def _as_int(value: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise InvalidArgumentError(f"Invalid integer value '{value}'") from exc


def _as_float(value: str) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise InvalidArgumentError(f"Invalid float value '{value}'") from exc


def _as_bool(value: str) -> bool:
    lowered = value.lower()
    if lowered in TRUE_WORDS:
        return True
    if lowered in FALSE_WORDS:
        return False
    raise InvalidArgumentError(f"Invalid boolean value '{value}'")


def _as_choice(value: str, choices: tuple[str, ...]) -> str:
    if value not in choices:
        raise InvalidArgumentError(f"Invalid value '{value}'; expected one of {choices}")
    return value


def _validate(settings: Settings) -> None:
    if settings.max_n < 1:
        raise InvalidArgumentError("max_n must be positive")
    for name in ("residual_tol", "condition_limit", "imag_tol"):
        if getattr(settings, name) <= 0:
            raise InvalidArgumentError(f"{name} must be positive")
    _as_choice(settings.formulation, FORMULATIONS)
    _as_choice(settings.log_level, LOG_LEVELS)
