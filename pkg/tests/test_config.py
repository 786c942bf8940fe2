"""Tests for settings loading."""

from __future__ import annotations

import pytest

from src.config import Settings, load_settings
from src.errors import InvalidArgumentError


def test_defaults():
    settings = load_settings()
    assert settings == Settings()
    assert settings.max_n == 128
    assert settings.formulation == "closed_loop"


def test_file_values_are_parsed(tmp_path):
    path = tmp_path / "energy.conf"
    path.write_text("# sweep limits\nMAX_N=256\nresidual_tol=1e-8\nlog_level=info\n")
    settings = load_settings(path)
    assert settings.max_n == 256
    assert settings.residual_tol == 1e-8
    assert settings.log_level == "INFO"


def test_overrides_beat_file(tmp_path):
    path = tmp_path / "energy.conf"
    path.write_text("max_n=256\nformulation=shifted\n")
    settings = load_settings(path, max_n=64, formulation=None)
    assert settings.max_n == 64
    assert settings.formulation == "shifted"


@pytest.mark.parametrize(
    "text",
    ["colour=blue\n", "max_n=many\n", "imag_tol=-1\n", "formulation=implicit\n", "max_n=\n"],
)
def test_invalid_files(tmp_path, text):
    path = tmp_path / "energy.conf"
    path.write_text(text)
    with pytest.raises(InvalidArgumentError):
        load_settings(path)


def test_missing_file(tmp_path):
    with pytest.raises(InvalidArgumentError):
        load_settings(tmp_path / "absent.conf")


def test_unknown_override():
    with pytest.raises(InvalidArgumentError):
        load_settings(colour="blue")


def test_environment_is_ignored(monkeypatch):
    monkeypatch.setenv("MAX_N", "4")
    assert load_settings().max_n == 128


@pytest.mark.parametrize(("text", "expected"), [("yes", True), ("OFF", False), ("0", False)])
def test_gain_check_flag_is_parsed(tmp_path, text, expected):
    path = tmp_path / "energy.conf"
    path.write_text(f"check_gamma={text}\n")
    assert load_settings(path).check_gamma is expected


def test_gain_check_defaults_on_and_rejects_junk(tmp_path):
    assert load_settings().check_gamma is True
    path = tmp_path / "energy.conf"
    path.write_text("check_gamma=maybe\n")
    with pytest.raises(InvalidArgumentError):
        load_settings(path)
