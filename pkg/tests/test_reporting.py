"""Tests for coefficient files, table sweeps and grids."""

from __future__ import annotations

import struct

import numpy as np
import pandas as pd
import pytest

from src.config import Settings
from src.energy import approx_future_energy, approx_past_energy
from src.errors import CoefficientFileError, InvalidArgumentError, SolvabilityError
from src.kron import EnergyKind
from src.reporting import (
    REFERENCE_VALUES,
    ModelReport,
    decode_coefficients,
    encode_coefficients,
    energy_grid,
    load_coefficients,
    parse_range,
    payload_length,
    read_reports,
    reports_to_frame,
    run_table,
    save_coefficients,
    sweep_spec,
    write_reports,
)
from src.reporting.tables import SweepSpec


@pytest.fixture
def past_energy(example2):
    return approx_past_energy(example2, 0.1, 4)


class TestCoefficientFile:
    def test_round_trip_is_bitwise(self, tmp_path, past_energy):
        path = tmp_path / "past.nlef"
        save_coefficients(path, past_energy)
        loaded = load_coefficients(path)
        assert (loaded.n, loaded.d, loaded.kind, loaded.eta) == (2, 4, EnergyKind.PAST, 0.1)
        for k in range(2, 5):
            assert loaded.vector(k).tobytes() == past_energy.vector(k).tobytes()
        assert path.read_bytes() == encode_coefficients(loaded)

    def test_header_layout(self, example1):
        raw = encode_coefficients(approx_future_energy(example1, 0.5, 3))
        magic, version, n, d, kind, eta = struct.unpack_from("<4sBIIBd", raw)
        assert (magic, version, n, d, kind, eta) == (b"NLEF", 1, 1, 3, 1, 0.5)
        assert len(raw) == struct.calcsize("<4sBIIBd") + 8 * payload_length(1, 3)

    def test_payload_length(self):
        assert payload_length(2, 4) == 4 + 8 + 16

    def test_bad_magic(self, past_energy):
        raw = bytearray(encode_coefficients(past_energy))
        raw[:4] = b"XLEF"
        with pytest.raises(CoefficientFileError, match="magic"):
            decode_coefficients(bytes(raw))

    def test_bad_version(self, past_energy):
        raw = bytearray(encode_coefficients(past_energy))
        raw[4] = 2
        with pytest.raises(CoefficientFileError, match="version"):
            decode_coefficients(bytes(raw))

    def test_truncated_payload(self, past_energy):
        raw = encode_coefficients(past_energy)
        with pytest.raises(CoefficientFileError, match="Payload"):
            decode_coefficients(raw[:-8])

    def test_short_file(self):
        with pytest.raises(CoefficientFileError):
            decode_coefficients(b"NLEF")


class TestSweepSpec:
    def test_mesh_sizes_double_up_to_limit(self):
        assert sweep_spec("burgers-deg3", max_n=128).sizes == (8, 16, 32, 64, 128)
        assert sweep_spec("ks-deg3", max_n=40).sizes == (16, 32)

    def test_degree_sweeps(self):
        spec = sweep_spec("ks-degrees")
        assert spec.sizes == (16,)
        assert spec.degrees == (2, 3, 4, 5, 6)
        assert spec.eta == 0.1
        assert set(spec.kinds) == set(EnergyKind)

    def test_unknown_table(self):
        with pytest.raises(InvalidArgumentError):
            sweep_spec("heat-deg3")

    def test_reference_tables_cover_every_sweep(self):
        for name, rows in REFERENCE_VALUES.items():
            spec = sweep_spec(name, max_n=128)
            assert {(n, d) for n in spec.sizes for d in spec.degrees} == set(rows)


def _degree_reports() -> list[ModelReport]:
    return [
        ModelReport("burgers", 8, d, 0.9, past_energy=1e-5 * d, future_energy=2e-5 / d, cpu_sec=0.1)
        for d in range(2, 7)
    ]


class TestFrames:
    def test_degree_header(self):
        frame = reports_to_frame("burgers-degrees", _degree_reports())
        assert list(frame.columns) == ["d", "past_energy", "future_energy"]

    def test_mesh_header(self):
        reports = [ModelReport("ks", n, 3, 0.1, future_energy=0.06, cpu_sec=0.5) for n in (16, 32)]
        frame = reports_to_frame("ks-deg3", reports)
        assert list(frame.columns) == ["n", "n_cubed", "cpu_sec", "energy"]
        assert frame["n_cubed"].tolist() == [4096, 32768]

    def test_compare_adds_reference_columns(self):
        frame = reports_to_frame("burgers-degrees", _degree_reports(), compare=True)
        assert frame["past_reference"].iloc[0] == 4.798873e-05
        assert frame["future_reference"].iloc[-1] == 1.562967e-05
        expected = abs(frame["future_energy"].iloc[0] - 1.491963e-05) / 1.491963e-05
        assert frame["future_rel_error"].iloc[0] == pytest.approx(expected)

    def test_compare_on_unpublished_size_gives_nan(self):
        reports = [ModelReport("burgers", 256, 3, 0.9, future_energy=1.6e-05, cpu_sec=1.0)]
        frame = reports_to_frame("burgers-deg3", reports, compare=True)
        assert np.isnan(frame["reference"].iloc[0])

    def test_note_column_only_when_needed(self):
        reports = _degree_reports()
        assert "note" not in reports_to_frame("burgers-degrees", reports).columns
        reports.append(ModelReport("burgers", 8, 7, 0.9, note="SolvabilityError: no solution"))
        assert "note" in reports_to_frame("burgers-degrees", reports).columns

    def test_non_finite_energy_rejected(self):
        with pytest.raises(InvalidArgumentError):
            ModelReport("ks", 16, 3, 0.1, future_energy=float("nan"))

    def test_csv_round_trip(self, tmp_path):
        reports = _degree_reports()
        path = tmp_path / "degrees.csv"
        text = write_reports(reports_to_frame("burgers-degrees", reports), path)
        assert text.splitlines()[0] == "d,past_energy,future_energy"
        parsed = read_reports(path, "burgers-degrees")
        assert [r.d for r in parsed] == [r.d for r in reports]
        for original, loaded in zip(reports, parsed):
            assert loaded.past_energy == pytest.approx(original.past_energy, rel=1e-8)
            assert loaded.future_energy == pytest.approx(original.future_energy, rel=1e-8)

    def test_csv_round_trip_with_notes(self, tmp_path):
        reports = [
            ModelReport("ks", 16, 3, 0.1, future_energy=0.0653, cpu_sec=0.25),
            ModelReport("ks", 32, 3, 0.1, cpu_sec=0.5, note="NumericalError: failed"),
        ]
        path = tmp_path / "mesh.csv"
        write_reports(reports_to_frame("ks-deg3", reports), path)
        parsed = read_reports(path, "ks-deg3")
        assert parsed[0].note == ""
        assert parsed[1].future_energy is None
        assert parsed[1].note == "NumericalError: failed"

    def test_read_rejects_wrong_layout(self, tmp_path):
        path = tmp_path / "bad.csv"
        pd.DataFrame({"x": [1.0]}).to_csv(path, index=False)
        with pytest.raises(InvalidArgumentError):
            read_reports(path, "ks-deg3")


class TestGrid:
    def test_parse_range(self):
        assert parse_range("-1:1") == (-1.0, 1.0)
        for bad in ("1", "1:0", "a:b", "0:1:2"):
            with pytest.raises(InvalidArgumentError):
                parse_range(bad)

    def test_example2_row_count(self):
        frame = energy_grid("example2", 0.1, 3, (-1.0, 1.0), 51)
        assert len(frame) == 2601
        assert list(frame.columns) == ["x1", "x2", "E_past", "E_future"]

    def test_example2_future_energy_is_nonnegative_near_origin(self):
        frame = energy_grid("example2", 0.1, 4, (-0.5, 0.5), 21)
        assert (frame["E_future"] >= -1e-14).all()

    def test_example1_carries_closed_form(self):
        frame = energy_grid("example1", 0.5, 8, (-0.5, 0.5), 11)
        columns = ["x1", "E_past", "E_future", "analytic_past", "analytic_future"]
        assert list(frame.columns) == columns
        near = frame[frame["x1"].abs() <= 0.2]
        assert np.allclose(near["E_future"], near["analytic_future"], rtol=1e-4, atol=1e-12)
        assert np.allclose(near["E_past"], near["analytic_past"], rtol=1e-4, atol=1e-12)

    def test_example1_outside_domain_is_nan(self):
        frame = energy_grid("example1", -0.1875, 2, (0.5, 1.0), 2)
        assert frame["analytic_future"].isna().all()

    def test_rejects_large_models(self):
        with pytest.raises(InvalidArgumentError):
            energy_grid("burgers", 0.9, 2, (-1.0, 1.0), 3)


def test_degree_sweep_rows_share_one_solve(monkeypatch):
    calls = []
    original = approx_future_energy

    def counting(*args, **kwargs):
        calls.append(args[2])
        return original(*args, **kwargs)

    monkeypatch.setattr("src.reporting.tables.approx_future_energy", counting)
    monkeypatch.setattr("src.reporting.tables.sweep_spec", _tiny_sweep)
    reports = run_table("burgers-degrees", Settings())
    assert calls == [4]
    assert [r.d for r in reports] == [2, 3, 4]
    assert all(r.note == "" for r in reports)


def _tiny_sweep(name: str, max_n: int = 128) -> SweepSpec:
    return SweepSpec("burgers", 0.9, (4,), (2, 3, 4), (EnergyKind.PAST, EnergyKind.FUTURE))


def test_failed_rows_are_annotated(monkeypatch):
    settings = Settings(residual_tol=1e-300)
    monkeypatch.setattr("src.reporting.tables.sweep_spec", _tiny_sweep)
    reports = run_table("burgers-degrees", settings)
    for report in reports:
        assert report.note.startswith("past NumericalError")
        assert "; future NumericalError" in report.note
        assert report.past_energy is None and report.future_energy is None


def test_failure_blanks_only_its_own_kind(monkeypatch):
    def unsolvable(*args, **kwargs):
        raise SolvabilityError("no anti-stabilizing solution")

    monkeypatch.setattr("src.reporting.tables.sweep_spec", _tiny_sweep)
    monkeypatch.setattr("src.reporting.tables.approx_past_energy", unsolvable)
    reports = run_table("burgers-degrees")
    for report in reports:
        assert report.past_energy is None
        assert report.future_energy is not None and report.future_energy > 0
        assert report.note == "past SolvabilityError: no anti-stabilizing solution"


@pytest.mark.reproduction
@pytest.mark.parametrize("name", ["burgers-deg3", "burgers-degrees", "ks-deg3", "ks-degrees"])
def test_every_row_is_computed(name):
    reports = run_table(name, Settings(max_n=128))
    assert reports
    for report in reports:
        assert report.note == ""
        assert report.future_energy is not None and np.isfinite(report.future_energy)
        if sweep_spec(name).by_degree:
            assert report.past_energy is not None and np.isfinite(report.past_energy)


# The published magnitudes depend on an output and input scaling that is not stated
# alongside them; with subdomain averages and unit-weight indicator inputs the values
# differ (see DESIGN.md). The comparison stays visible through rel_error.
MAGNITUDE_MISMATCH = "published values use an unstated model scaling"


@pytest.mark.reproduction
@pytest.mark.xfail(reason=MAGNITUDE_MISMATCH, strict=False)
@pytest.mark.parametrize("name", ["burgers-deg3", "burgers-degrees", "ks-deg3", "ks-degrees"])
def test_published_tables(name):
    reports = run_table(name, Settings(max_n=128))
    frame = reports_to_frame(name, reports, compare=True)
    errors = frame.filter(like="rel_error").to_numpy().ravel()
    errors = errors[~np.isnan(errors)]
    assert errors.size > 0
    assert np.all(errors <= 1e-2), frame.to_string()


@pytest.mark.reproduction
@pytest.mark.xfail(
    reason="equal published values for degrees 2 and 3 are unexplained", strict=False
)
def test_ks_degree_pairs_coincide():
    reports = {r.d: r for r in run_table("ks-degrees", Settings())}
    for low, high in ((2, 3), (4, 5)):
        for attr in ("past_energy", "future_energy"):
            a, b = getattr(reports[low], attr), getattr(reports[high], attr)
            assert abs(a - b) <= 1e-12 * abs(a)
