"""Coefficient files, energy tables and grids.

Usage:
    from src.reporting import load_coefficients, run_table, reports_to_frame, write_reports

    rows = run_table("ks-deg3", settings)
    print(write_reports(reports_to_frame("ks-deg3", rows, compare=True)))
"""

from src.reporting.coeff_file import (
    decode_coefficients,
    encode_coefficients,
    load_coefficients,
    payload_length,
    save_coefficients,
)
from src.reporting.references import REFERENCE_VALUES, reference_value
from src.reporting.tables import (
    ModelReport,
    TableName,
    energy_grid,
    parse_range,
    read_reports,
    reports_to_frame,
    run_table,
    sweep_spec,
    write_reports,
)

__all__ = [
    "REFERENCE_VALUES",
    "ModelReport",
    "TableName",
    "decode_coefficients",
    "encode_coefficients",
    "energy_grid",
    "load_coefficients",
    "parse_range",
    "payload_length",
    "read_reports",
    "reference_value",
    "reports_to_frame",
    "run_table",
    "save_coefficients",
    "sweep_spec",
    "write_reports",
]
