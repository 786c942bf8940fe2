"""NLEF v1 coefficient files.

Layout (little-endian throughout)::

    magic   4s   b"NLEF"
    version u8   1
    n       u32
    d       u32
    kind    u8   0 = past, 1 = future
    eta     f64
    payload f64  w_2, w_3, ..., w_d, each n**k entries in lexicographic order

Usage:
    from src.reporting import load_coefficients, save_coefficients

    save_coefficients(Path("burgers.nlef"), ec)
    ec = load_coefficients(Path("burgers.nlef"))
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path
from typing import Final

import numpy as np

from src.errors import CoefficientFileError
from src.kron import CoeffVector, EnergyCoefficients, EnergyKind

logger = logging.getLogger(__name__)

MAGIC: Final = b"NLEF"
VERSION: Final = 1
HEADER: Final = struct.Struct("<4sBIIBd")
PAYLOAD_DTYPE: Final = np.dtype("<f8")

_KIND_CODES: Final = {EnergyKind.PAST: 0, EnergyKind.FUTURE: 1}


def payload_length(n: int, d: int) -> int:
    """Number of float64 entries stored for degrees 2..d."""
    return sum(n**k for k in range(2, d + 1))


def encode_coefficients(ec: EnergyCoefficients) -> bytes:
    header = HEADER.pack(MAGIC, VERSION, ec.n, ec.d, _KIND_CODES[ec.kind], float(ec.eta))
    payload = np.concatenate([ec.vector(k) for k in range(2, ec.d + 1)]).astype(PAYLOAD_DTYPE)
    return header + payload.tobytes()


def decode_coefficients(raw: bytes) -> EnergyCoefficients:
    if len(raw) < HEADER.size:
        raise CoefficientFileError(f"File too short for an NLEF header ({len(raw)} bytes)")
    magic, version, n, d, kind_code, eta = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CoefficientFileError(f"Bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise CoefficientFileError(f"Unsupported NLEF version {version}")
    if n < 1 or d < 2:
        raise CoefficientFileError(f"Invalid dimensions n={n}, d={d}")
    kinds = {code: kind for kind, code in _KIND_CODES.items()}
    if kind_code not in kinds:
        raise CoefficientFileError(f"Unknown energy kind code {kind_code}")

    expected = payload_length(n, d) * PAYLOAD_DTYPE.itemsize
    body = raw[HEADER.size :]
    if len(body) != expected:
        raise CoefficientFileError(f"Payload has {len(body)} bytes, expected {expected}")
    payload = np.frombuffer(body, dtype=PAYLOAD_DTYPE).astype(np.float64)

    coeffs: dict[int, CoeffVector] = {}
    offset = 0
    for k in range(2, d + 1):
        size = n**k
        coeffs[k] = CoeffVector(n, k, payload[offset : offset + size].copy())
        offset += size
    return EnergyCoefficients(n=n, eta=eta, kind=kinds[kind_code], coeffs=coeffs)


def save_coefficients(path: Path, ec: EnergyCoefficients) -> None:
    path.write_bytes(encode_coefficients(ec))
    logger.info("Wrote %s energy (n=%d, d=%d) to %s", ec.kind, ec.n, ec.d, path)


def load_coefficients(path: Path) -> EnergyCoefficients:
    return decode_coefficients(path.read_bytes())
