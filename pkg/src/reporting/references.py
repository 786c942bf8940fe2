"""Published energy values for the Burgers and KS sweeps.

Keys are ``(n, d)``; values are ``(past, future)`` with ``None`` where no value was
reported. All entries are evaluated at the model's initial state.
"""

from __future__ import annotations

from typing import Final

REFERENCE_VALUES: Final[dict[str, dict[tuple[int, int], tuple[float | None, float]]]] = {
    "burgers-deg3": {
        (8, 3): (None, 1.566048e-05),
        (16, 3): (None, 1.601855e-05),
        (32, 3): (None, 1.630600e-05),
        (64, 3): (None, 1.623009e-05),
        (128, 3): (None, 1.625871e-05),
    },
    "burgers-degrees": {
        (8, 2): (4.798873e-05, 1.491963e-05),
        (8, 3): (4.985769e-05, 1.566048e-05),
        (8, 4): (5.941834e-05, 1.563470e-05),
        (8, 5): (6.776244e-05, 1.562969e-05),
        (8, 6): (7.553267e-05, 1.562967e-05),
    },
    "ks-deg3": {
        (16, 3): (None, 6.530263e-02),
        (32, 3): (None, 6.536934e-02),
        (64, 3): (None, 6.651598e-02),
        (128, 3): (None, 6.650104e-02),
    },
    "ks-degrees": {
        (16, 2): (1.679980e-01, 6.530263e-02),
        (16, 3): (1.679980e-01, 6.530263e-02),
        (16, 4): (1.644548e-01, 6.524751e-02),
        (16, 5): (1.644548e-01, 6.524751e-02),
        (16, 6): (1.629469e-01, 6.524354e-02),
    },
}


def reference_value(table: str, n: int, d: int) -> tuple[float | None, float] | None:
    return REFERENCE_VALUES.get(table, {}).get((n, d))
