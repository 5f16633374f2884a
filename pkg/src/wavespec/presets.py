"""Tabulated (family, L, k) rows reproduced by ``wavespec table --preset``."""

import math

TWO_PI = 2.0 * math.pi

_DNOIDAL_K = (0.1, 0.3, 0.5, 0.7, 0.9, 0.9999)

PRESETS = {
    "dnoidal-tables": (
        "ckdv-dnoidal",
        {TWO_PI: _DNOIDAL_K, 20.0: _DNOIDAL_K, 50.0: _DNOIDAL_K, 100.0: _DNOIDAL_K},
    ),
    "cnoidal-tables": (
        "ckdv-cnoidal",
        {
            TWO_PI: (0.0001, 0.1, 0.3, 0.5, 0.7, 0.739, 0.746, 0.9, 0.9999),
            20.0: (0.0001, 0.1, 0.3, 0.5, 0.7, 0.744, 0.7449, 0.9, 0.9999),
            50.0: (0.0001, 0.1, 0.3, 0.5, 0.7, 0.74521, 0.74523, 0.9, 0.9999),
            100.0: (0.0001, 0.1, 0.3, 0.5, 0.7, 0.74528, 0.74529, 0.9, 0.9999),
        },
    ),
}


def preset_rows(name: str, L: float | None = None):
    """(family, L, k) triples of a preset, optionally restricted to one period."""
    family, table = PRESETS[name]
    rows = []
    for period, ks in table.items():
        if L is not None and not math.isclose(period, L, rel_tol=1e-6):
            continue
        rows.extend((family, period, k) for k in ks)
    return rows
