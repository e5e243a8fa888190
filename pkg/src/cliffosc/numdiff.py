"""Central finite differences used by the numerical cross-checks."""

from __future__ import annotations

import numpy as np


def central4(f, x: np.ndarray, direction: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order central difference of ``f`` at ``x`` along ``direction``."""
    return (-f(x + 2 * h * direction) + 8 * f(x + h * direction) - 8 * f(x - h * direction) + f(x - 2 * h * direction)) / (
        12 * h
    )


def derivative(f, x, direction, h: float = 1e-2, richardson: bool = True) -> np.ndarray:
    """Directional derivative; one Richardson step lifts the stencil to sixth order."""
    x = np.asarray(x, dtype=float)
    direction = np.asarray(direction, dtype=float)
    coarse = central4(f, x, direction, h)
    if not richardson:
        return coarse
    fine = central4(f, x, direction, h / 2)
    return (16 * fine - coarse) / 15
