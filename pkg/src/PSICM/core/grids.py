"""Deterministic evaluation grids on the positive half-line."""

import math
from typing import List

import numpy as np

from src.PSICM.core.errors import DomainError


def log_grid(lo: float, hi: float, points: int) -> List[float]:
    """
    Log-spaced abscissae from lo to hi inclusive.

    Args:
        lo: Smallest abscissa, > 0.
        hi: Largest abscissa, >= lo.
        points: Number of abscissae; 1 is accepted only when lo == hi.

    Returns:
        Plain floats in increasing order; the endpoints are exactly lo and hi.
    """
    _check_bounds(lo, hi, points)
    if points == 1:
        return [float(lo)]
    values: np.ndarray = np.logspace(math.log10(lo), math.log10(hi), points)
    values[0], values[-1] = lo, hi
    return [float(v) for v in values]


def linear_grid(lo: float, hi: float, points: int) -> List[float]:
    """Evenly spaced abscissae from lo to hi inclusive."""
    _check_bounds(lo, hi, points)
    if points == 1:
        return [float(lo)]
    values: np.ndarray = np.linspace(lo, hi, points)
    values[0], values[-1] = lo, hi
    return [float(v) for v in values]


def _check_bounds(lo: float, hi: float, points: int) -> None:
    if not math.isfinite(lo) or lo <= 0.0:
        raise DomainError("grid.min", lo, "must be finite and > 0")
    if not math.isfinite(hi) or hi < lo:
        raise DomainError("grid.max", hi, "must be finite and >= grid.min")
    if points < 1:
        raise DomainError("grid.points", points, "must be at least 1")
    if points == 1 and lo != hi:
        raise DomainError("grid.points", points, "must be at least 2 unless grid.min == grid.max")
