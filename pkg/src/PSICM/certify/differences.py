"""
Finite differences used as discrete stand-ins for derivatives.

A completely monotonic f has (-1)^n Delta_h^n f(x) >= 0 for every n, h and x,
so the alternating forward difference is the quantity the certifier sweeps.
Central differences with Richardson extrapolation serve as an independent
check of the closed-form derivatives.
"""

import math
from typing import Callable, List, Sequence

import numpy as np

from src.PSICM.core.errors import DomainError
from src.PSICM.core.specfun import Abscissa, as_abscissa

Evaluator = Callable[[float], float]


def _check_step(n: int, h: float) -> None:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError("n", n, "must be a non-negative integer")
    if not math.isfinite(h) or h <= 0.0:
        raise DomainError("h", h, "must be finite and > 0")


def forward_stencil(n: int, h: float, x: float) -> List[float]:
    """Abscissae x, x + h, ..., x + n h of an order-n forward difference."""
    return [x + m * h for m in range(n + 1)]


def signed_difference(samples: Sequence[float], n: int) -> float:
    """
    (-1)^n Delta^n from samples f(x), f(x+h), ..., f(x+nh).

    The binomially weighted samples are added with numpy's pairwise summation.
    """
    if len(samples) != n + 1:
        raise ValueError(f"order {n} needs {n + 1} samples, got {len(samples)}")
    # coefficient of f(x + m h) in (-1)^n Delta^n is (-1)^m C(n, m)
    weights: np.ndarray = np.array([(-1.0) ** m * math.comb(n, m) for m in range(n + 1)])
    return float(np.sum(weights * np.asarray(samples, dtype=np.float64)))


def alternating_difference(f: Evaluator, n: int, h: float, x: Abscissa) -> float:
    """
    (-1)^n sum_j (-1)^j C(n, j) f(x + (n - j) h).

    Args:
        f: Function of one real variable.
        n: Difference order, n >= 0.
        h: Step, > 0.
        x: Left end of the stencil, > 0.

    Returns:
        The alternating n-th forward difference; f(x) for n = 0.

    Example:
        >>> import math
        >>> round(alternating_difference(lambda t: math.exp(-t), 3, 1.0, 1.0), 7)
        0.0929192
    """
    x = as_abscissa(x)
    _check_step(n, h)
    return signed_difference([f(t) for t in forward_stencil(n, h, x)], n)


def central_difference(f: Evaluator, n: int, h: float, x: Abscissa) -> float:
    """
    Order-n central difference quotient h^-n sum_j (-1)^j C(n, j) f(x + (n/2 - j) h).

    Its error expands in even powers of h, which is what Richardson
    extrapolation relies on.
    """
    x = as_abscissa(x)
    _check_step(n, h)
    samples: np.ndarray = np.array([f(x + (0.5 * n - j) * h) for j in range(n + 1)])
    weights: np.ndarray = np.array([(-1.0) ** j * math.comb(n, j) for j in range(n + 1)])
    return float(np.sum(weights * samples)) / h**n


def richardson_derivative(f: Evaluator, n: int, x: Abscissa, h: float, levels: int = 3) -> float:
    """
    n-th derivative of f at x by Richardson extrapolation of central differences.

    Central differences at h, h/2, ..., h/2^(levels-1) form the first column
    of a Neville tableau; each later column removes the next even power of h.

    Args:
        f: Smooth function near x.
        n: Derivative order, >= 1.
        x: Point of differentiation.
        h: Initial step.
        levels: Number of step sizes, >= 1.

    Returns:
        The most extrapolated tableau entry.
    """
    if levels < 1:
        raise DomainError("levels", levels, "must be at least 1")
    if n < 1:
        raise DomainError("n", n, "must be at least 1")
    tableau: List[List[float]] = []
    for level in range(levels):
        row: List[float] = [central_difference(f, n, h / 2**level, x)]
        for k in range(1, level + 1):
            factor: float = 4.0**k
            row.append((factor * row[k - 1] - tableau[level - 1][k - 1]) / (factor - 1.0))
        tableau.append(row)
    return tableau[-1][-1]
