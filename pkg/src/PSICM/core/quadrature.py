"""
Adaptive 15-point Gauss-Kronrod quadrature on finite intervals.

Each panel is integrated with the 7-point Gauss rule embedded in the
15-point Kronrod extension; the difference of the two feeds the usual
QUADPACK error heuristic. The adaptive driver bisects the panel with the
largest error estimate until the summed estimate meets the tolerance or the
subdivision budget is spent.
"""

import logging
import math
import sys
from typing import Callable, List, NamedTuple, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.PSICM.core.errors import NonConvergenceError

logger = logging.getLogger(__name__)

_EPS: float = sys.float_info.epsilon
_UFLOW: float = sys.float_info.min

# Kronrod abscissae on [0, 1]; entries 1, 3, 5 and the centre are the Gauss nodes.
_XGK: np.ndarray = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.0,
    ]
)
_WGK: np.ndarray = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG: np.ndarray = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

NODES: np.ndarray = np.concatenate([-_XGK[:7], _XGK[7:], _XGK[:7][::-1]])
KRONROD_WEIGHTS: np.ndarray = np.concatenate([_WGK[:7], _WGK[7:], _WGK[:7][::-1]])
GAUSS_WEIGHTS: np.ndarray = np.zeros(15)
for _slot, _weight in zip((1, 3, 5), _WG[:3]):
    GAUSS_WEIGHTS[_slot] = GAUSS_WEIGHTS[14 - _slot] = _weight
GAUSS_WEIGHTS[7] = _WG[3]


class PanelEstimate(NamedTuple):
    """Kronrod value and error estimate on one panel [a, b]."""

    a: float
    b: float
    value: float
    error: float


class AdaptiveResult(BaseModel):
    """
    Outcome of an adaptive integration.

    Attributes:
        value: Sum of the panel Kronrod values.
        error_estimate: Sum of the panel error estimates.
        panels: Number of panels in the final partition.
        subdivisions: Number of bisections performed.
    """

    model_config = ConfigDict(frozen=True)

    value: float
    error_estimate: float
    panels: int
    subdivisions: int


def gauss_kronrod_15(f: Callable[[float], float], a: float, b: float) -> PanelEstimate:
    """
    Integrate f over [a, b] with the 7/15 Gauss-Kronrod pair.

    Args:
        f: Scalar integrand.
        a: Left end.
        b: Right end.

    Returns:
        PanelEstimate with the Kronrod value and the heuristic error bound.
    """
    centre: float = 0.5 * (a + b)
    half: float = 0.5 * (b - a)
    values: np.ndarray = np.fromiter((f(centre + half * node) for node in NODES), dtype=np.float64, count=15)

    resk: float = float(KRONROD_WEIGHTS @ values)
    resg: float = float(GAUSS_WEIGHTS @ values)
    resabs: float = float(KRONROD_WEIGHTS @ np.abs(values)) * abs(half)
    resasc: float = float(KRONROD_WEIGHTS @ np.abs(values - 0.5 * resk)) * abs(half)

    error: float = abs((resk - resg) * half)
    if resasc != 0.0 and error != 0.0:
        error = resasc * min(1.0, (200.0 * error / resasc) ** 1.5)
    if resabs > _UFLOW / (50.0 * _EPS):
        error = max(50.0 * _EPS * resabs, error)
    return PanelEstimate(a, b, resk * half, error)


def adaptive_integrate(
    f: Callable[[float], float],
    breakpoints: Sequence[float],
    abs_tol: float,
    rel_tol: float,
    max_subdivisions: int,
    label: str = "integrand",
    x: float = math.nan,
) -> AdaptiveResult:
    """
    Integrate f over [breakpoints[0], breakpoints[-1]] adaptively.

    The initial partition is given by the breakpoints. The panel with the
    largest error estimate is bisected until the summed error estimate is at
    most max(abs_tol, rel_tol * |value|).

    Args:
        f: Scalar integrand, smooth on every initial panel.
        breakpoints: Strictly increasing panel boundaries, at least two.
        abs_tol: Absolute error target.
        rel_tol: Relative error target.
        max_subdivisions: Number of bisections allowed.
        label: Integrand name used in error reports.
        x: Parameter value used in error reports.

    Returns:
        AdaptiveResult of the converged partition.

    Raises:
        NonConvergenceError: If the budget is spent before the target is met.
    """
    edges: List[float] = [float(b) for b in breakpoints]
    if len(edges) < 2 or any(right <= left for left, right in zip(edges, edges[1:])):
        raise ValueError(f"breakpoints must be strictly increasing with at least two entries, got {edges}")

    panels: List[PanelEstimate] = [gauss_kronrod_15(f, left, right) for left, right in zip(edges, edges[1:])]
    subdivisions: int = 0

    while True:
        value: float = math.fsum(p.value for p in panels)
        error: float = math.fsum(p.error for p in panels)
        if error <= max(abs_tol, rel_tol * abs(value)):
            return AdaptiveResult(
                value=value, error_estimate=error, panels=len(panels), subdivisions=subdivisions
            )

        worst_index: int = max(range(len(panels)), key=lambda i: panels[i].error)
        worst: PanelEstimate = panels[worst_index]
        if subdivisions >= max_subdivisions:
            interval: Tuple[float, float] = (worst.a, worst.b)
            logger.debug(f"{label} at x={x!r}: budget of {max_subdivisions} exhausted, error {error:.3e}")
            raise NonConvergenceError(label, x, interval, error, max_subdivisions)

        mid: float = 0.5 * (worst.a + worst.b)
        panels[worst_index : worst_index + 1] = [
            gauss_kronrod_15(f, worst.a, mid),
            gauss_kronrod_15(f, mid, worst.b),
        ]
        subdivisions += 1
