"""
Limit and extremum checks of theta_alpha and the gamma-shape function.

Each check evaluates one quantity and compares it with a threshold through a
relation: "abs<" for |value - target| < threshold, ">" and "<" for one-sided
comparisons of the value itself.
"""

import logging
import math
from typing import List, Optional

from pydantic import BaseModel, ConfigDict

from src.PSICM.core.grids import linear_grid, log_grid
from src.PSICM.core.kernels import QuadratureConfig, theta1_via_kernel
from src.PSICM.core.specfun import digamma, euler_gamma, polygamma, polygamma_series_oracle
from src.PSICM.core.theta import gamma_shape, theta, theta1

logger = logging.getLogger(__name__)

ARGMAX_GRID_POINTS: int = 301
KERNEL_GRID_POINTS: int = 50


class LimitCheck(BaseModel):
    """One evaluated limit, value or extremum comparison."""

    model_config = ConfigDict(frozen=True)

    quantity: str
    x: float
    value: float
    target: float
    relation: str
    threshold: float

    @property
    def error(self) -> float:
        if self.relation == "abs<":
            return abs(self.value - self.target)
        return self.value

    @property
    def passed(self) -> bool:
        if self.relation == ">":
            return self.value > self.threshold
        return self.error < self.threshold


def _close(quantity: str, x: float, value: float, target: float, threshold: float) -> LimitCheck:
    return LimitCheck(quantity=quantity, x=x, value=value, target=target, relation="abs<", threshold=threshold)


def _gamma_shape_argmax() -> LimitCheck:
    grid: List[float] = linear_grid(0.25, 4.0, ARGMAX_GRID_POINTS)
    values: List[float] = [gamma_shape(x) for x in grid]
    best: int = max(range(len(grid)), key=values.__getitem__)
    step: float = grid[1] - grid[0]
    # one grid step plus rounding of the linspace abscissae
    return _close("gamma_shape_argmax", grid[best], grid[best], 1.0, step * (1.0 + 1e-9))


def _kernel_agreement(cfg: QuadratureConfig) -> LimitCheck:
    worst_x: float = math.nan
    worst: float = -1.0
    for x in log_grid(0.01, 100.0, KERNEL_GRID_POINTS):
        gap: float = abs(theta1(x) - theta1_via_kernel(x, cfg))
        if gap > worst:
            worst, worst_x = gap, x
    return LimitCheck(
        quantity="theta1_kernel_max_gap", x=worst_x, value=worst, target=0.0, relation="<", threshold=1e-8
    )


def run_limits(cfg: Optional[QuadratureConfig] = None) -> List[LimitCheck]:
    """
    Evaluate the limit suite.

    Args:
        cfg: Quadrature settings for the kernel agreement check.

    Returns:
        Checks in a fixed order.

    Raises:
        NonConvergenceError: If a kernel quadrature fails.
    """
    cfg = cfg or QuadratureConfig.from_settings()
    large: float = 1e6
    checks: List[LimitCheck] = [
        _close("theta1_at_zero", 1e-8, theta1(1e-8), 1.0, 1e-6),
        _close("theta1_at_infinity", large, theta1(large), 0.5 + 1.0 / (12.0 * large), 1e-13),
        LimitCheck(quantity="theta_0.5_at_zero", x=1e-12, value=theta(0.5, 1e-12), target=math.inf, relation=">", threshold=1e3),
        LimitCheck(quantity="theta_0.5_at_infinity", x=1e12, value=theta(0.5, 1e12), target=0.0, relation="<", threshold=1e-5),
        _close("gamma_shape_at_one", 1.0, gamma_shape(1.0), math.e, 1e-10),
        _close("gamma_shape_at_infinity", 1e4, gamma_shape(1e4), math.sqrt(2.0 * math.pi), 1e-3),
        _close("gamma_shape_at_zero", 1e-8, gamma_shape(1e-8), 1.0, 1e-4),
        _gamma_shape_argmax(),
        _close("digamma_one_plus_euler", 1.0, digamma(1.0) + euler_gamma(), 0.0, 1e-12),
        _close("trigamma_one", 1.0, polygamma(1, 1.0), polygamma_series_oracle(1, 1.0), 1e-10),
        _kernel_agreement(cfg),
    ]
    failed: List[str] = [c.quantity for c in checks if not c.passed]
    if failed:
        logger.warning(f"Limit checks failed: {', '.join(failed)}")
    else:
        logger.info(f"All {len(checks)} limit checks passed")
    return checks
