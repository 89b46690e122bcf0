"""
Residual checks of the integral and recurrence identities behind the kernels.

Each identity is evaluated on both sides at every grid abscissa: the left side
by the kernel quadrature (or the shifted special function), the right side by
the closed forms of specfun and theta. The residual is
|lhs - rhs| / max(1, |rhs|).
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from src.PSICM.config.settings import get_settings
from src.PSICM.core.grids import linear_grid, log_grid
from src.PSICM.core.kernels import KernelId, QuadratureConfig, laplace_integral, theta1_via_kernel
from src.PSICM.core.specfun import digamma, log_minus_digamma, polygamma
from src.PSICM.core.theta import theta1

logger = logging.getLogger(__name__)

RECURRENCE_ORDERS: Tuple[int, ...] = (1, 2, 3)
POLYGAMMA_ORDERS: Tuple[int, ...] = (1, 2, 3)
LOG_RATIO_PAIR: Tuple[float, float] = (1.0, math.e)

Side = Callable[[float], float]


class IdentityRow(BaseModel):
    """One evaluated identity at one abscissa."""

    model_config = ConfigDict(frozen=True)

    identity: str
    x: float
    lhs: float
    rhs: float
    residual: float

    def within(self, tolerance: float) -> bool:
        return self.residual <= tolerance


def residual(lhs: float, rhs: float) -> float:
    """Absolute difference, relative once |rhs| exceeds 1."""
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def _shifted_polygamma(order: int, x: float) -> float:
    return digamma(x) if order == 0 else polygamma(order, x)


def _recurrence(i: int) -> Tuple[Side, Side]:
    # psi^(i-1)(x + 1) = psi^(i-1)(x) + (-1)^(i-1) (i-1)! / x^i
    k: int = i - 1
    sign: float = 1.0 if k % 2 == 0 else -1.0
    return (
        lambda x: _shifted_polygamma(k, x + 1.0),
        lambda x: _shifted_polygamma(k, x) + sign * math.factorial(k) / x**i,
    )


def _identity_table(cfg: QuadratureConfig) -> List[Tuple[str, Side, Side]]:
    table: List[Tuple[str, Side, Side]] = []
    for i in RECURRENCE_ORDERS:
        lhs, rhs = _recurrence(i)
        table.append((f"recurrence({i})", lhs, rhs))
    for i in POLYGAMMA_ORDERS:
        kernel: KernelId = KernelId.polygamma(i)
        sign: float = 1.0 if i % 2 == 1 else -1.0
        table.append(
            (
                f"polygamma_kernel({i})",
                lambda x, k=kernel: laplace_integral(k, x, cfg),
                lambda x, i=i, s=sign: s * polygamma(i, x),
            )
        )
    table.extend(
        [
            ("binet", lambda x: laplace_integral(KernelId.binet_h(), x, cfg), lambda x: 1.0 / x - log_minus_digamma(x)),
            ("rho", lambda x: laplace_integral(KernelId.rho(), x, cfg), log_minus_digamma),
            ("rho_prime_theta1", lambda x: theta1_via_kernel(x, cfg), theta1),
            ("h_prime_theta1", lambda x: 0.5 - laplace_integral(KernelId.binet_h_prime(), x, cfg), theta1),
        ]
    )
    return table


def log_ratio_row(cfg: Optional[QuadratureConfig] = None) -> IdentityRow:
    """
    Frullani check ln(b/a) = int_0^inf (e^-at - e^-bt)/t dt for (a, b) = (1, e).

    The integral does not depend on a Laplace abscissa; the row is reported at x = a.
    """
    a, b = LOG_RATIO_PAIR
    lhs: float = laplace_integral(KernelId.log_ratio(a, b), a, cfg)
    rhs: float = math.log(b / a)
    return IdentityRow(identity=f"log_ratio({a:g},e)", x=a, lhs=lhs, rhs=rhs, residual=residual(lhs, rhs))


def default_identity_grid() -> List[float]:
    s = get_settings()
    if s.GRID_LOG:
        return log_grid(s.GRID_MIN, s.GRID_MAX, s.GRID_POINTS)
    return linear_grid(s.GRID_MIN, s.GRID_MAX, s.GRID_POINTS)


def run_identities(
    grid: Optional[Sequence[float]] = None,
    cfg: Optional[QuadratureConfig] = None,
) -> List[IdentityRow]:
    """
    Evaluate the identity suite.

    Rows are ordered by identity, then by abscissa; the Frullani row comes first.

    Args:
        grid: Abscissae; the settings grid when omitted.
        cfg: Quadrature configuration; the settings default when omitted.

    Returns:
        List of IdentityRow.

    Raises:
        NonConvergenceError: If any quadrature exhausts its subdivision budget.
    """
    cfg = cfg or QuadratureConfig.from_settings()
    abscissae: List[float] = sorted(grid) if grid is not None else default_identity_grid()

    rows: List[IdentityRow] = [log_ratio_row(cfg)]
    for name, lhs_of, rhs_of in _identity_table(cfg):
        for x in abscissae:
            lhs: float = lhs_of(x)
            rhs: float = rhs_of(x)
            rows.append(IdentityRow(identity=name, x=x, lhs=lhs, rhs=rhs, residual=residual(lhs, rhs)))

    worst: IdentityRow = max(rows, key=lambda r: r.residual)
    logger.info(f"Evaluated {len(rows)} identity rows, worst residual {worst.residual:.3e} ({worst.identity} at x={worst.x:.6g})")
    return rows
