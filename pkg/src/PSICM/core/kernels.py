"""
Laplace kernels of the psi function and their semi-infinite quadrature.

The Binet kernel h(t) = 1/t - 1/(e^t - 1) and its complement
rho(t) = 1 - h(t) = 1/(1 - e^-t) - 1/t give

    psi(x) - ln x + 1/x   =  int_0^inf h(t) e^(-xt) dt
    x [ln x - psi(x)]     =  1/2 + int_0^inf rho'(t) e^(-xt) dt
                          =  1/2 - int_0^inf h'(t) e^(-xt) dt

while t^i / (1 - e^-t) is the kernel of |psi^(i)| and (e^-at - e^-bt)/t the
Frullani kernel of ln(b/a). Below the small-t cutoff every kernel switches to
a short Taylor expansion.

Example:
    >>> from src.PSICM.core.kernels import KernelId, laplace_integral
    >>> round(laplace_integral(KernelId.binet_h(), 1.0), 10)
    0.4227843351
"""

import logging
import math
from enum import Enum
from typing import TYPE_CHECKING, Callable, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.PSICM.core.errors import DomainError
from src.PSICM.core.quadrature import AdaptiveResult, adaptive_integrate
from src.PSICM.core.specfun import K_MAX, Abscissa, as_abscissa, check_order

if TYPE_CHECKING:
    from src.PSICM.config.settings import Settings

logger = logging.getLogger(__name__)

SMALL_T_CUTOFF: float = 1e-2
_TAIL_SAFETY: float = 10.0
_MAX_DOUBLINGS: int = 200
_POLYGAMMA_KERNEL_BOUND: float = 1.0 / (1.0 - math.exp(-1.0))

# cosh t - 1 - t^2/2 = t^4 * sum_{k>=2} t^(2k-4) / (2k)!
_COSH_REMAINDER_COEFFS: List[float] = [1.0 / math.factorial(2 * k) for k in range(2, 11)]


class KernelKind(str, Enum):
    BINET_H = "BINET_H"
    BINET_H_PRIME = "BINET_H_PRIME"
    RHO = "RHO"
    RHO_PRIME = "RHO_PRIME"
    POLYGAMMA_KERNEL = "POLYGAMMA_KERNEL"
    LOG_RATIO = "LOG_RATIO"


class KernelId(BaseModel):
    """
    Identifies one Laplace kernel, with its parameters where it has any.

    Attributes:
        kind: Kernel family.
        order: Derivative order i for POLYGAMMA_KERNEL, 1 <= i <= K_MAX.
        a: First Frullani rate for LOG_RATIO, > 0.
        b: Second Frullani rate for LOG_RATIO, > 0.

    Example:
        >>> KernelId.polygamma(2).label
        'POLYGAMMA_KERNEL(2)'
    """

    model_config = ConfigDict(frozen=True)

    kind: KernelKind
    order: Optional[int] = None
    a: Optional[float] = None
    b: Optional[float] = None

    @model_validator(mode="after")
    def validate_parameters(self) -> "KernelId":
        """Check that parameters are present exactly where the kind needs them."""
        if self.kind is KernelKind.POLYGAMMA_KERNEL:
            if self.order is None:
                raise ValueError("POLYGAMMA_KERNEL requires an order")
            check_order(self.order, 1, K_MAX)
        elif self.order is not None:
            raise ValueError(f"{self.kind.value} takes no order")

        if self.kind is KernelKind.LOG_RATIO:
            for name, rate in (("a", self.a), ("b", self.b)):
                if rate is None or not math.isfinite(rate) or rate <= 0.0:
                    raise ValueError(f"LOG_RATIO requires {name} > 0, got {rate!r}")
        elif self.a is not None or self.b is not None:
            raise ValueError(f"{self.kind.value} takes no rates")
        return self

    @classmethod
    def binet_h(cls) -> "KernelId":
        return cls(kind=KernelKind.BINET_H)

    @classmethod
    def binet_h_prime(cls) -> "KernelId":
        return cls(kind=KernelKind.BINET_H_PRIME)

    @classmethod
    def rho(cls) -> "KernelId":
        return cls(kind=KernelKind.RHO)

    @classmethod
    def rho_prime(cls) -> "KernelId":
        return cls(kind=KernelKind.RHO_PRIME)

    @classmethod
    def polygamma(cls, order: int) -> "KernelId":
        return cls(kind=KernelKind.POLYGAMMA_KERNEL, order=order)

    @classmethod
    def log_ratio(cls, a: float, b: float) -> "KernelId":
        return cls(kind=KernelKind.LOG_RATIO, a=a, b=b)

    @property
    def label(self) -> str:
        if self.kind is KernelKind.POLYGAMMA_KERNEL:
            return f"POLYGAMMA_KERNEL({self.order})"
        if self.kind is KernelKind.LOG_RATIO:
            return f"LOG_RATIO({self.a:.17g},{self.b:.17g})"
        return self.kind.value


class QuadratureConfig(BaseModel):
    """
    Tolerances and truncation policy for semi-infinite Laplace quadrature.

    The integral over [0, inf) is cut at the first T (doubling from 2 t0)
    whose analytic tail bound is at most abs_tol / tail_safety.

    Attributes:
        abs_tol: Absolute error target.
        rel_tol: Relative error target.
        small_t_cutoff: t0, below which kernels use their Taylor expansions.
        max_subdivisions: Bisection budget of the adaptive driver.
        tail_safety: Ratio between abs_tol and the admitted tail bound.
    """

    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default=1e-11, gt=0.0)
    rel_tol: float = Field(default=1e-10, gt=0.0)
    small_t_cutoff: float = Field(default=SMALL_T_CUTOFF, gt=0.0, lt=1.0)
    max_subdivisions: int = Field(default=60, ge=1)
    tail_safety: float = Field(default=_TAIL_SAFETY, ge=1.0)

    @field_validator("abs_tol", "rel_tol")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError(f"tolerance must be finite, got {v!r}")
        return v

    @classmethod
    def from_settings(cls, source: Optional["Settings"] = None) -> "QuadratureConfig":
        """
        Build a config from the application settings.

        Args:
            source: Settings instance; the global one when omitted.
        """
        if source is None:
            from src.PSICM.config.settings import settings as source
        return cls(
            abs_tol=source.QUAD_ABS_TOL,
            rel_tol=source.QUAD_REL_TOL,
            small_t_cutoff=source.SMALL_T_CUTOFF,
            max_subdivisions=source.MAX_SUBDIVISIONS,
        )


class QuadratureResult(BaseModel):
    """
    Value and error accounting of one Laplace integral.

    Attributes:
        kernel: Kernel label.
        x: Laplace abscissa.
        value: Integral over [0, truncation].
        error_estimate: Adaptive error estimate over [0, truncation].
        truncation: Cut point T.
        tail_bound: Analytic bound on the discarded integral over [T, inf).
        panels: Panels in the final partition.
        subdivisions: Bisections spent.
    """

    model_config = ConfigDict(frozen=True)

    kernel: str
    x: float
    value: float
    error_estimate: float
    truncation: float
    tail_bound: float
    panels: int
    subdivisions: int

    @property
    def total_error_bound(self) -> float:
        return self.error_estimate + self.tail_bound


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------


def _bose(t: float) -> float:
    """1 / (e^t - 1) for t > 0, without overflow."""
    return -math.exp(-t) / math.expm1(-t)


def kernel_h(t: float, cutoff: float = SMALL_T_CUTOFF) -> float:
    """
    Binet kernel h(t) = 1/t - 1/(e^t - 1), with h(0) = 1/2.

    Decreasing on the whole line; h(-t) = 1 - h(t).

    Args:
        t: Any finite real.
        cutoff: Below |t| < cutoff the Taylor expansion through t^5 is used.
    """
    if abs(t) < cutoff:
        t2: float = t * t
        return 0.5 - t / 12.0 + t * t2 / 720.0 - t * t2 * t2 / 30240.0
    if t < 0.0:
        return 1.0 - kernel_h(-t, cutoff)
    return 1.0 / t - _bose(t)


def kernel_rho(t: float, cutoff: float = SMALL_T_CUTOFF) -> float:
    """
    Complementary kernel rho(t) = 1/(1 - e^-t) - 1/t = 1 - h(t), with rho(0) = 1/2.

    Args:
        t: Any finite real; the kernel is used for t >= 0.
        cutoff: Small-t switch shared with kernel_h.
    """
    return 1.0 - kernel_h(t, cutoff)


def _cosh_remainder(t: float) -> float:
    t2: float = t * t
    acc: float = 0.0
    for c in reversed(_COSH_REMAINDER_COEFFS):
        acc = acc * t2 + c
    return acc * t2 * t2


def kernel_rho_prime(t: float, cutoff: float = SMALL_T_CUTOFF) -> float:
    """
    rho'(t) = 1/t^2 - e^-t / (1 - e^-t)^2, with rho'(0) = 1/12.

    Positive on the whole line and even in t. For cutoff <= |t| < 1 the
    factored form 2 e^-t (cosh t - 1 - t^2/2) / (t^2 (1 - e^-t)^2) is used,
    with the bracket summed from its power series.

    Args:
        t: Any finite real.
        cutoff: Below |t| < cutoff the Taylor expansion through t^6 is used.
    """
    t = abs(t)
    if t < cutoff:
        t2: float = t * t
        return 1.0 / 12.0 - t2 / 240.0 + t2 * t2 / 6048.0 - t2 * t2 * t2 / 172800.0
    denominator: float = math.expm1(-t)
    if t < 1.0:
        return 2.0 * math.exp(-t) * _cosh_remainder(t) / (t * t * denominator * denominator)
    return 1.0 / (t * t) - math.exp(-t) / (denominator * denominator)


def kernel_h_prime(t: float, cutoff: float = SMALL_T_CUTOFF) -> float:
    """h'(t) = -1/t^2 + e^t / (e^t - 1)^2 = -rho'(t), with h'(0) = -1/12."""
    return -kernel_rho_prime(t, cutoff)


def kernel_polygamma(order: int, t: float) -> float:
    """
    Polygamma kernel t^i / (1 - e^-t) for t >= 0.

    Its Laplace transform is (-1)^(i+1) psi^(i)(x). The value at t = 0 is the
    limit: 1 for i = 1 and 0 for i >= 2.
    """
    if t < 0.0:
        raise DomainError("t", t, "polygamma kernel is defined for t >= 0")
    if t == 0.0:
        return 1.0 if order == 1 else 0.0
    return t**order / -math.expm1(-t)


def kernel_log_ratio(a: float, b: float, t: float) -> float:
    """Frullani kernel (e^-at - e^-bt) / t for t >= 0, equal to b - a at t = 0."""
    if t == 0.0:
        return b - a
    return (math.expm1(-a * t) - math.expm1(-b * t)) / t


# ---------------------------------------------------------------------------
# Truncation
# ---------------------------------------------------------------------------

_LAPLACE_BOUNDS: Dict[KernelKind, float] = {
    KernelKind.BINET_H: 0.5,
    KernelKind.BINET_H_PRIME: 1.0 / 12.0,
    KernelKind.RHO: 1.0,
    KernelKind.RHO_PRIME: 1.0 / 12.0,
}


def kernel_bound(kernel: KernelId) -> float:
    """
    Documented constant M bounding the kernel on the tail region.

    |h| <= 1/2, |h'| <= 1/12, |rho| <= 1 and |rho'| <= 1/12 on (0, inf).
    For the polygamma kernel M bounds 1/(1 - e^-t) on t >= 1, and for the
    Frullani kernel it bounds |e^-at - e^-bt| by 1.
    """
    if kernel.kind is KernelKind.POLYGAMMA_KERNEL:
        return _POLYGAMMA_KERNEL_BOUND
    if kernel.kind is KernelKind.LOG_RATIO:
        return 1.0
    return _LAPLACE_BOUNDS[kernel.kind]


def _decay_rate(kernel: KernelId, x: float) -> float:
    if kernel.kind is KernelKind.LOG_RATIO:
        return min(kernel.a, kernel.b)
    return x


def _minimum_truncation(kernel: KernelId, cutoff: float) -> float:
    if kernel.kind is KernelKind.POLYGAMMA_KERNEL:
        return max(2.0 * cutoff, 1.0)
    return 2.0 * cutoff


def tail_bound(kernel: KernelId, x: Abscissa, truncation: float) -> float:
    """
    Upper bound on |int_T^inf kernel(t) w(t) dt| for the Laplace weight w.

    Args:
        kernel: Kernel identifier.
        x: Laplace abscissa (ignored by the Frullani kernel).
        truncation: Cut point T > 0.

    Returns:
        M e^(-xT) / x for the Binet family; M Gamma(i+1, xT) / x^(i+1) for the
        polygamma kernel (T >= 1); e^(-cT) / (cT) with c = min(a, b) for the
        Frullani kernel.
    """
    x = as_abscissa(x)
    if truncation <= 0.0:
        raise DomainError("truncation", truncation, "must be > 0")
    rate: float = _decay_rate(kernel, x)
    y: float = rate * truncation

    if kernel.kind is KernelKind.LOG_RATIO:
        return math.exp(-y) / y
    if kernel.kind is KernelKind.POLYGAMMA_KERNEL:
        order: int = kernel.order
        partial: float = math.fsum(y**j / math.factorial(j) for j in range(order + 1))
        incomplete: float = math.factorial(order) * math.exp(-y) * partial
        return kernel_bound(kernel) * incomplete / rate ** (order + 1)
    return kernel_bound(kernel) * math.exp(-y) / rate


def choose_truncation(kernel: KernelId, x: Abscissa, cfg: QuadratureConfig) -> float:
    """Smallest T in the doubling sequence from 2 t0 whose tail bound meets abs_tol / tail_safety."""
    x = as_abscissa(x)
    truncation: float = _minimum_truncation(kernel, cfg.small_t_cutoff)
    target: float = cfg.abs_tol / cfg.tail_safety
    for _ in range(_MAX_DOUBLINGS):
        if tail_bound(kernel, x, truncation) <= target:
            return truncation
        truncation *= 2.0
    return truncation


def _breakpoints(first: float, truncation: float) -> List[float]:
    edges: List[float] = [0.0]
    edge: float = first
    while edge < truncation:
        edges.append(edge)
        edge *= 4.0
    edges.append(truncation)
    return edges


def _integrand(kernel: KernelId, x: float, cutoff: float) -> Callable[[float], float]:
    kind: KernelKind = kernel.kind
    if kind is KernelKind.LOG_RATIO:
        a: float = kernel.a
        b: float = kernel.b
        return lambda t: kernel_log_ratio(a, b, t)
    if kind is KernelKind.POLYGAMMA_KERNEL:
        order: int = kernel.order
        return lambda t: kernel_polygamma(order, t) * math.exp(-x * t)

    base: Callable[[float, float], float] = {
        KernelKind.BINET_H: kernel_h,
        KernelKind.BINET_H_PRIME: kernel_h_prime,
        KernelKind.RHO: kernel_rho,
        KernelKind.RHO_PRIME: kernel_rho_prime,
    }[kind]
    return lambda t: base(t, cutoff) * math.exp(-x * t)


# ---------------------------------------------------------------------------
# Laplace integrals
# ---------------------------------------------------------------------------


def laplace_quadrature(
    kernel: KernelId, x: Abscissa, cfg: Optional[QuadratureConfig] = None
) -> QuadratureResult:
    """
    Integrate kernel(t) e^(-xt) over [0, inf) with full error accounting.

    The Frullani kernel carries its own exponentials and is integrated
    without a Laplace weight; x then only labels the result.

    The range is cut at T from choose_truncation and split at
    0, s, 4s, 16s, ..., T with s = min(t0, 1/rate), so the small-t series
    region sits on its own panel.

    Args:
        kernel: Kernel to integrate.
        x: Laplace abscissa, > 0.
        cfg: Quadrature settings; taken from the application settings when omitted.

    Returns:
        QuadratureResult.

    Raises:
        NonConvergenceError: If the subdivision budget is exhausted.
    """
    x = as_abscissa(x)
    cfg = cfg or QuadratureConfig.from_settings()

    truncation: float = choose_truncation(kernel, x, cfg)
    first: float = min(cfg.small_t_cutoff, 1.0 / _decay_rate(kernel, x))
    breakpoints: List[float] = _breakpoints(first, truncation)

    result: AdaptiveResult = adaptive_integrate(
        _integrand(kernel, x, cfg.small_t_cutoff),
        breakpoints,
        abs_tol=cfg.abs_tol,
        rel_tol=cfg.rel_tol,
        max_subdivisions=cfg.max_subdivisions,
        label=kernel.label,
        x=x,
    )
    return QuadratureResult(
        kernel=kernel.label,
        x=x,
        value=result.value,
        error_estimate=result.error_estimate,
        truncation=truncation,
        tail_bound=tail_bound(kernel, x, truncation),
        panels=result.panels,
        subdivisions=result.subdivisions,
    )


def laplace_integral(kernel: KernelId, x: Abscissa, cfg: Optional[QuadratureConfig] = None) -> float:
    """Value of laplace_quadrature(kernel, x, cfg)."""
    return laplace_quadrature(kernel, x, cfg).value


def theta1_via_kernel(x: Abscissa, cfg: Optional[QuadratureConfig] = None) -> float:
    """
    x [ln x - psi(x)] computed as 1/2 + int_0^inf rho'(t) e^(-xt) dt.

    Raises:
        NonConvergenceError: Propagated from the quadrature.
    """
    return 0.5 + laplace_integral(KernelId.rho_prime(), x, cfg)
