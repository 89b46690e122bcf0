"""
The theta family theta_alpha(x) = x^alpha [ln x - psi(x)] and its relatives.

theta_1 decreases from 1 at 0+ to 1/2 at infinity; theta_alpha is
x^(alpha - 1) theta_1. The module also provides closed-form derivatives,
the gamma-shape function e^x Gamma(x) / x^(x - theta_1(x)) and the identric
mean, all evaluated in log space wherever a gamma value appears.
"""

import math
from typing import List, NamedTuple, Tuple, Union

from pydantic import BaseModel, ConfigDict, computed_field, field_validator

from src.PSICM.core.errors import DegenerateMeanError, DomainError
from src.PSICM.core.specfun import (
    BERNOULLI,
    HALF_LOG_TWO_PI,
    K_MAX,
    RECURRENCE_THRESHOLD,
    Abscissa,
    as_abscissa,
    check_order,
    digamma,
    lgamma,
    lgamma_correction,
    log_minus_digamma,
    polygamma,
)

ALPHA_DERIV_MAX: int = 8
THETA1_DERIV_MAX: int = K_MAX - 1
IDENTRIC_MIN_SEPARATION: float = 1e-3
_LOG_OVERFLOW_GUARD: float = 700.0
_SLACK_ULPS: float = 64.0
_EPS: float = 2.220446049250313e-16

# 1/2 + 1/(12x) - theta_1(x) = -sum_{k>=2} B_2k / (2k x^(2k-1))
_REMAINDER_COEFFS: Tuple[float, ...] = tuple(
    -BERNOULLI.as_float(2 * k) / (2 * k) for k in range(2, 11)
)


class AlphaExponent(BaseModel):
    """A finite exponent alpha; no sign restriction."""

    model_config = ConfigDict(frozen=True)

    alpha: float

    @field_validator("alpha")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError(f"alpha must be finite, got {v!r}")
        return v

    def __float__(self) -> float:
        return self.alpha


Alpha = Union[float, int, AlphaExponent]


def as_alpha(alpha: Alpha) -> float:
    """Coerce an exponent to a validated float."""
    if isinstance(alpha, AlphaExponent):
        return alpha.alpha
    try:
        value: float = float(alpha)
    except (TypeError, ValueError) as e:
        raise DomainError("alpha", alpha, "must be a real number") from e
    if not math.isfinite(value):
        raise DomainError("alpha", alpha, "must be finite")
    return value


class DerivativeValue(NamedTuple):
    """A derivative together with the magnitude of the terms summed to get it."""

    value: float
    magnitude: float

    def slack(self, order: int) -> float:
        """Rounding allowance 64 eps order! magnitude used by the sign checks."""
        return _SLACK_ULPS * _EPS * math.factorial(order) * self.magnitude


# ---------------------------------------------------------------------------
# theta
# ---------------------------------------------------------------------------


def theta1(x: Abscissa) -> float:
    """
    theta_1(x) = x [ln x - psi(x)].

    Below x = 1 the equivalent form x ln x - x psi(x + 1) + 1 is used, which
    stays benign as psi(x) tends to -infinity.
    """
    x = as_abscissa(x)
    if x < 1.0:
        return math.fsum([x * math.log(x), -x * digamma(x + 1.0), 1.0])
    return x * log_minus_digamma(x)


def theta(alpha: Alpha, x: Abscissa) -> float:
    """
    theta_alpha(x) = x^alpha [ln x - psi(x)], strictly positive.

    Args:
        alpha: Exponent, any finite real.
        x: Abscissa on (0, inf).

    Returns:
        x^(alpha - 1) theta_1(x); the product is taken in log space when the
        power alone would overflow or underflow.

    Example:
        >>> round(theta(2.0, 1.0), 10)
        0.5772156649
    """
    alpha = as_alpha(alpha)
    x = as_abscissa(x)
    base: float = theta1(x)
    if alpha == 1.0:
        return base
    log_power: float = (alpha - 1.0) * math.log(x)
    if abs(log_power) > _LOG_OVERFLOW_GUARD:
        return math.exp(log_power + math.log(base))
    return math.exp(log_power) * base


class AsymptoticRemainder(BaseModel):
    """
    The remainder 1/2 + 1/(12x) - theta_1(x), which lies in (0, 1/(120 x^3)).

    Attributes:
        x: Abscissa.
        value: The remainder.
    """

    model_config = ConfigDict(frozen=True)

    x: float
    value: float

    @computed_field
    @property
    def upper_bound(self) -> float:
        return 1.0 / (120.0 * self.x**3)

    @property
    def within_bounds(self) -> bool:
        return 0.0 < self.value < self.upper_bound


def asymptotic_remainder(x: Abscissa) -> AsymptoticRemainder:
    """
    Evaluate 1/2 + 1/(12x) - theta_1(x).

    From x = 16 on the value comes from the tail 1/(120x^3) - 1/(252x^5) + ...
    of the Bernoulli series, so it stays resolvable long after the direct
    difference has cancelled to noise.
    """
    x = as_abscissa(x)
    if x >= RECURRENCE_THRESHOLD:
        w: float = 1.0 / (x * x)
        acc: float = 0.0
        for c in reversed(_REMAINDER_COEFFS):
            acc = (acc + c) * w
        value: float = acc / x
    else:
        value = math.fsum([0.5, 1.0 / (12.0 * x), -theta1(x)])
    return AsymptoticRemainder(x=x, value=value)


def theta1_step(x: Abscissa) -> float:
    """
    theta_1(x + 1) - theta_1(x), always negative.

    Evaluated as x log1p(1/x) + [ln(x+1) - psi(x+1)] - 1, the cancellation-free
    arrangement of (x+1) ln(x+1) - x ln x - psi(x+1) - 1.
    """
    x = as_abscissa(x)
    return math.fsum([x * math.log1p(1.0 / x), log_minus_digamma(x + 1.0), -1.0])


def theta1_step_bracket(x: Abscissa) -> Tuple[float, float]:
    """
    Bracket (L, U) with L < theta1_step(x) < U.

    L = (x+1) ln(1 + 1/x) - 1/(2x) - 1 and U = L + 1/(12x^2), obtained from
    1/(2x) - 1/(12x^2) < psi(x+1) - ln x < 1/(2x).
    """
    x = as_abscissa(x)
    lower: float = math.fsum([(x + 1.0) * math.log1p(1.0 / x), -0.5 / x, -1.0])
    return lower, lower + 1.0 / (12.0 * x * x)


# ---------------------------------------------------------------------------
# Derivatives
# ---------------------------------------------------------------------------


def _theta1_deriv_terms(i: int, x: float) -> List[float]:
    if i == 0:
        return [theta1(x)]
    if i == 1:
        if x >= 1.0:
            return [log_minus_digamma(x), -x * polygamma(1, x), 1.0]
        return [math.log(x), 1.0, -digamma(x + 1.0), -x * polygamma(1, x + 1.0)]
    # (x ln x)^(i) - i psi^(i-1)(x+1) - x psi^(i)(x+1)
    return [
        (-1.0) ** i * math.factorial(i - 2) / x ** (i - 1),
        -i * polygamma(i - 1, x + 1.0),
        -x * polygamma(i, x + 1.0),
    ]


def theta1_derivative(i: int, x: Abscissa) -> DerivativeValue:
    """theta_1^(i)(x) with the magnitude of its summands."""
    i = check_order(i, 0, THETA1_DERIV_MAX)
    x = as_abscissa(x)
    terms: List[float] = _theta1_deriv_terms(i, x)
    return DerivativeValue(math.fsum(terms), math.fsum(abs(t) for t in terms))


def theta1_deriv(i: int, x: Abscissa) -> float:
    """
    Closed-form i-th derivative of theta_1, 0 <= i <= K_MAX - 1.

    theta_1' = ln x - psi(x) - x psi'(x) + 1 and, for i >= 2,
    theta_1^(i) = (-1)^i (i-2)! / x^(i-1) - i psi^(i-1)(x) - x psi^(i)(x);
    the polygamma terms are taken at x + 1, which is the same expression
    after one recurrence step and is well conditioned near 0.

    Raises:
        OrderOutOfRangeError: If i is outside [0, K_MAX - 1].
    """
    return theta1_derivative(i, x).value


def _falling(beta: float, m: int) -> float:
    acc: float = 1.0
    for j in range(m):
        acc *= beta - j
    return acc


def theta_alpha_derivative(alpha: Alpha, i: int, x: Abscissa) -> DerivativeValue:
    """
    theta_alpha^(i)(x) by the Leibniz rule over x^(alpha-1) theta_1(x).

    Returns:
        DerivativeValue; the magnitude sums |C(i,k) (x^beta)^(i-k) theta_1^(k)|
        weighted by the magnitudes of the theta_1 derivatives.
    """
    alpha = as_alpha(alpha)
    i = check_order(i, 0, ALPHA_DERIV_MAX)
    x = as_abscissa(x)
    beta: float = alpha - 1.0
    log_x: float = math.log(x)

    terms: List[float] = []
    magnitudes: List[float] = []
    for k in range(i + 1):
        m: int = i - k
        coefficient: float = _falling(beta, m)
        if coefficient == 0.0:
            continue
        power: float = math.comb(i, k) * coefficient * math.exp((beta - m) * log_x)
        derivative: DerivativeValue = theta1_derivative(k, x)
        terms.append(power * derivative.value)
        magnitudes.append(abs(power) * derivative.magnitude)
    return DerivativeValue(math.fsum(terms), math.fsum(magnitudes))


def theta_alpha_deriv(alpha: Alpha, i: int, x: Abscissa) -> float:
    """
    i-th derivative of theta_alpha for 0 <= i <= 8.

    Raises:
        OrderOutOfRangeError: If i is outside [0, 8].
    """
    return theta_alpha_derivative(alpha, i, x).value


# ---------------------------------------------------------------------------
# Gamma-shape function and its power family
# ---------------------------------------------------------------------------


def log_gamma_power_ratio(alpha: Alpha, x: Abscissa) -> float:
    """
    ln[e^x Gamma(x) / x^(x - alpha)] = x + ln Gamma(x) - (x - alpha) ln x.

    From x = 16 on this is rewritten as (alpha - 1/2) ln x + ln sqrt(2 pi) + mu(x)
    with mu the Stirling remainder.
    """
    alpha = as_alpha(alpha)
    x = as_abscissa(x)
    if x >= RECURRENCE_THRESHOLD:
        return math.fsum([(alpha - 0.5) * math.log(x), HALF_LOG_TWO_PI, lgamma_correction(x)])
    return math.fsum([x, lgamma(x), -(x - alpha) * math.log(x)])


def gamma_power_ratio(alpha: Alpha, x: Abscissa) -> float:
    """e^x Gamma(x) / x^(x - alpha), computed through log_gamma_power_ratio."""
    return math.exp(log_gamma_power_ratio(alpha, x))


def log_gamma_shape(x: Abscissa) -> float:
    """ln of the gamma-shape function: x + ln Gamma(x) - (x - theta_1(x)) ln x."""
    x = as_abscissa(x)
    return log_gamma_power_ratio(theta1(x), x)


def gamma_shape(x: Abscissa) -> float:
    """
    The gamma-shape function e^x Gamma(x) / x^(x - theta_1(x)).

    Increases on (0, 1] and decreases on [1, inf), with maximum e at x = 1,
    limit 1 at 0+ and limit sqrt(2 pi) at infinity.

    Example:
        >>> round(gamma_shape(1.0), 12)
        2.718281828459
    """
    return math.exp(log_gamma_shape(x))


# ---------------------------------------------------------------------------
# Identric mean
# ---------------------------------------------------------------------------


def log_identric_mean(a: Abscissa, b: Abscissa) -> float:
    """ln I(a, b) = (b ln b - a ln a) / (b - a) - 1."""
    a = as_abscissa(a, "a")
    b = as_abscissa(b, "b")
    if a == b:
        raise DegenerateMeanError(a, b)
    return (b * math.log(b) - a * math.log(a)) / (b - a) - 1.0


def identric_mean(a: Abscissa, b: Abscissa) -> float:
    """
    The identric mean (1/e) (b^b / a^a)^(1/(b-a)) of distinct a, b > 0.

    Symmetric in its arguments and strictly between min(a, b) and max(a, b).

    Raises:
        DegenerateMeanError: If a == b.
    """
    return math.exp(log_identric_mean(a, b))


def log_identric_rhs(x: Abscissa, y: Abscissa) -> float:
    """ln{x^theta_1(x) Gamma(x) / (y^theta_1(y) Gamma(y))}^(1/(x-y))."""
    x = as_abscissa(x)
    y = as_abscissa(y)
    _check_separation(x, y)
    numerator: float = math.fsum(
        [theta1(x) * math.log(x), lgamma(x), -theta1(y) * math.log(y), -lgamma(y)]
    )
    return numerator / (x - y)


def identric_bound_gap(x: Abscissa, y: Abscissa) -> float:
    """
    ln I(x, y) minus the log of the gamma-ratio bound on it.

    Equal to -[ln gs(x) - ln gs(y)] / (x - y) for the gamma-shape function gs,
    hence positive for x, y >= 1 and negative for x, y in (0, 1].

    Raises:
        DegenerateMeanError: If |x - y| < 1e-3.
    """
    x = as_abscissa(x)
    y = as_abscissa(y)
    _check_separation(x, y)
    return -(log_gamma_shape(x) - log_gamma_shape(y)) / (x - y)


def _check_separation(x: float, y: float) -> None:
    if abs(x - y) < IDENTRIC_MIN_SEPARATION:
        raise DegenerateMeanError(x, y, IDENTRIC_MIN_SEPARATION)
