"""
Real-argument log-gamma, digamma and polygamma functions.

Every evaluator shifts its argument upward with the recurrence
psi^(k)(x + 1) = psi^(k)(x) + (-1)^k k! / x^(k+1) until x >= RECURRENCE_THRESHOLD
and then sums a fixed number of terms of the Bernoulli asymptotic series.
ln Gamma switches to its Taylor series about 1 within LGAMMA_SERIES_RADIUS of
its zeros at 1 and 2.
All arithmetic is binary64. The series oracles at the bottom of the module are
slow, independent reference implementations used by the test-suite.

Example:
    >>> from src.PSICM.core.specfun import digamma, polygamma
    >>> digamma(1.0)
    -0.5772156649015329
    >>> polygamma(1, 1.0)
    1.6449340668482264
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from src.PSICM.core.errors import DomainError, OrderOutOfRangeError

K_MAX: int = 12
RECURRENCE_THRESHOLD: float = 16.0
ASYMPTOTIC_TERMS: int = 10

# Euler-Mascheroni constant, 0.57721 56649 01532 86060 65120 90082 40243...
EULER_GAMMA: float = 0.57721566490153286060651209008240243
HALF_LOG_TWO_PI: float = 0.91893853320467274178032973640561764


class EvalPoint(BaseModel):
    """
    A validated abscissa on the open half-line (0, inf).

    Attributes:
        x: The abscissa; must be finite and strictly positive.
    """

    model_config = ConfigDict(frozen=True)

    x: float

    @field_validator("x")
    @classmethod
    def validate_positive_finite(cls, v: float) -> float:
        """Reject zero, negative and non-finite abscissae."""
        if not math.isfinite(v) or v <= 0.0:
            raise ValueError(f"abscissa must be finite and > 0, got {v!r}")
        return v

    def __float__(self) -> float:
        return self.x


Abscissa = Union[float, int, EvalPoint]


def as_abscissa(x: Abscissa, name: str = "x") -> float:
    """
    Coerce a number or EvalPoint to a validated float abscissa.

    Raises:
        DomainError: If the value is not finite or not strictly positive.
    """
    if isinstance(x, EvalPoint):
        return x.x
    try:
        value: float = float(x)
    except (TypeError, ValueError) as e:
        raise DomainError(name, x, "must be a real number") from e
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(name, x, "must be finite and > 0")
    return value


def check_order(k: int, lo: int = 0, hi: int = K_MAX) -> int:
    """
    Validate a derivative order.

    Raises:
        OrderOutOfRangeError: If k is not an integer in [lo, hi].
    """
    if isinstance(k, bool) or int(k) != k or not lo <= int(k) <= hi:
        raise OrderOutOfRangeError(k, lo, hi)
    return int(k)


class BernoulliTable:
    """
    Immutable table of the even Bernoulli numbers B_2 .. B_20.

    Values are stored as exact rationals; float views are derived once.
    """

    __slots__ = ("_values", "_floats")

    _RAW: Tuple[Tuple[int, int, int], ...] = (
        (2, 1, 6),
        (4, -1, 30),
        (6, 1, 42),
        (8, -1, 30),
        (10, 5, 66),
        (12, -691, 2730),
        (14, 7, 6),
        (16, -3617, 510),
        (18, 43867, 798),
        (20, -174611, 330),
    )

    def __init__(self) -> None:
        values = {n: Fraction(num, den) for n, num, den in self._RAW}
        if values[2] != Fraction(1, 6) or values[4] != Fraction(-1, 30):
            raise RuntimeError("Bernoulli table failed its spot check")
        object.__setattr__(self, "_values", values)
        object.__setattr__(self, "_floats", {n: float(v) for n, v in values.items()})

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("BernoulliTable is immutable")

    def __getitem__(self, n: int) -> Fraction:
        """Exact B_n for even n in 2..20."""
        return self._values[n]

    def as_float(self, n: int) -> float:
        return self._floats[n]

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(sorted(self._values.items()))

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        return f"BernoulliTable(B_2..B_{max(self._values)})"


BERNOULLI: BernoulliTable = BernoulliTable()

# ln x - psi(x) ~ 1/(2x) + sum B_2k / (2k x^2k)
_LOG_MINUS_DIGAMMA_COEFFS: Tuple[float, ...] = tuple(
    float(BERNOULLI[2 * k] / (2 * k)) for k in range(1, ASYMPTOTIC_TERMS + 1)
)
# ln Gamma(x) ~ (x - 1/2) ln x - x + ln sqrt(2 pi) + sum B_2k / (2k (2k-1) x^(2k-1))
_STIRLING_COEFFS: Tuple[float, ...] = tuple(
    float(BERNOULLI[2 * k] / (2 * k * (2 * k - 1))) for k in range(1, ASYMPTOTIC_TERMS + 1)
)


def _zeta(s: int, cutoff: int = 10) -> float:
    """Riemann zeta at an integer s >= 2 by Euler-Maclaurin summation past `cutoff`."""
    head: List[float] = [float(n) ** (-s) for n in range(1, cutoff)]
    tail: List[float] = [cutoff ** (1 - s) / (s - 1), 0.5 * cutoff ** (-s)]
    rising: int = s
    for j in range(1, ASYMPTOTIC_TERMS + 1):
        # B_2j / (2j)! * s (s+1) ... (s+2j-2) * N^(-s-2j+1)
        weight: float = float(BERNOULLI[2 * j] * Fraction(rising, math.factorial(2 * j)))
        tail.append(weight * cutoff ** (1 - s - 2 * j))
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return math.fsum(head + tail)


LGAMMA_SERIES_RADIUS: float = 0.2
LGAMMA_SERIES_TERMS: int = 30

# ln Gamma(1 + z) = -gamma z + sum_{k>=2} (-1)^k zeta(k) z^k / k
_LGAMMA_ONE_COEFFS: Tuple[float, ...] = (-EULER_GAMMA,) + tuple(
    (-1.0) ** k * _zeta(k) / k for k in range(2, LGAMMA_SERIES_TERMS + 2)
)


def _horner(coeffs: Tuple[float, ...], w: float) -> float:
    """Evaluate sum_{j>=1} coeffs[j-1] * w**j."""
    acc: float = 0.0
    for c in reversed(coeffs):
        acc = (acc + c) * w
    return acc


def _shift_steps(x: float) -> int:
    """Number of unit steps needed to lift x to the asymptotic region."""
    if x >= RECURRENCE_THRESHOLD:
        return 0
    return int(math.ceil(RECURRENCE_THRESHOLD - x))


def _asymptotic_log_minus_digamma(x: float) -> float:
    return 0.5 / x + _horner(_LOG_MINUS_DIGAMMA_COEFFS, 1.0 / (x * x))


def lgamma(x: Abscissa) -> float:
    """
    Natural logarithm of the gamma function for x > 0.

    Gamma itself is never formed, so the result is finite far beyond x = 171.

    Args:
        x: Abscissa on (0, inf).

    Returns:
        ln Gamma(x); exactly 0.0 at x = 1 and x = 2.
    """
    x = as_abscissa(x)
    if x == 1.0 or x == 2.0:
        return 0.0
    # near the zeros the shifted difference keeps only absolute accuracy
    if abs(x - 1.0) < LGAMMA_SERIES_RADIUS:
        return _horner(_LGAMMA_ONE_COEFFS, x - 1.0)
    if abs(x - 2.0) < LGAMMA_SERIES_RADIUS:
        z: float = x - 2.0
        return math.log1p(z) + _horner(_LGAMMA_ONE_COEFFS, z)
    n: int = _shift_steps(x)
    if n == 0:
        return (x - 0.5) * math.log(x) - x + HALF_LOG_TWO_PI + _horner(_STIRLING_COEFFS, 1.0 / (x * x)) * x
    product: float = 1.0
    for j in range(n):
        product *= x + j
    return lgamma(x + n) - math.log(product)


def lgamma_correction(x: Abscissa) -> float:
    """
    Stirling remainder ln Gamma(x) - [(x - 1/2) ln x - x + ln sqrt(2 pi)].

    Positive, decreasing and close to 1/(12x) for large x. Log-space gamma
    ratios built on it avoid cancelling the O(x ln x) leading terms.
    """
    x = as_abscissa(x)
    if x >= RECURRENCE_THRESHOLD:
        return _horner(_STIRLING_COEFFS, 1.0 / (x * x)) * x
    return lgamma(x) - ((x - 0.5) * math.log(x) - x + HALF_LOG_TWO_PI)


def digamma(x: Abscissa) -> float:
    """
    The digamma function psi(x) = Gamma'(x) / Gamma(x) for x > 0.

    Args:
        x: Abscissa on (0, inf).

    Returns:
        psi(x), relative error around 1e-15 away from its zero near 1.4616.
    """
    x = as_abscissa(x)
    n: int = _shift_steps(x)
    if n == 0:
        return math.log(x) - _asymptotic_log_minus_digamma(x)
    reciprocals: List[float] = [1.0 / (x + j) for j in range(n)]
    return digamma(x + n) - math.fsum(reciprocals)


def log_minus_digamma(x: Abscissa) -> float:
    """
    ln x - psi(x), evaluated without the cancellation of the naive difference.

    The value is strictly positive and behaves like 1/(2x) for large x.
    """
    x = as_abscissa(x)
    n: int = _shift_steps(x)
    if n == 0:
        return _asymptotic_log_minus_digamma(x)
    terms: List[float] = [_asymptotic_log_minus_digamma(x + n), -math.log1p(n / x)]
    terms.extend(1.0 / (x + j) for j in range(n))
    return math.fsum(terms)


@lru_cache(maxsize=None)
def _polygamma_coeffs(k: int) -> Tuple[float, ...]:
    # B_2j (2j + k - 1)! / (2j)!
    return tuple(
        float(BERNOULLI[2 * j] * Fraction(math.factorial(2 * j + k - 1), math.factorial(2 * j)))
        for j in range(1, ASYMPTOTIC_TERMS + 1)
    )


def polygamma(k: int, x: Abscissa) -> float:
    """
    The polygamma function psi^(k)(x) for 1 <= k <= K_MAX and x > 0.

    Args:
        k: Derivative order of psi.
        x: Abscissa on (0, inf).

    Returns:
        psi^(k)(x); its sign is (-1)^(k+1).

    Raises:
        OrderOutOfRangeError: If k is outside [1, K_MAX].
    """
    k = check_order(k, 1, K_MAX)
    x = as_abscissa(x)
    sign: float = 1.0 if k % 2 == 1 else -1.0
    n: int = _shift_steps(x)
    shifted: float = x + n
    w: float = 1.0 / (shifted * shifted)
    bracket: float = (
        math.factorial(k - 1)
        + math.factorial(k) / (2.0 * shifted)
        + _horner(_polygamma_coeffs(k), w)
    )
    value: float = bracket * shifted ** (-k)
    if n:
        powers: List[float] = [(x + j) ** (-(k + 1)) for j in range(n)]
        value = math.fsum([value, math.factorial(k) * math.fsum(powers)])
    return sign * value


def euler_gamma() -> float:
    """The Euler-Mascheroni constant, equal to -psi(1)."""
    return EULER_GAMMA


def digamma_series_oracle(x: Abscissa, terms: int) -> float:
    """
    Slow reference digamma from the series psi(x) = -gamma + sum (1/(n+1) - 1/(n+x)).

    The truncated tail behaves like (x - 1)/terms and that correction is added,
    leaving an O(x^2/terms^2) error.

    Args:
        x: Abscissa on (0, inf).
        terms: Number of summands, at least 1.
    """
    x = as_abscissa(x)
    if terms < 1:
        raise DomainError("terms", terms, "must be a positive integer")
    n: np.ndarray = np.arange(terms, dtype=np.float64)
    partial: float = float(np.sum(1.0 / (n + 1.0) - 1.0 / (n + x)))
    return -EULER_GAMMA + partial + (x - 1.0) / terms


def polygamma_series_oracle(k: int, x: Abscissa, terms: int = 100_000) -> float:
    """
    Slow reference polygamma from psi^(k)(x) = (-1)^(k+1) k! sum_{n>=0} (n + x)^-(k+1).

    The tail past `terms` summands is replaced by its Euler-Maclaurin estimate.
    """
    k = check_order(k, 1, K_MAX)
    x = as_abscissa(x)
    if terms < 1:
        raise DomainError("terms", terms, "must be a positive integer")
    n: np.ndarray = np.arange(terms, dtype=np.float64)
    head: float = float(np.sum((n + x) ** (-(k + 1))))
    m: float = terms + x
    tail: float = 1.0 / (k * m**k) + 0.5 / m ** (k + 1) + (k + 1) / (12.0 * m ** (k + 2))
    sign: float = 1.0 if k % 2 == 1 else -1.0
    return sign * math.factorial(k) * (head + tail)
