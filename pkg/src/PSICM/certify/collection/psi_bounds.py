"""Two-sided bounds on ln x - psi(x), psi(x + 1), psi'(x + 1), the polygammas and theta_alpha."""

import math
from typing import List, Type

from src.PSICM.certify.base import BoundSpec, Domain
from src.PSICM.certify.registry import registry
from src.PSICM.core.specfun import digamma, log_minus_digamma, polygamma
from src.PSICM.core.theta import theta

POSITIVE_AXIS: Domain = Domain()


class LogMinusDigammaReciprocal(BoundSpec):
    """1/(2x) < ln x - psi(x) < 1/x, the range of theta_1 divided by x."""

    name = "log_minus_digamma_reciprocal"
    description = "1/(2x) < ln x - psi(x) < 1/x on (0, inf)"
    family = "psi"
    domain = POSITIVE_AXIS
    core = True

    def target(self, x: float) -> float:
        return log_minus_digamma(x)

    def lower(self, x: float) -> float:
        return 0.5 / x

    def upper(self, x: float) -> float:
        return 1.0 / x


class LogMinusDigammaRefined(BoundSpec):
    name = "log_minus_digamma_refined"
    description = "1/(2x) < ln x - psi(x) < 1/(2x) + 1/(12x^2) on (0, inf)"
    family = "psi"
    domain = POSITIVE_AXIS
    core = True

    def target(self, x: float) -> float:
        return log_minus_digamma(x)

    def lower(self, x: float) -> float:
        return 0.5 / x

    def upper(self, x: float) -> float:
        return 0.5 / x + 1.0 / (12.0 * x * x)


class DigammaShift(BoundSpec):
    """psi(x + 1) - ln x, evaluated as 1/x - [ln x - psi(x)]."""

    name = "digamma_shift"
    description = "1/(2x) - 1/(12x^2) < psi(x+1) - ln x < 1/(2x) on (0, inf)"
    family = "psi"
    domain = POSITIVE_AXIS
    core = True

    def target(self, x: float) -> float:
        return 1.0 / x - log_minus_digamma(x)

    def lower(self, x: float) -> float:
        return 0.5 / x - 1.0 / (12.0 * x * x)

    def upper(self, x: float) -> float:
        return 0.5 / x


class TrigammaShift(BoundSpec):
    """
    1/x - psi'(x + 1) between 1/(2x^2) - 1/(6x^3) and that plus 1/(30x^5).

    The upper margin decays like 1/(42x^7), so sampling stops at x = 50.
    """

    name = "trigamma_shift"
    description = "1/(2x^2) - 1/(6x^3) < 1/x - psi'(x+1) < 1/(2x^2) - 1/(6x^3) + 1/(30x^5) on (0, inf)"
    family = "psi"
    domain = POSITIVE_AXIS
    window = (1e-3, 50.0)
    core = True

    def target(self, x: float) -> float:
        return 1.0 / x - polygamma(1, x + 1.0)

    def lower(self, x: float) -> float:
        return 0.5 / x**2 - 1.0 / (6.0 * x**3)

    def upper(self, x: float) -> float:
        return self.lower(x) + 1.0 / (30.0 * x**5)


class DigammaLogSandwich(BoundSpec):
    name = "digamma_log_sandwich"
    description = "ln x - 1/x <= psi(x) <= ln x - 1/(2x) on (0, inf)"
    family = "psi"
    domain = POSITIVE_AXIS
    strict_lower = False
    strict_upper = False

    def target(self, x: float) -> float:
        return digamma(x)

    def lower(self, x: float) -> float:
        return math.log(x) - 1.0 / x

    def upper(self, x: float) -> float:
        return math.log(x) - 0.5 / x


def _polygamma_sandwich(k: int) -> Type[BoundSpec]:
    """Bound class for (k-1)!/x^k + k!/(2x^(k+1)) <= (-1)^(k+1) psi^(k)(x) <= (k-1)!/x^k + k!/x^(k+1)."""
    sign: float = 1.0 if k % 2 == 1 else -1.0
    head: float = float(math.factorial(k - 1))
    tail: float = float(math.factorial(k))

    def target(self: BoundSpec, x: float) -> float:
        return sign * polygamma(k, x)

    def lower(self: BoundSpec, x: float) -> float:
        return head / x**k + 0.5 * tail / x ** (k + 1)

    def upper(self: BoundSpec, x: float) -> float:
        return head / x**k + tail / x ** (k + 1)

    return type(
        f"PolygammaSandwich{k}",
        (BoundSpec,),
        {
            "__doc__": f"Two-sided bound on |psi^({k})(x)|.",
            "name": f"polygamma_sandwich_k{k}",
            "description": f"({k}-1)!/x^{k} + {k}!/(2x^{k + 1}) <= |psi^({k})(x)| <= ({k}-1)!/x^{k} + {k}!/x^{k + 1}",
            "family": "polygamma",
            "domain": POSITIVE_AXIS,
            "strict_lower": False,
            "strict_upper": False,
            "target": target,
            "lower": lower,
            "upper": upper,
        },
    )


class ThetaHalfSandwich(BoundSpec):
    """theta_alpha for alpha = 1/2 between 1/(2 x^(1/2)) and that plus 1/(12 x^(3/2))."""

    name = "theta_half_sandwich"
    description = "1/(2x^(1-a)) < theta_a(x) < 1/(2x^(1-a)) + 1/(12x^(2-a)) at a = 1/2 on (0, inf)"
    family = "theta"
    domain = POSITIVE_AXIS
    alpha: float = 0.5

    def target(self, x: float) -> float:
        return theta(self.alpha, x)

    def lower(self, x: float) -> float:
        return 0.5 * x ** (self.alpha - 1.0)

    def upper(self, x: float) -> float:
        return self.lower(x) + x ** (self.alpha - 2.0) / 12.0


BOUNDS: List[BoundSpec] = [
    LogMinusDigammaReciprocal(),
    LogMinusDigammaRefined(),
    DigammaShift(),
    TrigammaShift(),
    DigammaLogSandwich(),
    *(_polygamma_sandwich(k)() for k in range(1, 6)),
    ThetaHalfSandwich(),
]

for _bound in BOUNDS:
    registry.register(_bound)
