"""
Log-space bounds on Gamma(x) and on the identric mean.

Every gamma inequality here is compared after taking logarithms, so the
catalog can be sampled up to x = 1000 without overflow.
"""

import math
from typing import List

from src.PSICM.certify.base import BoundSpec, Domain
from src.PSICM.certify.registry import registry
from src.PSICM.core.specfun import EULER_GAMMA, HALF_LOG_TWO_PI, lgamma
from src.PSICM.core.theta import log_identric_mean, log_identric_rhs, theta1


def _shape_power(x: float) -> float:
    """ln[x^(x - theta_1(x)) / e^x]."""
    return (x - theta1(x)) * math.log(x) - x


class GammaPowerAboveOne(BoundSpec):
    """Both exponents are sharp: gamma on the left and 1/2 on the right."""

    name = "gamma_power_above_one"
    description = "x^(x-gamma)/e^(x-1) < Gamma(x) < x^(x-1/2)/e^(x-1) on (1, inf)"
    family = "gamma"
    domain = Domain(lo=1.0)
    window = (1.01, 1e3)
    core = True

    def target(self, x: float) -> float:
        return lgamma(x)

    def lower(self, x: float) -> float:
        return (x - EULER_GAMMA) * math.log(x) - (x - 1.0)

    def upper(self, x: float) -> float:
        return (x - 0.5) * math.log(x) - (x - 1.0)


class GammaPowerBelowOne(BoundSpec):
    """The left inequality survives on (0, 1); the right one reverses there."""

    name = "gamma_power_below_one"
    description = "Gamma(x) > x^(x-gamma)/e^(x-1) on (0, 1)"
    family = "gamma"
    domain = Domain(lo=0.0, hi=1.0)
    window = (1e-3, 0.99)
    core = True

    def target(self, x: float) -> float:
        return lgamma(x)

    def lower(self, x: float) -> float:
        return (x - EULER_GAMMA) * math.log(x) - (x - 1.0)


class GammaPowerReversedBelowOne(BoundSpec):
    name = "gamma_power_reversed_below_one"
    description = "Gamma(x) > x^(x-1/2)/e^(x-1) on (0, 1)"
    family = "gamma"
    domain = Domain(lo=0.0, hi=1.0)
    window = (1e-3, 0.99)

    def target(self, x: float) -> float:
        return lgamma(x)

    def lower(self, x: float) -> float:
        return (x - 0.5) * math.log(x) - (x - 1.0)


class GammaShapeBelowOne(BoundSpec):
    """Equality on the right at x = 1, where the gamma-shape function peaks at e."""

    name = "gamma_shape_below_one"
    description = "x^(x-theta(x))/e^x < Gamma(x) <= x^(x-theta(x))/e^(x-1) on (0, 1]"
    family = "gamma"
    domain = Domain(lo=0.0, hi=1.0, hi_closed=True)
    window = (1e-3, 1.0)
    strict_upper = False
    core = True

    def target(self, x: float) -> float:
        return lgamma(x)

    def lower(self, x: float) -> float:
        return _shape_power(x)

    def upper(self, x: float) -> float:
        return _shape_power(x) + 1.0


class GammaShapeAboveOne(BoundSpec):
    name = "gamma_shape_above_one"
    description = "sqrt(2 pi) x^(x-theta(x))/e^x < Gamma(x) <= x^(x-theta(x))/e^(x-1) on [1, inf)"
    family = "gamma"
    domain = Domain(lo=1.0, lo_closed=True)
    window = (1.0, 1e3)
    strict_upper = False
    core = True

    def target(self, x: float) -> float:
        return lgamma(x)

    def lower(self, x: float) -> float:
        return _shape_power(x) + HALF_LOG_TWO_PI

    def upper(self, x: float) -> float:
        return _shape_power(x) + 1.0


class IdentricAboveOne(BoundSpec):
    """
    Pairs (x, 2x) with x >= 1.

    The identric mean exceeds the gamma-ratio expression here because the
    gamma-shape function decreases on [1, inf).
    """

    name = "identric_above_one"
    description = "I(x,2x) > {x^theta(x) Gamma(x) / ((2x)^theta(2x) Gamma(2x))}^(1/(x-2x)) for x >= 1"
    family = "identric"
    domain = Domain(lo=1.0, lo_closed=True)
    window = (1.0, 500.0)
    core = True

    def target(self, x: float) -> float:
        return log_identric_mean(x, 2.0 * x)

    def lower(self, x: float) -> float:
        return log_identric_rhs(x, 2.0 * x)


class IdentricBelowOne(BoundSpec):
    """Pairs (x, x/2) with x <= 1, where the gamma-shape function increases."""

    name = "identric_below_one"
    description = "I(x,x/2) < {x^theta(x) Gamma(x) / ((x/2)^theta(x/2) Gamma(x/2))}^(1/(x-x/2)) for x <= 1"
    family = "identric"
    domain = Domain(lo=0.0, hi=1.0, hi_closed=True)
    window = (0.02, 1.0)
    core = True

    def target(self, x: float) -> float:
        return log_identric_mean(x, 0.5 * x)

    def upper(self, x: float) -> float:
        return log_identric_rhs(x, 0.5 * x)


BOUNDS: List[BoundSpec] = [
    GammaPowerAboveOne(),
    GammaPowerBelowOne(),
    GammaPowerReversedBelowOne(),
    GammaShapeBelowOne(),
    GammaShapeAboveOne(),
    IdentricAboveOne(),
    IdentricBelowOne(),
]

for _bound in BOUNDS:
    registry.register(_bound)
