import logging
import math
from abc import ABC, abstractmethod
from typing import Any, ClassVar, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from src.PSICM.core.errors import DomainError, PSICMError
from src.PSICM.core.specfun import Abscissa, as_abscissa

# Configure logger
logger = logging.getLogger(__name__)


class Domain(BaseModel):
    """
    An interval of the positive half-line on which a bound is claimed.

    Attributes:
        lo: Left end, >= 0.
        hi: Right end, may be inf.
        lo_closed: Whether lo itself belongs to the interval.
        hi_closed: Whether hi itself belongs to the interval.
    """

    model_config = ConfigDict(frozen=True)

    lo: float = 0.0
    hi: float = math.inf
    lo_closed: bool = False
    hi_closed: bool = False

    @model_validator(mode="after")
    def validate_interval(self) -> "Domain":
        if self.lo < 0.0 or not self.lo < self.hi:
            raise ValueError(f"invalid domain ({self.lo}, {self.hi})")
        return self

    def contains(self, x: float) -> bool:
        above: bool = x >= self.lo if self.lo_closed else x > self.lo
        below: bool = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def __str__(self) -> str:
        left: str = "[" if self.lo_closed else "("
        right: str = "]" if self.hi_closed else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


class BoundSample(BaseModel):
    """
    One evaluation of a bound at an abscissa.

    Margins are target - lower and upper - target; a missing side has no margin.
    """

    model_config = ConfigDict(frozen=True)

    x: float
    target: float
    lower: Optional[float] = None
    upper: Optional[float] = None

    @property
    def lower_margin(self) -> Optional[float]:
        return None if self.lower is None else self.target - self.lower

    @property
    def upper_margin(self) -> Optional[float]:
        return None if self.upper is None else self.upper - self.target

    @property
    def margin(self) -> float:
        """The smaller of the present margins."""
        return min(m for m in (self.lower_margin, self.upper_margin) if m is not None)


class BoundSpec(ABC):
    """
    Abstract base class for a named two-sided inequality lower(x) < target(x) < upper(x).

    A side may be absent (one-sided bound) and each side may be strict or
    not. Concrete bounds live in the collection package and register an
    instance with the bound registry on import.

    Attributes:
        name: Unique identifier (snake_case).
        description: The inequality in words.
        family: Grouping key such as "psi", "gamma" or "identric".
        domain: Interval on which the inequality is claimed.
        window: Sub-interval sampled by default; must lie in the domain.
        strict_lower: Whether the lower side is strict.
        strict_upper: Whether the upper side is strict.
        core: Whether the bound belongs to the primary catalog.

    Example:
        >>> class HalfReciprocal(BoundSpec):
        ...     name = "half_reciprocal"
        ...     description = "1/(2x) < ln x - psi(x)"
        ...     family = "psi"
        ...     domain = Domain()
        ...
        ...     def target(self, x: float) -> float:
        ...         return log_minus_digamma(x)
        ...
        ...     def lower(self, x: float) -> float:
        ...         return 0.5 / x
    """

    name: ClassVar[str]
    description: ClassVar[str]
    family: ClassVar[str]
    domain: ClassVar[Domain]
    window: ClassVar[Tuple[float, float]] = (1e-3, 1e3)
    strict_lower: ClassVar[bool] = True
    strict_upper: ClassVar[bool] = True
    core: ClassVar[bool] = False

    def __init_subclass__(cls, **kwargs: Any) -> None:
        """
        Validate subclass configuration when a bound is defined.

        Raises:
            TypeError: If required class variables are not properly defined.
        """
        super().__init_subclass__(**kwargs)

        required_attrs: List[str] = ["name", "description", "family", "domain"]
        for attr in required_attrs:
            if not hasattr(cls, attr):
                raise TypeError(f"Bound '{cls.__name__}' must define class variable '{attr}'")

        if not isinstance(cls.name, str) or not cls.name:
            raise TypeError(f"Bound '{cls.__name__}' must have a non-empty string 'name'")

        if not isinstance(cls.description, str) or not cls.description:
            raise TypeError(f"Bound '{cls.__name__}' must have a non-empty string 'description'")

        if not isinstance(cls.domain, Domain):
            raise TypeError(f"Bound '{cls.__name__}' must have a Domain instance as 'domain'")

        lo, hi = cls.window
        if not (cls.domain.contains(lo) and cls.domain.contains(hi)) or lo > hi:
            raise TypeError(f"Bound '{cls.__name__}' window {cls.window} lies outside its domain {cls.domain}")

        if cls.lower is BoundSpec.lower and cls.upper is BoundSpec.upper:
            raise TypeError(f"Bound '{cls.__name__}' must override 'lower', 'upper' or both")

        logger.debug(f"Successfully validated bound: {cls.name}")

    @abstractmethod
    def target(self, x: float) -> float:
        """The bounded quantity at x."""

    def lower(self, x: float) -> Optional[float]:
        """Lower side at x; None when the bound has no lower side."""
        return None

    def upper(self, x: float) -> Optional[float]:
        """Upper side at x; None when the bound has no upper side."""
        return None

    def evaluate(self, x: Abscissa) -> BoundSample:
        """
        Evaluate all sides at x.

        Raises:
            DomainError: If x is not a valid abscissa or lies outside the domain.
        """
        value: float = as_abscissa(x)
        if not self.domain.contains(value):
            raise DomainError("x", value, f"outside the domain {self.domain} of '{self.name}'")
        return BoundSample(x=value, target=self.target(value), lower=self.lower(value), upper=self.upper(value))

    def safe_evaluate(self, x: Abscissa) -> Optional[BoundSample]:
        """
        Evaluate at x, returning None instead of raising on numerical failure.

        Args:
            x: Abscissa inside the domain.

        Returns:
            BoundSample, or None if any side failed to evaluate.
        """
        try:
            return self.evaluate(x)
        except (PSICMError, ArithmeticError, ValueError) as e:
            logger.warning(f"Bound '{self.name}' failed at x={x!r}: {e}")
            return None

    def passes(self, sample: BoundSample, tolerance: float = 0.0) -> bool:
        """
        Whether a sample satisfies the inequality.

        Strict sides need a positive margin; non-strict sides accept margins
        down to -tolerance.
        """
        checks: List[Tuple[Optional[float], bool]] = [
            (sample.lower_margin, self.strict_lower),
            (sample.upper_margin, self.strict_upper),
        ]
        for margin, strict in checks:
            if margin is None:
                continue
            if not math.isfinite(margin):
                return False
            if strict and margin <= 0.0:
                return False
            if not strict and margin < -tolerance:
                return False
        return True

    @property
    def is_strict(self) -> bool:
        return self.strict_lower and self.strict_upper

    def get_bound_info(self) -> Dict[str, Any]:
        """
        Get metadata information about the bound.

        Returns:
            Dictionary with the bound's name, description, family, domain and strictness.
        """
        return {
            "name": self.name,
            "description": self.description,
            "family": self.family,
            "domain": str(self.domain),
            "window": self.window,
            "strict_lower": self.strict_lower,
            "strict_upper": self.strict_upper,
            "core": self.core,
            "class_name": self.__class__.__name__,
        }

    def __str__(self) -> str:
        """String representation of the bound for debugging."""
        return f"BoundSpec(name='{self.name}', domain={self.domain})"

    def __repr__(self) -> str:
        """Detailed representation of the bound."""
        return f"{self.__class__.__name__}(name='{self.name}', description='{self.description[:50]}...')"
