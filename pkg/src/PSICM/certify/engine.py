"""
Complete-monotonicity sweeps.

A sweep visits every (order n, step h, abscissa x) triple in that sorted order,
forms the signed quantity that must be non-negative for a completely
monotonic function, and compares it with a rounding slack. The verdict is
VIOLATION exactly when some triple falls below minus its slack; every such
triple is kept as a reproducible witness.
"""

import logging
import math
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.PSICM.certify.differences import Evaluator, forward_stencil, signed_difference
from src.PSICM.config.settings import get_settings
from src.PSICM.core.errors import NonPositiveValueError, PSICMError
from src.PSICM.core.grids import log_grid
from src.PSICM.core.specfun import K_MAX, as_abscissa, check_order
from src.PSICM.core.theta import ALPHA_DERIV_MAX, Alpha, as_alpha, theta, theta_alpha_derivative

logger = logging.getLogger(__name__)

SLACK_ULPS: float = 64.0
_EPS: float = 2.220446049250313e-16


class Verdict(str, Enum):
    CONSISTENT_CM = "CONSISTENT_CM"
    VIOLATION = "VIOLATION"


class Method(str, Enum):
    DIFFERENCE = "difference"
    ANALYTIC = "analytic"
    LOGARITHMIC = "logarithmic"


class Witness(BaseModel):
    """
    A sign violation found by a sweep.

    Attributes:
        n: Difference or derivative order.
        h: Step of the difference; 0 for analytic derivatives.
        x: Left end of the stencil (or the abscissa of the derivative).
        value: The signed quantity, below -slack.
        slack: Rounding allowance the value was compared with.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    h: float
    x: float
    value: float
    slack: float


class EvaluatorFailure(BaseModel):
    """An abscissa at which the swept function could not be evaluated."""

    model_config = ConfigDict(frozen=True)

    x: float
    reason: str


class CMReport(BaseModel):
    """
    Verdict of a complete-monotonicity sweep.

    Attributes:
        function_id: Name of the swept function.
        method: How the signed quantities were formed.
        grid: Sorted abscissae.
        max_order: Highest order swept.
        steps: Sorted difference steps (empty for analytic sweeps).
        min_signed: Smallest signed quantity seen.
        min_location: (n, h, x) of min_signed.
        verdict: VIOLATION iff witnesses is non-empty.
        witnesses: Violations in (n, h, x) order.
        evaluations: Number of signed quantities formed.
        skipped: Stencils skipped because an abscissa failed to evaluate.
        failures: Abscissae whose evaluation failed.
    """

    model_config = ConfigDict(frozen=True)

    function_id: str
    method: Method
    grid: List[float]
    max_order: int
    steps: List[float]
    min_signed: float
    min_location: Optional[Tuple[int, float, float]] = None
    verdict: Verdict
    witnesses: List[Witness] = Field(default_factory=list)
    evaluations: int = 0
    skipped: int = 0
    failures: List[EvaluatorFailure] = Field(default_factory=list)

    @property
    def failed_points(self) -> int:
        return len(self.failures)


def difference_slack(n: int, samples: Sequence[float]) -> float:
    """Rounding allowance 64 eps n! max|f| over one stencil."""
    return SLACK_ULPS * _EPS * math.factorial(n) * max(abs(v) for v in samples)


class _CachedEvaluator:
    """Evaluates f once per abscissa and remembers failures."""

    def __init__(self, f: Evaluator):
        self._f: Evaluator = f
        self._values: Dict[float, Optional[float]] = {}
        self.failures: Dict[float, str] = {}

    def __call__(self, t: float) -> Optional[float]:
        if t in self._values:
            return self._values[t]
        value: Optional[float]
        try:
            value = float(self._f(t))
            if not math.isfinite(value):
                raise ArithmeticError(f"non-finite value {value!r}")
        except NonPositiveValueError:
            raise
        except (PSICMError, ArithmeticError, ValueError) as e:
            value = None
            self.failures[t] = str(e)
            logger.warning(f"Evaluation failed at x={t:.17g}, excluding it: {e}")
        self._values[t] = value
        return value


class _Accumulator:
    def __init__(self) -> None:
        self.min_signed: float = math.inf
        self.min_location: Optional[Tuple[int, float, float]] = None
        self.witnesses: List[Witness] = []
        self.evaluations: int = 0
        self.skipped: int = 0

    def add(self, n: int, h: float, x: float, value: float, slack: float) -> None:
        self.evaluations += 1
        if value < self.min_signed:
            self.min_signed = value
            self.min_location = (n, h, x)
        if value < -slack:
            self.witnesses.append(Witness(n=n, h=h, x=x, value=value, slack=slack))


def _resolve_grid(grid: Optional[Sequence[float]]) -> List[float]:
    if grid is None:
        s = get_settings()
        return log_grid(s.CM_GRID_MIN, s.CM_GRID_MAX, s.CM_GRID_POINTS)
    return sorted(as_abscissa(x) for x in grid)


def _resolve_steps(steps: Optional[Sequence[float]]) -> List[float]:
    if steps is None:
        return list(get_settings().CM_STEPS)
    resolved: List[float] = sorted(float(h) for h in steps)
    if not resolved or any(not math.isfinite(h) or h <= 0.0 for h in resolved):
        raise ValueError(f"steps must be a non-empty list of positive reals, got {list(steps)}")
    return resolved


def _resolve_order(max_order: Optional[int], hi: int) -> int:
    if max_order is None:
        return min(get_settings().CM_MAX_ORDER, hi)
    return check_order(max_order, 0, hi)


def _difference_sweep(
    f: Evaluator,
    function_id: str,
    method: Method,
    grid: List[float],
    orders: range,
    steps: List[float],
) -> CMReport:
    evaluate: _CachedEvaluator = _CachedEvaluator(f)
    acc: _Accumulator = _Accumulator()
    for n in orders:
        for h in steps:
            for x in grid:
                samples: List[Optional[float]] = [evaluate(t) for t in forward_stencil(n, h, x)]
                if any(v is None for v in samples):
                    acc.skipped += 1
                    continue
                acc.add(n, h, x, signed_difference(samples, n), difference_slack(n, samples))

    report: CMReport = _build_report(function_id, method, grid, orders.stop - 1, steps, acc, evaluate.failures)
    logger.info(
        f"{function_id}: {report.verdict.value} over {acc.evaluations} differences, "
        f"min signed {report.min_signed:.3e}, {len(report.witnesses)} witnesses, {acc.skipped} skipped"
    )
    return report


def _build_report(
    function_id: str,
    method: Method,
    grid: List[float],
    max_order: int,
    steps: List[float],
    acc: _Accumulator,
    failures: Dict[float, str],
) -> CMReport:
    return CMReport(
        function_id=function_id,
        method=method,
        grid=grid,
        max_order=max_order,
        steps=steps,
        min_signed=acc.min_signed if acc.evaluations else math.nan,
        min_location=acc.min_location,
        verdict=Verdict.VIOLATION if acc.witnesses else Verdict.CONSISTENT_CM,
        witnesses=acc.witnesses,
        evaluations=acc.evaluations,
        skipped=acc.skipped,
        failures=[EvaluatorFailure(x=t, reason=r) for t, r in sorted(failures.items())],
    )


def certify_cm(
    f: Evaluator,
    grid: Optional[Sequence[float]] = None,
    max_order: Optional[int] = None,
    steps: Optional[Sequence[float]] = None,
    function_id: str = "f",
) -> CMReport:
    """
    Sweep (-1)^n Delta_h^n f(x) over orders 0..max_order, steps and grid.

    Args:
        f: Function to test.
        grid: Abscissae; the settings' CM grid when omitted.
        max_order: Highest order, at most K_MAX; settings default when omitted.
        steps: Difference steps; settings default when omitted.
        function_id: Name used in the report.

    Returns:
        CMReport; evaluation failures of f are excluded and counted, never raised.

    Example:
        >>> certify_cm(lambda t: 1.0 / t, grid=[0.5, 1.0, 2.0], max_order=4).verdict.value
        'CONSISTENT_CM'
    """
    order: int = _resolve_order(max_order, K_MAX)
    return _difference_sweep(
        f, function_id, Method.DIFFERENCE, _resolve_grid(grid), range(order + 1), _resolve_steps(steps)
    )


def certify_cm_analytic(
    alpha: Alpha,
    grid: Optional[Sequence[float]] = None,
    max_order: Optional[int] = None,
) -> CMReport:
    """
    Check (-1)^i theta_alpha^(i)(x) >= -slack from the closed-form derivatives.

    The slack is 64 eps i! times the summed magnitude of the terms that make
    up the derivative.

    Raises:
        OrderOutOfRangeError: If max_order exceeds 8.
    """
    alpha = as_alpha(alpha)
    order: int = _resolve_order(max_order, ALPHA_DERIV_MAX)
    points: List[float] = _resolve_grid(grid)
    function_id: str = f"theta_{alpha:g}"

    acc: _Accumulator = _Accumulator()
    for i in range(order + 1):
        sign: float = -1.0 if i % 2 else 1.0
        for x in points:
            derivative = theta_alpha_derivative(alpha, i, x)
            acc.add(i, 0.0, x, sign * derivative.value, derivative.slack(i))

    report: CMReport = _build_report(function_id, Method.ANALYTIC, points, order, [], acc, {})
    logger.info(f"{function_id} (analytic): {report.verdict.value}, {len(report.witnesses)} witnesses")
    return report


def certify_lcm(
    g: Evaluator,
    grid: Optional[Sequence[float]] = None,
    max_order: Optional[int] = None,
    steps: Optional[Sequence[float]] = None,
    function_id: str = "g",
) -> CMReport:
    """
    Logarithmic complete monotonicity: sweep ln g over orders 1..max_order.

    Raises:
        NonPositiveValueError: If g(x) <= 0 at any stencil abscissa.
    """

    def log_g(t: float) -> float:
        value: float = g(t)
        if not value > 0.0:
            raise NonPositiveValueError(function_id, t, value)
        return math.log(value)

    order: int = _resolve_order(max_order, K_MAX)
    if order < 1:
        raise ValueError("logarithmic complete monotonicity needs max_order >= 1")
    return _difference_sweep(
        log_g, f"ln {function_id}", Method.LOGARITHMIC, _resolve_grid(grid), range(1, order + 1), _resolve_steps(steps)
    )


def certify_theta(
    alpha: Alpha,
    grid: Optional[Sequence[float]] = None,
    max_order: Optional[int] = None,
    steps: Optional[Sequence[float]] = None,
    method: Method = Method.DIFFERENCE,
) -> CMReport:
    """
    Sweep theta_alpha with either finite differences or closed-form derivatives.

    Complete monotonicity is expected exactly when alpha <= 1.
    """
    alpha = as_alpha(alpha)
    method = Method(method)
    if method is Method.ANALYTIC:
        return certify_cm_analytic(alpha, grid, max_order)
    if method is Method.LOGARITHMIC:
        raise ValueError("theta sweeps support the difference and analytic methods")

    evaluator: Callable[[float], float] = lambda t: theta(alpha, t)
    return certify_cm(evaluator, grid, max_order, steps, function_id=f"theta_{alpha:g}")


def expected_verdict(alpha: Alpha) -> Verdict:
    """CONSISTENT_CM for alpha <= 1, VIOLATION otherwise."""
    return Verdict.CONSISTENT_CM if as_alpha(alpha) <= 1.0 else Verdict.VIOLATION
