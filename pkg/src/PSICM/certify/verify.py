"""Catalog loading and grid verification of the registered bounds."""

import importlib
import logging
import math
from types import ModuleType
from typing import List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from src.PSICM.certify.base import BoundSample, BoundSpec
from src.PSICM.certify.registry import registry
from src.PSICM.config.settings import get_settings
from src.PSICM.core.grids import log_grid

logger = logging.getLogger(__name__)

BOUND_MODULES: List[str] = [
    "src.PSICM.certify.collection.psi_bounds",
    "src.PSICM.certify.collection.gamma_bounds",
]
DEFAULT_TOLERANCE: float = 1e-12


def load_catalog(core_only: bool = False) -> List[BoundSpec]:
    """
    Import the bound collections and return the registered bounds.

    Bounds removed from the registry (for example by clear_registry) are
    registered again from their module.

    Args:
        core_only: Return only the primary catalog.

    Returns:
        Bounds sorted by name.

    Raises:
        ImportError: If a collection module fails to import.
    """
    for module_name in BOUND_MODULES:
        try:
            module: ModuleType = importlib.import_module(module_name)
        except ImportError as e:
            logger.error(f"Failed to import bound module {module_name}: {e}")
            raise
        for bound in getattr(module, "BOUNDS", []):
            if bound.name not in registry:
                registry.register(bound)
    bounds: List[BoundSpec] = registry.get_bounds(core_only=core_only)
    logger.debug(f"Loaded {len(bounds)} bounds")
    return bounds


class BoundResult(BaseModel):
    """
    Outcome of verifying one bound on a grid.

    Attributes:
        name: Bound name.
        family: Bound family.
        points: Abscissae evaluated.
        skipped: Grid abscissae outside the bound's domain.
        failures: Abscissae at which evaluation failed.
        worst_margin: min over points of min(target - lower, upper - target).
        worst_x: Abscissa of worst_margin.
        strict: Whether both sides are strict.
        passed: Whether every evaluated point satisfied the inequality.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    family: str
    points: int
    skipped: int
    failures: int = 0
    worst_margin: float
    worst_x: float
    strict: bool
    passed: bool


class BoundsReport(BaseModel):
    """Results of a catalog verification, in catalog order."""

    model_config = ConfigDict(frozen=True)

    results: List[BoundResult] = Field(default_factory=list)
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> List[BoundResult]:
        return [r for r in self.results if not r.passed]


def default_grid(bound: BoundSpec, points: Optional[int] = None) -> List[float]:
    """Log-spaced grid over the bound's sampling window."""
    lo, hi = bound.window
    return log_grid(lo, hi, points or get_settings().BOUND_GRID_POINTS)


def verify_bound(
    bound: BoundSpec,
    grid: Optional[Sequence[float]] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> BoundResult:
    """
    Evaluate one bound over a grid.

    Args:
        bound: The bound to check.
        grid: Abscissae; the bound's default window grid when omitted. Points
            outside the domain are skipped and counted.
        tolerance: Slack admitted on non-strict sides.

    Returns:
        BoundResult. A bound whose domain misses the grid passes vacuously with zero points.
    """
    abscissae: List[float] = sorted(grid) if grid is not None else default_grid(bound)
    inside: List[float] = [x for x in abscissae if bound.domain.contains(x)]
    skipped: int = len(abscissae) - len(inside)

    worst_margin: float = math.inf
    worst_x: float = math.nan
    failures: int = 0
    passed: bool = True
    for x in inside:
        sample: Optional[BoundSample] = bound.safe_evaluate(x)
        if sample is None:
            failures += 1
            passed = False
            continue
        if sample.margin < worst_margin:
            worst_margin, worst_x = sample.margin, x
        if not bound.passes(sample, tolerance):
            passed = False

    if not passed:
        logger.warning(f"Bound '{bound.name}' failed: worst margin {worst_margin:.3e} at x={worst_x:.6g}")
    return BoundResult(
        name=bound.name,
        family=bound.family,
        points=len(inside) - failures,
        skipped=skipped,
        failures=failures,
        worst_margin=worst_margin,
        worst_x=worst_x,
        strict=bound.is_strict,
        passed=passed,
    )


def verify_bounds(
    catalog: Optional[Sequence[BoundSpec]] = None,
    grid: Optional[Sequence[float]] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> BoundsReport:
    """
    Verify every bound of a catalog.

    Args:
        catalog: Bounds to check; the full loaded catalog when omitted.
        grid: Shared abscissae; each bound's own window grid when omitted.
        tolerance: Slack admitted on non-strict sides.

    Returns:
        BoundsReport with one result per bound.
    """
    bounds: Sequence[BoundSpec] = catalog if catalog is not None else load_catalog()
    results: List[BoundResult] = [verify_bound(b, grid, tolerance) for b in bounds]
    report: BoundsReport = BoundsReport(results=results, tolerance=tolerance)
    logger.info(f"Verified {len(results)} bounds, {len(report.failed)} failed")
    return report
