"""
Sub-command implementations.

Every command takes a validated RunConfig, writes one CSV table and returns
its exit code: 0 when the outcome is as expected, 1 on a certification
mismatch. Library exceptions propagate to the caller, which maps them to
exit codes 2 and 3.
"""

import logging
import sys
from typing import Any, Callable, Dict, List

from src.PSICM.certify.engine import CMReport, Verdict, certify_theta, expected_verdict
from src.PSICM.certify.identities import IdentityRow, run_identities
from src.PSICM.certify.limits import LimitCheck, run_limits
from src.PSICM.certify.verify import DEFAULT_TOLERANCE, BoundsReport, load_catalog, verify_bounds
from src.PSICM.cli.tables import open_table
from src.PSICM.config.run_config import RunConfig
from src.PSICM.config.settings import get_settings
from src.PSICM.core.kernels import theta1_via_kernel
from src.PSICM.core.specfun import digamma
from src.PSICM.core.theta import gamma_shape, theta

logger = logging.getLogger(__name__)

EXIT_OK: int = 0
EXIT_MISMATCH: int = 1
EXIT_CONFIG: int = 2
EXIT_NUMERICAL: int = 3

IDENTITY_COLUMNS: List[str] = ["identity", "x", "lhs", "rhs", "residual"]
BOUND_COLUMNS: List[str] = ["bound", "family", "points", "skipped", "worst_margin", "worst_x", "strict", "passed"]
CERTIFY_COLUMNS: List[str] = [
    "function_id", "alpha", "method", "row", "n", "h", "x", "value", "slack", "verdict", "expected",
]
LIMIT_COLUMNS: List[str] = ["quantity", "x", "value", "target", "relation", "error", "threshold", "passed"]


def summary(message: str) -> None:
    """Human-readable summary line on standard error."""
    print(message, file=sys.stderr)


def _theta_column(alpha: float) -> str:
    return f"theta_{alpha:g}"


def cmd_eval(cfg: RunConfig) -> int:
    """
    Tabulate psi, theta_alpha for each alpha, theta_1 via its kernel and gamma_shape.

    Rows follow the grid in increasing x.
    """
    alphas: List[float] = list(dict.fromkeys(cfg.alphas))
    columns: List[str] = ["x", "digamma", *(_theta_column(a) for a in alphas), "theta1_kernel", "gamma_shape"]
    grid: List[float] = cfg.abscissae() or []

    with open_table(columns, cfg.out) as table:
        for x in grid:
            row: Dict[str, Any] = {"x": x, "digamma": digamma(x)}
            row.update({_theta_column(a): theta(a, x) for a in alphas})
            row["theta1_kernel"] = theta1_via_kernel(x, cfg.quadrature)
            row["gamma_shape"] = gamma_shape(x)
            table.write(row)

    summary(f"eval: {len(grid)} rows, alphas {', '.join(f'{a:g}' for a in alphas)}")
    return EXIT_OK


def cmd_identities(cfg: RunConfig) -> int:
    """Residual table of the identity suite; exit 1 if any residual exceeds the tolerance."""
    tolerance: float = cfg.tol if cfg.tol is not None else get_settings().IDENTITY_TOL
    rows: List[IdentityRow] = run_identities(cfg.abscissae(), cfg.quadrature)

    with open_table(IDENTITY_COLUMNS, cfg.out) as table:
        table.write_all([row.model_dump() for row in rows])

    failed: List[IdentityRow] = [row for row in rows if not row.within(tolerance)]
    worst: IdentityRow = max(rows, key=lambda r: r.residual)
    summary(
        f"identities: {len(rows)} rows, {len(failed)} above tolerance {tolerance:g}; "
        f"worst residual {worst.residual:.3e} ({worst.identity} at x={worst.x:.6g})"
    )
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_bounds(cfg: RunConfig) -> int:
    """Verify the bound catalog; exit 1 if any bound fails."""
    tolerance: float = cfg.tol if cfg.tol is not None else DEFAULT_TOLERANCE
    report: BoundsReport = verify_bounds(load_catalog(), grid=cfg.abscissae(), tolerance=tolerance)

    with open_table(BOUND_COLUMNS, cfg.out) as table:
        for result in report.results:
            table.write({"bound": result.name, **result.model_dump(exclude={"name", "failures"})})

    summary(f"bounds: {len(report.results)} checked, {len(report.failed)} failed")
    for result in report.failed:
        summary(f"  FAILED {result.name}: worst margin {result.worst_margin:.3e} at x={result.worst_x:.6g}")
    return EXIT_OK if report.passed else EXIT_MISMATCH


def _certify_rows(alpha: float, report: CMReport, expected: Verdict) -> List[Dict[str, Any]]:
    base: Dict[str, Any] = {"function_id": report.function_id, "alpha": alpha, "method": report.method}
    n, h, x = report.min_location if report.min_location else (None, None, None)
    rows: List[Dict[str, Any]] = [
        {**base, "row": "summary", "n": n, "h": h, "x": x, "value": report.min_signed,
         "verdict": report.verdict, "expected": expected}
    ]
    rows.extend(
        {**base, "row": "witness", "n": w.n, "h": w.h, "x": w.x, "value": w.value, "slack": w.slack,
         "verdict": Verdict.VIOLATION, "expected": expected}
        for w in report.witnesses
    )
    return rows


def cmd_certify(cfg: RunConfig) -> int:
    """
    Complete-monotonicity sweep of theta_alpha for every requested alpha.

    Exit 0 iff each verdict matches the rule: consistent for alpha <= 1,
    violation for alpha > 1.
    """
    mismatches: List[float] = []
    with open_table(CERTIFY_COLUMNS, cfg.out) as table:
        for alpha in cfg.alphas:
            report: CMReport = certify_theta(alpha, cfg.abscissae(), cfg.max_order, cfg.steps, cfg.method)
            expected: Verdict = expected_verdict(alpha)
            table.write_all(_certify_rows(alpha, report, expected))
            summary(
                f"certify theta_{alpha:g} ({cfg.method.value}): {report.verdict.value}, "
                f"expected {expected.value}, {len(report.witnesses)} witnesses, {report.failed_points} failed points"
            )
            if report.verdict is not expected:
                mismatches.append(alpha)

    if mismatches:
        logger.warning(f"Verdict mismatch for alpha in {mismatches}")
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_limits(cfg: RunConfig) -> int:
    """Limit and extremum checks; exit 1 if any fails."""
    checks: List[LimitCheck] = run_limits(cfg.quadrature)

    with open_table(LIMIT_COLUMNS, cfg.out) as table:
        for check in checks:
            table.write({**check.model_dump(), "error": check.error, "passed": check.passed})

    failed: List[LimitCheck] = [c for c in checks if not c.passed]
    summary(f"limits: {len(checks)} checks, {len(failed)} failed")
    for check in failed:
        summary(f"  FAILED {check.quantity}: value {check.value:.17g}, threshold {check.threshold:g}")
    return EXIT_MISMATCH if failed else EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "eval": cmd_eval,
    "identities": cmd_identities,
    "bounds": cmd_bounds,
    "certify": cmd_certify,
    "limits": cmd_limits,
}
