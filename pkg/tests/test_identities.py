import math

import pytest

from src.PSICM.certify.identities import log_ratio_row, residual, run_identities
from src.PSICM.certify.limits import run_limits
from src.PSICM.core.errors import NonConvergenceError
from src.PSICM.core.kernels import QuadratureConfig

IDENTITIES = [
    "recurrence(1)",
    "recurrence(2)",
    "recurrence(3)",
    "polygamma_kernel(1)",
    "polygamma_kernel(2)",
    "polygamma_kernel(3)",
    "binet",
    "rho",
    "rho_prime_theta1",
    "h_prime_theta1",
]


def test_residual_scaling():
    assert residual(3.0, 2.0) == 0.5
    assert residual(0.25, 0.0) == 0.25


class TestIdentitySuite:
    def test_default_grid_rows(self, quad):
        rows = run_identities(cfg=quad)
        assert len(rows) == 1 + len(IDENTITIES) * 13
        assert rows[0].identity == "log_ratio(1,e)"
        assert [r.identity for r in rows[1::13]] == IDENTITIES

    def test_residuals_within_default_tolerance(self, quad):
        rows = run_identities(cfg=quad)
        worst = max(rows, key=lambda r: r.residual)
        assert worst.within(1e-8), worst

    def test_rows_ordered_by_identity_then_x(self, quad):
        rows = run_identities(grid=[2.0, 0.5, 1.0], cfg=quad)
        assert [r.x for r in rows[1:4]] == [0.5, 1.0, 2.0]

    def test_recurrence_rows_are_tight(self, quad):
        rows = run_identities(grid=[0.1, 1.0, 10.0], cfg=quad)
        for row in rows:
            if row.identity.startswith("recurrence"):
                assert row.residual < 1e-11, row

    def test_log_ratio_row(self, quad):
        row = log_ratio_row(quad)
        assert row.x == 1.0
        assert row.rhs == 1.0
        assert row.within(1e-9)

    def test_non_convergence_propagates(self):
        cfg = QuadratureConfig(abs_tol=1e-300, rel_tol=1e-16)
        with pytest.raises(NonConvergenceError) as info:
            run_identities(grid=[1.0], cfg=cfg)
        assert info.value.kernel.startswith("LOG_RATIO")


class TestLimitSuite:
    def test_all_checks_pass(self, quad):
        checks = run_limits(quad)
        assert [c.quantity for c in checks if not c.passed] == []
        assert len(checks) == 11

    def test_gamma_shape_argmax_near_one(self, quad):
        check = next(c for c in run_limits(quad) if c.quantity == "gamma_shape_argmax")
        assert abs(check.value - 1.0) < 0.0125 + 1e-9

    def test_relations(self, quad):
        relations = {c.quantity: c.relation for c in run_limits(quad)}
        assert relations["theta_0.5_at_zero"] == ">"
        assert relations["theta_0.5_at_infinity"] == "<"
        assert relations["theta1_at_zero"] == "abs<"

    def test_gamma_shape_at_infinity_error(self, quad):
        check = next(c for c in run_limits(quad) if c.quantity == "gamma_shape_at_infinity")
        assert check.target == math.sqrt(2.0 * math.pi)
        assert check.error < 1e-3
