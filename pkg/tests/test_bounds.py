import math
from typing import Optional

import pytest

from src.PSICM.certify.base import BoundSpec, Domain
from src.PSICM.certify.registry import BoundRegistry, get_registry, register_bound, registry
from src.PSICM.certify.verify import default_grid, load_catalog, verify_bound, verify_bounds
from src.PSICM.core.errors import DomainError
from src.PSICM.scripts.verify_catalog import verify

CORE_BOUNDS = [
    "digamma_shift",
    "gamma_power_above_one",
    "gamma_power_below_one",
    "gamma_shape_above_one",
    "gamma_shape_below_one",
    "identric_above_one",
    "identric_below_one",
    "log_minus_digamma_reciprocal",
    "log_minus_digamma_refined",
    "trigamma_shift",
]


class AlwaysWrong(BoundSpec):
    name = "always_wrong"
    description = "1 < 0"
    family = "test"
    domain = Domain()

    def target(self, x: float) -> float:
        return 1.0

    def upper(self, x: float) -> Optional[float]:
        return 0.0


class TestCatalog:
    def test_core_catalog(self, catalog):
        core = load_catalog(core_only=True)
        assert [b.name for b in core] == CORE_BOUNDS

    def test_full_catalog_size(self, catalog):
        assert len(catalog) == 18
        assert {"polygamma_sandwich_k1", "polygamma_sandwich_k5", "theta_half_sandwich"} <= {b.name for b in catalog}

    def test_core_bounds_pass_with_positive_margins(self, catalog):
        report = verify_bounds(load_catalog(core_only=True))
        assert report.passed, [r.name for r in report.failed]
        for result in report.results:
            assert result.points == 200
            assert result.skipped == 0
            if result.strict:
                assert result.worst_margin > 0.0

    def test_full_catalog_passes(self, catalog):
        report = verify_bounds()
        assert report.passed, [r.name for r in report.failed]
        assert len(report.results) == 18


class TestBoundValues:
    def test_reciprocal_bound_at_two(self, catalog):
        sample = registry.get_bound("log_minus_digamma_reciprocal").evaluate(2.0)
        assert sample.lower == 0.25 and sample.upper == 0.5
        assert 0.25 < sample.target < 0.5
        assert abs(sample.target - (math.log(2.0) - 1.0 + 0.5772156649015329)) < 1e-15

    def test_digamma_shift_at_one(self, catalog):
        sample = registry.get_bound("digamma_shift").evaluate(1.0)
        assert abs(sample.target - (1.0 - 0.5772156649015329)) < 1e-15
        assert sample.lower == 0.5 - 1.0 / 12.0
        assert sample.margin > 0.0

    def test_reversed_power_bound_at_half(self, catalog):
        bound = registry.get_bound("gamma_power_reversed_below_one")
        sample = bound.evaluate(0.5)
        assert sample.lower == 0.5
        assert abs(sample.target - 0.5 * math.log(math.pi)) < 1e-14
        assert bound.passes(sample)

    def test_out_of_domain(self, catalog):
        with pytest.raises(DomainError):
            registry.get_bound("gamma_power_above_one").evaluate(0.5)
        with pytest.raises(DomainError):
            registry.get_bound("gamma_shape_below_one").evaluate(1.5)
        assert registry.get_bound("gamma_shape_below_one").evaluate(1.0).x == 1.0

    def test_skipped_points_are_counted(self, catalog):
        result = verify_bound(registry.get_bound("gamma_power_above_one"), grid=[0.5, 1.0, 2.0, 3.0])
        assert result.skipped == 2
        assert result.points == 2
        assert result.passed

    def test_no_points_in_domain_passes_vacuously(self, catalog):
        result = verify_bound(registry.get_bound("identric_below_one"), grid=[2.0, 3.0])
        assert result.points == 0
        assert result.skipped == 2
        assert result.passed
        assert result.worst_margin == math.inf

    def test_failing_bound(self):
        result = verify_bound(AlwaysWrong(), grid=[1.0, 2.0])
        assert not result.passed
        assert result.worst_margin == -1.0
        assert result.worst_x == 1.0

    def test_default_grid_spans_window(self, catalog):
        bound = registry.get_bound("trigamma_shift")
        grid = default_grid(bound, 11)
        assert len(grid) == 11
        assert grid[0] == bound.window[0] and grid[-1] == bound.window[1]


class TestRegistry:
    def test_singleton(self):
        assert BoundRegistry() is registry
        assert get_registry() is registry

    def test_duplicate_rejected(self, catalog):
        with pytest.raises(ValueError):
            register_bound(catalog[0])
        assert register_bound(catalog[0], overwrite=True)

    def test_wrong_type_rejected(self):
        with pytest.raises(TypeError):
            registry.register("not a bound")

    def test_subclass_validation(self):
        with pytest.raises(TypeError):

            class Nameless(BoundSpec):
                description = "x < x + 1"
                family = "test"
                domain = Domain()

                def target(self, x: float) -> float:
                    return x

                def upper(self, x: float) -> float:
                    return x + 1.0

        with pytest.raises(TypeError):

            class NoSides(BoundSpec):
                name = "no_sides"
                description = "nothing"
                family = "test"
                domain = Domain()

                def target(self, x: float) -> float:
                    return x

        with pytest.raises(TypeError):

            class WindowOutside(BoundSpec):
                name = "window_outside"
                description = "x < 2 on (0, 1)"
                family = "test"
                domain = Domain(hi=1.0)
                window = (0.5, 2.0)

                def target(self, x: float) -> float:
                    return x

                def upper(self, x: float) -> float:
                    return 2.0

    def test_invalid_domain(self):
        with pytest.raises(ValueError):
            Domain(lo=2.0, hi=1.0)

    def test_clear_and_reload(self, catalog):
        registry.clear_registry()
        assert len(registry) == 0
        assert len(load_catalog()) == 18
        assert "identric_above_one" in registry

    def test_unregister_and_info(self, catalog):
        assert registry.unregister("theta_half_sandwich")
        assert not registry.unregister("theta_half_sandwich")
        assert not registry.bound_exists("theta_half_sandwich")
        assert registry.bound_exists("identric_above_one")
        info = registry.get_bound("identric_above_one").get_bound_info()
        assert info["family"] == "identric"
        assert info["domain"] == "[1, inf)"
        assert info["core"] is True


def test_verify_script(catalog, capsys):
    assert verify() is True
    assert "SUCCESS" in capsys.readouterr().out
    assert verify("no_such_bound") is False
