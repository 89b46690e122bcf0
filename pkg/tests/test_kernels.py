import math

import pytest
from pydantic import ValidationError

from src.PSICM.core.errors import DomainError, NonConvergenceError
from src.PSICM.core.grids import log_grid
from src.PSICM.core.kernels import (
    SMALL_T_CUTOFF,
    KernelId,
    QuadratureConfig,
    choose_truncation,
    kernel_bound,
    kernel_h,
    kernel_h_prime,
    kernel_log_ratio,
    kernel_polygamma,
    kernel_rho,
    kernel_rho_prime,
    laplace_integral,
    laplace_quadrature,
    tail_bound,
    theta1_via_kernel,
)
from src.PSICM.core.specfun import EULER_GAMMA, polygamma
from src.PSICM.core.theta import theta1


class TestKernelValues:
    def test_h_at_zero_and_one(self):
        assert kernel_h(0.0) == 0.5
        assert abs(kernel_h(1.0) - (1.0 - 1.0 / (math.e - 1.0))) < 1e-15
        assert abs(kernel_h(1.0) - 0.4180232931) < 1e-10

    def test_derivative_limits_at_zero(self):
        assert kernel_h_prime(0.0) == -1.0 / 12.0
        assert kernel_rho_prime(0.0) == 1.0 / 12.0
        assert kernel_rho(0.0) == 0.5

    def test_h_prime_at_two(self):
        expected = -0.25 + math.exp(2.0) / (math.exp(2.0) - 1.0) ** 2
        assert abs(kernel_h_prime(2.0) - expected) < 1e-15
        assert abs(kernel_h_prime(2.0) + 0.0689846) < 1e-6
        step = 1e-5
        central = (kernel_h(2.0 + step) - kernel_h(2.0 - step)) / (2.0 * step)
        assert abs(central - kernel_h_prime(2.0)) < 1e-8

    def test_rho_prime_at_one(self):
        expected = 1.0 - math.exp(-1.0) / (1.0 - math.exp(-1.0)) ** 2
        assert abs(kernel_rho_prime(1.0) - expected) < 1e-15
        assert abs(kernel_rho_prime(1.0) - 0.0793264) < 1e-6

    def test_polygamma_and_frullani_kernels(self):
        assert kernel_polygamma(1, 0.0) == 1.0
        assert kernel_polygamma(3, 0.0) == 0.0
        assert abs(kernel_polygamma(2, 1.0) - 1.0 / (1.0 - math.exp(-1.0))) < 1e-15
        assert kernel_log_ratio(1.0, math.e, 0.0) == math.e - 1.0
        with pytest.raises(DomainError):
            kernel_polygamma(1, -1.0)


class TestKernelShape:
    def test_complement(self):
        for t in [0.5, 1.0, 3.0, *log_grid(1e-3, 100.0, 200)]:
            assert abs(kernel_h(t) + kernel_rho(t) - 1.0) <= 1e-14

    @pytest.mark.parametrize("kernel", [kernel_h, kernel_h_prime, kernel_rho, kernel_rho_prime])
    def test_series_seam_is_continuous(self, kernel):
        below = kernel(SMALL_T_CUTOFF * (1.0 - 1e-12))
        above = kernel(SMALL_T_CUTOFF * (1.0 + 1e-12))
        assert abs(below - above) <= 1e-12

    def test_rho_prime_branch_seam_at_one(self):
        assert abs(kernel_rho_prime(1.0 - 1e-12) - kernel_rho_prime(1.0 + 1e-12)) <= 1e-12

    def test_h_decreasing_on_the_line(self):
        values = [kernel_h(-10.0 + 0.025 * j) for j in range(801)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_h_concave_then_convex(self):
        step = 0.05
        for j in range(1, 400):
            t = -10.0 + j * step
            if abs(t) < step / 2:
                continue
            second = kernel_h(t - step) - 2.0 * kernel_h(t) + kernel_h(t + step)
            if t < 0.0:
                assert second <= 1e-15
            else:
                assert second >= -1e-15

    def test_rho_prime_positive_h_prime_negative(self):
        for t in [1e-3, 0.1, 1.0, 10.0, 50.0, *log_grid(1e-4, 100.0, 300)]:
            assert kernel_rho_prime(t) > 0.0
            assert kernel_h_prime(t) < 0.0


class TestKernelId:
    def test_labels(self):
        assert KernelId.polygamma(2).label == "POLYGAMMA_KERNEL(2)"
        assert KernelId.binet_h().label == "BINET_H"
        assert KernelId.log_ratio(1.0, 2.0).label.startswith("LOG_RATIO(1,2")

    @pytest.mark.parametrize(
        "build",
        [
            lambda: KernelId.polygamma(0),
            lambda: KernelId.polygamma(13),
            lambda: KernelId.log_ratio(0.0, 1.0),
            lambda: KernelId(kind="RHO", order=2),
        ],
    )
    def test_invalid_parameters(self, build):
        with pytest.raises(ValidationError):
            build()

    def test_quadrature_config_validation(self):
        with pytest.raises(ValidationError):
            QuadratureConfig(small_t_cutoff=1.5)
        with pytest.raises(ValidationError):
            QuadratureConfig(abs_tol=0.0)


class TestTruncation:
    def test_documented_bounds(self):
        assert kernel_bound(KernelId.binet_h()) == 0.5
        assert kernel_bound(KernelId.rho_prime()) == 1.0 / 12.0
        assert kernel_bound(KernelId.rho()) == 1.0

    def test_tail_bound_decreases(self):
        kernel = KernelId.rho_prime()
        assert tail_bound(kernel, 1.0, 10.0) > tail_bound(kernel, 1.0, 20.0)
        assert abs(tail_bound(kernel, 2.0, 5.0) - math.exp(-10.0) / 24.0) < 1e-18

    def test_truncation_meets_tolerance(self, quad):
        for kernel in (KernelId.binet_h(), KernelId.polygamma(3), KernelId.log_ratio(1.0, math.e)):
            t = choose_truncation(kernel, 0.5, quad)
            assert t > quad.small_t_cutoff
            assert tail_bound(kernel, 0.5, t) <= quad.abs_tol / quad.tail_safety


class TestLaplaceIntegrals:
    def test_frullani(self, quad):
        assert abs(laplace_integral(KernelId.log_ratio(1.0, math.e), 3.0, quad) - 1.0) <= 1e-9

    def test_binet(self, quad):
        assert abs(laplace_integral(KernelId.binet_h(), 1.0, quad) - (1.0 - EULER_GAMMA)) <= 1e-10

    def test_polygamma_kernel(self, quad):
        assert abs(laplace_integral(KernelId.polygamma(1), 2.0, quad) - (math.pi**2 / 6.0 - 1.0)) <= 1e-9
        for i in (2, 3):
            sign = 1.0 if i % 2 == 1 else -1.0
            value = laplace_integral(KernelId.polygamma(i), 5.0, quad)
            assert abs(value - sign * polygamma(i, 5.0)) <= 1e-8 * abs(polygamma(i, 5.0))

    def test_result_accounting(self, quad):
        result = laplace_quadrature(KernelId.rho_prime(), 1.0, quad)
        assert result.kernel == "RHO_PRIME"
        assert result.total_error_bound >= result.error_estimate
        assert result.tail_bound <= quad.abs_tol / quad.tail_safety
        assert result.panels >= 2

    def test_theta1_via_kernel(self, quad):
        assert abs(theta1_via_kernel(1.0, quad) - EULER_GAMMA) <= 1e-9
        assert abs(theta1_via_kernel(1e6, quad) - (0.5 + 1.0 / 12e6)) <= 1e-10
        assert abs(theta1_via_kernel(0.01, quad) - theta1(0.01)) <= 1e-8

    def test_two_routes_agree_on_grid(self, quad):
        gaps = [abs(theta1(x) - theta1_via_kernel(x, quad)) for x in log_grid(0.01, 100.0, 50)]
        assert max(gaps) < 1e-8

    def test_h_prime_route_matches_rho_prime_route(self, quad):
        for x in (0.3, 2.0, 40.0):
            via_h = 0.5 - laplace_integral(KernelId.binet_h_prime(), x, quad)
            assert abs(via_h - theta1_via_kernel(x, quad)) <= 1e-9

    def test_non_convergence_names_kernel_and_x(self):
        cfg = QuadratureConfig(abs_tol=1e-300, rel_tol=1e-16, max_subdivisions=3)
        with pytest.raises(NonConvergenceError) as info:
            laplace_quadrature(KernelId.binet_h(), 2.0, cfg)
        assert info.value.kernel == "BINET_H"
        assert info.value.x == 2.0
        assert "x=2" in str(info.value)
