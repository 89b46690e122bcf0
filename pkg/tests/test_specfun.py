import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from src.PSICM.core.errors import DomainError, OrderOutOfRangeError
from src.PSICM.core.grids import log_grid
from src.PSICM.core.specfun import (
    BERNOULLI,
    EULER_GAMMA,
    EvalPoint,
    digamma,
    digamma_series_oracle,
    euler_gamma,
    lgamma,
    lgamma_correction,
    log_minus_digamma,
    polygamma,
    polygamma_series_oracle,
)
from tests.conftest import rel_err

positive = st.floats(min_value=1e-3, max_value=1e4, allow_nan=False, allow_infinity=False)


def test_digamma_at_one_is_minus_euler_gamma():
    assert abs(digamma(1.0) + euler_gamma()) < 1e-12
    assert euler_gamma() == EULER_GAMMA


def test_trigamma_at_one_matches_series_oracle():
    assert abs(polygamma(1, 1.0) - polygamma_series_oracle(1, 1.0)) < 1e-10
    assert abs(polygamma(1, 1.0) - math.pi**2 / 6.0) < 1e-13


def test_digamma_series_oracle_converges():
    assert abs(digamma_series_oracle(1.5, 200_000) - digamma(1.5)) < 1e-9


def test_lgamma_exact_zeros():
    assert lgamma(1.0) == 0.0
    assert lgamma(2.0) == 0.0


def test_lgamma_far_beyond_gamma_overflow():
    assert abs(lgamma(1000.0) - float(mpmath.loggamma(1000))) < 1e-10


@pytest.mark.parametrize(
    "x",
    [1.0 + 1e-10, 0.999, 1.001, 1.01, 0.81, 1.19, 0.79, 1.21,
     2.0 - 1e-10, 1.99, 1.999, 2.001, 1.81, 2.19, 1.79, 2.21],
)
def test_lgamma_relative_error_next_to_its_zeros(x):
    reference = float(mpmath.loggamma(x))
    assert abs(lgamma(x) - reference) <= 1e-12 * abs(reference)


@pytest.mark.parametrize("x", [0.5, 2.0, 10.0, 100.0])
def test_digamma_recurrence(x):
    assert abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-13 * max(1.0, 1.0 / x)


def _psi(k, x):
    return digamma(x) if k == 0 else polygamma(k, x)


@pytest.mark.parametrize("k", range(6))
def test_recurrence_residual_on_log_grid(k):
    for x in log_grid(1e-3, 1e3, 41):
        step = (-1.0) ** k * math.factorial(k) / x ** (k + 1)
        residual = _psi(k, x + 1.0) - _psi(k, x) - step
        assert abs(residual) <= 1e-11 * (1.0 + abs(_psi(k, x))), (k, x)


def test_digamma_agrees_with_series_oracle_on_grid():
    for x in log_grid(1e-3, 10.0, 20):
        assert abs(digamma(x) - digamma_series_oracle(x, 1_000_000)) <= 1e-8, x


@given(positive)
@settings(max_examples=200, deadline=None)
def test_digamma_matches_mpmath(x):
    assert rel_err(digamma(x), mpmath.digamma(x)) < 1e-13


@given(positive)
@settings(max_examples=200, deadline=None)
def test_lgamma_matches_mpmath(x):
    assert rel_err(lgamma(x), mpmath.loggamma(x)) < 1e-13


@given(st.integers(min_value=1, max_value=6), st.floats(min_value=1e-2, max_value=1e3))
@settings(max_examples=200, deadline=None)
def test_polygamma_matches_mpmath(k, x):
    reference = float(mpmath.polygamma(k, x))
    assert abs(polygamma(k, x) - reference) <= 1e-12 * abs(reference)


@given(st.floats(min_value=1e-3, max_value=1e8))
@settings(max_examples=200, deadline=None)
def test_log_minus_digamma_positive_and_accurate(x):
    reference = float(mpmath.log(x) - mpmath.digamma(x))
    value = log_minus_digamma(x)
    assert value > 0.0
    assert abs(value - reference) <= 1e-12 * reference


def test_polygamma_signs():
    for k in range(1, 13):
        assert math.copysign(1.0, polygamma(k, 0.7)) == (1.0 if k % 2 == 1 else -1.0)


def test_lgamma_correction_tends_to_one_over_twelve_x():
    for x in (20.0, 1e3, 1e6):
        assert abs(lgamma_correction(x) * 12.0 * x - 1.0) < 1.0 / (10.0 * x * x)
    assert lgamma_correction(0.5) > lgamma_correction(5.0) > 0.0


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf, "abc"])
def test_invalid_abscissa_raises_domain_error(bad):
    with pytest.raises(DomainError):
        digamma(bad)


@pytest.mark.parametrize("k", [0, 13, 1.5])
def test_polygamma_order_out_of_range(k):
    with pytest.raises(OrderOutOfRangeError):
        polygamma(k, 1.0)


def test_eval_point_validation():
    assert digamma(EvalPoint(x=1.0)) == digamma(1.0)
    with pytest.raises(ValidationError):
        EvalPoint(x=-1.0)


def test_bernoulli_table():
    assert BERNOULLI[2] == Fraction(1, 6)
    assert BERNOULLI[12] == Fraction(-691, 2730)
    assert len(BERNOULLI) == 10
    assert BERNOULLI.as_float(4) == -1.0 / 30.0
    with pytest.raises(AttributeError):
        BERNOULLI.extra = 1
