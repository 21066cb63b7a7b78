"""
Unit tests for the log-gamma kernels and the Pearson IV normalization constant.
"""

import math

import pytest
from scipy import special

from specfun import (
    batir_log_bounds,
    boyd_factor_bounds,
    log1p_square,
    log_abs_gamma_complex,
    log_abs_gamma_right_half,
    log_gamma_real,
    pearson4_log_norm,
    pearson4_log_norm_duplication,
    pearson4_norm_bounds,
)
from variate_defs import DomainError

pytestmark = pytest.mark.unit


class TestComplexLogGamma:
    """ln |Gamma(x + iy)| against closed forms and scipy."""

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.5, 10.0, 171.3, 1e4])
    def test_real_axis_matches_gammaln(self, x):
        assert log_abs_gamma_complex(x, 0.0) == pytest.approx(float(special.gammaln(x)), rel=1e-13, abs=1e-14)

    @pytest.mark.parametrize("x,y", [(1.0, 1.0), (2.5, -3.0), (10.0, 50.0), (0.5, 0.25), (100.0, -400.0)])
    def test_matches_scipy_loggamma(self, x, y):
        expected = special.loggamma(complex(x, y)).real
        assert log_abs_gamma_complex(x, y) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("y", [0.5, 1.0, 3.0, 20.0])
    def test_half_line_reflection_identity(self, y):
        # |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        log_cosh = math.pi * y + math.log1p(math.exp(-2.0 * math.pi * y)) - math.log(2.0)
        assert 2.0 * log_abs_gamma_complex(0.5, y) == pytest.approx(math.log(math.pi) - log_cosh, abs=1e-12)

    def test_conjugate_symmetry(self):
        assert log_abs_gamma_complex(3.0, 7.0) == pytest.approx(log_abs_gamma_complex(3.0, -7.0), rel=1e-15)

    def test_rejects_left_half_plane(self):
        with pytest.raises(DomainError):
            log_abs_gamma_complex(0.4, 1.0)

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            log_abs_gamma_complex(2.0, math.inf)

    @pytest.mark.parametrize("x,y", [(0.25, 0.0), (0.05, 2.0), (0.3, -0.7)])
    def test_right_half_shift(self, x, y):
        expected = special.loggamma(complex(x, y)).real
        assert log_abs_gamma_right_half(x, y) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_right_half_rejects_zero(self):
        with pytest.raises(DomainError):
            log_abs_gamma_right_half(0.0, 1.0)


class TestBoundsOnGamma:

    @pytest.mark.parametrize("x,y", [(1.0, 0.0), (3.0, 4.0), (50.0, 10.0), (1.0, -25.0)])
    def test_boyd_bracket_contains_true_value(self, x, y):
        bracket = boyd_factor_bounds(x, y)
        assert bracket.theta_lo < 1.0 < bracket.theta_hi
        assert bracket.contains(log_abs_gamma_complex(x, y))

    def test_boyd_rejects_tiny_modulus(self):
        with pytest.raises(DomainError):
            boyd_factor_bounds(0.1, 0.0)

    @pytest.mark.parametrize("x", [1.0, 2.0, 10.0, 1000.0])
    def test_batir_bounds_contain_log_gamma(self, x):
        lower, upper = batir_log_bounds(x)
        assert lower <= log_gamma_real(1.0 + x) <= upper

    def test_batir_rejects_small_argument(self):
        with pytest.raises(DomainError):
            batir_log_bounds(0.5)

    def test_log1p_square_huge_argument(self):
        assert log1p_square(1e200) == pytest.approx(400.0 * math.log(10.0), rel=1e-14)
        assert log1p_square(1e-10) == pytest.approx(1e-20, rel=1e-12)


class TestPearson4Normalization:

    def test_cauchy_constant(self):
        assert math.exp(pearson4_log_norm(1.0, 0.0)) == pytest.approx(1.0 / math.pi, rel=1e-14)

    @pytest.mark.parametrize("s", [0.5, 2.0, 10.0])
    def test_skewed_cauchy_closed_form(self, s):
        # gamma(1, s) = (s/2) / sinh(pi s / 2)
        expected = math.log(0.5 * s) - math.log(math.sinh(0.5 * math.pi * s))
        assert pearson4_log_norm(1.0, s) == pytest.approx(expected, rel=1e-12)

    def test_even_in_skew(self):
        assert pearson4_log_norm(2.5, 3.0) == pytest.approx(pearson4_log_norm(2.5, -3.0), rel=1e-15)

    @pytest.mark.parametrize("a,s", [(0.6, 0.0), (0.6, 3.0), (1.0, 50.0), (2.5, 0.0), (10.0, 3.0), (100.0, 50.0)])
    def test_duplication_form_agrees(self, a, s):
        direct = pearson4_log_norm(a, s)
        assert pearson4_log_norm_duplication(a, s) == pytest.approx(direct, rel=1e-12, abs=1e-12)

    def test_large_skew_stays_finite(self):
        value = pearson4_log_norm(2.0, 5000.0)
        assert math.isfinite(value)
        assert value < -3000.0

    @pytest.mark.parametrize("a", [0.5, 0.2, math.nan])
    def test_rejects_non_integrable(self, a):
        with pytest.raises(DomainError):
            pearson4_log_norm(a, 1.0)


class TestNormBounds:

    def test_cauchy_bracket_values(self):
        bounds = pearson4_norm_bounds(1.0, 0.0)
        assert bounds.gamma_lo == pytest.approx(0.1944, abs=1e-3)
        assert bounds.gamma_hi == pytest.approx(0.3615, abs=1e-3)
        assert bounds.contains(pearson4_log_norm(1.0, 0.0))

    @pytest.mark.parametrize("a", [1.0, 1.5, 2.0, 10.0, 10000.0])
    @pytest.mark.parametrize("s", [0.0, 1.0, 5.0, 50.0, 300.0])
    def test_bracket_holds_on_grid(self, a, s):
        bounds = pearson4_norm_bounds(a, s)
        assert bounds.contains(pearson4_log_norm(a, s), slack=1e-12)

    @pytest.mark.parametrize("s", [0.0, 5.0, 50.0])
    def test_bracket_tightens_with_a(self, s):
        bounds = pearson4_norm_bounds(100.0, s)
        assert math.exp(bounds.log_gamma_hi - bounds.log_gamma_lo) < 1.01

    def test_star_lies_inside_bracket(self):
        bounds = pearson4_norm_bounds(3.0, 4.0)
        assert bounds.log_gamma_lo < bounds.log_gamma_star < bounds.log_gamma_hi

    @pytest.mark.parametrize("a,s", [(0.9, 1.0), (2.0, -1.0), (math.inf, 0.0)])
    def test_rejects_outside_domain(self, a, s):
        with pytest.raises(DomainError):
            pearson4_norm_bounds(a, s)
