"""
Betaized Meixner-Morris density, its log-concave sandwich and the envelope constants.
"""

import math

import numpy as np
import pytest

import betaized
from distribution_models import BetaizedParams, build_params
from oracle_harness import quadrature_integrate
from variate_defs import DomainError

pytestmark = pytest.mark.unit

SHAPES = [(1.0, 1.0, 0.0), (3.0, 5.0, 4.0), (2.0, 2.0, -10.0), (10.0, 1.5, 30.0), (50.0, 50.0, 0.0), (200.0, 7.0, -60.0)]


def _grid(p: BetaizedParams, points: int = 2001):
    c = betaized.sandwich_constants(p)
    half = c.eta + 10.0 / c.tau
    return np.linspace(c.mu - half, c.mu + half, points)


class TestDensity:

    @pytest.mark.parametrize("a,b,s", SHAPES)
    def test_integrates_to_one(self, a, b, s):
        p = BetaizedParams(a=a, b=b, s=s)
        m = betaized.moments(p)
        result = quadrature_integrate(lambda x: betaized.log_density(p, x), m.mean, math.sqrt(m.variance))
        assert result.value == pytest.approx(1.0, abs=1e-6)

    def test_shapes_below_one_can_be_evaluated(self):
        p = BetaizedParams(a=0.5, b=2.0, s=1.0, allow_below_one=True)
        m = betaized.moments(p)
        result = quadrature_integrate(lambda x: betaized.log_density(p, x), m.mean, math.sqrt(m.variance))
        assert result.value == pytest.approx(1.0, abs=1e-6)
        with pytest.raises(DomainError):
            betaized.sandwich_constants(p)

    def test_shapes_below_one_need_opt_in(self):
        with pytest.raises(DomainError):
            build_params(BetaizedParams, a=0.5, b=2.0, s=1.0)

    def test_exchanging_shapes_reflects_density(self):
        p = BetaizedParams(a=2.0, b=6.0, s=3.0)
        q = BetaizedParams(a=6.0, b=2.0, s=3.0)
        for x in (-2.0, 0.5, 1.0, 7.0):
            assert betaized.log_density(p, x) == pytest.approx(betaized.log_density(q, 3.0 - x), rel=1e-12)

    def test_closed_form_moments(self):
        m = betaized.moments(BetaizedParams(a=3.0, b=5.0, s=4.0))
        assert m.mean == pytest.approx(1.5)
        assert m.variance == pytest.approx(15.0 / 64.0 * 80.0 / 9.0)

    @pytest.mark.parametrize("a,b,s", [(3.0, 5.0, 4.0), (20.0, 2.0, -15.0)])
    def test_moments_match_quadrature(self, a, b, s):
        p = BetaizedParams(a=a, b=b, s=s)
        m = betaized.moments(p)
        sd = math.sqrt(m.variance)
        mean = quadrature_integrate(lambda x: betaized.log_density(p, x), m.mean, sd, weight=lambda x: x)
        spread = quadrature_integrate(
            lambda x: betaized.log_density(p, x), m.mean, sd, weight=lambda x: (x - m.mean) ** 2
        )
        assert mean.value == pytest.approx(m.mean, rel=1e-7, abs=1e-9)
        assert spread.value == pytest.approx(m.variance, rel=1e-7)


class TestSandwich:

    @pytest.mark.parametrize("a,b,s", SHAPES)
    def test_density_between_alpha_g_and_beta_g(self, a, b, s):
        p = BetaizedParams(a=a, b=b, s=s)
        c = betaized.sandwich_constants(p)
        for x in _grid(p, 401):
            log_f = betaized.log_density(p, x)
            log_g = betaized.log_surrogate_g(p, x)
            assert math.log(c.alpha) + log_g <= log_f + 1e-9
            assert log_f <= math.log(c.beta) + log_g + 1e-9

    @pytest.mark.parametrize("a,b,s", SHAPES)
    def test_surrogate_is_log_concave(self, a, b, s):
        p = BetaizedParams(a=a, b=b, s=s)
        values = np.array([betaized.log_surrogate_g(p, x) for x in _grid(p)])
        second_differences = values[:-2] - 2.0 * values[1:-1] + values[2:]
        assert second_differences.max() <= 1e-9

    def test_constants_tighten_with_shape(self):
        small = betaized.sandwich_constants(BetaizedParams(a=1.0, b=1.0))
        large = betaized.sandwich_constants(BetaizedParams(a=1e4, b=1e4))
        assert small.alpha < large.alpha <= 1.0 <= large.beta < small.beta
        assert large.beta / large.alpha == pytest.approx(1.0, abs=1e-3)

    def test_constants_use_mean_and_variance(self):
        p = BetaizedParams(a=3.0, b=5.0, s=4.0)
        c = betaized.sandwich_constants(p)
        m = betaized.moments(p)
        assert c.mu == m.mean
        assert c.sigma == pytest.approx(math.sqrt(m.variance))
        assert c.tau <= c.tau_prime


class TestEnvelopes:

    @pytest.mark.parametrize("a,b,s", SHAPES)
    def test_both_hats_dominate_the_density(self, a, b, s):
        p = BetaizedParams(a=a, b=b, s=s)
        c = betaized.sandwich_constants(p)
        for x in _grid(p, 1001):
            log_f = betaized.log_density(p, x)
            assert log_f <= betaized.lemma2_log_envelope(c, x) + 1e-9
            assert log_f <= betaized.lemma3_log_envelope(c, x) + 1e-9

    def test_tripartite_hat_is_continuous(self):
        c = betaized.sandwich_constants(BetaizedParams(a=4.0, b=9.0, s=2.0))
        for edge in (c.eta + 1.0 / c.tau_prime, c.eta + 1.0 / c.tau):
            inside = betaized.lemma3_log_envelope(c, c.mu + edge * (1.0 - 1e-12))
            outside = betaized.lemma3_log_envelope(c, c.mu + edge * (1.0 + 1e-12))
            assert inside == pytest.approx(outside, abs=1e-9)

    def test_large_shape_iteration_limits(self):
        p = BetaizedParams(a=1e6, b=1e6, s=0.0)
        assert betaized.expected_iterations(p, "lemma2") == pytest.approx(26.495, abs=0.01)
        assert betaized.expected_iterations(p, "lemma3") == pytest.approx(14.077, abs=0.01)

    def test_lemma2_at_hundred(self):
        p = BetaizedParams(a=100.0, b=100.0, s=0.0)
        assert betaized.expected_iterations(p, "lemma2") == pytest.approx(27.635, abs=0.005)

    @pytest.mark.parametrize("a,b,s", SHAPES)
    def test_tripartite_hat_is_smaller(self, a, b, s):
        p = BetaizedParams(a=a, b=b, s=s)
        assert betaized.expected_iterations(p, "lemma3") < betaized.expected_iterations(p, "lemma2")
