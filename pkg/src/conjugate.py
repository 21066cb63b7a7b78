"""Conjugate bookkeeping for NEF-GHS sampling with a Pearson IV prior on lam.

Moment formulas divide by m0 - 1, so they require m0 > 1 even though a prior
with m0 = 1 is a valid Pearson IV law that can be sampled.
"""
import logging

from distribution_models import (
    BetaizedParams,
    ConditionalMoments,
    Moments,
    Pearson4Params,
    PriorSpec,
    build_params,
)
from variate_defs import DomainError

logger = logging.getLogger(__name__)


def _require_finite_variance(p: PriorSpec):
    if p.m0 <= 1:
        raise DomainError(f"moments need m0 > 1, got m0={p.m0}")


def prior_to_pearson(p: PriorSpec) -> Pearson4Params:
    """a = m0/2 + 1, s = m0 mu0."""
    return Pearson4Params(a=0.5 * p.m0 + 1.0, s=p.m0 * p.mu0)


def posterior_update(p: PriorSpec, y_sum: float, n_sum: float) -> PriorSpec:
    """m1 = m0 + n, mu1 = (m0 mu0 + Y) / (m0 + n)."""
    if n_sum < 1:
        raise DomainError(f"n_sum must be at least 1, got {n_sum}")
    m1 = p.m0 + n_sum
    posterior = build_params(PriorSpec, m0=m1, mu0=(p.m0 * p.mu0 + y_sum) / m1)
    logger.debug(f"Posterior of {p} after y_sum={y_sum}, n_sum={n_sum}: {posterior}")
    return posterior


def prior_moments(p: PriorSpec) -> Moments:
    """Mean mu0 and variance (mu0^2 + 1) / (m0 - 1) of lam; pass a posterior for posterior moments."""
    _require_finite_variance(p)
    return Moments(mean=p.mu0, variance=(p.mu0 * p.mu0 + 1.0) / (p.m0 - 1.0))


def predictive_moments(p: PriorSpec, n_sum: float) -> Moments:
    """Mean n mu0 and variance n (mu0^2 + 1)(m0 + n)/(m0 - 1) of the predictive total."""
    _require_finite_variance(p)
    if n_sum <= 0:
        raise DomainError(f"n_sum must be positive, got {n_sum}")
    return Moments(
        mean=n_sum * p.mu0,
        variance=n_sum * (p.mu0 * p.mu0 + 1.0) * (p.m0 + n_sum) / (p.m0 - 1.0),
    )


def conditional_moments(n_i: float, n_sum: float, y_sum: float) -> ConditionalMoments:
    """Moments of Y_i given the total Y of n_sum units, with Ybar = Y / n_sum."""
    if not 1 <= n_i < n_sum:
        raise DomainError(f"need 1 <= n_i < n_sum, got n_i={n_i}, n_sum={n_sum}")
    y_bar = y_sum / n_sum
    spread = (y_bar * y_bar + 1.0) / (n_sum + 1.0)
    return ConditionalMoments(
        mean=n_i * y_bar,
        variance=n_i * (n_sum - n_i) * spread,
        covariance_per_unit=-n_i * spread,
    )


def betaized_params_for(n_i: float, n_sum: float, y_sum: float) -> BetaizedParams:
    """The betaized law of Y_i given the total: a = n_i, b = n_sum - n_i, s = Y."""
    if not 1 <= n_i < n_sum:
        raise DomainError(f"need 1 <= n_i < n_sum, got n_i={n_i}, n_sum={n_sum}")
    return build_params(BetaizedParams, a=n_i, b=n_sum - n_i, s=y_sum)
