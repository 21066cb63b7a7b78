"""Betaized Meixner-Morris law: f(x) = f_a(x) f_b(s - x) / f_{a+b}(s).

The density is sandwiched between alpha * g and beta * g, where g is an
explicit log-concave function. Both generators reject from hats built only
from the mean, the variance and (alpha, beta), so they need no mode search.
"""
import logging
import math
from functools import lru_cache
from typing import Optional, Tuple

from distribution_models import BetaizedParams, Moments, SandwichConstants
from ghs import ghs_log_density
from rng_core import RandomStream, sample_exponential, sample_sign
from sample_models import IterationTally
from specfun import LOG_PI, log_abs_gamma_complex, log_gamma_real
from variate_defs import BetaizedMethod, DomainError, ITERATION_CAP, IterationCapExceeded, Lemma3Branch

logger = logging.getLogger(__name__)

PI_SQUARED = math.pi ** 2


@lru_cache(maxsize=1024)
def _log_ghs_at_total(total_shape: float, s: float) -> float:
    return ghs_log_density(total_shape, s)


def log_normalizer(p: BetaizedParams) -> float:
    """ln f_{a+b}(s), the denominator of the density."""
    return _log_ghs_at_total(p.a + p.b, p.s)


def log_density(p: BetaizedParams, x: float) -> float:
    return ghs_log_density(p.a, x) + ghs_log_density(p.b, p.s - x) - log_normalizer(p)


def moments(p: BetaizedParams) -> Moments:
    """mu = a s / (a+b), sigma^2 = a b / (a+b)^2 * (s^2 + (a+b)^2) / (1 + a + b)."""
    total = p.a + p.b
    mu = p.a * p.s / total
    sigma2 = p.a * p.b / (total * total) * (p.s * p.s + total * total) / (1.0 + total)
    return Moments(mean=mu, variance=sigma2)


def _require_samplable(p: BetaizedParams):
    if not p.samplable:
        raise DomainError(f"the sandwich needs min(a, b) >= 1, got a={p.a}, b={p.b}")


@lru_cache(maxsize=256)
def sandwich_constants(p: BetaizedParams) -> SandwichConstants:
    """alpha, beta of the sandwich plus the hat constants of both generators."""
    _require_samplable(p)
    alpha = (1.0 - 3.0 / (p.a * PI_SQUARED)) ** 2 * (1.0 - 3.0 / (p.b * PI_SQUARED)) ** 2
    beta = (1.0 + 3.0 / (p.a * PI_SQUARED)) ** 2 * (1.0 + 3.0 / (p.b * PI_SQUARED)) ** 2
    root = math.sqrt(12.0 + 12.0 / (alpha * alpha))
    m = moments(p)
    sigma = math.sqrt(m.variance)
    constants = SandwichConstants(
        alpha=alpha,
        beta=beta,
        A=beta * beta,
        B=1.5 + 1.0 / root,
        C=alpha / root,
        eta=sigma / alpha * (1.0 + math.sqrt(3.0 * (1.0 + 1.0 / (alpha * alpha)))),
        tau=alpha / (sigma * root),
        tau_prime=beta / sigma,
        mu=m.mean,
        sigma=sigma,
    )
    logger.debug(f"Sandwich constants for {p}: {constants}")
    return constants


@lru_cache(maxsize=256)
def _log_surrogate_scale(p: BetaizedParams) -> float:
    return (
        log_gamma_real(p.a + p.b)
        + LOG_PI
        - (p.a + p.b)
        - log_gamma_real(p.a)
        - log_gamma_real(p.b)
        - 2.0 * log_abs_gamma_complex(0.5 * (p.a + p.b), 0.5 * p.s)
    )


def log_surrogate_g(p: BetaizedParams, x: float) -> float:
    """ln g(x), the log-concave function with alpha g <= f <= beta g."""
    _require_samplable(p)
    rest = p.s - x
    return (
        _log_surrogate_scale(p)
        + 0.5 * (p.a - 1.0) * math.log(0.25 * (p.a * p.a + x * x))
        + 0.5 * (p.b - 1.0) * math.log(0.25 * (p.b * p.b + rest * rest))
        - x * math.atan(x / p.a)
        - rest * math.atan(rest / p.b)
    )


def lemma2_log_envelope(c: SandwichConstants, x: float) -> float:
    """ln of (A / sigma) min(1, exp(B - C |x - mu| / sigma))."""
    return math.log(c.A / c.sigma) + min(0.0, c.B - c.C * abs(x - c.mu) / c.sigma)


def lemma3_log_envelope(c: SandwichConstants, x: float) -> float:
    """ln of the tripartite hat: flat, reciprocal, then exponential."""
    distance = abs(x - c.mu)
    if distance <= c.eta + 1.0 / c.tau_prime:
        return math.log(c.beta * c.tau_prime)
    if distance <= c.eta + 1.0 / c.tau:
        return math.log(c.beta) - math.log(distance - c.eta)
    return math.log(c.beta * c.tau) + min(0.0, 1.0 + c.eta * c.tau - c.tau * distance)


def sample_lemma2(stream: RandomStream, p: BetaizedParams, tally: Optional[IterationTally] = None) -> float:
    """Rejection from a flat centre of half-width B sigma / C with exponential tails."""
    c = sandwich_constants(p)
    flat_probability = c.B / (1.0 + c.B)
    half_width = c.B * c.sigma / c.C
    for iterations in range(1, ITERATION_CAP + 1):
        if stream.next_uniform() <= flat_probability:
            x = c.mu + half_width * (2.0 * stream.next_uniform() - 1.0)
        else:
            sign = sample_sign(stream)
            x = c.mu + sign * (c.B + sample_exponential(stream)) * c.sigma / c.C
        log_u = math.log(stream.next_uniform())
        if log_u + lemma2_log_envelope(c, x) <= log_density(p, x):
            if tally is not None:
                tally.record(iterations)
            return x
    raise IterationCapExceeded(BetaizedMethod.LEMMA2.value, p, ITERATION_CAP)


def _propose_lemma3(stream: RandomStream, c: SandwichConstants) -> Tuple[float, Lemma3Branch, float]:
    # Branch picked by cumulative thresholds q1/q and (q1+q2)/q.
    q1, q2, q3 = c.q1, c.q2, c.q3
    q = q1 + q2 + q3
    v = stream.next_uniform()
    if v <= q1 / q:
        x = c.mu + (2.0 * stream.next_uniform() - 1.0) * (c.eta + 1.0 / c.tau_prime)
        return x, Lemma3Branch.CENTRAL, math.log(c.beta * c.tau_prime)
    if v <= (q1 + q2) / q:
        v_prime = stream.next_uniform()
        y = math.exp(-((1.0 - v_prime) * math.log(c.tau_prime) + v_prime * math.log(c.tau)))
        x = c.mu + sample_sign(stream) * (c.eta + y)
        return x, Lemma3Branch.RECIPROCAL, math.log(c.beta) - math.log(y)
    sign = sample_sign(stream)
    e = sample_exponential(stream)
    x = c.mu + sign * (c.eta + (1.0 + e) / c.tau)
    return x, Lemma3Branch.TAIL, math.log(c.beta * c.tau) - e


def propose_lemma3(stream: RandomStream, c: SandwichConstants) -> Tuple[float, Lemma3Branch]:
    """One proposal from the tripartite hat without the acceptance step."""
    x, branch, _ = _propose_lemma3(stream, c)
    return x, branch


def sample_lemma3(stream: RandomStream, p: BetaizedParams, tally: Optional[IterationTally] = None) -> float:
    """Rejection from the tripartite hat (flat, 1/y, exponential)."""
    c = sandwich_constants(p)
    for iterations in range(1, ITERATION_CAP + 1):
        x, _, log_hat = _propose_lemma3(stream, c)
        log_u = math.log(stream.next_uniform())
        if log_u + log_hat <= log_density(p, x):
            if tally is not None:
                tally.record(iterations)
            return x
    raise IterationCapExceeded(BetaizedMethod.LEMMA3.value, p, ITERATION_CAP)


def sample(
    stream: RandomStream,
    p: BetaizedParams,
    method: BetaizedMethod = BetaizedMethod.LEMMA3,
    tally: Optional[IterationTally] = None,
) -> float:
    if BetaizedMethod(method) is BetaizedMethod.LEMMA2:
        return sample_lemma2(stream, p, tally)
    return sample_lemma3(stream, p, tally)


def expected_iterations(p: BetaizedParams, method: BetaizedMethod = BetaizedMethod.LEMMA3) -> float:
    """Hat area: 2 (1 + B) A / C for the two-piece hat, 2 (q1 + q2 + q3) for the tripartite one."""
    c = sandwich_constants(p)
    if BetaizedMethod(method) is BetaizedMethod.LEMMA2:
        return 2.0 * (1.0 + c.B) * c.A / c.C
    return 2.0 * (c.q1 + c.q2 + c.q3)
