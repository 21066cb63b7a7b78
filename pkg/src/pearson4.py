"""Pearson IV density and generators.

Every generator works with |s| and negates its output when s < 0, since
P_{a,s} and -P_{a,-s} have the same law. Angular quantities use y = arctan x;
acceptance tests compare logarithms so e^{s pi/2} never has to be formed.
"""
import logging
import math
from functools import lru_cache
from typing import Optional, Tuple

from scipy import special

from distribution_models import LogConcaveEnvelope, Moments, Pearson4Params
from rng_core import RandomStream, sample_exponential, sample_log_gamma, sample_sign
from sample_models import IterationTally
from specfun import log1p_square, pearson4_log_norm, pearson4_norm_bounds
from student import sample_scaled_student
from variate_defs import DispatchError, DomainError, ITERATION_CAP, IterationCapExceeded, Pearson4Method

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi
LOG_TWO = math.log(2.0)
LOG_TWO_OVER_PI = math.log(2.0 / math.pi)
SYMMETRIZED_ITERATION_BOUND = math.pi ** 2 / (2.0 * math.pi - 4.0)


def _finish(p: Pearson4Params, x: float, iterations: int, tally: Optional[IterationTally]) -> float:
    if tally is not None:
        tally.record(iterations)
    return -x if p.s < 0 else x


def log_density(p: Pearson4Params, x: float) -> float:
    """ln f(x) = ln gamma + s arctan x - a ln(1 + x^2)."""
    return pearson4_log_norm(p.a, p.abs_skew) + p.s * math.atan(x) - p.a * log1p_square(x)


def angular_log_density(p: Pearson4Params, y: float) -> float:
    """ln h(y) for the density of arctan X; -inf outside (-pi/2, pi/2)."""
    if abs(y) >= HALF_PI:
        return -math.inf
    value = pearson4_log_norm(p.a, p.abs_skew) + p.s * y
    if p.a != 1.0:
        value += 2.0 * (p.a - 1.0) * math.log(math.cos(y))
    return value


def angular_mode(p: Pearson4Params) -> float:
    """Mode arctan(s / (2(a-1))) of the angular density; +-pi/2 in the a = 1 limit."""
    if p.a < 1:
        raise DomainError(f"the angular density is not unimodal for a < 1, got a={p.a}")
    if p.a == 1.0:
        logger.debug(f"Angular mode for a=1, s={p.s} is the boundary limit")
        return math.copysign(HALF_PI, p.s) if p.s else 0.0
    return math.atan(p.s / (2.0 * (p.a - 1.0)))


def reference_frame(p: Pearson4Params) -> Tuple[float, float]:
    """Mode of f and the curvature scale there, used to place quadrature nodes."""
    loc = p.s / (2.0 * p.a)
    return loc, math.sqrt((1.0 + loc * loc) / (2.0 * p.a))


def pearson4_moments(p: Pearson4Params) -> Moments:
    """Mean s/(2(a-1)) for a > 1; variance (1 + mean^2)/(2a-3), infinite for a <= 3/2."""
    if p.a <= 1:
        raise DomainError(f"the mean is undefined for a <= 1, got a={p.a}")
    mean = p.s / (2.0 * (p.a - 1.0))
    variance = (1.0 + mean * mean) / (2.0 * p.a - 3.0) if p.a > 1.5 else math.inf
    return Moments(mean=mean, variance=variance)


@lru_cache(maxsize=256)
def build_envelope(p: Pearson4Params) -> LogConcaveEnvelope:
    """Hat constants for the log-concave angular density of P_{a,|s|}, a > 1."""
    if p.a <= 1:
        raise DispatchError(f"the log-concave envelope needs a > 1, got a={p.a}")
    s = p.abs_skew
    beta = s / (2.0 * (p.a - 1.0))
    mode = math.atan(beta)
    log1p_beta_sq = log1p_square(beta)
    bounds = pearson4_norm_bounds(p.a, s)
    envelope = LogConcaveEnvelope(
        a=p.a,
        s=s,
        beta=beta,
        mode=mode,
        complement=math.atan2(1.0, beta),
        log1p_beta_sq=log1p_beta_sq,
        log_delta=s * mode - (p.a - 1.0) * log1p_beta_sq,
        log_gamma=pearson4_log_norm(p.a, s),
        log_gamma_lo=bounds.log_gamma_lo,
        log_gamma_hi=bounds.log_gamma_hi,
    )
    logger.debug(
        f"Envelope for a={p.a}, s={s}: mode={mode:.6g}, log_delta={envelope.log_delta:.6g}, "
        f"log gamma in [{bounds.log_gamma_lo:.6g}, {bounds.log_gamma_hi:.6g}]"
    )
    return envelope


def _exponential_tailed_offset(u: float) -> float:
    # V uniform on [-2, 2] folded into the shape min(1, e^{1-|v|}).
    v = 4.0 * u - 2.0
    if v < -1.0:
        return -1.0 + math.log(v + 2.0)
    if v > 1.0:
        return 1.0 - math.log(v - 1.0)
    return v


def _angle_from_mode(env: LogConcaveEnvelope, t: float) -> Tuple[float, float]:
    """For Y = m + t return (d, sign) with cos Y = sin d and tan Y = sign * cot d.

    d <= 0 means Y is outside (-pi/2, pi/2).
    """
    if t >= -env.mode:
        return env.complement - t, 1.0
    return HALF_PI + env.mode + t, -1.0


def _log_ratio_to_peak(env: LogConcaveEnvelope, t: float, d: float) -> float:
    # ln h(m + t) - ln h(m) = s t + (a-1)(2 ln cos(m+t) + ln(1 + beta^2))
    return env.s * t + (env.a - 1.0) * (2.0 * math.log(math.sin(d)) + env.log1p_beta_sq)


def sample_logconcave(stream: RandomStream, p: Pearson4Params, tally: Optional[IterationTally] = None) -> float:
    """Universal log-concave rejection on the angular density; needs the exact gamma."""
    env = build_envelope(p)
    peak = math.exp(env.log_peak)
    for iterations in range(1, ITERATION_CAP + 1):
        t = _exponential_tailed_offset(stream.next_uniform()) / peak
        log_u = math.log(stream.next_uniform())
        d, side = _angle_from_mode(env, t)
        if d <= 0.0:
            continue
        if log_u + min(0.0, 1.0 - peak * abs(t)) <= _log_ratio_to_peak(env, t, d):
            return _finish(p, side * math.cos(d) / math.sin(d), iterations, tally)
    raise IterationCapExceeded(Pearson4Method.LOGCONCAVE.value, p, ITERATION_CAP)


def sample_logconcave_gamma_free(
    stream: RandomStream, p: Pearson4Params, tally: Optional[IterationTally] = None
) -> float:
    """Log-concave rejection using only the explicit bracket on gamma."""
    if p.a == 1.0:
        raise DispatchError("a = 1 is the skewed Cauchy case; use sample_skewed_cauchy")
    env = build_envelope(p)
    slope = math.exp(env.log_gamma_lo + env.log_delta)
    log_bracket_ratio = env.log_gamma_hi - env.log_gamma_lo
    for iterations in range(1, ITERATION_CAP + 1):
        t = _exponential_tailed_offset(stream.next_uniform()) / slope
        log_u = math.log(stream.next_uniform())
        d, side = _angle_from_mode(env, t)
        if d <= 0.0:
            continue
        if log_u + log_bracket_ratio + min(0.0, 1.0 - slope * abs(t)) <= _log_ratio_to_peak(env, t, d):
            return _finish(p, side * math.cos(d) / math.sin(d), iterations, tally)
    raise IterationCapExceeded(Pearson4Method.GAMMA_FREE.value, p, ITERATION_CAP)


def sample_reject_student(stream: RandomStream, p: Pearson4Params, tally: Optional[IterationTally] = None) -> float:
    """Rejection from T_{2a-1}/sqrt(2a-1): accept when E >= s (pi/2 - arctan X)."""
    s = p.abs_skew
    for iterations in range(1, ITERATION_CAP + 1):
        x = sample_scaled_student(stream, p.a)
        e = sample_exponential(stream)
        if e >= s * math.atan2(1.0, x):
            return _finish(p, x, iterations, tally)
    raise IterationCapExceeded(Pearson4Method.STUDENT_REJECT.value, p, ITERATION_CAP)


def sample_skewed_cauchy(stream: RandomStream, s: float) -> float:
    """P_{1,s} by inversion of the exponential angular density."""
    if not math.isfinite(s):
        raise DomainError(f"skew must be finite, got {s}")
    u = stream.next_uniform()
    if s == 0.0:
        return math.tan(math.pi * (u - 0.5))
    k = abs(s)
    # delta = pi/2 - W, computed without forming e^{pi k / 2}
    delta = -math.log1p((1.0 - u) * math.expm1(-math.pi * k)) / k
    x = math.cos(delta) / math.sin(delta)
    return -x if s < 0 else x


def sample_symmetrized(stream: RandomStream, p: Pearson4Params, tally: Optional[IterationTally] = None) -> float:
    """Gamma rejection on pi/2 - |arctan X| for 1/2 < a <= 1 and |s| >= 1, then an exchange step."""
    s = p.abs_skew
    if not (0.5 < p.a <= 1.0 and s >= 1.0):
        raise DomainError(f"symmetrized method needs 1/2 < a <= 1 and |s| >= 1, got a={p.a}, s={p.s}")
    shape = 2.0 * p.a - 1.0
    log_s = math.log(s)
    power = 2.0 * (1.0 - p.a)
    for iterations in range(1, ITERATION_CAP + 1):
        log_z = sample_log_gamma(stream, shape) - log_s
        log_u = math.log(stream.next_uniform())
        z = math.exp(log_z)
        if z >= HALF_PI:
            continue
        # cosh(s t) / e^{s t} with t = pi/2 - z; the exchange step needs |Y| to carry the cosh
        log_accept = math.log1p(math.exp(-2.0 * s * (HALF_PI - z))) - LOG_TWO
        if power > 0.0:
            # ln(z / sin z), series form where the ratio rounds to one
            log_z_over_sin = z * z / 6.0 if z < 1e-4 else log_z - math.log(math.sin(z))
            log_accept += power * (LOG_TWO_OVER_PI + log_z_over_sin)
        if log_u > log_accept:
            continue
        sign = sample_sign(stream)
        x = sign * (math.cos(z) / math.sin(z) if z > 0.0 else math.inf)
        y = sign * (HALF_PI - z)
        if stream.next_uniform() < special.expit(-2.0 * s * y):
            x = -x
        return _finish(p, x, iterations, tally)
    raise IterationCapExceeded(Pearson4Method.SYMMETRIZED.value, p, ITERATION_CAP)


def select_method(p: Pearson4Params) -> Pearson4Method:
    """Routing: zero skew, a = 1, a > 1, then small and large skew for a < 1."""
    if p.s == 0.0:
        return Pearson4Method.STUDENT_T
    if p.a == 1.0:
        return Pearson4Method.SKEWED_CAUCHY
    if p.a > 1.0:
        return Pearson4Method.GAMMA_FREE
    if p.abs_skew < 1.0:
        return Pearson4Method.STUDENT_REJECT
    return Pearson4Method.SYMMETRIZED


def _check_route(p: Pearson4Params, method: Pearson4Method):
    if method in (Pearson4Method.LOGCONCAVE, Pearson4Method.GAMMA_FREE) and p.a <= 1.0:
        raise DispatchError(f"{method.value} requires a > 1, got a={p.a}")
    if method is Pearson4Method.SKEWED_CAUCHY and p.a != 1.0:
        raise DispatchError(f"skewed-cauchy requires a = 1, got a={p.a}")
    if method is Pearson4Method.STUDENT_T and p.s != 0.0:
        raise DispatchError(f"student-t requires s = 0, got s={p.s}")


def sample(
    stream: RandomStream,
    p: Pearson4Params,
    method: Pearson4Method = Pearson4Method.AUTO,
    tally: Optional[IterationTally] = None,
) -> float:
    """Draw one Pearson IV variate with the routed (or the requested) generator."""
    method = Pearson4Method(method)
    if method is Pearson4Method.AUTO:
        method = select_method(p)
    else:
        _check_route(p, method)

    if method is Pearson4Method.STUDENT_T:
        x = sample_scaled_student(stream, p.a)
        return _finish(p, x, 1, tally)
    if method is Pearson4Method.SKEWED_CAUCHY:
        x = sample_skewed_cauchy(stream, p.s)
        if tally is not None:
            tally.record(1)
        return x
    if method is Pearson4Method.LOGCONCAVE:
        return sample_logconcave(stream, p, tally)
    if method is Pearson4Method.GAMMA_FREE:
        return sample_logconcave_gamma_free(stream, p, tally)
    if method is Pearson4Method.STUDENT_REJECT:
        return sample_reject_student(stream, p, tally)
    return sample_symmetrized(stream, p, tally)


def expected_iterations(p: Pearson4Params, method: Pearson4Method = Pearson4Method.AUTO) -> float:
    """Expected rejection-loop iterations per draw.

    Exact for every method except the symmetrized one, for which the uniform
    upper bound pi^2 / (2 pi - 4) is returned.
    """
    method = Pearson4Method(method)
    if method is Pearson4Method.AUTO:
        method = select_method(p)
    else:
        _check_route(p, method)
    s = p.abs_skew
    if method in (Pearson4Method.STUDENT_T, Pearson4Method.SKEWED_CAUCHY):
        return 1.0
    if method is Pearson4Method.LOGCONCAVE:
        return 4.0
    if method is Pearson4Method.GAMMA_FREE:
        env = build_envelope(p)
        return 4.0 * math.exp(env.log_gamma_hi + env.log_gamma - 2.0 * env.log_gamma_lo)
    if method is Pearson4Method.STUDENT_REJECT:
        return math.exp(HALF_PI * s + pearson4_log_norm(p.a, s) - pearson4_log_norm(p.a, 0.0))
    return SYMMETRIZED_ITERATION_BOUND
