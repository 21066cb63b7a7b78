"""Generalized hyperbolic secant (GHS) and NEF-GHS densities.

Evaluation only:
    f_rho(x) = 2^{rho-2} / (pi Gamma(rho)) |Gamma((rho + ix)/2)|^2
    f(x)     = (1 + lam^2)^{-rho/2} e^{x arctan lam} f_rho(x)
"""
import logging
import math
from typing import Tuple

import numpy as np

from distribution_models import GhsParams, Moments
from rng_core import RandomStream, sample_log_gamma
from sample_models import CosineEstimate
from specfun import LOG_PI, log1p_square, log_abs_gamma_right_half, log_gamma_real
from variate_defs import DomainError

logger = logging.getLogger(__name__)

LOG_TWO = math.log(2.0)
MIN_COSINE_DRAWS = 1000


def ghs_log_density(rho: float, x: float) -> float:
    """ln f_rho(x); symmetric in x."""
    if not math.isfinite(rho) or rho <= 0:
        raise DomainError(f"GHS parameter rho must be positive, got {rho}")
    return (
        (rho - 2.0) * LOG_TWO
        - LOG_PI
        - log_gamma_real(rho)
        + 2.0 * log_abs_gamma_right_half(0.5 * rho, 0.5 * abs(x))
    )


def nefghs_log_density(g: GhsParams, x: float) -> float:
    return -0.5 * g.rho * log1p_square(g.lam) + x * math.atan(g.lam) + ghs_log_density(g.rho, x)


def nefghs_moments(g: GhsParams) -> Moments:
    """Mean rho * lam and variance rho * (1 + lam^2)."""
    return Moments(mean=g.rho * g.lam, variance=g.rho * (1.0 + g.lam * g.lam))


def ghs_reference_frame(g: GhsParams) -> Tuple[float, float]:
    moments = nefghs_moments(g)
    return moments.mean, math.sqrt(moments.variance)


def cosine_prefactor_log(rho: float) -> float:
    """ln of 2^{rho-2} Gamma(rho/2)^2 / (pi Gamma(rho)), the value f_rho(0)."""
    return (rho - 2.0) * LOG_TWO + 2.0 * log_gamma_real(0.5 * rho) - LOG_PI - log_gamma_real(rho)


def cos_representation_estimate(stream: RandomStream, rho: float, x: float, n: int) -> CosineEstimate:
    """Monte Carlo estimate of f_rho(x) as f_rho(0) E cos(x Z / 2), Z = log G - log G'.

    G and G' are independent gamma(rho/2) variates. Used as a check on the
    complex-gamma kernel that shares no code with it.
    """
    if not math.isfinite(rho) or rho <= 0:
        raise DomainError(f"GHS parameter rho must be positive, got {rho}")
    if n < MIN_COSINE_DRAWS:
        raise DomainError(f"cosine estimate needs at least {MIN_COSINE_DRAWS} draws, got {n}")
    shape = 0.5 * rho
    z = np.fromiter(
        (sample_log_gamma(stream, shape) - sample_log_gamma(stream, shape) for _ in range(n)),
        dtype=np.float64,
        count=n,
    )
    cosines = np.cos(0.5 * x * z)
    prefactor = math.exp(cosine_prefactor_log(rho))
    estimate = prefactor * float(cosines.mean())
    stderr = prefactor * float(cosines.std(ddof=1)) / math.sqrt(n)
    logger.debug(f"Cosine estimate of f_{rho}({x}) from {n} draws: {estimate:.6g} +- {stderr:.2g}")
    return CosineEstimate(estimate=estimate, stderr=stderr)
