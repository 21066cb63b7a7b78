"""Verification machinery built only from log-density evaluators.

Full-line integrals use the substitution x = loc + scale * sinh(v). A power
tail |x|^{-2a} becomes e^{-(2a-1)|v|} and a GHS-type tail e^{-c|x|}
becomes double-exponential in v, so one adaptive scheme covers every family.
"""
import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, interpolate, stats

from rng_core import RandomStream
from sample_models import GofResult, IterationTally, QuadratureResult, SampleReport
from variate_defs import OracleError

logger = logging.getLogger(__name__)

LogDensity = Callable[[float], float]
Sampler = Callable[[RandomStream, object, Optional[IterationTally]], float]

QUAD_ABS_TOLERANCE = 1e-13
QUAD_REL_TOLERANCE = 1e-11
# Error estimate above which a flagged QUADPACK run is treated as a failure.
QUAD_ACCEPTABLE_ERROR = 1e-7
MIN_KS_SAMPLES = 100


def _log_cosh(v: float) -> float:
    av = abs(v)
    return av + math.log1p(math.exp(-2.0 * av)) - math.log(2.0)


def _sinh_integrand(log_f: LogDensity, loc: float, scale: float, weight: Callable[[float], float]):
    log_scale = math.log(scale)

    def integrand(v: float) -> float:
        x = loc + scale * math.sinh(v) if abs(v) < 700.0 else math.copysign(math.inf, v)
        if not math.isfinite(x):
            return 0.0
        value = log_f(x)
        if math.isnan(value) or value == -math.inf:
            return 0.0
        return weight(x) * math.exp(value + log_scale + _log_cosh(v))

    return integrand


def quadrature_integrate(
    log_f: LogDensity,
    loc: float = 0.0,
    scale: float = 1.0,
    lower: Optional[float] = None,
    upper: Optional[float] = None,
    weight: Optional[Callable[[float], float]] = None,
) -> QuadratureResult:
    """Integrate weight(x) * exp(log_f(x)) adaptively.

    Args:
        log_f: Log of the integrand.
        loc: Centre of the sinh substitution (for full-line integrals).
        scale: Width of the sinh substitution.
        lower: Finite lower limit; with ``upper`` switches to a plain interval.
        upper: Finite upper limit.
        weight: Optional factor such as x or (x - m)^2 for moments.

    Returns:
        QuadratureResult with the value and QUADPACK's absolute error estimate.

    Raises:
        OracleError: if QUADPACK reports a convergence problem.
    """
    weight = weight or (lambda x: 1.0)
    if scale <= 0 or not math.isfinite(scale):
        raise OracleError(f"quadrature scale must be positive, got {scale}")
    if lower is not None and upper is not None:
        value, error = _adaptive_quad(lambda x: weight(x) * math.exp(log_f(x)), lower, upper)
    else:
        integrand = _sinh_integrand(log_f, loc, scale, weight)
        left, left_error = _adaptive_quad(integrand, -np.inf, 0.0)
        right, right_error = _adaptive_quad(integrand, 0.0, np.inf)
        value, error = left + right, left_error + right_error
    return QuadratureResult(value=value, abs_error=error)


def _adaptive_quad(integrand: Callable[[float], float], lower: float, upper: float):
    result = integrate.quad(
        integrand,
        lower,
        upper,
        epsabs=QUAD_ABS_TOLERANCE,
        epsrel=QUAD_REL_TOLERANCE,
        limit=500,
        full_output=1,
    )
    value, error = result[0], result[1]
    if not math.isfinite(value):
        raise OracleError(f"quadrature on [{lower}, {upper}] produced {value}")
    if len(result) > 3:
        # QUADPACK flagged the run; accept it only if its error estimate is still small.
        if error > QUAD_ACCEPTABLE_ERROR * max(1.0, abs(value)):
            raise OracleError(f"quadrature on [{lower}, {upper}] did not converge: {result[3]}")
        logger.warning(f"QUADPACK on [{lower}, {upper}]: {result[3]} (error estimate {error:.2g})")
    return value, error


class NumericCdf:
    """Monotone CDF table of exp(log_f), normalized by its own total mass.

    Panels are uniform in v = arcsinh((x - loc) / scale); each panel mass comes
    from Gauss-Legendre quadrature and the table is interpolated with cubic
    Hermite segments whose slopes are the density itself.
    """

    def __init__(
        self,
        log_f: LogDensity,
        loc: float = 0.0,
        scale: float = 1.0,
        v_max: float = 80.0,
        panels: int = 4000,
        order: int = 8,
    ):
        if scale <= 0 or panels < 2:
            raise OracleError(f"invalid CDF grid: scale={scale}, panels={panels}")
        self.loc = loc
        self.scale = scale
        self.v_max = v_max
        edges = np.linspace(-v_max, v_max, panels + 1)
        nodes, weights = leggauss(order)
        half = 0.5 * (edges[1] - edges[0])
        centres = 0.5 * (edges[:-1] + edges[1:])
        points = (centres[:, None] + half * nodes[None, :]).ravel()

        log_integrand = np.array([self._log_v_density(log_f, v) for v in points]).reshape(panels, order)
        masses = half * (np.exp(log_integrand) @ weights)
        cumulative = np.concatenate(([0.0], np.cumsum(masses)))
        total = cumulative[-1]
        if not total > 0 or not math.isfinite(total):
            raise OracleError(f"CDF table has no usable mass (total={total})")
        self.total_mass = float(total)

        slopes = np.exp(np.array([self._log_v_density(log_f, v) for v in edges])) / total
        values = np.maximum.accumulate(np.clip(cumulative / total, 0.0, 1.0))
        self._spline = interpolate.CubicHermiteSpline(edges, values, slopes)
        logger.debug(f"CDF table over v in [-{v_max}, {v_max}] with {panels} panels, raw mass {total:.12g}")

    def _log_v_density(self, log_f: LogDensity, v: float) -> float:
        x = self.loc + self.scale * math.sinh(v)
        if not math.isfinite(x):
            return -math.inf
        value = log_f(x)
        if math.isnan(value):
            return -math.inf
        return value + math.log(self.scale) + _log_cosh(v)

    def __call__(self, x):
        v = np.arcsinh((np.asarray(x, dtype=np.float64) - self.loc) / self.scale)
        result = np.clip(self._spline(np.clip(v, -self.v_max, self.v_max)), 0.0, 1.0)
        result = np.where(v <= -self.v_max, 0.0, result)
        return np.where(v >= self.v_max, 1.0, result)


def numeric_cdf(log_f: LogDensity, loc: float = 0.0, scale: float = 1.0, **grid) -> NumericCdf:
    return NumericCdf(log_f, loc, scale, **grid)


def ks_test(samples: Sequence[float], cdf: Callable) -> GofResult:
    """One-sample Kolmogorov-Smirnov test with the asymptotic p-value."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size < MIN_KS_SAMPLES:
        raise OracleError(f"KS test needs at least {MIN_KS_SAMPLES} samples, got {samples.size}")
    result = stats.kstest(samples, cdf, method="asymp")
    return GofResult(statistic=float(result.statistic), pvalue=float(result.pvalue))


def two_sample_ks(first: Sequence[float], second: Sequence[float]) -> GofResult:
    first = np.asarray(first, dtype=np.float64)
    second = np.asarray(second, dtype=np.float64)
    if min(first.size, second.size) < MIN_KS_SAMPLES:
        raise OracleError(f"KS test needs at least {MIN_KS_SAMPLES} samples per side")
    result = stats.ks_2samp(first, second, method="asymp")
    return GofResult(statistic=float(result.statistic), pvalue=float(result.pvalue))


def chi_square_log_uniform(values: Sequence[float], lower: float, upper: float, bins: int = 20) -> GofResult:
    """Chi-square test that values on [lower, upper] have density proportional to 1/y.

    Log-spaced bins carry equal mass under that density.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size < 5 * bins:
        raise OracleError(f"chi-square needs at least {5 * bins} values, got {values.size}")
    edges = np.geomspace(lower, upper, bins + 1)
    observed, _ = np.histogram(values, bins=edges)
    expected = np.full(bins, observed.sum() / bins)
    result = stats.chisquare(observed, expected)
    return GofResult(statistic=float(result.statistic), pvalue=float(result.pvalue))


def clt_tolerance(std: float, n: int, k: float = 4.0) -> float:
    """k standard errors of a mean of n draws."""
    return k * std / math.sqrt(n)


def measure_iterations(
    sampler: Sampler,
    params: object,
    n: int,
    seed: int,
    method: str = "",
    cdf: Optional[Callable] = None,
) -> SampleReport:
    """Draw n variates with an iteration tally and summarize them.

    The KS fields are filled only when a CDF is supplied.
    """
    stream = RandomStream(seed)
    tally = IterationTally()
    values = np.fromiter((sampler(stream, params, tally) for _ in range(n)), dtype=np.float64, count=n)
    ks = ks_test(values, cdf) if cdf is not None else None
    report = SampleReport(
        n=n,
        seed=seed,
        method=method or getattr(sampler, "__name__", "sampler"),
        total_iterations=tally.iterations,
        mean_iterations=tally.mean_iterations,
        ks_statistic=ks.statistic if ks else None,
        ks_pvalue=ks.pvalue if ks else None,
        sample_mean=float(values.mean()),
        sample_var=float(values.var(ddof=1)) if n > 1 else 0.0,
    )
    logger.info(f"Measured {report.method}: {n} draws, mean iterations {report.mean_iterations:.4f}")
    return report
