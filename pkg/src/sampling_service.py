"""Target registry and batch sampling behind the CLI.

A target bundles, for one distribution name and parameter set, the log-density
evaluator, the reference frame used by the oracles and, when the family has a
generator, a sampler bound to the requested method.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

from scipy import stats

import betaized
import pearson4
from conjugate import predictive_moments, prior_moments
from distribution_models import BetaizedParams, GhsParams, Moments, Pearson4Params, PriorSpec, build_params
from ghs import ghs_log_density, ghs_reference_frame, nefghs_log_density, nefghs_moments
from rng_core import RandomStream
from sample_models import IterationTally, SampleBatch
from student import sample_cauchy, sample_student_t, sample_t2
from variate_defs import BetaizedMethod, Distribution, DomainError, Pearson4Method

logger = logging.getLogger(__name__)

Sampler = Callable[[RandomStream, Optional[IterationTally]], float]


def _require(params: Dict[str, Optional[float]], *names: str) -> List[float]:
    missing = [name for name in names if params.get(name) is None]
    if missing:
        raise DomainError(f"missing parameter(s): {', '.join('--' + m for m in missing)}")
    return [params[name] for name in names]


def _one_draw(draw: Callable[[RandomStream], float]) -> Sampler:
    def sampler(stream: RandomStream, tally: Optional[IterationTally] = None) -> float:
        x = draw(stream)
        if tally is not None:
            tally.record(1)
        return x

    return sampler


class VariateTarget:
    """Everything the CLI and the oracles need to know about one parameterized law."""

    def __init__(
        self,
        dist: Distribution,
        params: Dict[str, float],
        log_density: Callable[[float], float],
        frame: Tuple[float, float],
        sampler: Optional[Sampler] = None,
        method: str = "",
        moments: Optional[Callable[[], Moments]] = None,
    ):
        self.dist = dist
        self.params = params
        self.log_density = log_density
        self.loc, self.scale = frame
        self.sampler = sampler
        self.method = method
        self._moments = moments

    def density(self, x: float) -> float:
        return math.exp(self.log_density(x))

    def moments(self) -> Moments:
        if self._moments is None:
            raise DomainError(f"no closed-form moments for {self.dist.value}")
        return self._moments()

    def require_sampler(self) -> Sampler:
        if self.sampler is None:
            raise DomainError(f"{self.dist.value} has no generator; use the density subcommand")
        return self.sampler

    def __repr__(self) -> str:
        return f"VariateTarget({self.dist.value}, {self.params}, method={self.method or '-'})"


def _pearson4_target(params: Dict[str, Optional[float]], method: Optional[str]) -> VariateTarget:
    a, s = _require(params, "a", "s")
    p = build_params(Pearson4Params, a=a, s=s)
    requested = Pearson4Method(method or Pearson4Method.AUTO.value)
    resolved = pearson4.select_method(p) if requested is Pearson4Method.AUTO else requested

    def sampler(stream: RandomStream, tally: Optional[IterationTally] = None) -> float:
        return pearson4.sample(stream, p, requested, tally)

    return VariateTarget(
        Distribution.PEARSON4,
        {"a": p.a, "s": p.s},
        lambda x: pearson4.log_density(p, x),
        pearson4.reference_frame(p),
        sampler,
        resolved.value,
        lambda: pearson4.pearson4_moments(p),
    )


def _student_target(params: Dict[str, Optional[float]], method: Optional[str]) -> VariateTarget:
    (a,) = _require(params, "a")
    if not math.isfinite(a) or a <= 0:
        raise DomainError(f"Student-t degrees of freedom must be positive, got {a}")

    def moments() -> Moments:
        if a <= 2:
            raise DomainError(f"Student-t variance needs a > 2, got {a}")
        return Moments(mean=0.0, variance=a / (a - 2.0))

    return VariateTarget(
        Distribution.STUDENT_T,
        {"a": a},
        lambda x: float(stats.t.logpdf(x, a)),
        (0.0, 1.0),
        _one_draw(lambda stream: sample_student_t(stream, a)),
        Distribution.STUDENT_T.value,
        moments,
    )


def _betaized_target(params: Dict[str, Optional[float]], method: Optional[str]) -> VariateTarget:
    a, b, s = _require(params, "a", "b", "s")
    p = build_params(BetaizedParams, a=a, b=b, s=s)
    resolved = BetaizedMethod(method or BetaizedMethod.LEMMA3.value)
    m = betaized.moments(p)

    def sampler(stream: RandomStream, tally: Optional[IterationTally] = None) -> float:
        return betaized.sample(stream, p, resolved, tally)

    return VariateTarget(
        Distribution.BETAIZED_MM,
        {"a": p.a, "b": p.b, "s": p.s},
        lambda x: betaized.log_density(p, x),
        (m.mean, math.sqrt(m.variance)),
        sampler,
        resolved.value,
        lambda: m,
    )


def _ghs_target(params: Dict[str, Optional[float]], method: Optional[str]) -> VariateTarget:
    (rho,) = _require(params, "rho")
    g = build_params(GhsParams, rho=rho, lam=0.0)
    return VariateTarget(
        Distribution.GHS,
        {"rho": g.rho},
        lambda x: ghs_log_density(g.rho, x),
        ghs_reference_frame(g),
        moments=lambda: nefghs_moments(g),
    )


def _nefghs_target(params: Dict[str, Optional[float]], method: Optional[str]) -> VariateTarget:
    (rho,) = _require(params, "rho")
    lam = params.get("lam") or 0.0
    g = build_params(GhsParams, rho=rho, lam=lam)
    return VariateTarget(
        Distribution.NEFGHS,
        {"rho": g.rho, "lam": g.lam},
        lambda x: nefghs_log_density(g, x),
        ghs_reference_frame(g),
        moments=lambda: nefghs_moments(g),
    )


_TARGET_BUILDERS = {
    Distribution.PEARSON4: _pearson4_target,
    Distribution.STUDENT_T: _student_target,
    Distribution.CAUCHY: lambda params, method: VariateTarget(
        Distribution.CAUCHY,
        {},
        lambda x: float(stats.cauchy.logpdf(x)),
        (0.0, 1.0),
        _one_draw(sample_cauchy),
        Distribution.CAUCHY.value,
    ),
    Distribution.T2: lambda params, method: VariateTarget(
        Distribution.T2,
        {},
        lambda x: float(stats.t.logpdf(x, 2.0)),
        (0.0, 1.0),
        _one_draw(sample_t2),
        Distribution.T2.value,
    ),
    Distribution.BETAIZED_MM: _betaized_target,
    Distribution.GHS: _ghs_target,
    Distribution.NEFGHS: _nefghs_target,
}


def build_target(dist: str, method: Optional[str] = None, **params: Optional[float]) -> VariateTarget:
    """Resolve a distribution name and its parameters into a VariateTarget.

    Raises:
        DomainError: for an unknown name or method, a missing parameter, or
            parameters outside the family's domain.
    """
    try:
        dist = Distribution(dist)
    except ValueError as e:
        raise DomainError(f"unknown distribution: {dist}") from e
    try:
        target = _TARGET_BUILDERS[dist](params, method)
    except ValueError as e:
        if isinstance(e, DomainError):
            raise
        raise DomainError(str(e)) from e
    logger.debug(f"Built {target}")
    return target


def conjugate_moments(m0: float, mu0: float, n_sum: Optional[float] = None) -> Moments:
    """Prior moments of lam, or predictive moments of the total when n_sum is given."""
    prior = build_params(PriorSpec, m0=m0, mu0=mu0)
    if n_sum is None:
        return prior_moments(prior)
    return predictive_moments(prior, n_sum)


def _chunk_sizes(n: int, jobs: int) -> List[int]:
    base, extra = divmod(n, jobs)
    return [base + (1 if i < extra else 0) for i in range(jobs)]


def _draw_chunk(dist: str, method: Optional[str], params: Dict[str, float], n: int, seed: int) -> Tuple[List[float], int]:
    # Runs in a worker process; the target is rebuilt there since samplers close over local state.
    target = build_target(dist, method, **params)
    sampler = target.require_sampler()
    stream = RandomStream(seed)
    tally = IterationTally()
    values = [sampler(stream, tally) for _ in range(n)]
    return values, tally.iterations


class SamplingService:
    """Draws batches of variates, optionally split across worker processes."""

    def __init__(self, jobs: int = 1):
        if jobs < 1:
            raise DomainError(f"jobs must be at least 1, got {jobs}")
        self.jobs = jobs

    def draw(self, dist: str, n: int, seed: int, method: Optional[str] = None, **params: Optional[float]) -> SampleBatch:
        """Draw n variates.

        With one job the stream is seeded with ``seed`` itself. With k jobs
        worker i draws from RandomStream(seed).spawn(i) and the chunks are
        concatenated in worker order, so the output depends on k but not on
        scheduling.
        """
        if n < 0:
            raise DomainError(f"n must be non-negative, got {n}")
        target = build_target(dist, method, **params)
        target.require_sampler()
        root = RandomStream(seed)
        clean = {key: value for key, value in params.items() if value is not None}

        logger.info(f"Sampling {n} x {target} with {self.jobs} job(s), seed {seed}")
        if self.jobs == 1:
            values, iterations = _draw_chunk(dist, method, clean, n, seed)
        else:
            sizes = _chunk_sizes(n, self.jobs)
            seeds = [root.spawn(i).seed for i in range(self.jobs)]
            values, iterations = [], 0
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                futures = [
                    pool.submit(_draw_chunk, dist, method, clean, size, worker_seed)
                    for size, worker_seed in zip(sizes, seeds)
                ]
                for future in futures:
                    chunk, chunk_iterations = future.result()
                    values.extend(chunk)
                    iterations += chunk_iterations
        batch = SampleBatch(values=values, seed=seed, method=target.method, iterations=iterations, jobs=self.jobs)
        logger.info(f"Drew {n} variates in {iterations} iterations")
        return batch
