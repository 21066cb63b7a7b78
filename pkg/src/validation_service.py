import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np

import betaized
import pearson4
from benchmark import theoretical_bound
from conjugate import conditional_moments, prior_moments, prior_to_pearson
from distribution_models import BetaizedParams, Pearson4Params, PriorSpec, build_params
from ghs import cos_representation_estimate, ghs_log_density
from oracle_harness import (
    NumericCdf,
    chi_square_log_uniform,
    clt_tolerance,
    measure_iterations,
    quadrature_integrate,
    two_sample_ks,
)
from rng_core import MASK64, RandomStream
from sample_models import SampleReport
from sampling_service import VariateTarget, build_target
from specfun import pearson4_log_norm, pearson4_log_norm_duplication, pearson4_norm_bounds
from suite_manager import SuiteCheck, SuiteDefinition, SuiteManager
from variate_defs import CheckKind, Distribution, FindingLevel, Lemma3Branch

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-6
DUPLICATION_TOLERANCE = 1e-10
CONDITIONAL_TOLERANCE = 1e-12
LOG_SLACK = 1e-9
GRID_POINTS = 10_000
VARIANCE_RTOL = 0.05
# Proposals allowed per requested reciprocal-branch value before giving up.
PROPOSALS_PER_VALUE = 1000

Outcome = Tuple[bool, str]


class ValidationFinding:
    """A single check outcome (or failure to run a check)."""
    def __init__(self, level: str, code: str, message: str, location: Optional[dict] = None):
        self.level = level
        self.code = code
        self.message = message
        self.location = location or {}

    def to_dict(self) -> dict:
        return {"level": self.level, "code": self.code, "message": self.message, "location": self.location}


class ValidationResult:
    """Container for validation results."""
    def __init__(self, valid: bool, findings: List[ValidationFinding], checks_run: int = 0):
        self.valid = valid
        self.findings = findings
        self.checks_run = checks_run

    @property
    def errors(self) -> List[ValidationFinding]:
        return [f for f in self.findings if f.level == FindingLevel.ERROR.value]

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "checks_run": self.checks_run,
            "failures": len(self.errors),
            "findings": [f.to_dict() for f in self.findings],
        }


def _target(check: SuiteCheck, params: Dict[str, float], method: Optional[str] = None) -> VariateTarget:
    return build_target(check.dist.value, method or check.method, **params)


def _measure(target: VariateTarget, n: int, seed: int, with_cdf: bool = False) -> SampleReport:
    sampler = target.require_sampler()
    cdf = NumericCdf(target.log_density, target.loc, target.scale) if with_cdf else None
    return measure_iterations(
        lambda stream, _, tally: sampler(stream, tally), target.params, n, seed, target.method, cdf
    )


def _draw(target: VariateTarget, n: int, seed: int) -> np.ndarray:
    sampler = target.require_sampler()
    stream = RandomStream(seed)
    return np.fromiter((sampler(stream, None) for _ in range(n)), dtype=np.float64, count=n)


def _moments_outcome(values: np.ndarray, mean: float, variance: float, rtol: float) -> Outcome:
    n = values.size
    mean_tol = clt_tolerance(math.sqrt(variance), n)
    sample_mean = float(values.mean())
    sample_var = float(values.var(ddof=1))
    ok = abs(sample_mean - mean) <= mean_tol and abs(sample_var - variance) <= rtol * variance
    return ok, (
        f"mean {sample_mean:.6g} vs {mean:.6g} (tol {mean_tol:.2g}), "
        f"variance {sample_var:.6g} vs {variance:.6g} (rtol {rtol})"
    )


class VariateValidationService:
    """Runs validation suites and reports every check as a finding."""

    def __init__(self, suite_base_path: Optional[str] = None):
        self.suite_manager = SuiteManager(suite_base_path)
        self._handlers = {
            CheckKind.NORMALIZATION: self._check_normalization,
            CheckKind.NORM_BRACKET: self._check_norm_bracket,
            CheckKind.DUPLICATION: self._check_duplication,
            CheckKind.CONVOLUTION: self._check_convolution,
            CheckKind.KS: self._check_ks,
            CheckKind.TWO_SAMPLE_KS: self._check_two_sample_ks,
            CheckKind.ITERATIONS: self._check_iterations,
            CheckKind.COSINE: self._check_cosine,
            CheckKind.DOMINATION: self._check_domination,
            CheckKind.LOG_CONCAVITY: self._check_log_concavity,
            CheckKind.MOMENTS: self._check_moments,
            CheckKind.PRIOR_MOMENTS: self._check_prior_moments,
            CheckKind.CONDITIONAL_MOMENTS: self._check_conditional_moments,
            CheckKind.RECIPROCAL_BRANCH: self._check_reciprocal_branch,
        }

    def validate(self, suite_name: str = "all", quick: bool = False) -> ValidationResult:
        """
        Run one suite, or every loaded suite for ``all``.

        Args:
            suite_name: Suite name (file stem of a definition) or ``all``.
            quick: Use each check's ``n_quick`` sample size.

        Returns:
            ValidationResult; valid only if no check produced an error finding.
        """
        names = self.suite_manager.list_suites() if suite_name == "all" else [suite_name]
        findings: List[ValidationFinding] = []
        checks_run = 0
        for name in names:
            suite = self.suite_manager.get_suite(name)
            if suite is None:
                findings.append(ValidationFinding(
                    level=FindingLevel.ERROR.value,
                    code="SUITE_NOT_FOUND",
                    message=f"Suite not found: {name}",
                    location={"suite": name},
                ))
                continue
            suite_findings = self.run_suite(suite, quick)
            checks_run += len(suite_findings)
            findings.extend(suite_findings)

        is_valid = checks_run > 0 and not any(f.level == FindingLevel.ERROR.value for f in findings)
        logger.info(f"Validation completed: valid={is_valid}, checks={checks_run}, findings={len(findings)}")
        return ValidationResult(valid=is_valid, findings=findings, checks_run=checks_run)

    def run_suite(self, suite: SuiteDefinition, quick: bool = False) -> List[ValidationFinding]:
        logger.info(f"Starting suite {suite.name} ({len(suite.checks)} checks, quick={quick})")
        findings = []
        for check in suite.checks:
            for params in check.expanded():
                findings.append(self.run_check(suite, check, params, quick))
        return findings

    def run_check(self, suite: SuiteDefinition, check: SuiteCheck, params: Dict[str, float], quick: bool) -> ValidationFinding:
        location = {"suite": suite.name, "check": check.name, "params": params}
        if check.method:
            location["method"] = check.method
        n = check.sample_size(quick)
        try:
            ok, message = self._handlers[check.kind](check, params, n, suite.significance)
        except Exception as e:
            logger.error(f"Check {suite.name}/{check.name} {params} crashed: {e}", exc_info=True)
            return ValidationFinding(
                level=FindingLevel.ERROR.value,
                code="CHECK_ERROR",
                message=f"Check failed to run: {e}",
                location=location,
            )
        level = FindingLevel.INFO if ok else FindingLevel.ERROR
        log = logger.info if ok else logger.warning
        log(f"{suite.name}/{check.name} {params}: {'pass' if ok else 'FAIL'} - {message}")
        return ValidationFinding(level=level.value, code=check.kind.value.upper(), message=message, location=location)

    def _check_normalization(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        target = _target(check, params)
        result = quadrature_integrate(target.log_density, target.loc, target.scale)
        tolerance = check.tolerance or NORMALIZATION_TOLERANCE
        return abs(result.value - 1.0) <= tolerance, f"integral {result.value:.12g} (quadrature error {result.abs_error:.2g})"

    def _check_norm_bracket(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        a, s = params["a"], params["s"]
        bounds = pearson4_norm_bounds(a, s)
        log_gamma = pearson4_log_norm(a, s)
        ok = bounds.contains(log_gamma, LOG_SLACK)
        ratio = math.exp(bounds.log_gamma_hi - bounds.log_gamma_lo)
        if check.max_ratio is not None:
            ok = ok and ratio < check.max_ratio
        return ok, (
            f"ln gamma {log_gamma:.12g} in [{bounds.log_gamma_lo:.12g}, {bounds.log_gamma_hi:.12g}], "
            f"upper/lower {ratio:.6g}"
        )

    def _check_duplication(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        a, s = params["a"], params["s"]
        direct = pearson4_log_norm(a, s)
        duplicated = pearson4_log_norm_duplication(a, s)
        tolerance = (check.tolerance or DUPLICATION_TOLERANCE) * max(1.0, abs(direct))
        return abs(direct - duplicated) <= tolerance, f"direct {direct:.15g}, duplication {duplicated:.15g}"

    def _check_convolution(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        # The betaized density is f_a(x) f_b(s - x) / f_{a+b}(s); it integrates to one iff the identity holds.
        p = build_params(BetaizedParams, a=params["a"], b=params["b"], s=params["s"], allow_below_one=True)
        m = betaized.moments(p)
        result = quadrature_integrate(lambda x: betaized.log_density(p, x), m.mean, math.sqrt(m.variance))
        tolerance = check.tolerance or NORMALIZATION_TOLERANCE
        return abs(result.value - 1.0) <= tolerance, (
            f"convolution / f_(a+b)(s) = {result.value:.12g} (quadrature error {result.abs_error:.2g})"
        )

    def _check_ks(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        report = _measure(_target(check, params), n, check.seed, with_cdf=True)
        return report.ks_pvalue > significance, (
            f"{report.method}: KS D={report.ks_statistic:.4g}, p={report.ks_pvalue:.4g}, "
            f"mean iterations {report.mean_iterations:.4f}"
        )

    def _check_two_sample_ks(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        first = _draw(_target(check, params, check.method), n, check.seed)
        second = _draw(_target(check, params, check.other_method), n, (check.seed + 1) & MASK64)
        result = two_sample_ks(first, second)
        return result.pvalue > significance, (
            f"{check.method} vs {check.other_method}: D={result.statistic:.4g}, p={result.pvalue:.4g}"
        )

    def _check_iterations(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        target = _target(check, params)
        report = _measure(target, n, check.seed)
        bound = theoretical_bound(check.dist, target.method, target.params)
        upper = check.max_mean
        if upper is None and bound is not None:
            # Iterations per draw are geometric with mean bound, so the sd is sqrt(bound (bound - 1)).
            upper = bound + clt_tolerance(math.sqrt(bound * max(bound - 1.0, 0.0)), n)
        lower = check.min_mean
        ok = (upper is None or report.mean_iterations <= upper) and (lower is None or report.mean_iterations >= lower)
        return ok, (
            f"{report.method}: mean iterations {report.mean_iterations:.4f} "
            f"in [{lower if lower is not None else '-'}, {upper if upper is not None else '-'}], bound {bound}"
        )

    def _check_cosine(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        rho = params["rho"]
        stream = RandomStream(check.seed)
        details = []
        ok = True
        for x in check.points or [0.0]:
            estimate = cos_representation_estimate(stream, rho, x, n)
            exact = math.exp(ghs_log_density(rho, x))
            within = abs(estimate.estimate - exact) <= 4.0 * estimate.stderr + 1e-12
            ok = ok and within
            details.append(f"x={x}: {estimate.estimate:.6g} vs {exact:.6g} (se {estimate.stderr:.2g})")
        return ok, "; ".join(details)

    def _betaized_grid(self, p: BetaizedParams) -> np.ndarray:
        c = betaized.sandwich_constants(p)
        half_width = c.eta + 10.0 / c.tau
        return np.linspace(c.mu - half_width, c.mu + half_width, GRID_POINTS)

    def _check_domination(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        p = build_params(BetaizedParams, **params)
        c = betaized.sandwich_constants(p)
        log_alpha, log_beta = math.log(c.alpha), math.log(c.beta)
        worst = {"sandwich_lower": -math.inf, "sandwich_upper": -math.inf, "lemma2": -math.inf, "lemma3": -math.inf}
        for x in self._betaized_grid(p):
            x = float(x)
            log_f = betaized.log_density(p, x)
            log_g = betaized.log_surrogate_g(p, x)
            worst["sandwich_lower"] = max(worst["sandwich_lower"], log_alpha + log_g - log_f)
            worst["sandwich_upper"] = max(worst["sandwich_upper"], log_f - log_beta - log_g)
            worst["lemma2"] = max(worst["lemma2"], log_f - betaized.lemma2_log_envelope(c, x))
            worst["lemma3"] = max(worst["lemma3"], log_f - betaized.lemma3_log_envelope(c, x))
        ok = all(value <= LOG_SLACK for value in worst.values())
        return ok, "largest log violations: " + ", ".join(f"{key} {value:.3g}" for key, value in worst.items())

    def _check_log_concavity(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        if check.dist is Distribution.BETAIZED_MM:
            p = build_params(BetaizedParams, **params)
            values = np.array([betaized.log_surrogate_g(p, float(x)) for x in self._betaized_grid(p)])
            label = "ln g"
        else:
            p = build_params(Pearson4Params, **params)
            edge = 0.5 * math.pi - 1e-3
            values = np.array([pearson4.angular_log_density(p, float(y)) for y in np.linspace(-edge, edge, GRID_POINTS)])
            label = "ln h"
        largest = float(np.max(np.diff(values, n=2)))
        return largest <= LOG_SLACK, f"largest second difference of {label}: {largest:.3g}"

    def _check_moments(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        target = _target(check, params)
        m = target.moments()
        return _moments_outcome(_draw(target, n, check.seed), m.mean, m.variance, check.tolerance or VARIANCE_RTOL)

    def _check_prior_moments(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        prior = build_params(PriorSpec, m0=params["m0"], mu0=params["mu0"])
        p = prior_to_pearson(prior)
        target = build_target("pearson4", check.method, a=p.a, s=p.s)
        m = prior_moments(prior)
        return _moments_outcome(_draw(target, n, check.seed), m.mean, m.variance, check.tolerance or VARIANCE_RTOL)

    def _check_conditional_moments(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        n_i, n_sum, y_sum = params["n_i"], params["n_sum"], params["y_sum"]
        conditional = conditional_moments(n_i, n_sum, y_sum)
        m = betaized.moments(build_params(BetaizedParams, a=n_i, b=n_sum - n_i, s=y_sum, allow_below_one=True))
        tolerance = check.tolerance or CONDITIONAL_TOLERANCE
        ok = math.isclose(conditional.mean, m.mean, rel_tol=tolerance, abs_tol=tolerance) and math.isclose(
            conditional.variance, m.variance, rel_tol=tolerance
        )
        return ok, f"mean {conditional.mean:.15g}/{m.mean:.15g}, variance {conditional.variance:.15g}/{m.variance:.15g}"

    def _check_reciprocal_branch(self, check: SuiteCheck, params: Dict[str, float], n: int, significance: float) -> Outcome:
        p = build_params(BetaizedParams, **params)
        c = betaized.sandwich_constants(p)
        stream = RandomStream(check.seed)
        offsets = []
        for _ in range(PROPOSALS_PER_VALUE * n):
            x, branch = betaized.propose_lemma3(stream, c)
            if branch is Lemma3Branch.RECIPROCAL:
                offsets.append(abs(x - c.mu) - c.eta)
                if len(offsets) == n:
                    break
        result = chi_square_log_uniform(offsets, 1.0 / c.tau_prime, 1.0 / c.tau)
        return result.pvalue > significance, (
            f"{len(offsets)} reciprocal offsets on [{1.0 / c.tau_prime:.4g}, {1.0 / c.tau:.4g}]: "
            f"chi2={result.statistic:.4g}, p={result.pvalue:.4g}"
        )
