"""Parameter and constant models shared by the samplers and density evaluators.

Every model is frozen: instances are hashable, so the per-parameter envelope
constructors can cache on them.
"""
import math
from typing import Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from variate_defs import DomainError

ModelT = TypeVar("ModelT", bound=BaseModel)


def _require_finite(value: float) -> float:
    if not math.isfinite(value):
        raise ValueError(f"expected a finite number, got {value}")
    return value


def build_params(model: Type[ModelT], **fields) -> ModelT:
    """Construct a parameter model, reporting violations as DomainError."""
    try:
        return model(**fields)
    except ValidationError as e:
        raise DomainError(f"invalid {model.__name__}: {e.errors()[0]['msg']}") from e


class Pearson4Params(BaseModel):
    """Shape pair (a, s) of the density proportional to e^{s arctan x} (1+x^2)^{-a}."""
    model_config = ConfigDict(frozen=True)

    a: float
    s: float = 0.0

    @field_validator("a", "s")
    @classmethod
    def _finite(cls, value: float) -> float:
        return _require_finite(value)

    @field_validator("a")
    @classmethod
    def _integrable(cls, value: float) -> float:
        if value <= 0.5:
            raise ValueError(f"a must exceed 1/2, got {value}")
        return value

    @property
    def abs_skew(self) -> float:
        return abs(self.s)

    def mirrored(self) -> "Pearson4Params":
        return Pearson4Params(a=self.a, s=-self.s)


class GhsParams(BaseModel):
    """Convolution parameter rho and tilt lam of the NEF-GHS family."""
    model_config = ConfigDict(frozen=True)

    rho: float
    lam: float = 0.0

    @field_validator("rho", "lam")
    @classmethod
    def _finite(cls, value: float) -> float:
        return _require_finite(value)

    @field_validator("rho")
    @classmethod
    def _positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError(f"rho must be positive, got {value}")
        return value


class BetaizedParams(BaseModel):
    """Shape parameters (a, b) and conditioning sum s of the betaized Meixner-Morris law.

    Shapes below one are accepted only with ``allow_below_one``; such parameters
    can be evaluated but not sampled.
    """
    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    s: float = 0.0
    allow_below_one: bool = False

    @field_validator("a", "b", "s")
    @classmethod
    def _finite(cls, value: float) -> float:
        return _require_finite(value)

    @model_validator(mode="after")
    def _shape_floor(self) -> "BetaizedParams":
        if min(self.a, self.b) <= 0:
            raise ValueError(f"shapes must be positive, got a={self.a}, b={self.b}")
        if min(self.a, self.b) < 1 and not self.allow_below_one:
            raise ValueError(
                f"min(a, b) must be at least 1, got a={self.a}, b={self.b} "
                "(set allow_below_one to evaluate the density only)"
            )
        return self

    @property
    def samplable(self) -> bool:
        return min(self.a, self.b) >= 1


class PriorSpec(BaseModel):
    """Pearson IV conjugate prior in (prior sample size, prior mean) form."""
    model_config = ConfigDict(frozen=True)

    m0: float
    mu0: float = 0.0

    @field_validator("m0", "mu0")
    @classmethod
    def _finite(cls, value: float) -> float:
        return _require_finite(value)

    @field_validator("m0")
    @classmethod
    def _sample_size(cls, value: float) -> float:
        if value < 1:
            raise ValueError(f"m0 must be at least 1, got {value}")
        return value


class NormBounds(BaseModel):
    """Explicit bracket of the Pearson IV normalization constant, kept in log domain.

    The linear-scale properties underflow for large skew; use the log fields
    in computations.
    """
    model_config = ConfigDict(frozen=True)

    log_gamma_star: float
    log_gamma_lo: float
    log_gamma_hi: float

    @model_validator(mode="after")
    def _ordered(self) -> "NormBounds":
        if self.log_gamma_lo > self.log_gamma_hi:
            raise ValueError("lower bound exceeds upper bound")
        return self

    @property
    def gamma_star(self) -> float:
        return math.exp(self.log_gamma_star)

    @property
    def gamma_lo(self) -> float:
        return math.exp(self.log_gamma_lo)

    @property
    def gamma_hi(self) -> float:
        return math.exp(self.log_gamma_hi)

    def contains(self, log_gamma: float, slack: float = 0.0) -> bool:
        return self.log_gamma_lo - slack <= log_gamma <= self.log_gamma_hi + slack


class BoydBracket(BaseModel):
    """Stirling magnitude of Gamma(x+iy) with the multiplicative bracket on |Gamma|^2."""
    model_config = ConfigDict(frozen=True)

    theta_lo: float
    theta_hi: float
    log_stirling_mag: float

    def contains(self, log_abs_gamma: float, slack: float = 0.0) -> bool:
        twice = 2.0 * log_abs_gamma
        lower = math.log(self.theta_lo) + 2.0 * self.log_stirling_mag
        upper = math.log(self.theta_hi) + 2.0 * self.log_stirling_mag
        return lower - slack <= twice <= upper + slack


class LogConcaveEnvelope(BaseModel):
    """Constants of the exponential-tailed hat over the angular density of P_{a,|s|}.

    ``complement`` is pi/2 - mode, computed directly so that angles near pi/2
    keep their precision when the mode saturates.
    """
    model_config = ConfigDict(frozen=True)

    a: float
    s: float = Field(ge=0)
    beta: float
    mode: float
    complement: float
    log1p_beta_sq: float
    log_delta: float
    log_gamma: float
    log_gamma_lo: float
    log_gamma_hi: float

    @model_validator(mode="after")
    def _consistent(self) -> "LogConcaveEnvelope":
        if abs(self.mode) > math.pi / 2:
            raise ValueError(f"mode {self.mode} outside the angular support")
        if self.log_gamma_lo > self.log_gamma_hi:
            raise ValueError("lower normalization bound exceeds upper bound")
        return self

    @property
    def log_peak(self) -> float:
        """ln h(m), the angular density at its mode."""
        return self.log_gamma + self.log_delta


class SandwichConstants(BaseModel):
    """Constants of the log-concave sandwich and both betaized envelopes."""
    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float
    A: float
    B: float
    C: float
    eta: float
    tau: float
    tau_prime: float
    mu: float
    sigma: float

    @model_validator(mode="after")
    def _ordered(self) -> "SandwichConstants":
        if not 0 < self.alpha <= 1 <= self.beta:
            raise ValueError(f"expected 0 < alpha <= 1 <= beta, got {self.alpha}, {self.beta}")
        if not (self.eta > 0 and self.sigma > 0 and self.tau <= self.tau_prime):
            raise ValueError("expected eta > 0, sigma > 0 and tau <= tau_prime")
        return self

    @property
    def q1(self) -> float:
        return self.beta * (1.0 + self.tau_prime * self.eta)

    @property
    def q2(self) -> float:
        return self.beta * math.log(self.tau_prime / self.tau)

    @property
    def q3(self) -> float:
        return self.beta


class Moments(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    variance: float


class ConditionalMoments(BaseModel):
    """Moments of Y_i given the total; Cov(Y_i, Y_j) = covariance_per_unit * n_j."""
    model_config = ConfigDict(frozen=True)

    mean: float
    variance: float
    covariance_per_unit: float

    def covariance_with(self, n_j: float) -> float:
        return self.covariance_per_unit * n_j
