from enum import Enum

# Any rejection loop that runs this long has a bug in its envelope.
ITERATION_CAP = 10**7

# Upper bound for e^2/(2*pi) - 1 used in the Batir upper bound.
BATIR_CONSTANT = 0.177

GOF_SIGNIFICANCE = 1e-3


class Pearson4Method(str, Enum):
    """Generators for the Pearson IV family."""
    AUTO = "auto"
    LOGCONCAVE = "logconcave"
    GAMMA_FREE = "gamma-free"
    STUDENT_REJECT = "student-reject"
    SYMMETRIZED = "symmetrized"
    SKEWED_CAUCHY = "skewed-cauchy"
    STUDENT_T = "student-t"


class BetaizedMethod(str, Enum):
    """Generators for the betaized Meixner-Morris law."""
    LEMMA2 = "lemma2"
    LEMMA3 = "lemma3"


class Lemma3Branch(str, Enum):
    """Pieces of the tripartite betaized envelope."""
    CENTRAL = "central"
    RECIPROCAL = "reciprocal"
    TAIL = "tail"


class Distribution(str, Enum):
    PEARSON4 = "pearson4"
    STUDENT_T = "student-t"
    CAUCHY = "cauchy"
    T2 = "t2"
    BETAIZED_MM = "betaized-mm"
    GHS = "ghs"
    NEFGHS = "nefghs"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSONL = "jsonl"


class FindingLevel(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


class VariateError(Exception):
    """Base class for every error raised by the library."""


class DomainError(VariateError, ValueError):
    """A parameter or argument lies outside the supported domain."""


class DispatchError(DomainError):
    """A generator was invoked outside the region it is routed to."""


class IterationCapExceeded(VariateError, RuntimeError):
    """A rejection loop ran past ITERATION_CAP iterations."""

    def __init__(self, method: str, params: object, iterations: int):
        self.method = method
        self.params = params
        self.iterations = iterations
        super().__init__(
            f"{method} exceeded {iterations} iterations for {params}; the envelope is broken"
        )


class OracleError(VariateError, RuntimeError):
    """Verification machinery failed (quadrature did not converge, GoF input refused)."""


class CheckKind(str, Enum):
    """Kinds of check a validation suite can run."""
    NORMALIZATION = "normalization"
    NORM_BRACKET = "norm_bracket"
    DUPLICATION = "duplication"
    CONVOLUTION = "convolution"
    KS = "ks"
    TWO_SAMPLE_KS = "two_sample_ks"
    ITERATIONS = "iterations"
    COSINE = "cosine"
    DOMINATION = "domination"
    LOG_CONCAVITY = "log_concavity"
    MOMENTS = "moments"
    PRIOR_MOMENTS = "prior_moments"
    CONDITIONAL_MOMENTS = "conditional_moments"
    RECIPROCAL_BRANCH = "reciprocal_branch"
