"""One-liner samplers for the Student-t subfamily.

Bailey's polar form needs U^{-2/a} - 1, evaluated as expm1(-2 ln U / a). For
degrees of freedom below roughly 0.1 the tails exceed the double range and a
draw can come back as +-inf; the Pearson IV routes only reach that regime
for a within a few hundredths of 1/2.
"""
import math

from rng_core import RandomStream
from variate_defs import DomainError

TWO_PI = 2.0 * math.pi


def _polar_core(stream: RandomStream, dof: float) -> float:
    # sin(2 pi U') sqrt(U^{-2/dof} - 1), i.e. T_dof / sqrt(dof); U is drawn before U'.
    u = stream.next_uniform()
    u_prime = stream.next_uniform()
    return math.sin(TWO_PI * u_prime) * math.sqrt(math.expm1(-2.0 * math.log(u) / dof))


def sample_student_t(stream: RandomStream, a: float) -> float:
    """Student-t variate with a > 0 degrees of freedom."""
    if not math.isfinite(a) or a <= 0:
        raise DomainError(f"Student-t degrees of freedom must be positive, got {a}")
    return math.sqrt(a) * _polar_core(stream, a)


def sample_scaled_student(stream: RandomStream, a: float) -> float:
    """T_{2a-1} / sqrt(2a-1), whose density is proportional to (1+x^2)^{-a}."""
    if not math.isfinite(a) or a <= 0.5:
        raise DomainError(f"scaled Student-t requires a > 1/2, got {a}")
    return _polar_core(stream, 2.0 * a - 1.0)


def sample_cauchy(stream: RandomStream) -> float:
    return math.tan(math.pi * (stream.next_uniform() - 0.5))


def sample_t2(stream: RandomStream) -> float:
    """Student-t with two degrees of freedom by inversion."""
    u = stream.next_uniform()
    return (2.0 * u - 1.0) / math.sqrt(2.0 * u * (1.0 - u))
