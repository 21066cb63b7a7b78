from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

# Result records produced by samplers, the oracle harness and the CLI.


class IterationTally:
    """Running count of accepted draws and rejection-loop iterations.

    A plain class rather than a model: samplers update it once per draw.
    """
    __slots__ = ("draws", "iterations")

    def __init__(self):
        self.draws = 0
        self.iterations = 0

    def record(self, iterations: int):
        self.draws += 1
        self.iterations += iterations

    def merge(self, other: "IterationTally"):
        self.draws += other.draws
        self.iterations += other.iterations

    @property
    def mean_iterations(self) -> float:
        return self.iterations / self.draws if self.draws else 0.0


class GofResult(BaseModel):
    """Goodness-of-fit statistic with its p-value."""
    statistic: float
    pvalue: float = Field(ge=0.0, le=1.0)


class QuadratureResult(BaseModel):
    value: float
    abs_error: float


class CosineEstimate(BaseModel):
    estimate: float
    stderr: float = Field(ge=0.0)


class SampleReport(BaseModel):
    """Summary of an instrumented sampling run."""
    n: int
    seed: int
    method: str
    total_iterations: int
    mean_iterations: float = Field(ge=1.0)
    ks_statistic: Optional[float] = None
    ks_pvalue: Optional[float] = None
    sample_mean: float
    sample_var: float

    @field_validator("ks_pvalue")
    @classmethod
    def _probability(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not 0.0 <= value <= 1.0:
            raise ValueError(f"p-value outside [0, 1]: {value}")
        return value


class SampleBatch(BaseModel):
    """Variates drawn by the sampling service, with the run metadata the CLI emits."""
    values: List[float]
    seed: int
    method: str
    iterations: int
    jobs: int = 1

    def meta(self) -> Dict[str, object]:
        return {
            "iterations": self.iterations,
            "n": len(self.values),
            "seed": self.seed,
            "method": self.method,
        }


class BenchRow(BaseModel):
    dist: str
    method: str
    params: Dict[str, float]
    n: int
    mean_iterations: float
    theoretical_bound: Optional[float] = None
