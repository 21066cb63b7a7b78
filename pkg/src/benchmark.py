"""Iteration-count benchmark over a grid of parameter cells.

Each cell owns its stream, so rows do not depend on the order cells run in.
"""
import logging
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

import betaized
import pearson4
from distribution_models import BetaizedParams, Pearson4Params, build_params
from rng_core import RandomStream
from sample_models import BenchRow, IterationTally
from sampling_service import build_target
from variate_defs import BetaizedMethod, Distribution, Pearson4Method

logger = logging.getLogger(__name__)

BENCH_CSV_COLUMNS = ["dist", "method", "params", "n", "mean_iterations", "theoretical_bound"]


class BenchCell(BaseModel):
    """One (distribution, method, parameters) combination to measure."""
    dist: Distribution
    method: Optional[str] = None
    params: Dict[str, float]
    n: int = Field(default=10_000, ge=1)
    seed: int = Field(default=1, ge=0, lt=2 ** 64)


class BenchGrid(BaseModel):
    cells: List[BenchCell]

    @field_validator("cells")
    @classmethod
    def _non_empty(cls, cells: List[BenchCell]) -> List[BenchCell]:
        if not cells:
            raise ValueError("a bench grid needs at least one cell")
        return cells


def theoretical_bound(dist: Distribution, method: str, params: Dict[str, float]) -> Optional[float]:
    """Expected iterations per draw where a closed form exists; 1 for the one-liners."""
    if dist is Distribution.PEARSON4:
        p = build_params(Pearson4Params, **params)
        return pearson4.expected_iterations(p, Pearson4Method(method))
    if dist is Distribution.BETAIZED_MM:
        p = build_params(BetaizedParams, **params)
        return betaized.expected_iterations(p, BetaizedMethod(method))
    if dist in (Distribution.STUDENT_T, Distribution.CAUCHY, Distribution.T2):
        return 1.0
    return None


def run_cell(cell: BenchCell) -> BenchRow:
    target = build_target(cell.dist.value, cell.method, **cell.params)
    sampler = target.require_sampler()
    stream = RandomStream(cell.seed)
    tally = IterationTally()
    for _ in range(cell.n):
        sampler(stream, tally)
    row = BenchRow(
        dist=cell.dist.value,
        method=target.method,
        params=target.params,
        n=cell.n,
        mean_iterations=tally.mean_iterations,
        theoretical_bound=theoretical_bound(cell.dist, target.method, target.params),
    )
    logger.info(f"Bench {row.dist}/{row.method} {row.params}: {row.mean_iterations:.4f} (bound {row.theoretical_bound})")
    return row


def run_grid(grid: BenchGrid, dist: Optional[Distribution] = None) -> List[BenchRow]:
    """Measure every cell, or only the cells of ``dist`` when given."""
    cells = [cell for cell in grid.cells if dist is None or cell.dist is dist]
    logger.info(f"Running {len(cells)} bench cell(s)")
    return [run_cell(cell) for cell in cells]


def row_to_csv(row: BenchRow) -> List[str]:
    params = ";".join(f"{key}={value:.17g}" for key, value in row.params.items())
    bound = "" if row.theoretical_bound is None else f"{row.theoretical_bound:.17g}"
    return [row.dist, row.method, params, str(row.n), f"{row.mean_iterations:.17g}", bound]
