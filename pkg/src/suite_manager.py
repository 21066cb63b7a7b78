import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError, model_validator

from benchmark import BenchGrid
from variate_defs import GOF_SIGNIFICANCE, CheckKind, Distribution, DomainError

logger = logging.getLogger(__name__)

DEFAULT_SUITE_PATH = Path(__file__).parent / "suites"


class SuiteCheck(BaseModel):
    """One check of a validation suite.

    ``grid`` expands the check once per entry, each entry overriding ``params``.
    Bounds that a kind does not use are ignored.
    """
    name: str
    kind: CheckKind
    dist: Optional[Distribution] = None
    method: Optional[str] = None
    other_method: Optional[str] = None
    params: Dict[str, float] = Field(default_factory=dict)
    grid: List[Dict[str, float]] = Field(default_factory=list)
    points: List[float] = Field(default_factory=list)
    seed: int = Field(default=1, ge=0, lt=2 ** 64)
    n: int = Field(default=100_000, ge=1)
    n_quick: int = Field(default=10_000, ge=1)
    tolerance: Optional[float] = Field(default=None, gt=0)
    min_mean: Optional[float] = None
    max_mean: Optional[float] = None
    max_ratio: Optional[float] = None

    @model_validator(mode="after")
    def _needs_dist(self) -> "SuiteCheck":
        sampling = {CheckKind.NORMALIZATION, CheckKind.KS, CheckKind.TWO_SAMPLE_KS, CheckKind.ITERATIONS, CheckKind.MOMENTS}
        if self.kind in sampling and self.dist is None:
            raise ValueError(f"check '{self.name}' of kind {self.kind.value} needs a dist")
        if self.kind is CheckKind.TWO_SAMPLE_KS and not (self.method and self.other_method):
            raise ValueError(f"check '{self.name}' needs method and other_method")
        return self

    def expanded(self) -> List[Dict[str, float]]:
        if not self.grid:
            return [dict(self.params)]
        return [{**self.params, **entry} for entry in self.grid]

    def sample_size(self, quick: bool) -> int:
        return min(self.n, self.n_quick) if quick else self.n


class SuiteDefinition(BaseModel):
    name: str
    description: str = ""
    significance: float = Field(default=GOF_SIGNIFICANCE, gt=0, lt=1)
    checks: List[SuiteCheck]


class SuiteManager:
    """
    Loads validation suite definitions (*.json) from a directory.
    Malformed files are logged and skipped so the remaining suites stay usable.
    """

    def __init__(self, suite_base_path: Optional[str] = None):
        self.suite_base_path = Path(suite_base_path) if suite_base_path else DEFAULT_SUITE_PATH
        self._suites: Dict[str, SuiteDefinition] = {}
        self._load_suites()

    def _load_suites(self):
        if not self.suite_base_path.exists():
            logger.warning(f"Suite path does not exist: {self.suite_base_path}")
            return

        logger.info(f"Loading validation suites from: {self.suite_base_path}")
        for suite_file in sorted(self.suite_base_path.glob("*.json")):
            try:
                with open(suite_file, "r") as f:
                    suite = SuiteDefinition.model_validate(json.load(f))
                self._suites[suite.name] = suite
                logger.info(f"Loaded suite: {suite.name} ({len(suite.checks)} checks)")
            except Exception as e:
                logger.error(f"Failed to load suite {suite_file.name}: {e}")

    def get_suite(self, name: str) -> Optional[SuiteDefinition]:
        suite = self._suites.get(name)
        if suite is None:
            logger.error(f"Suite not found: {name}")
        return suite

    def list_suites(self) -> List[str]:
        return list(self._suites.keys())

    def reload_suites(self):
        """Reload all suites from the filesystem."""
        self._suites.clear()
        self._load_suites()

    @staticmethod
    def load_bench_grid(grid_path: str) -> BenchGrid:
        """
        Load a bench grid file.

        Raises:
            DomainError: if the file is missing, is not JSON, or does not describe a grid.
        """
        path = Path(grid_path)
        try:
            with open(path, "r") as f:
                data = json.load(f)
            if isinstance(data, list):
                data = {"cells": data}
            return BenchGrid.model_validate(data)
        except FileNotFoundError as e:
            raise DomainError(f"bench grid not found: {path}") from e
        except (json.JSONDecodeError, ValidationError) as e:
            raise DomainError(f"invalid bench grid {path.name}: {e}") from e
