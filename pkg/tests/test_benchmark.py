import pytest
from pydantic import ValidationError

from benchmark import BENCH_CSV_COLUMNS, BenchCell, BenchGrid, row_to_csv, run_cell, run_grid, theoretical_bound
from sample_models import BenchRow
from variate_defs import Distribution

pytestmark = pytest.mark.unit


def test_theoretical_bounds():
    assert theoretical_bound(Distribution.PEARSON4, "logconcave", {"a": 3.0, "s": 1.0}) == 4.0
    assert theoretical_bound(Distribution.CAUCHY, "cauchy", {}) == 1.0
    assert theoretical_bound(Distribution.GHS, "", {"rho": 1.0}) is None
    lemma3 = theoretical_bound(Distribution.BETAIZED_MM, "lemma3", {"a": 100.0, "b": 100.0, "s": 0.0})
    assert 14.0 < lemma3 < 16.0


def test_run_cell_for_one_liner():
    row = run_cell(BenchCell(dist="t2", params={}, n=100))
    assert row.mean_iterations == 1.0
    assert row.theoretical_bound == 1.0
    assert row.method == "t2"


def test_run_cell_resolves_auto():
    row = run_cell(BenchCell(dist="pearson4", params={"a": 0.8, "s": 0.5}, n=200, seed=3))
    assert row.method == "student-reject"
    assert row.mean_iterations >= 1.0
    assert row.theoretical_bound == pytest.approx(
        theoretical_bound(Distribution.PEARSON4, "student-reject", {"a": 0.8, "s": 0.5})
    )


def test_run_cell_is_reproducible():
    cell = BenchCell(dist="betaized-mm", method="lemma2", params={"a": 3.0, "b": 5.0, "s": 4.0}, n=50, seed=9)
    assert run_cell(cell) == run_cell(cell)


def test_run_grid_filters_by_distribution():
    grid = BenchGrid(cells=[
        BenchCell(dist="cauchy", params={}, n=10),
        BenchCell(dist="t2", params={}, n=10),
        BenchCell(dist="cauchy", params={}, n=20),
    ])
    rows = run_grid(grid, Distribution.CAUCHY)
    assert [row.n for row in rows] == [10, 20]
    assert len(run_grid(grid)) == 3


def test_empty_grid_rejected():
    with pytest.raises(ValidationError):
        BenchGrid(cells=[])


def test_cell_needs_positive_n():
    with pytest.raises(ValidationError):
        BenchCell(dist="cauchy", params={}, n=0)


def test_row_to_csv():
    row = BenchRow(dist="pearson4", method="gamma-free", params={"a": 2.0, "s": 0.5}, n=10,
                   mean_iterations=6.25, theoretical_bound=None)
    assert row_to_csv(row) == ["pearson4", "gamma-free", "a=2;s=0.5", "10", "6.25", ""]
    assert len(row_to_csv(row)) == len(BENCH_CSV_COLUMNS)
