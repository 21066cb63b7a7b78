#!/usr/bin/env python3
"""
Pearson IV / Meixner-Morris variate generator command line tool

Draws exact random variates, evaluates densities and moments, performs the
conjugate posterior update and runs the statistical validation suites.

Usage:
    python main.py sample --dist pearson4 --a 2 --s 1 --n 1000 --seed 7
    python main.py density --dist pearson4 --a 1 --s 0 --x 0
    python main.py moments --dist prior --m0 10 --mu0 0.5
    python main.py posterior --m0 2 --mu0 0 --y-sum 0 --n-sum 10
    python main.py validate --suite pearson4 --quick
    python main.py bench --dist betaized-mm --grid grid.json
"""

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

# Try importing from installed package first, fallback to src path
try:
    from benchmark import BENCH_CSV_COLUMNS, row_to_csv, run_grid
except ImportError:
    # Add src to path for imports when not installed
    sys.path.insert(0, str(Path(__file__).parent / "src"))
    from benchmark import BENCH_CSV_COLUMNS, row_to_csv, run_grid

from conjugate import posterior_update, prior_to_pearson
from distribution_models import PriorSpec, build_params
from sampling_service import SamplingService, build_target, conjugate_moments
from suite_manager import SuiteManager
from validation_service import VariateValidationService
from variate_defs import Distribution, DomainError, IterationCapExceeded, OracleError, OutputFormat

logger = logging.getLogger("main")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

MOMENT_TARGETS = ["pearson4", "nefghs", "ghs", "student-t", "betaized-mm", "prior", "predictive"]


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _params(args) -> dict:
    names = ("a", "s", "b", "rho", "lam")
    return {name: getattr(args, name, None) for name in names if getattr(args, name, None) is not None}


def cmd_sample(args) -> int:
    service = SamplingService(jobs=args.jobs)
    batch = service.draw(args.dist, args.n, args.seed, args.method, **_params(args))
    out = sys.stdout
    if OutputFormat(args.format) is OutputFormat.CSV:
        for x in batch.values:
            out.write(_fmt(x) + "\n")
    else:
        try:
            lines = [json.dumps({"x": x}, allow_nan=False) for x in batch.values]
        except ValueError:
            logger.error(f"{args.dist} produced a non-finite variate, which JSON lines cannot represent")
            return EXIT_FAILED
        for line in lines:
            out.write(line + "\n")
        out.write(json.dumps({"meta": batch.meta()}) + "\n")
    return EXIT_OK


def cmd_density(args) -> int:
    target = build_target(args.dist, **_params(args))
    print(_fmt(target.density(args.x)))
    return EXIT_OK


def cmd_moments(args) -> int:
    if args.dist in ("prior", "predictive"):
        if args.m0 is None:
            raise DomainError("--m0 is required for prior and predictive moments")
        n_sum = args.n_sum if args.dist == "predictive" else None
        if args.dist == "predictive" and n_sum is None:
            raise DomainError("--n-sum is required for predictive moments")
        moments = conjugate_moments(args.m0, args.mu0, n_sum)
    else:
        moments = build_target(args.dist, **_params(args)).moments()
    print(json.dumps({"mean": moments.mean, "variance": moments.variance}))
    return EXIT_OK


def cmd_posterior(args) -> int:
    prior = build_params(PriorSpec, m0=args.m0, mu0=args.mu0)
    posterior = posterior_update(prior, args.y_sum, args.n_sum)
    mapped = prior_to_pearson(posterior)
    print(json.dumps({"m1": posterior.m0, "mu1": posterior.mu0, "a": mapped.a, "s": mapped.s}))
    return EXIT_OK


def cmd_validate(args) -> int:
    service = VariateValidationService(args.suite_path)
    result = service.validate(args.suite, quick=args.quick)
    report = {"suite": args.suite, "quick": args.quick, **result.to_dict()}
    print(json.dumps(report, indent=2))
    return EXIT_OK if result.valid else EXIT_FAILED


def cmd_bench(args) -> int:
    grid = SuiteManager.load_bench_grid(args.grid)
    rows = run_grid(grid, Distribution(args.dist) if args.dist else None)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(BENCH_CSV_COLUMNS)
    for row in rows:
        writer.writerow(row_to_csv(row))
    return EXIT_OK


def _add_shape_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--a", type=float, help="Pearson IV a, Student-t degrees of freedom, or betaized a")
    parser.add_argument("--s", type=float, help="Pearson IV skew or betaized conditioning sum")
    parser.add_argument("--b", type=float, help="betaized b")
    parser.add_argument("--rho", type=float, help="GHS convolution parameter")
    parser.add_argument("--lambda", dest="lam", type=float, help="NEF-GHS tilt")


def build_parser() -> argparse.ArgumentParser:
    dists = [d.value for d in Distribution]
    parser = argparse.ArgumentParser(
        description="Exact Pearson IV and betaized Meixner-Morris random variates",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py sample --dist pearson4 --a 2 --s 0 --n 5 --seed 7 --format csv
  python main.py sample --dist betaized-mm --a 3 --b 5 --s 4 --n 1000 --seed 1 --method lemma2 --format jsonl
  python main.py density --dist nefghs --rho 2 --lambda 0.5 --x 1
  python main.py posterior --m0 2 --mu0 0 --y-sum 0 --n-sum 10
  python main.py validate --suite all --quick

Exit codes: 0 success, 1 failed validation or runaway rejection loop, 2 usage or domain error.
        """,
    )
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Diagnostics level on stderr (default: WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    sample = sub.add_parser("sample", help="Draw variates")
    sample.add_argument("--dist", required=True, choices=dists)
    _add_shape_arguments(sample)
    sample.add_argument("--n", type=int, required=True, help="Number of variates")
    sample.add_argument("--seed", type=int, required=True, help="Unsigned 64-bit seed")
    sample.add_argument("--method", help="Generator (pearson4: auto|logconcave|gamma-free|student-reject|"
                                         "symmetrized|skewed-cauchy|student-t; betaized-mm: lemma2|lemma3)")
    sample.add_argument("--format", default=OutputFormat.CSV.value, choices=[f.value for f in OutputFormat])
    sample.add_argument("--jobs", type=int, default=1, help="Worker processes (default: 1)")
    sample.set_defaults(handler=cmd_sample)

    density = sub.add_parser("density", help="Evaluate a density")
    density.add_argument("--dist", required=True, choices=dists)
    _add_shape_arguments(density)
    density.add_argument("--x", type=float, required=True)
    density.set_defaults(handler=cmd_density)

    moments = sub.add_parser("moments", help="Closed-form mean and variance")
    moments.add_argument("--dist", required=True, choices=MOMENT_TARGETS)
    _add_shape_arguments(moments)
    moments.add_argument("--m0", type=float)
    moments.add_argument("--mu0", type=float, default=0.0)
    moments.add_argument("--n-sum", type=float)
    moments.set_defaults(handler=cmd_moments)

    posterior = sub.add_parser("posterior", help="Conjugate update of a Pearson IV prior")
    posterior.add_argument("--m0", type=float, required=True)
    posterior.add_argument("--mu0", type=float, required=True)
    posterior.add_argument("--y-sum", type=float, required=True)
    posterior.add_argument("--n-sum", type=float, required=True)
    posterior.set_defaults(handler=cmd_posterior)

    validate = sub.add_parser("validate", help="Run validation suites")
    validate.add_argument("--suite", default="all", help="all, specfun, pearson4 or betaized")
    validate.add_argument("--quick", action="store_true", help="Use the reduced sample sizes")
    validate.add_argument("--suite-path", help="Directory of suite definitions (default: src/suites)")
    validate.set_defaults(handler=cmd_validate)

    bench = sub.add_parser("bench", help="Measure iterations per variate over a grid")
    bench.add_argument("--dist", choices=dists, help="Only run cells of this distribution")
    bench.add_argument("--grid", required=True, help="JSON file of bench cells")
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv=None) -> int:
    """Main entry point with command line argument parsing."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        format="[%(asctime)s] [%(levelname)s] [%(name)s:%(lineno)d] - %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        return args.handler(args)
    except (DomainError, ValidationError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (IterationCapExceeded, OracleError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILED


if __name__ == "__main__":
    exit(main())
