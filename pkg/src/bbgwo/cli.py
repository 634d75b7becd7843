"""Command-line entry point: ``bbgwo <subcommand> [flags]``.

Exit codes: 0 success, 1 invalid flags, 2 runtime or check failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import benchmarks, distmath, harness
from .core import make_rng
from .optimizers import OptimizerId, RunConfig, run

log = logging.getLogger("bbgwo")

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _check_function(fid: int) -> None:
    _require(1 <= fid <= 12, f"invalid function id {fid}; valid ids are 1-12")


def _load_f12(path: str | None):
    if path is None:
        return None
    try:
        data = json.loads(Path(path).read_text())
        p, q = data["p"], data["q"]
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read function-12 constants from {path}: {exc}") from None
    _require(len(p) == 6 and len(q) == 6, "function-12 constants p and q must each have 6 entries")
    return {"p": [float(v) for v in p], "q": [float(v) for v in q]}


def cmd_optimize(args) -> int:
    _check_function(args.function)
    _require(args.population >= 3, "--population must be >= 3")
    _require(args.iterations >= 1, "--iterations must be >= 1")
    f12 = _load_f12(args.f12_params)
    _require(args.function != 12 or f12 is not None, "function 12 needs --f12-params")

    config = RunConfig(args.optimizer, args.population, args.iterations, args.seed,
                       not args.strict_leaders)
    result = run(config, benchmarks.get(args.function, f12))
    _write_text(args.output, json.dumps(result.to_dict(), indent=2) + "\n")
    print(_fmt(result.best_fitness))
    return EXIT_OK


def _parse_functions(text: str) -> tuple[int, ...]:
    try:
        ids = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"--functions must be a comma-separated list of ids, got {text!r}") from None
    _require(len(ids) > 0, "--functions is empty")
    for fid in ids:
        _check_function(fid)
    return ids


def cmd_table(args) -> int:
    functions = _parse_functions(args.functions) if args.functions else harness.DEFAULT_FUNCTIONS
    f12 = _load_f12(args.f12_params)
    if args.include_12:
        _require(f12 is not None, "--include-12 requires --f12-params")
        if 12 not in functions:
            functions = functions + (12,)
    _require(12 not in functions or f12 is not None, "function 12 needs --f12-params")
    _require(args.trials >= 1, "--trials must be >= 1")
    _require(args.population >= 3, "--population must be >= 3")
    _require(args.iterations >= 1, "--iterations must be >= 1")
    _require(args.tol > 0, "--tol must be positive")

    plan = harness.ExperimentPlan(
        functions=functions, trials=args.trials, base_seed=args.seed,
        population_size=args.population, max_iterations=args.iterations,
        tolerance=args.tol, elitist_leaders=not args.strict_leaders, f12_params=f12,
    )
    stats = harness.run_plan(
        plan, workers=args.workers,
        progress=lambda s: log.info("f%d %s: mean=%.6g var=%.6g success=%d/%d", s.function_id,
                                    s.optimizer, s.mean_best, s.variance_best, s.success_count, s.trials),
    )
    table = harness.results_table(stats, plan)
    _write_text(args.output, table.to_json() if args.format == "json" else table.to_csv())
    return EXIT_OK


def _validate_dist_args(args) -> None:
    _require(args.a >= 0, "--a must be non-negative")
    vals = [args.a, args.x, args.p1, args.p2, args.p3]
    _require(all(np.isfinite(vals)), "distribution parameters must be finite")
    _require(args.samples >= 1, "--samples must be >= 1")
    _require(args.bins >= 1, "--bins must be >= 1")


def _dists(args):
    return [distmath.LeaderUpdateDist(args.a, args.x, p) for p in (args.p1, args.p2, args.p3)]


def cmd_verify_dist(args) -> int:
    _validate_dist_args(args)
    _require(args.grid_points >= 256, "--grid-points must be >= 256")
    dists = _dists(args)
    if any(d.degenerate for d in dists):
        print("error: degenerate distribution: a leader term collapses to a point mass "
              "(a = 0 or x = p = 0)", file=sys.stderr)
        return EXIT_USAGE

    rng = make_rng(args.seed)
    samples = distmath.sample_gwo_update(args.a, args.x, args.p1, args.p2, args.p3, rng, args.samples)
    u, h = distmath.h_pdf_numeric(*dists, grid_points=args.grid_points)
    mu, sigma = distmath.update_moments(args.a, args.x, args.p1, args.p2, args.p3)
    normal = distmath.normal_pdf(u, mu, sigma)
    hist = distmath.build_histogram(samples, args.bins)
    idx = np.clip(np.searchsorted(hist.bin_edges, u, side="right") - 1, 0, len(hist.counts) - 1)
    inside = (u >= hist.bin_edges[0]) & (u <= hist.bin_edges[-1])
    empirical = np.where(inside, hist.density()[idx], 0.0)

    h_cdf = distmath.h_cdf_numeric(*dists, grid_points=args.grid_points)
    g_norms = [distmath.g_normalization(d) for d in dists]
    h_norm = float(np.trapezoid(h, u))
    # numeric h moments, from the grid
    h_mean = float(np.trapezoid(u * h, u) / h_norm)
    h_var = float(np.trapezoid((u - h_mean) ** 2 * h, u) / h_norm)
    summary = {
        "parameters": {"a": args.a, "x": args.x, "p": [args.p1, args.p2, args.p3],
                       "samples": args.samples, "seed": args.seed, "grid_points": args.grid_points},
        "normalization": {"g": g_norms, "h": h_norm},
        "moments": {
            "analytic": {"mean": mu, "variance": sigma**2},
            "numeric_h": {"mean": h_mean, "variance": h_var},
            "monte_carlo": {"mean": float(samples.mean()), "variance": float(samples.var())},
        },
        "ks": {
            "h_vs_monte_carlo": distmath.ks_distance(samples, h_cdf),
            "normal_vs_monte_carlo": distmath.ks_distance(
                samples, lambda z: distmath.normal_cdf(z, mu, sigma)),
        },
    }
    _write_text(args.output, _csv_text(
        ("u", "analytic_h", "normal_pdf", "empirical_frequency_density"),
        zip(u, h, normal, empirical),
    ))
    summary_text = json.dumps(summary, indent=2) + "\n"
    if args.summary:
        Path(args.summary).write_text(summary_text)
    else:
        sys.stderr.write(summary_text)

    bad = [v for v in g_norms + [h_norm] if abs(v - 1.0) > 0.01]
    if bad:
        print(f"check failed: normalisation off by more than 0.01: {bad}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_histogram(args) -> int:
    _validate_dist_args(args)
    a = args.a
    rng = make_rng(args.seed)
    samples = distmath.sample_gwo_update(a, args.x, args.p1, args.p2, args.p3, rng, args.samples)
    mu, sigma = distmath.update_moments(a, args.x, args.p1, args.p2, args.p3)
    hist = distmath.build_histogram(samples, args.bins)
    centers = hist.centers
    pdf = distmath.normal_pdf(centers, mu, sigma) if sigma > 0 else np.zeros_like(centers)
    rows = zip(centers, hist.counts.tolist(), hist.density(), pdf)
    _write_text(args.output, _csv_text(("u", "count", "empirical_frequency_density", "normal_pdf"), rows))
    return EXIT_OK


def cmd_list_benchmarks(args) -> int:
    specs = [s.describe() for s in benchmarks.registry()]
    if args.format == "json":
        text = json.dumps(specs, indent=2) + "\n"
    else:
        cols = ("id", "name", "dimension", "lower", "upper", "minimum", "multimodal")
        text = _csv_text(cols, ([s[c] for c in cols] for s in specs))
    _write_text(args.output, text)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _dist_flags(p, a_default):
    p.add_argument("--a", type=float, default=a_default, help="step parameter a")
    p.add_argument("--x", type=float, default=3.0, help="current position component")
    p.add_argument("--p1", type=float, default=0.5)
    p.add_argument("--p2", type=float, default=-1.2)
    p.add_argument("--p3", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--bins", type=int, default=80)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None, help="CSV path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bbgwo", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("optimize", help="single optimisation run, RunResult as JSON")
    p.add_argument("--optimizer", choices=[o.value for o in OptimizerId], default="bbgwo")
    p.add_argument("--function", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--population", type=int, default=20)
    p.add_argument("--iterations", type=int, default=500)
    p.add_argument("--strict-leaders", action="store_true",
                   help="pick leaders from current agents only (no elitism)")
    p.add_argument("--f12-params", default=None, help="JSON file with p and q for function 12")
    p.add_argument("-o", "--output", default="run_result.json")
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("table", help="GWO vs BBGWO results table over repeated trials")
    p.add_argument("--functions", default=None, help="comma-separated ids (default 1-11)")
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--seed", type=int, default=0, help="base seed; trial i uses seed + i")
    p.add_argument("--population", type=int, default=20)
    p.add_argument("--iterations", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--strict-leaders", action="store_true")
    p.add_argument("--include-12", action="store_true")
    p.add_argument("--f12-params", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("verify-dist", help="exact vs normal vs Monte Carlo update distribution")
    _dist_flags(p, 2.0)
    p.add_argument("--grid-points", type=int, default=4096)
    p.add_argument("--summary", default=None, help="JSON summary path (default: stderr)")
    p.set_defaults(handler=cmd_verify_dist)

    p = sub.add_parser("histogram", help="Monte Carlo histogram of the GWO update with normal PDF")
    _dist_flags(p, 2.0)
    p.set_defaults(handler=cmd_histogram)

    p = sub.add_parser("list-benchmarks", help="benchmark catalogue")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_list_benchmarks)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
