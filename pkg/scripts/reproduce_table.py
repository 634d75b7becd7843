"""Run the GWO vs BBGWO comparison at full scale and print it next to
reference numbers for the same setup.

    python scripts/reproduce_table.py --workers 4 -o results/table.csv
"""
import argparse
import logging
from pathlib import Path

from bbgwo.harness import ExperimentPlan, results_table, run_plan

# (minimum, gwo mean, bbgwo mean, gwo successes, bbgwo successes) reference values
REFERENCE = {
    1: (0, 5.0976e-23, 3.2750e-23, 30, 30),
    2: (0, 3.5800e-14, 2.3377e-14, 30, 30),
    3: (0, 0.0011, 7.3808e-4, 23, 27),
    4: (0, 28.1752, 28.1149, 0, 0),
    5: (0, 0.8667, 1.0333, 16, 12),
    6: (-7286.2, -5841.2, -5897.6, 0, 0),
    7: (0, 5.9172, 4.4231, 7, 11),
    8: (0, 8.5111e-13, 6.0325e-13, 30, 30),
    9: (0, 0.0059, 0.0062, 22, 22),
    10: (-29.6248, -14.6104, -12.4215, 0, 0),
    11: (-1.0316, -1.0316, -1.0316, 30, 30),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("-o", "--output", default="results/table.csv")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    plan = ExperimentPlan(trials=args.trials, base_seed=args.seed)
    stats = run_plan(plan, workers=args.workers,
                     progress=lambda s: logging.info("f%-2d %-5s done", s.function_id, s.optimizer))
    table = results_table(stats, plan)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(table.to_csv())
    out.with_suffix(".json").write_text(table.to_json())

    print(f"{'fn':>3} {'gwo mean':>12} {'(ref)':>12} {'bbgwo mean':>12} {'(ref)':>12}  succ gwo/bbgwo (ref)")
    for row in table.rows:
        fid = row["function_id"]
        _, gm, bm, gs, bs = REFERENCE[fid]
        print(f"{fid:>3} {row['gwo_mean']:>12.4g} {gm:>12.4g} {row['bbgwo_mean']:>12.4g} {bm:>12.4g}"
              f"  {row['gwo_success']:>2}/{row['bbgwo_success']:<2} ({gs}/{bs})")


if __name__ == "__main__":
    main()
