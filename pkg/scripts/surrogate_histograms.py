"""Histograms of the classic GWO update against its normal surrogate for
randomly drawn leader/agent positions (a = 2, 1e5 samples, 80 bins).

Writes one CSV per parameter set plus a summary of KS / total-variation
distances. Plot with any external tool, e.g. u vs empirical_frequency_density
as bars and u vs normal_pdf / analytic_h as lines.

    python scripts/surrogate_histograms.py --sets 9 -o results/surrogate
"""
import argparse
import csv
from pathlib import Path

import numpy as np

from bbgwo.core import make_rng
from bbgwo.distmath import (
    LeaderUpdateDist,
    build_histogram,
    compare_to_normal,
    h_pdf_numeric,
    normal_pdf,
    sample_gwo_update,
    update_moments,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sets", type=int, default=9)
    ap.add_argument("--a", type=float, default=2.0)
    ap.add_argument("--scale", type=float, default=10.0, help="positions drawn from U[-scale, scale]")
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--bins", type=int, default=80)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-o", "--output", default="results/surrogate")
    args = ap.parse_args()

    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    rng = make_rng(args.seed)
    summary = []
    for k in range(args.sets):
        x, p1, p2, p3 = rng.uniform(-args.scale, args.scale, 4)
        s = sample_gwo_update(args.a, x, p1, p2, p3, rng, args.samples)
        mu, sigma = update_moments(args.a, x, p1, p2, p3)
        hist = build_histogram(s, args.bins)
        cmp = compare_to_normal(hist, mu, sigma)
        u, h = h_pdf_numeric(*(LeaderUpdateDist(args.a, x, p) for p in (p1, p2, p3)))
        centres = hist.centers
        with open(out / f"set{k}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["u", "analytic_h", "normal_pdf", "empirical_frequency"])
            for c, f, hv in zip(centres, hist.density(), np.interp(centres, u, h)):
                w.writerow([repr(float(c)), repr(float(hv)), repr(float(normal_pdf(c, mu, sigma))), repr(float(f))])
        summary.append((k, x, p1, p2, p3, cmp.ks_distance, cmp.total_variation))
        print(f"set {k}: x={x:7.3f} p=({p1:7.3f},{p2:7.3f},{p3:7.3f})  KS={cmp.ks_distance:.4f}  "
              f"TV={cmp.total_variation:.4f}")

    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["set", "x", "p1", "p2", "p3", "ks", "total_variation"])
        w.writerows(summary)


if __name__ == "__main__":
    main()
