"""Writes data/housing_like.csv: synthetic monthly housing starts, 12 building
permit series and a mortgage rate, shaped like the FRED extracts but random.

Starts follow a common stochastic trend that the permits lead by one month,
plus a monthly seasonal pattern, so log starts carry a unit root and the
permit growth rates carry predictive content.
"""
import argparse
import csv
import math

import numpy as np


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--rows", type=int, default=300)
    parser.add_argument("--series", type=int, default=12)
    parser.add_argument("--seed", type=int, default=20221027)
    parser.add_argument("--out", default="data/housing_like.csv")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    n, p = args.rows, args.series
    month = np.arange(n) % 12
    season = 0.15 * np.sin(2 * math.pi * (month - 2) / 12)

    trend = np.cumsum(rng.normal(0.0, 0.04, n))
    trend[n // 2 : n // 2 + 24] -= np.linspace(0.0, 0.6, 24)
    trend[n // 2 + 24 :] -= 0.6

    levels = rng.uniform(6.0, 9.0, p)
    loadings = rng.uniform(0.6, 1.4, p)
    permits = np.empty((n, p))
    for j in range(p):
        noise = np.zeros(n)
        for t in range(1, n):
            noise[t] = 0.5 * noise[t - 1] + rng.normal(0.0, 0.03)
        permits[:, j] = np.exp(levels[j] + loadings[j] * trend + season + noise)

    lead = np.concatenate([[0.0], trend[:-1]])
    starts = np.exp(7.0 + lead + 1.2 * season + rng.normal(0.0, 0.03, n))
    mortgage = np.clip(7.0 + np.cumsum(rng.normal(0.0, 0.12, n)), 2.5, None)

    with open(args.out, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["date", "starts"] + [f"permits_{j + 1:02d}" for j in range(p)] + ["mortgage30"])
        for t in range(n):
            year, mon = 1995 + t // 12, t % 12 + 1
            row = [f"{year}-{mon:02d}-01", f"{starts[t]:.4f}"]
            row += [f"{v:.4f}" for v in permits[t]]
            row.append(f"{mortgage[t]:.3f}")
            writer.writerow(row)


if __name__ == "__main__":
    main()
