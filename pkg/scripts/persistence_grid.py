"""Print the persistence MAPE grid over averaging window k and horizon N.

    python scripts/persistence_grid.py --series inflow.csv
    python scripts/persistence_grid.py --seed 3      # synthetic data
"""

import argparse

from leachgrid.evaluation import persistence_heatmap
from leachgrid.synth import SynthConfig, generate
from leachgrid.timeseries import read_series_csv, split_holdout


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--series", help="daily series CSV; synthetic data if omitted")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--k-max", type=int, default=14)
    ap.add_argument("--horizons", default="1,3,7,30")
    ap.add_argument("--validation-len", type=int, default=100)
    args = ap.parse_args()

    series = read_series_csv(args.series) if args.series else generate(SynthConfig(seed=args.seed))[0]
    horizons = [int(h) for h in args.horizons.split(",")]
    split = split_holdout(series, None, args.validation_len)
    cells = {(k, n): v for k, n, v in persistence_heatmap(split, range(1, args.k_max + 1), horizons)}

    print(" k \\ N" + "".join(f"{n:>9}" for n in horizons))
    for k in range(1, args.k_max + 1):
        print(f"{k:>6}" + "".join(f"{cells[k, n]:>9.2f}" for n in horizons))
    for n in horizons:
        best = min(range(1, args.k_max + 1), key=lambda k: cells[k, n])
        print(f"best k for N={n}: {best} ({cells[best, n]:.2f}%)")


if __name__ == "__main__":
    main()
