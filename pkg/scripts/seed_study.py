"""Compare every configured model against persistence over several synthetic seeds.

    python scripts/seed_study.py --seeds 0-7 --horizon 7
"""

import argparse
import time

import numpy as np

from leachgrid.config import RunConfig
from leachgrid.evaluation import persistence_heatmap, rolling_backtest
from leachgrid.synth import SynthConfig, generate
from leachgrid.timeseries import split_holdout


def parse_seeds(text):
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", default="0-4")
    ap.add_argument("--horizon", type=int, default=7)
    ap.add_argument("--models", default="persistence, ols, ols_log, gbt, mlp, arima_lite")
    ap.add_argument("--config")
    args = ap.parse_args()

    cfg = RunConfig.load(args.config)
    cfg.set("evaluate", "models", args.models)
    names = cfg.model_names()
    table = {}
    for seed in parse_seeds(args.seeds):
        t0 = time.perf_counter()
        series, exog = generate(SynthConfig(seed=seed))
        split = split_holdout(series, exog, cfg.getint("data", "validation_len"))
        row = {}
        for name in names:
            rep = rolling_backtest(lambda: cfg.build_model(name), split, args.horizon)
            row[name] = rep.score.value_percent
        row["best_k"] = min(v for _, _, v in persistence_heatmap(split, range(1, 15), (args.horizon,)))
        table[seed] = row
        print(f"seed {seed:>3} done in {time.perf_counter() - t0:.1f}s")

    cols = names + ["best_k"]
    print(f"\n{args.horizon}-day MAPE (%)")
    print("seed " + "".join(f"{c:>12}" for c in cols))
    for seed, row in table.items():
        print(f"{seed:>4} " + "".join(f"{row[c]:>12.3f}" for c in cols))
    base = np.array([row["persistence"] for row in table.values()])
    print("\nwins vs persistence:")
    for c in cols[1:]:
        wins = int(np.sum(np.array([row[c] for row in table.values()]) < base))
        print(f"  {c:<12} {wins}/{len(base)}")


if __name__ == "__main__":
    main()
