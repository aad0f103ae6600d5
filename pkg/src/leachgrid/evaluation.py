"""Multi-step MAPE and rolling-origin backtests over a holdout window."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from leachgrid.forecasters import Forecaster, PersistenceConfig, PersistenceForecaster, forecast
from leachgrid.timeseries import DatasetSplit, DailySeries, from_day

DEFAULT_HORIZONS = (1, 3, 7, 30)
ZERO_EPSILON = 1.0  # m3/day substituted for zero actuals when allowed


@dataclass(frozen=True)
class MapeScore:
    value_percent: float
    M: int
    N: int

    def __post_init__(self):
        if self.value_percent < 0 or self.M < 1 or self.N < 1:
            raise ValueError("invalid MAPE score")


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return a[None, :] if a.ndim == 1 else a


def percentage_errors(actuals, forecasts, zero_policy: str = "error") -> np.ndarray:
    """Per-term absolute percentage errors, same shape as the inputs."""
    y, yhat = _as_matrix(actuals), _as_matrix(forecasts)
    if y.shape != yhat.shape or y.ndim != 2 or y.size == 0:
        raise ValueError(f"shape mismatch: actuals {y.shape} vs forecasts {yhat.shape}")
    denom = np.abs(y)
    if np.any(denom == 0):
        if zero_policy != "epsilon":
            raise ValueError("MAPE undefined at zero actual")
        denom = np.where(denom == 0, ZERO_EPSILON, denom)
    return 100.0 * np.abs(y - yhat) / denom


def mape_multistep(actuals, forecasts, zero_policy: str = "error") -> MapeScore:
    """Mean absolute percentage error over M forecasts of N steps each."""
    ape = percentage_errors(actuals, forecasts, zero_policy)
    M, N = ape.shape
    return MapeScore(float(ape.sum() / (M * N)), M, N)


@dataclass(frozen=True)
class BacktestReport:
    model_id: str
    horizon: int
    origin_days: np.ndarray  # (M,)
    actuals: np.ndarray  # (M, N)
    forecasts: np.ndarray  # (M, N)
    score: MapeScore
    validation_start: int
    validation_len: int

    @property
    def per_origin_mape(self) -> np.ndarray:
        return percentage_errors(self.actuals, self.forecasts, "epsilon").mean(axis=1)

    def to_csv(self, path) -> None:
        """One row per origin per step."""
        ape = percentage_errors(self.actuals, self.forecasts, "epsilon")
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["model", "origin", "step", "target_date", "actual", "forecast", "ape_percent"])
            for m, origin in enumerate(self.origin_days):
                for j in range(self.horizon):
                    w.writerow([
                        self.model_id, from_day(origin).isoformat(), j + 1, from_day(origin + j + 1).isoformat(),
                        repr(float(self.actuals[m, j])), repr(float(self.forecasts[m, j])), repr(float(ape[m, j])),
                    ])


def rolling_backtest(
    factory: Callable[[], Forecaster],
    split: DatasetSplit,
    horizon: int,
    refit: bool = False,
    zero_policy: str = "error",
) -> BacktestReport:
    """Slide the origin from the last training day to ``validation_len - N`` days later.

    Each forecast sees only values up to its origin. With ``refit`` the model
    is re-trained on that history at every origin, otherwise once on train.
    """
    V = split.validation_len
    if horizon > V:
        raise ValueError(f"horizon {horizon} exceeds the {V}-day validation window")
    full = split.full_series()
    exog = split.full_exog()
    T = len(split.train)
    model = None
    if not refit:
        model = factory().fit(split.train, split.train_exog, horizon)
    M = V - horizon + 1
    origins, actuals, preds = [], [], []
    for i in range(M):
        cut = T + i  # history = full[:cut], origin index cut - 1
        history = full.slice(0, cut)
        hist_exog = exog.slice(0, cut) if exog is not None else None
        if refit:
            model = factory().fit(history, hist_exog, horizon)
        exog_row = hist_exog.matrix()[-1] if (hist_exog is not None and model.uses_exog) else None
        result = forecast(model, history, exog_row, horizon)
        origins.append(result.origin_day)
        preds.append(result.predictions)
        actuals.append(full.values[cut:cut + horizon])
    actuals = np.array(actuals)
    preds = np.array(preds)
    return BacktestReport(
        model_id=model.model_id,
        horizon=horizon,
        origin_days=np.array(origins, dtype=np.int64),
        actuals=actuals,
        forecasts=preds,
        score=mape_multistep(actuals, preds, zero_policy),
        validation_start=split.validation.start_day,
        validation_len=V,
    )


@dataclass(frozen=True)
class RankingRow:
    rank: int
    model_id: str
    mape_percent: float
    beats_baseline: bool
    is_baseline: bool


def compare_models(reports: Sequence[BacktestReport], baseline_prefix: str = "persistence") -> list[RankingRow]:
    """Rank by ascending MAPE (ties by model id) and flag rows beating the baseline."""
    if not reports:
        raise ValueError("no reports to compare")
    keys = {(r.horizon, r.validation_start, r.validation_len) for r in reports}
    if len(keys) > 1:
        raise ValueError(f"reports cover different horizons or validation windows: {sorted(keys)}")
    baselines = [r for r in reports if r.model_id.startswith(baseline_prefix)]
    if not baselines:
        raise ValueError(f"no {baseline_prefix} baseline among the reports")
    base = min(r.score.value_percent for r in baselines)
    ordered = sorted(reports, key=lambda r: (r.score.value_percent, r.model_id))
    return [
        RankingRow(
            rank=i + 1,
            model_id=r.model_id,
            mape_percent=r.score.value_percent,
            beats_baseline=r.score.value_percent < base,
            is_baseline=r.model_id.startswith(baseline_prefix),
        )
        for i, r in enumerate(ordered)
    ]


def persistence_heatmap(split: DatasetSplit, ks=range(1, 15), horizons=DEFAULT_HORIZONS) -> list[tuple[int, int, float]]:
    """MAPE of the k-day mean baseline for every (k, N)."""
    rows = []
    for k in ks:
        for n in horizons:
            rep = rolling_backtest(lambda k=k: PersistenceForecaster(PersistenceConfig(k)), split, n, zero_policy="epsilon")
            rows.append((k, n, rep.score.value_percent))
    return rows
