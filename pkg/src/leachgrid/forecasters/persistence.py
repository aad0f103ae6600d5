from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from leachgrid.forecasters.base import Forecaster, ForecastResult, check_horizon
from leachgrid.timeseries import DailySeries


@dataclass(frozen=True)
class PersistenceConfig:
    k: int = 7

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")


def window_mean(window) -> float:
    """Mean taken relative to the window minimum, so a constant window maps to itself exactly."""
    lo = float(np.min(window))
    return lo + float(np.mean(np.asarray(window) - lo))


def persistence_forecast(history: DailySeries, cfg: PersistenceConfig, horizon: int) -> ForecastResult:
    """Repeat the mean of the last ``k`` values for every step."""
    horizon = check_horizon(horizon)
    if len(history) < cfg.k:
        raise ValueError(f"history of {len(history)} days is shorter than k={cfg.k}")
    level = window_mean(history.values[-cfg.k:])
    return ForecastResult(f"persistence_k{cfg.k}", history.end_day, np.full(horizon, level))


class PersistenceForecaster(Forecaster):
    uses_exog = False

    def __init__(self, cfg: PersistenceConfig | None = None):
        self.cfg = cfg or PersistenceConfig()
        self.model_id = f"persistence_k{self.cfg.k}"

    def fit(self, series, exog=None, horizon=1):
        return self

    @property
    def required_history(self) -> int:
        return self.cfg.k

    def predict(self, tail, exog_row, horizon):
        return np.full(horizon, window_mean(tail[-self.cfg.k:]))

    def to_dict(self):
        return {"kind": "persistence", "config": {"k": self.cfg.k}}

    @classmethod
    def from_dict(cls, d):
        return cls(PersistenceConfig(**d["config"]))
