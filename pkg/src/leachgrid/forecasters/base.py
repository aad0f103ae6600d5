"""Shared forecast result type and the uniform fit/predict contract."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np

from leachgrid.timeseries import DailySeries, ExogenousTable, from_day

MAX_HORIZON = 30


def check_horizon(n: int) -> int:
    n = int(n)
    if not 1 <= n <= MAX_HORIZON:
        raise ValueError(f"horizon must be in [1, {MAX_HORIZON}], got {n}")
    return n


@dataclass(frozen=True)
class ForecastResult:
    model_id: str
    origin_day: int  # last observed day
    predictions: np.ndarray

    def __post_init__(self):
        p = np.array(self.predictions, dtype=float)
        if p.ndim != 1 or len(p) < 1 or not np.all(np.isfinite(p)):
            raise ValueError("predictions must be a non-empty finite 1-D sequence")
        p.setflags(write=False)
        object.__setattr__(self, "predictions", p)

    @property
    def horizon(self) -> int:
        return len(self.predictions)

    @property
    def origin(self) -> date:
        return from_day(self.origin_day)

    def as_series(self) -> DailySeries:
        """Predictions dated from the day after the origin."""
        return DailySeries(self.origin_day + 1, self.predictions)


class Forecaster:
    """Base class: ``fit`` on a series, then ``predict`` from a history tail.

    ``predict`` receives only values up to and including the origin day;
    subclasses must not hold on to training data for prediction.
    """

    model_id = "base"
    uses_exog = False

    def fit(self, series: DailySeries, exog: ExogenousTable | None = None, horizon: int = 1) -> "Forecaster":
        raise NotImplementedError

    @property
    def required_history(self) -> int:
        raise NotImplementedError

    def predict(self, tail: np.ndarray, exog_row: np.ndarray | None, horizon: int) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def forecast(
    model: Forecaster,
    history: DailySeries | np.ndarray,
    exog_at_origin: np.ndarray | None = None,
    horizon: int = 1,
    origin_day: int | None = None,
) -> ForecastResult:
    """Run ``model`` from the end of ``history``; predictions are clamped to >= 0."""
    horizon = check_horizon(horizon)
    if isinstance(history, DailySeries):
        values = history.values
        origin_day = history.end_day if origin_day is None else origin_day
    else:
        values = np.asarray(history, dtype=float)
        origin_day = len(values) - 1 if origin_day is None else origin_day
    need = model.required_history
    if len(values) < need:
        raise ValueError(f"{model.model_id} needs {need} days of history, got {len(values)}")
    tail = values[len(values) - need:] if need else values[:0]
    raw = np.asarray(model.predict(tail, exog_at_origin, horizon), dtype=float)
    if raw.shape != (horizon,) or not np.all(np.isfinite(raw)):
        raise RuntimeError(f"{model.model_id} produced invalid predictions {raw!r}")
    return ForecastResult(model.model_id, int(origin_day), np.maximum(raw, 0.0))
