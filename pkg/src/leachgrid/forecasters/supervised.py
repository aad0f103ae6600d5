"""Lag-window reformulation: the last K values (plus exogenous values on the
origin day) map to the next N values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from leachgrid.forecasters.base import Forecaster, check_horizon
from leachgrid.timeseries import DailySeries, ExogenousTable, align_exog


@dataclass(frozen=True)
class LagWindowConfig:
    K: int = 14
    N: int = 1

    def __post_init__(self):
        if self.K < 1 or self.N < 1:
            raise ValueError("K and N must be >= 1")


def make_supervised(series, exog: ExogenousTable | np.ndarray | None, cfg: LagWindowConfig):
    """Return ``(design, targets)`` with ``len - K - N + 1`` rows."""
    values = series.values if isinstance(series, DailySeries) else np.asarray(series, dtype=float)
    K, N = cfg.K, cfg.N
    n_rows = len(values) - K - N + 1
    if n_rows < 1:
        raise ValueError(f"series of length {len(values)} too short for K={K}, N={N}")
    idx = np.arange(n_rows)[:, None]
    design = values[idx + np.arange(K)]
    targets = values[idx + K + np.arange(N)]
    if exog is not None:
        if isinstance(exog, ExogenousTable):
            if isinstance(series, DailySeries):
                exog = align_exog(series, exog)
            exog = exog.matrix()
        exog = np.asarray(exog, dtype=float)
        if len(exog) != len(values):
            raise ValueError("exogenous rows must match the series length")
        # exogenous values on the origin day, i.e. the last lag day
        design = np.hstack([design, exog[K - 1:K - 1 + n_rows]])
    return design, targets


class SupervisedForecaster(Forecaster):
    """Direct multi-output strategy over a lag window."""

    kind = "supervised"

    def __init__(self, window: LagWindowConfig | None = None, use_exog: bool = True, log_target: bool = False):
        self.window = window or LagWindowConfig()
        self.use_exog = use_exog
        # fit lags and targets as log1p(values); squared error then tracks relative error
        self.log_target = log_target
        self.regressor = None
        self.horizon = None
        self.uses_exog = False
        self.exog_names: list[str] = []

    @property
    def model_id(self) -> str:
        return self.kind + ("_log" if self.log_target else "") + ("_exog" if self.uses_exog else "")

    @property
    def required_history(self) -> int:
        return self.window.K

    def _fit_regressor(self, design, targets):
        raise NotImplementedError

    def fit(self, series, exog=None, horizon=1):
        horizon = check_horizon(horizon)
        self.horizon = horizon
        self.uses_exog = bool(self.use_exog and exog is not None and len(exog.names) > 0)
        self.exog_names = exog.names if self.uses_exog else []
        values = series.values if isinstance(series, DailySeries) else np.asarray(series, dtype=float)
        if self.log_target:
            values = np.log1p(values)
        exog_m = None
        if self.uses_exog:
            exog_m = align_exog(series, exog).matrix() if isinstance(series, DailySeries) else exog.matrix()
        design, targets = make_supervised(values, exog_m, LagWindowConfig(self.window.K, horizon))
        self.regressor = self._fit_regressor(design, targets)
        return self

    def predict(self, tail, exog_row, horizon):
        if self.regressor is None:
            raise RuntimeError(f"{self.model_id} is not fitted")
        if horizon > self.horizon:
            raise ValueError(f"{self.model_id} was fitted for horizon {self.horizon}, asked for {horizon}")
        x = np.asarray(tail[-self.window.K:], dtype=float)
        if self.log_target:
            x = np.log1p(x)
        if self.uses_exog:
            if exog_row is None:
                raise ValueError(f"{self.model_id} needs exogenous values at the origin")
            x = np.concatenate([x, np.asarray(exog_row, dtype=float)])
        out = self.regressor.predict(x[None, :])[0, :horizon]
        return np.expm1(out) if self.log_target else out

    def to_dict(self):
        return {
            "kind": self.kind,
            "window": {"K": self.window.K},
            "use_exog": self.use_exog,
            "log_target": self.log_target,
            "uses_exog": self.uses_exog,
            "exog_names": list(self.exog_names),
            "horizon": self.horizon,
            "regressor": None if self.regressor is None else self.regressor.to_dict(),
        }

    def _restore(self, d, regressor_cls):
        self.uses_exog = d["uses_exog"]
        self.exog_names = list(d["exog_names"])
        self.horizon = d["horizon"]
        if d["regressor"] is not None:
            self.regressor = regressor_cls.from_dict(d["regressor"])
        return self
