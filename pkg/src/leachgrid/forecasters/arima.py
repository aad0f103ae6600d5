"""ARIMA without moving-average terms: difference d times, fit AR(p) with an
intercept by least squares, pick (p, d) by an AIC-like score."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from leachgrid.forecasters.base import Forecaster, check_horizon
from leachgrid.timeseries import DailySeries

MAX_P, MAX_D = 5, 2


def default_grid():
    return tuple(itertools.product(range(0, 6), range(0, 3)))


@dataclass(frozen=True)
class ArimaLiteConfig:
    grid: tuple[tuple[int, int], ...] = default_grid()  # (p, d) candidates

    def __post_init__(self):
        grid = tuple((int(p), int(d)) for p, d in self.grid)
        if not grid:
            raise ValueError("empty (p, d) grid")
        for p, d in grid:
            if not (0 <= p <= MAX_P and 0 <= d <= MAX_D):
                raise ValueError(f"order (p={p}, d={d}) outside p in [0, {MAX_P}], d in [0, {MAX_D}]")
        object.__setattr__(self, "grid", grid)

    @classmethod
    def single(cls, p: int, d: int) -> "ArimaLiteConfig":
        return cls(((p, d),))


@dataclass(frozen=True)
class ArimaLiteModel:
    p: int
    d: int
    intercept: float
    coefs: np.ndarray  # coefs[i] multiplies the value i+1 steps back
    criterion: float
    rss: float

    @property
    def required_history(self) -> int:
        return self.p + self.d

    def forecast(self, tail, horizon: int) -> np.ndarray:
        tail = np.asarray(tail, dtype=float)[len(tail) - self.required_history:]
        levels = [tail]
        for _ in range(self.d):
            levels.append(np.diff(levels[-1]))
        z = list(levels[-1])
        out = []
        for _ in range(horizon):
            nxt = self.intercept + sum(self.coefs[i] * z[-1 - i] for i in range(self.p))
            z.append(nxt)
            out.append(nxt)
        out = np.array(out)
        for k in range(self.d - 1, -1, -1):
            out = levels[k][-1] + np.cumsum(out)
        return out


def _lagged(z, p, n_eff):
    """Design (with intercept) and target for the last ``n_eff`` entries of ``z``."""
    start = len(z) - n_eff
    y = z[start:]
    cols = [np.ones(n_eff)] + [z[start - i:len(z) - i] for i in range(1, p + 1)]
    return np.column_stack(cols), y


def fit_arima_lite(series, cfg: ArimaLiteConfig | None = None) -> ArimaLiteModel:
    """Grid search over (p, d). Ties go to smaller d, then smaller p."""
    cfg = cfg or ArimaLiteConfig()
    y = series.values if isinstance(series, DailySeries) else np.asarray(series, dtype=float)
    max_p = max(p for p, _ in cfg.grid)
    max_d = max(d for _, d in cfg.grid)
    if len(y) < max(10 * max_p, max_p + max_d + 3):
        raise ValueError(f"series of length {len(y)} too short for AR order up to {max_p}")
    # every candidate is scored on the same number of target points
    n_eff = len(y) - max_p - max_d
    floor = n_eff * (1e-10 * max(1.0, float(np.mean(np.abs(y))))) ** 2
    best = None
    for p, d in sorted(cfg.grid, key=lambda pd: (pd[1], pd[0])):
        z = np.diff(y, n=d) if d else y
        A, target = _lagged(z, p, n_eff)
        try:
            w, *_ = np.linalg.lstsq(A, target, rcond=None)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(w)):
            continue
        resid = target - A @ w
        rss = float(resid @ resid)
        crit = n_eff * math.log(max(rss, floor) / n_eff) + 2 * (p + 1)
        if best is None or crit < best.criterion:
            best = ArimaLiteModel(p, d, float(w[0]), np.array(w[1:]), crit, rss)
    if best is None:
        raise RuntimeError("all ARIMA-lite candidate fits failed")
    return best


class ArimaLiteForecaster(Forecaster):
    uses_exog = False

    def __init__(self, cfg: ArimaLiteConfig | None = None):
        self.cfg = cfg or ArimaLiteConfig()
        self.model: ArimaLiteModel | None = None

    @property
    def model_id(self) -> str:
        return "arima_lite"

    def fit(self, series, exog=None, horizon=1):
        check_horizon(horizon)
        self.model = fit_arima_lite(series, self.cfg)
        return self

    @property
    def required_history(self) -> int:
        if self.model is None:
            raise RuntimeError("arima_lite is not fitted")
        return self.model.required_history

    def predict(self, tail, exog_row, horizon):
        return self.model.forecast(tail, horizon)

    def to_dict(self):
        m = self.model
        return {
            "kind": "arima_lite",
            "config": {"grid": [list(g) for g in self.cfg.grid]},
            "model": None if m is None else {
                "p": m.p, "d": m.d, "intercept": m.intercept, "coefs": m.coefs.tolist(),
                "criterion": m.criterion, "rss": m.rss,
            },
        }

    @classmethod
    def from_dict(cls, d):
        f = cls(ArimaLiteConfig(tuple(tuple(g) for g in d["config"]["grid"])))
        if d["model"] is not None:
            m = dict(d["model"])
            m["coefs"] = np.array(m["coefs"], dtype=float)
            f.model = ArimaLiteModel(**m)
        return f
