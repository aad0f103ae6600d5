"""Forecasting models behind one fit/predict contract, plus model files."""

from __future__ import annotations

import json
from pathlib import Path

from leachgrid.forecasters.arima import ArimaLiteConfig, ArimaLiteForecaster, ArimaLiteModel, fit_arima_lite
from leachgrid.forecasters.base import MAX_HORIZON, Forecaster, ForecastResult, forecast
from leachgrid.forecasters.gbt import GbtConfig, GbtForecaster, GbtModel, fit_gbt
from leachgrid.forecasters.linear import LinearForecaster, LinearModel, fit_linear
from leachgrid.forecasters.mlp import MlpConfig, MlpForecaster, MlpModel, fit_mlp
from leachgrid.forecasters.persistence import PersistenceConfig, PersistenceForecaster, persistence_forecast
from leachgrid.forecasters.supervised import LagWindowConfig, SupervisedForecaster, make_supervised

MODEL_FORMAT = "leachgrid-model"
MODEL_FORMAT_VERSION = 1

_KINDS = {
    "persistence": PersistenceForecaster,
    "arima_lite": ArimaLiteForecaster,
    "ols": LinearForecaster,
    "gbt": GbtForecaster,
    "mlp": MlpForecaster,
}


def save_model(model: Forecaster, path) -> None:
    """Write a fitted model as versioned JSON text."""
    payload = {"format": MODEL_FORMAT, "version": MODEL_FORMAT_VERSION, "model": model.to_dict()}
    Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n")


def load_model(path) -> Forecaster:
    payload = json.loads(Path(path).read_text())
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path}: not a {MODEL_FORMAT} file")
    if payload.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported model format version {payload.get('version')}")
    d = payload["model"]
    try:
        cls = _KINDS[d["kind"]]
    except KeyError:
        raise ValueError(f"{path}: unknown model kind {d.get('kind')!r}") from None
    return cls.from_dict(d)


__all__ = [
    "ArimaLiteConfig", "ArimaLiteForecaster", "ArimaLiteModel", "Forecaster", "ForecastResult",
    "GbtConfig", "GbtForecaster", "GbtModel", "LagWindowConfig", "LinearForecaster", "LinearModel",
    "MAX_HORIZON", "MlpConfig", "MlpForecaster", "MlpModel", "PersistenceConfig", "PersistenceForecaster",
    "SupervisedForecaster", "fit_arima_lite", "fit_gbt", "fit_linear", "fit_mlp", "forecast",
    "load_model", "make_supervised", "persistence_forecast", "save_model",
]
