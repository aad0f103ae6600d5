"""Run configuration: INI-style sections, overridable from the command line."""

from __future__ import annotations

import configparser
import io
from pathlib import Path

from leachgrid.energy import Co2Factor, PumpEnergyModel, REFERENCE_PUMP_MODEL
from leachgrid.forecasters import (
    ArimaLiteConfig,
    ArimaLiteForecaster,
    Forecaster,
    GbtConfig,
    GbtForecaster,
    LagWindowConfig,
    LinearForecaster,
    MlpConfig,
    MlpForecaster,
    PersistenceConfig,
    PersistenceForecaster,
)

DEFAULTS = {
    "run": {"seed": "0"},
    "data": {
        "value_column": "value",
        "date_column": "date",
        "date_format": "%Y-%m-%d",
        "delimiter": ",",
        "validation_len": "100",
    },
    "evaluate": {
        "models": "persistence, ols, ols_log, gbt, mlp, arima_lite",
        "horizons": "1, 3, 7, 30",
        "refit": "false",
        "heatmap_k_max": "14",
        "zero_policy": "error",
    },
    "persistence": {"k": "7"},
    "window": {"K": "14", "use_exog": "true"},
    "gbt": {"n_trees": "100", "max_depth": "3", "learning_rate": "0.1", "min_samples_leaf": "5"},
    "mlp": {"layer_sizes": "16", "activation": "linear", "epochs": "200", "learning_rate": "0.01", "batch_size": "32"},
    "arima": {"p_max": "5", "d_max": "2"},
    "energy": {"slope": repr(REFERENCE_PUMP_MODEL.slope), "intercept": repr(REFERENCE_PUMP_MODEL.intercept),
               "co2_kg_per_kwh": "0.523", "model_file": ""},
    "savings": {"max_pump": "260", "activity_day": "max", "plan_days": "365"},
    "reservoir": {"capacity": "7500", "max_outflow": "260", "max_inflow": "800", "initial_level": "3750",
                  "policy": "maxdrain"},
    "synth": {"days": "635", "base_inflow": "150", "annual_amplitude": "50", "rain_coupling": "12",
              "noise_sd": "10", "start": "2018-01-01"},
}

MODEL_NAMES = ("persistence", "ols", "ols_log", "gbt", "gbt_log", "mlp", "mlp_log", "arima_lite")


class ConfigError(ValueError):
    pass


class RunConfig:
    """Thin wrapper over ConfigParser with typed getters."""

    def __init__(self, parser: configparser.ConfigParser):
        self.parser = parser

    @classmethod
    def load(cls, path=None) -> "RunConfig":
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str  # keep "K" distinct from "k"
        parser.read_dict(DEFAULTS)
        if path is not None:
            path = Path(path)
            if not path.is_file():
                raise ConfigError(f"config file not found: {path}")
            try:
                parser.read(path)
            except configparser.Error as exc:
                raise ConfigError(f"{path}: {exc}") from None
        return cls(parser)

    def set(self, section: str, key: str, value) -> None:
        if not self.parser.has_section(section):
            self.parser.add_section(section)
        self.parser.set(section, key, str(value))

    def get(self, section, key) -> str:
        try:
            return self.parser.get(section, key)
        except (configparser.NoSectionError, configparser.NoOptionError):
            raise ConfigError(f"missing config value [{section}] {key}") from None

    def getint(self, section, key) -> int:
        try:
            return int(self.get(section, key))
        except ValueError:
            raise ConfigError(f"[{section}] {key} must be an integer") from None

    def getfloat(self, section, key) -> float:
        try:
            return float(self.get(section, key))
        except ValueError:
            raise ConfigError(f"[{section}] {key} must be a number") from None

    def getbool(self, section, key) -> bool:
        try:
            return self.parser.getboolean(section, key)
        except ValueError:
            raise ConfigError(f"[{section}] {key} must be a boolean") from None

    def getlist(self, section, key, conv=str) -> list:
        raw = self.get(section, key)
        try:
            return [conv(x.strip()) for x in raw.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"[{section}] {key}: cannot parse {raw!r}") from None

    def dump(self) -> str:
        buf = io.StringIO()
        self.parser.write(buf)
        return buf.getvalue()

    def write(self, path) -> None:
        Path(path).write_text(self.dump())

    # builders

    def seed(self) -> int:
        return self.getint("run", "seed")

    def model_names(self) -> list[str]:
        names = self.getlist("evaluate", "models")
        for n in names:
            if n not in MODEL_NAMES:
                raise ConfigError(f"no model configuration for {n!r}; known models: {', '.join(MODEL_NAMES)}")
        return names

    def build_model(self, name: str) -> Forecaster:
        window = LagWindowConfig(self.getint("window", "K"))
        use_exog = self.getbool("window", "use_exog")
        log = name.endswith("_log")
        base = name[:-4] if log else name
        if base == "persistence" and not log:
            return PersistenceForecaster(PersistenceConfig(self.getint("persistence", "k")))
        if base == "arima_lite" and not log:
            grid = tuple((p, d) for p in range(self.getint("arima", "p_max") + 1)
                         for d in range(self.getint("arima", "d_max") + 1))
            return ArimaLiteForecaster(ArimaLiteConfig(grid))
        if base == "ols":
            return LinearForecaster(window, use_exog, log)
        if base == "gbt":
            cfg = GbtConfig(
                n_trees=self.getint("gbt", "n_trees"),
                max_depth=self.getint("gbt", "max_depth"),
                learning_rate=self.getfloat("gbt", "learning_rate"),
                min_samples_leaf=self.getint("gbt", "min_samples_leaf"),
            )
            return GbtForecaster(window, cfg, use_exog, log)
        if base == "mlp":
            cfg = MlpConfig(
                layer_sizes=tuple(self.getlist("mlp", "layer_sizes", int)),
                activation=self.get("mlp", "activation"),
                epochs=self.getint("mlp", "epochs"),
                learning_rate=self.getfloat("mlp", "learning_rate"),
                batch_size=self.getint("mlp", "batch_size"),
                seed=self.seed(),
            )
            return MlpForecaster(window, cfg, use_exog, log)
        raise ConfigError(f"no model configuration for {name!r}; known models: {', '.join(MODEL_NAMES)}")

    def energy_model(self) -> PumpEnergyModel:
        path = self.get("energy", "model_file")
        if path:
            return PumpEnergyModel.load(path)
        return PumpEnergyModel(self.getfloat("energy", "slope"), self.getfloat("energy", "intercept"))

    def co2(self) -> Co2Factor:
        return Co2Factor(self.getfloat("energy", "co2_kg_per_kwh"))
