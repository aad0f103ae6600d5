"""Synthetic leachate inflow with weather covariates.

Rainfall follows a two-state (wet/dry) Markov chain whose wet-day
probability peaks in winter; wet days draw gamma-distributed amounts.
Inflow is base + annual sinusoid + rain_coupling * rainfall + noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np

from leachgrid.timeseries import DailySeries, ExogenousTable, Unit, to_day

MAX_INFLOW = 800.0


@dataclass(frozen=True)
class SynthConfig:
    days: int = 635
    base_inflow: float = 150.0  # m3/day
    annual_amplitude: float = 50.0  # m3/day
    rain_coupling: float = 12.0  # m3 per mm
    noise_sd: float = 10.0  # m3/day
    seed: int = 0
    start: date = date(2018, 1, 1)

    def __post_init__(self):
        if self.days < 30:
            raise ValueError("days must be >= 30")
        if self.seed is None:
            raise ValueError("seed is mandatory")
        if self.base_inflow < 0 or self.annual_amplitude < 0 or self.rain_coupling < 0 or self.noise_sd < 0:
            raise ValueError("base, amplitude, coupling and noise must be non-negative")


def _rainfall(rng, t) -> np.ndarray:
    season = np.cos(2 * np.pi * t / 365.25)  # +1 in early January
    p_wet_after_dry = 0.25 + 0.15 * season
    p_wet_after_wet = 0.65 + 0.15 * season
    wet = np.zeros(len(t), dtype=bool)
    u = rng.random(len(t))
    for i in range(1, len(t)):
        wet[i] = u[i] < (p_wet_after_wet[i] if wet[i - 1] else p_wet_after_dry[i])
    amounts = rng.gamma(shape=0.8, scale=6.0, size=len(t))
    return np.where(wet, amounts, 0.0)


def generate(cfg: SynthConfig) -> tuple[DailySeries, ExogenousTable]:
    rng = np.random.default_rng(cfg.seed)
    n = cfg.days
    t = np.arange(n, dtype=float)
    rain = _rainfall(rng, t)
    season = np.cos(2 * np.pi * t / 365.25)
    noise = rng.normal(0.0, 1.0, n) * cfg.noise_sd
    inflow = cfg.base_inflow + cfg.annual_amplitude * season + cfg.rain_coupling * rain + noise
    inflow = np.clip(inflow, 0.0, MAX_INFLOW)

    # uninformative covariates: not used to build the inflow
    temperature = 10.0 - 8.0 * season + rng.normal(0, 2.5, n)
    pressure = 1013.0 + rng.normal(0, 8.0, n)
    humidity = np.clip(75.0 + 10.0 * season + rng.normal(0, 8.0, n), 0, 100)
    wind = rng.uniform(0.0, 360.0, n)
    voltage = 24.0 + rng.normal(0, 0.3, n)
    power = 500.0 + rng.normal(0, 60.0, n)

    start = to_day(cfg.start)
    series = DailySeries(start, inflow, Unit.CUBIC_METERS_PER_DAY)
    exog = ExogenousTable(
        start,
        {
            "rainfall_mm": rain,
            "air_pressure_hpa": pressure,
            "temperature_c": temperature,
            "wind_direction_deg": wind,
            "humidity_pct": humidity,
            "battery_voltage_v": voltage,
            "power_flow_w": power,
        },
    )
    return series, exog
