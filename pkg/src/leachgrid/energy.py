"""Linear pump energy model and CO2 conversion.

Energy is in Wh throughout; kWh appears only in the CO2 factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

HOURS_PER_DAY = 24.0


@dataclass(frozen=True)
class PumpEnergyModel:
    """Power draw ``slope * volume + intercept`` in W, held for a whole day."""

    slope: float  # W per m3
    intercept: float  # W
    hours_per_day: float = HOURS_PER_DAY
    n_samples: int = 0
    fit_date: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.slope) and math.isfinite(self.intercept)):
            raise ValueError("slope and intercept must be finite")
        if self.hours_per_day != HOURS_PER_DAY:
            raise ValueError("hours_per_day is fixed at 24")

    def save(self, path):
        lines = [
            f"slope = {self.slope!r}",
            f"intercept = {self.intercept!r}",
            f"hours_per_day = {self.hours_per_day!r}",
            f"n_samples = {self.n_samples}",
            f"fit_date = {self.fit_date}",
        ]
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "PumpEnergyModel":
        kv = {}
        for line in Path(path).read_text().splitlines():
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}: malformed line {line!r}")
            kv[key.strip()] = value.strip()
        try:
            return cls(
                slope=float(kv["slope"]),
                intercept=float(kv["intercept"]),
                hours_per_day=float(kv.get("hours_per_day", HOURS_PER_DAY)),
                n_samples=int(kv.get("n_samples", 0)),
                fit_date=kv.get("fit_date", ""),
            )
        except KeyError as exc:
            raise ValueError(f"{path}: missing key {exc}") from None


# Coefficients reported for the leachate treatment facility.
REFERENCE_PUMP_MODEL = PumpEnergyModel(slope=388.12, intercept=67504.55)


@dataclass(frozen=True)
class Co2Factor:
    kg_per_kwh: float = 0.523

    def __post_init__(self):
        if not self.kg_per_kwh > 0:
            raise ValueError("CO2 factor must be strictly positive")


def fit_ols_1d(x, y, fit_date: date | None = None) -> PumpEnergyModel:
    """Least-squares line through (x, y) using the mean-centred closed form."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be equal-length 1-D sequences")
    if len(x) < 3:
        raise ValueError("need at least 3 samples to fit")
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = float(dx @ dx)
    if sxx == 0:
        raise ValueError("degenerate regressor: x has zero variance")
    slope = float(dx @ (y - ym)) / sxx
    intercept = float(ym - slope * xm)
    return PumpEnergyModel(
        slope=slope,
        intercept=intercept,
        n_samples=len(x),
        fit_date=fit_date.isoformat() if fit_date else "",
    )


def daily_consumption(model: PumpEnergyModel, volume):
    """Energy in Wh for a day pumping ``volume`` m3. Works on scalars and arrays."""
    v = np.asarray(volume, dtype=float)
    if np.any(v < 0):
        raise ValueError("pumping volume must be non-negative")
    out = model.hours_per_day * (model.slope * v + model.intercept)
    return float(out) if out.ndim == 0 else out


def co2_of_energy(factor: Co2Factor, energy_wh: float) -> float:
    """kg CO2 for ``energy_wh`` Wh."""
    if energy_wh < 0:
        raise ValueError("energy must be non-negative")
    return factor.kg_per_kwh * (energy_wh / 1000.0)
