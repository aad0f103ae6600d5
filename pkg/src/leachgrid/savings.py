"""Peak-shift energy savings and their CO2 equivalents.

Weeks are complete Monday..Sunday blocks inside the plan; partial weeks at
either end only count towards annual consumption.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

import numpy as np

from leachgrid.energy import Co2Factor, PumpEnergyModel, co2_of_energy, daily_consumption
from leachgrid.timeseries import DailySeries

MAX_INFLOW = 800.0  # m3/day
MAX_PUMP = 260.0  # m3/day
WEEKDAY_NAMES = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")


@dataclass(frozen=True)
class YearPlan:
    """Daily pumping volumes with a calendar anchor (0 = Monday)."""

    daily_volumes: np.ndarray
    start_weekday: int = 0

    def __post_init__(self):
        v = np.array(self.daily_volumes, dtype=float)
        if v.ndim != 1 or len(v) == 0:
            raise ValueError("plan needs a non-empty 1-D volume sequence")
        if not np.all(np.isfinite(v)) or np.any(v < 0) or np.any(v > MAX_INFLOW):
            raise ValueError(f"plan volumes must lie in [0, {MAX_INFLOW}] m3/day")
        if not 0 <= self.start_weekday <= 6:
            raise ValueError("start_weekday must be in 0..6")
        v.setflags(write=False)
        object.__setattr__(self, "daily_volumes", v)

    @classmethod
    def from_series(cls, series: DailySeries, days: int | None = 365) -> "YearPlan":
        values = series.values if days is None else series.values[:days]
        return cls(values, series.start_date.weekday())

    @classmethod
    def from_start_date(cls, start: date, volumes) -> "YearPlan":
        return cls(volumes, start.weekday())

    def weeks(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """(workday indices, weekend indices) for every complete week."""
        first = (7 - self.start_weekday) % 7
        out = []
        for s in range(first, len(self.daily_volumes) - 6, 7):
            out.append((np.arange(s, s + 5), np.arange(s + 5, s + 7)))
        if not out:
            raise ValueError("plan contains no complete Monday-Sunday week")
        return out


def _activity_day(plan: YearPlan, model: PumpEnergyModel, week_start: int, activity_day: str) -> int:
    if activity_day == "max":
        energy = daily_consumption(model, plan.daily_volumes[week_start:week_start + 7])
        return week_start + int(np.argmax(energy))
    if activity_day not in WEEKDAY_NAMES:
        raise ValueError(f"activity_day must be 'max' or one of {WEEKDAY_NAMES}")
    return week_start + WEEKDAY_NAMES.index(activity_day)


def weekly_shift_energy(plan: YearPlan, model: PumpEnergyModel, activity_day: str = "max") -> float:
    """Half a day of consumption on one activity day per week, summed over weeks."""
    days = [_activity_day(plan, model, wd[0], activity_day) for wd, _ in plan.weeks()]
    return 0.5 * float(np.sum(daily_consumption(model, plan.daily_volumes[days])))


def shortterm_savings(plan: YearPlan, model: PumpEnergyModel, mode: str = "literal", activity_day: str = "max") -> float:
    """Short-term figure in Wh.

    ``literal``: annual consumption minus the weekly half-day shift.
    ``shift_only``: the shifted quantity alone.
    """
    shift = weekly_shift_energy(plan, model, activity_day)
    if mode == "shift_only":
        return shift
    if mode != "literal":
        raise ValueError("mode must be 'literal' or 'shift_only'")
    annual = float(np.sum(daily_consumption(model, plan.daily_volumes)))
    return annual - shift


def weekly_midterm_terms(plan: YearPlan, model: PumpEnergyModel, max_pump: float = MAX_PUMP) -> np.ndarray:
    """Per week: (workday energy, weekend spare-capacity energy)."""
    if not max_pump > 0:
        raise ValueError("max_pump must be positive")
    x = plan.daily_volumes
    rows = []
    for work, weekend in plan.weeks():
        spare = np.maximum(max_pump - x[weekend], 0.0)
        rows.append((float(np.sum(daily_consumption(model, x[work]))), float(np.sum(daily_consumption(model, spare)))))
    return np.array(rows)


def midterm_savings(plan: YearPlan, model: PumpEnergyModel, max_pump: float = MAX_PUMP) -> float:
    """Sum over weeks of min(workday energy, weekend shift capacity) in Wh."""
    terms = weekly_midterm_terms(plan, model, max_pump)
    return float(np.sum(np.minimum(terms[:, 0], terms[:, 1])))


def discount_by_uncertainty(energy_m: float, mape_fraction: float) -> float:
    if energy_m < 0:
        raise ValueError("energy must be non-negative")
    m = min(max(float(mape_fraction), 0.0), 1.0)
    return (1.0 - m) * energy_m


@dataclass(frozen=True)
class SavingsReport:
    E_s_literal: float
    E_s_shift_only: float
    E_m: float
    E_m_discounted: float
    mape_used: float  # fraction
    co2_s_literal: float
    co2_s_shift_only: float
    co2_m: float
    co2_m_discounted: float
    assumptions: list[str] = field(default_factory=list)

    FIGURES = (
        ("E_s_literal", "Wh"), ("E_s_shift_only", "Wh"), ("E_m", "Wh"), ("E_m_discounted", "Wh"),
        ("mape_used", "fraction"), ("co2_s_literal", "kg"), ("co2_s_shift_only", "kg"),
        ("co2_m", "kg"), ("co2_m_discounted", "kg"),
    )

    def to_text(self) -> str:
        lines = ["Savings report", ""]
        for name, unit in self.FIGURES:
            lines.append(f"{name:<18} {getattr(self, name):>22.3f} {unit}")
        lines += ["", "Assumptions:"]
        lines += [f"  - {a}" for a in self.assumptions]
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["quantity", "value", "unit"])
        for name, unit in self.FIGURES:
            w.writerow([name, repr(float(getattr(self, name))), unit])
        for a in self.assumptions:
            w.writerow(["assumption", a, ""])
        return buf.getvalue()

    def write(self, out_dir, stem: str = "savings_report") -> None:
        out_dir = Path(out_dir)
        (out_dir / f"{stem}.txt").write_text(self.to_text())
        (out_dir / f"{stem}.csv").write_text(self.to_csv())


def build_report(
    plan: YearPlan,
    model: PumpEnergyModel,
    co2: Co2Factor | None = None,
    mape_percent: float = 0.0,
    max_pump: float = MAX_PUMP,
    activity_day: str = "max",
) -> SavingsReport:
    """Assemble every savings figure; MAPE comes in as a percent."""
    co2 = co2 or Co2Factor()
    mape = min(max(mape_percent / 100.0, 0.0), 1.0)
    e_lit = shortterm_savings(plan, model, "literal", activity_day)
    e_shift = shortterm_savings(plan, model, "shift_only", activity_day)
    e_m = midterm_savings(plan, model, max_pump)
    e_md = discount_by_uncertainty(e_m, mape)
    weeks = len(plan.weeks())
    assumptions = [
        f"pump energy model C(x) = {model.hours_per_day:g} h * ({model.slope!r} W/m3 * x + {model.intercept!r} W)",
        f"CO2 factor {co2.kg_per_kwh!r} kg/kWh",
        f"max pumping capacity {max_pump!r} m3/day; weekend spare volume clamped at 0",
        f"weekly activity day: {activity_day}; half a day of that day's consumption is shifted",
        f"plan covers {len(plan.daily_volumes)} days with {weeks} complete Mon-Sun weeks",
        "E_s literal = annual consumption - weekly shift; E_s shift_only = weekly shift",
        "weekend shift capacity summed over Saturday and Sunday of each week",
        f"MAPE discount {mape!r} (fraction, clamped to [0, 1])",
    ]
    return SavingsReport(
        E_s_literal=e_lit,
        E_s_shift_only=e_shift,
        E_m=e_m,
        E_m_discounted=e_md,
        mape_used=mape,
        co2_s_literal=co2_of_energy(co2, max(e_lit, 0.0)),
        co2_s_shift_only=co2_of_energy(co2, e_shift),
        co2_m=co2_of_energy(co2, e_m),
        co2_m_discounted=co2_of_energy(co2, e_md),
        assumptions=assumptions,
    )
