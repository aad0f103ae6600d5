"""Daily water balance of the leachate reservoir."""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from leachgrid.forecasters import ForecastResult
from leachgrid.timeseries import DailySeries

CAPACITY = 7500.0  # m3
MAX_OUTFLOW = 260.0  # m3/day
MAX_INFLOW = 800.0  # m3/day


@dataclass(frozen=True)
class ReservoirState:
    level: float = 0.5 * CAPACITY
    capacity: float = CAPACITY
    max_outflow: float = MAX_OUTFLOW
    max_inflow: float = MAX_INFLOW

    def __post_init__(self):
        if not 0 <= self.level <= self.capacity:
            raise ValueError(f"level {self.level} outside [0, {self.capacity}]")
        if not 0 < self.max_outflow < self.max_inflow:
            raise ValueError("need 0 < max_outflow < max_inflow")


@dataclass(frozen=True)
class MaxDrain:
    """Always request the full pumping capacity."""

    def requested(self, state: ReservoirState, inflow: float) -> float:
        return state.max_outflow


@dataclass(frozen=True)
class TargetLevel:
    """Pump only the water that would sit above ``target``."""

    target: float

    def requested(self, state: ReservoirState, inflow: float) -> float:
        return min(state.max_outflow, max(state.level + inflow - self.target, 0.0))


def parse_policy(text: str):
    """``maxdrain`` or ``target:<level>``."""
    t = text.strip().lower()
    if t in ("maxdrain", "max_drain", "max-drain"):
        return MaxDrain()
    if t.startswith("target:"):
        try:
            return TargetLevel(float(t.split(":", 1)[1]))
        except ValueError:
            pass
    raise ValueError(f"unknown policy {text!r}; expected 'maxdrain' or 'target:<m3>'")


@dataclass(frozen=True)
class StepRecord:
    inflow: float
    outflow: float
    level: float  # end of day
    overflow: float


def step(state: ReservoirState, inflow: float, requested_outflow: float) -> tuple[ReservoirState, StepRecord]:
    """Advance one day. Outflow is capped by the water available that day."""
    if not 0 <= inflow <= state.max_inflow:
        raise ValueError(f"inflow {inflow} outside [0, {state.max_inflow}] m3/day")
    if not 0 <= requested_outflow <= state.max_outflow:
        raise ValueError(f"requested outflow {requested_outflow} outside [0, {state.max_outflow}] m3/day")
    available = state.level + inflow
    outflow = min(requested_outflow, available)
    tentative = available - outflow
    overflow = max(tentative - state.capacity, 0.0)
    level = tentative - overflow
    new = replace(state, level=level)
    return new, StepRecord(float(inflow), float(outflow), float(level), float(overflow))


@dataclass(frozen=True)
class SimulationTrace:
    initial: ReservoirState
    records: tuple[StepRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    @property
    def final_level(self) -> float:
        return self.records[-1].level if self.records else self.initial.level

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    def balance_error(self) -> float:
        """Largest per-day violation of level' = level + in - out - overflow."""
        prev = self.initial.level
        worst = 0.0
        for r in self.records:
            worst = max(worst, abs((prev + r.inflow - r.outflow - r.overflow) - r.level))
            prev = r.level
        return worst

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["day", "inflow", "outflow", "level", "overflow"])
            for i, r in enumerate(self.records, start=1):
                w.writerow([i, repr(r.inflow), repr(r.outflow), repr(r.level), repr(r.overflow)])


def _inflows(series) -> np.ndarray:
    if isinstance(series, DailySeries):
        return series.values
    if isinstance(series, ForecastResult):
        return series.predictions
    return np.asarray(series, dtype=float)


def simulate(state: ReservoirState, inflow_series, policy=None) -> SimulationTrace:
    policy = policy or MaxDrain()
    records = []
    current = state
    for q in _inflows(inflow_series):
        q = float(q)
        current, rec = step(current, q, policy.requested(current, q))
        records.append(rec)
    return SimulationTrace(state, tuple(records))


@dataclass(frozen=True)
class RiskSummary:
    first_overflow_day: int | None  # 1-based
    peak_level: float
    total_overflow: float

    def lines(self) -> list[str]:
        first = "none" if self.first_overflow_day is None else str(self.first_overflow_day)
        return [
            f"first_overflow_day={first}",
            f"peak_level={self.peak_level!r}",
            f"total_overflow={self.total_overflow!r}",
        ]


def summarize(trace: SimulationTrace) -> RiskSummary:
    over = trace.column("overflow")
    hits = np.nonzero(over > 0)[0]
    levels = trace.column("level")
    return RiskSummary(
        first_overflow_day=int(hits[0]) + 1 if len(hits) else None,
        peak_level=float(max(levels.max(), trace.initial.level)) if len(levels) else trace.initial.level,
        total_overflow=float(over.sum()),
    )


def overflow_risk(state: ReservoirState, forecast: ForecastResult, policy=None) -> RiskSummary:
    if forecast.horizon < 1:
        raise ValueError("forecast horizon must be >= 1")
    return summarize(simulate(state, forecast, policy))
