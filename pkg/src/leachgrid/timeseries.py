"""Daily series data model, CSV ingestion, gap interpolation and holdout splits.

Dates are kept as integer days since 1970-01-01; conversion to calendar
dates happens only when reading or writing files.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

EPOCH = date(1970, 1, 1)

EXOG_COLUMNS = (
    "rainfall_mm",
    "air_pressure_hpa",
    "temperature_c",
    "wind_direction_deg",
    "humidity_pct",
    "battery_voltage_v",
    "power_flow_w",
)


class IngestError(ValueError):
    """Malformed input file or row."""


class OrderingError(IngestError):
    """Dates are duplicated or not strictly increasing."""


class Unit(str, enum.Enum):
    CUBIC_METERS_PER_DAY = "m3/day"
    WATT_HOURS_PER_DAY = "Wh/day"


def to_day(d: date) -> int:
    return (d - EPOCH).days


def from_day(day: int) -> date:
    return EPOCH + timedelta(days=int(day))


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DailySeries:
    """Gap-free sequence of daily non-negative values."""

    start_day: int
    values: np.ndarray
    unit: Unit = Unit.CUBIC_METERS_PER_DAY

    def __post_init__(self):
        arr = _readonly(self.values)
        if arr.ndim != 1:
            raise ValueError("series values must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("series values must be finite")
        if np.any(arr < 0):
            raise ValueError("series values must be non-negative")
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "unit", Unit(self.unit))

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_dates(cls, start: date, values, unit: Unit = Unit.CUBIC_METERS_PER_DAY) -> "DailySeries":
        return cls(to_day(start), values, unit)

    @property
    def start_date(self) -> date:
        return from_day(self.start_day)

    @property
    def end_day(self) -> int:
        """Last covered day (inclusive)."""
        return self.start_day + len(self) - 1

    @property
    def days(self) -> np.ndarray:
        return np.arange(self.start_day, self.start_day + len(self))

    def dates(self) -> list[date]:
        return [from_day(d) for d in self.days]

    def slice(self, start: int, stop: int | None = None) -> "DailySeries":
        """Positional slice, keeping dates consistent."""
        start, stop, _ = slice(start, stop).indices(len(self))
        return DailySeries(self.start_day + start, self.values[start:stop], self.unit)


@dataclass(frozen=True)
class ExogenousTable:
    start_day: int
    columns: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        cols = {str(name): _readonly(v) for name, v in dict(self.columns).items()}
        lengths = {len(v) for v in cols.values()}
        if len(lengths) > 1:
            raise ValueError(f"exogenous columns differ in length: {sorted(lengths)}")
        for name, v in cols.items():
            if v.ndim != 1 or not np.all(np.isfinite(v)):
                raise ValueError(f"exogenous column {name!r} must be a finite 1-D sequence")
        object.__setattr__(self, "columns", cols)

    def __len__(self) -> int:
        return next((len(v) for v in self.columns.values()), 0)

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def matrix(self) -> np.ndarray:
        """Rows are days, columns follow ``names`` order."""
        if not self.columns:
            return np.zeros((0, 0))
        return np.column_stack([self.columns[n] for n in self.names])

    def slice(self, start: int, stop: int | None = None) -> "ExogenousTable":
        start, stop, _ = slice(start, stop).indices(len(self))
        return ExogenousTable(self.start_day + start, {n: v[start:stop] for n, v in self.columns.items()})


@dataclass(frozen=True)
class RawObservation:
    day: int
    value: float
    gap_to_next: int = 1

    def __post_init__(self):
        if self.gap_to_next < 1:
            raise ValueError("gap_to_next must be >= 1")

    @property
    def timestamp(self) -> date:
        return from_day(self.day)


@dataclass(frozen=True)
class DatasetSplit:
    train: DailySeries
    validation: DailySeries
    train_exog: ExogenousTable | None = None
    validation_exog: ExogenousTable | None = None

    @property
    def validation_len(self) -> int:
        return len(self.validation)

    def full_series(self) -> DailySeries:
        return DailySeries(
            self.train.start_day,
            np.concatenate([self.train.values, self.validation.values]),
            self.train.unit,
        )

    def full_exog(self) -> ExogenousTable | None:
        if self.train_exog is None:
            return None
        return ExogenousTable(
            self.train_exog.start_day,
            {
                n: np.concatenate([self.train_exog.columns[n], self.validation_exog.columns[n]])
                for n in self.train_exog.names
            },
        )


def _parse_date(text: str, date_format: str) -> date:
    return datetime.strptime(text.strip(), date_format).date()


def ingest_csv(
    path,
    value_column: str = "value",
    date_column: str = "date",
    date_format: str = "%Y-%m-%d",
    delimiter: str = ",",
) -> list[RawObservation]:
    """Read dated observations and compute the gap to the following one.

    The last observation gets a gap of 1.
    """
    path = Path(path)
    days: list[int] = []
    values: list[float] = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        if reader.fieldnames is None:
            raise IngestError(f"{path}: no observations")
        for col in (date_column, value_column):
            if col not in reader.fieldnames:
                raise IngestError(f"{path}: missing column {col!r}")
        for row in reader:
            line = reader.line_num
            try:
                day = to_day(_parse_date(row[date_column] or "", date_format))
                value = float(row[value_column])
            except (TypeError, ValueError) as exc:
                raise IngestError(f"{path}:{line}: cannot parse row: {exc}") from None
            if not math.isfinite(value) or value < 0:
                raise IngestError(f"{path}:{line}: value must be finite and non-negative, got {value}")
            if days and day <= days[-1]:
                raise OrderingError(f"{path}:{line}: date {from_day(day)} does not follow {from_day(days[-1])}")
            days.append(day)
            values.append(value)
    if not days:
        raise IngestError(f"{path}: no observations")
    gaps = np.diff(days).tolist() + [1]
    return [RawObservation(d, v, int(g)) for d, v, g in zip(days, values, gaps)]


def interpolate_gaps(obs: Sequence[RawObservation], unit: Unit = Unit.CUBIC_METERS_PER_DAY) -> DailySeries:
    """Fill missing calendar days by linear interpolation between neighbours."""
    if len(obs) < 2:
        raise ValueError("cannot interpolate: need at least 2 observations")
    days = np.array([o.day for o in obs], dtype=np.int64)
    vals = np.array([o.value for o in obs], dtype=float)
    if np.any(np.diff(days) <= 0):
        raise OrderingError("observations must have strictly increasing dates")
    grid = np.arange(days[0], days[-1] + 1)
    out = np.interp(grid, days, vals)
    # observed days keep their exact value
    out[days - days[0]] = vals
    return DailySeries(int(days[0]), out, unit)


def split_holdout(series: DailySeries, exog: ExogenousTable | None = None, validation_len: int = 100) -> DatasetSplit:
    """Reserve the final ``validation_len`` days for validation."""
    n = len(series)
    if validation_len < 1 or validation_len >= n:
        raise ValueError(f"validation_len={validation_len} must be in [1, {n - 1}] for a {n}-day series")
    cut = n - validation_len
    train, val = series.slice(0, cut), series.slice(cut)
    if exog is None:
        return DatasetSplit(train, val)
    exog = align_exog(series, exog)
    return DatasetSplit(train, val, exog.slice(0, cut), exog.slice(cut))


def align_exog(series: DailySeries, exog: ExogenousTable) -> ExogenousTable:
    """Cut ``exog`` to exactly the days covered by ``series``."""
    offset = series.start_day - exog.start_day
    if offset < 0 or offset + len(series) > len(exog):
        raise ValueError("exogenous table does not cover the series date range")
    return exog.slice(offset, offset + len(series))


def pearson(a: Iterable[float], b: Iterable[float]) -> float:
    """Pearson product-moment correlation coefficient."""
    x = np.asarray(list(a), dtype=float)
    y = np.asarray(list(b), dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise ValueError("pearson needs two equal-length sequences of at least 2 values")
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise ValueError("undefined correlation: zero variance input")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _fmt(x: float) -> str:
    return repr(float(x))


def write_series_csv(series: DailySeries, path, value_column: str = "value", date_column: str = "date", delimiter: str = ","):
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow([date_column, value_column])
        for d, v in zip(series.dates(), series.values):
            w.writerow([d.isoformat(), _fmt(v)])


def read_series_csv(path, value_column: str = "value", date_column: str = "date", date_format: str = "%Y-%m-%d",
                    delimiter: str = ",", unit: Unit = Unit.CUBIC_METERS_PER_DAY) -> DailySeries:
    """Ingest then interpolate; the usual way to load a target series."""
    return interpolate_gaps(ingest_csv(path, value_column, date_column, date_format, delimiter), unit)


def write_exog_csv(table: ExogenousTable, path, date_column: str = "date", delimiter: str = ","):
    path = Path(path)
    m = table.matrix()
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow([date_column, *table.names])
        for i in range(len(table)):
            w.writerow([from_day(table.start_day + i).isoformat(), *(_fmt(v) for v in m[i])])


def read_exog_csv(path, date_column: str = "date", date_format: str = "%Y-%m-%d", delimiter: str = ",") -> ExogenousTable:
    """Read a gap-free exogenous table."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        if reader.fieldnames is None or date_column not in reader.fieldnames:
            raise IngestError(f"{path}: missing column {date_column!r}")
        names = [c for c in reader.fieldnames if c != date_column]
        if len(set(names)) != len(names):
            raise IngestError(f"{path}: duplicate column names")
        days, rows = [], []
        for row in reader:
            try:
                days.append(to_day(_parse_date(row[date_column] or "", date_format)))
                rows.append([float(row[n]) for n in names])
            except (TypeError, ValueError) as exc:
                raise IngestError(f"{path}:{reader.line_num}: cannot parse row: {exc}") from None
    if not days:
        raise IngestError(f"{path}: no observations")
    if np.any(np.diff(days) != 1):
        raise OrderingError(f"{path}: exogenous table must have one row per consecutive day")
    data = np.array(rows, dtype=float).reshape(len(days), len(names))
    return ExogenousTable(days[0], {n: data[:, j] for j, n in enumerate(names)})
