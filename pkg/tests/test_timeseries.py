import math
from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leachgrid.timeseries import (
    DailySeries,
    ExogenousTable,
    IngestError,
    OrderingError,
    RawObservation,
    ingest_csv,
    interpolate_gaps,
    pearson,
    read_series_csv,
    split_holdout,
    to_day,
    write_series_csv,
)


def obs(pairs):
    return [RawObservation(to_day(d), v) for d, v in pairs]


class TestIngest:
    def test_gaps_over_weekend(self, write_csv):
        p = write_csv("a.csv", "date,value\n2020-01-03,100\n2020-01-06,130\n2020-01-07,125\n")
        got = ingest_csv(p)
        assert [o.gap_to_next for o in got] == [3, 1, 1]
        assert got[0].timestamp == date(2020, 1, 3)
        assert got[0].timestamp.weekday() == 4

    def test_empty_file(self, write_csv):
        with pytest.raises(IngestError, match="no observations"):
            ingest_csv(write_csv("e.csv", ""))

    def test_header_only(self, write_csv):
        with pytest.raises(IngestError, match="no observations"):
            ingest_csv(write_csv("h.csv", "date,value\n"))

    def test_duplicate_date(self, write_csv):
        with pytest.raises(OrderingError):
            ingest_csv(write_csv("d.csv", "date,value\n2020-01-03,1\n2020-01-03,2\n"))

    def test_decreasing_date(self, write_csv):
        with pytest.raises(OrderingError):
            ingest_csv(write_csv("d.csv", "date,value\n2020-01-05,1\n2020-01-03,2\n"))

    def test_malformed_row_reports_line(self, write_csv):
        p = write_csv("m.csv", "date,value\n2020-01-03,1\n2020-01-04,abc\n")
        with pytest.raises(IngestError, match=r":3:"):
            ingest_csv(p)

    def test_negative_rejected(self, write_csv):
        with pytest.raises(IngestError, match="non-negative"):
            ingest_csv(write_csv("n.csv", "date,value\n2020-01-03,-1\n"))

    def test_missing_column(self, write_csv):
        with pytest.raises(IngestError, match="missing column"):
            ingest_csv(write_csv("c.csv", "day,value\n2020-01-03,1\n"))

    def test_custom_format_and_delimiter(self, write_csv):
        p = write_csv("f.csv", "when;flow\n03.01.2020;5\n05.01.2020;7\n")
        got = ingest_csv(p, value_column="flow", date_column="when", date_format="%d.%m.%Y", delimiter=";")
        assert [o.value for o in got] == [5.0, 7.0]
        assert got[0].gap_to_next == 2


class TestInterpolate:
    def test_weekend(self):
        s = interpolate_gaps(obs([(date(2020, 1, 3), 100), (date(2020, 1, 6), 130)]))
        assert s.values.tolist() == [100, 110, 120, 130]
        assert s.start_date == date(2020, 1, 3)

    def test_no_gaps_identity(self):
        vals = [3.5, 1.25, 8.0]
        s = interpolate_gaps(obs([(date(2020, 1, i + 1), v) for i, v in enumerate(vals)]))
        assert s.values.tolist() == vals

    def test_constant_segment(self):
        s = interpolate_gaps(obs([(date(2020, 1, 3), 100), (date(2020, 1, 6), 100)]))
        assert s.values.tolist() == [100] * 4

    def test_single_observation(self):
        with pytest.raises(ValueError, match="cannot interpolate"):
            interpolate_gaps(obs([(date(2020, 1, 3), 1)]))

    @given(
        st.lists(
            st.tuples(st.integers(1, 6), st.floats(0, 1e6, allow_nan=False)),
            min_size=2,
            max_size=40,
        )
    )
    def test_length_and_exact_observed_values(self, steps):
        day = 18000
        raw = []
        for gap, v in steps:
            raw.append(RawObservation(day, v))
            day += gap
        s = interpolate_gaps(raw)
        assert len(s) == raw[-1].day - raw[0].day + 1
        for o in raw:
            assert s.values[o.day - s.start_day] == o.value


class TestSplit:
    @pytest.mark.parametrize("n, train", [(635, 535), (2704, 2604)])
    def test_table_lengths(self, n, train):
        sp = split_holdout(DailySeries(0, np.ones(n)), validation_len=100)
        assert len(sp.train) == train and sp.validation_len == 100

    def test_too_short(self):
        with pytest.raises(ValueError):
            split_holdout(DailySeries(0, np.ones(50)), validation_len=100)

    @given(st.integers(2, 300), st.data())
    def test_concatenation_reproduces_source(self, n, data):
        v = data.draw(st.integers(1, n - 1))
        s = DailySeries(100, np.arange(n, dtype=float))
        sp = split_holdout(s, validation_len=v)
        assert np.array_equal(sp.full_series().values, s.values)
        assert sp.validation.start_day == sp.train.end_day + 1
        assert np.array_equal(sp.validation.values, s.values[-v:])

    def test_exog_aligned(self):
        s = DailySeries(10, np.arange(20.0))
        ex = ExogenousTable(5, {"rain": np.arange(30.0)})
        sp = split_holdout(s, ex, 5)
        assert sp.train_exog.start_day == 10
        assert sp.validation_exog.columns["rain"].tolist() == [20, 21, 22, 23, 24]

    def test_exog_not_covering(self):
        with pytest.raises(ValueError):
            split_holdout(DailySeries(10, np.arange(20.0)), ExogenousTable(12, {"r": np.zeros(30)}), 5)


class TestPearson:
    def test_perfect(self):
        assert pearson([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)

    def test_inverse(self):
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_oracle_value(self):
        # raw-sum formula in exact integers: 44 / sqrt(2080)
        assert pearson([1, 2, 3, 4], [2, 4, 5, 9]) == pytest.approx(44 / math.sqrt(2080), rel=1e-12)
        assert pearson([1, 2, 3, 4], [2, 4, 5, 9]) == pytest.approx(0.9647638212377322, rel=1e-12)

    def test_zero_variance(self):
        with pytest.raises(ValueError, match="undefined correlation"):
            pearson([1, 1, 1], [1, 2, 3])

    finite = st.floats(-1e3, 1e3, allow_nan=False)

    @given(st.lists(st.tuples(finite, finite), min_size=3, max_size=50),
           st.floats(0.1, 10), st.floats(-100, 100))
    def test_properties(self, pairs, alpha, beta):
        a = np.array([p[0] for p in pairs])
        b = np.array([p[1] for p in pairs])
        if np.ptp(a) < 1e-3 or np.ptp(b) < 1e-3:
            return
        r = pearson(a, b)
        assert abs(r) <= 1 + 1e-12
        assert r == pytest.approx(pearson(b, a), abs=1e-12)
        assert pearson(a, alpha * a + beta) == pytest.approx(1.0, abs=1e-9)


class TestSeries:
    def test_rejects_negative_and_nan(self):
        with pytest.raises(ValueError):
            DailySeries(0, [1.0, -1.0])
        with pytest.raises(ValueError):
            DailySeries(0, [1.0, float("nan")])

    def test_immutable(self):
        s = DailySeries(0, [1.0, 2.0])
        with pytest.raises(ValueError):
            s.values[0] = 5

    def test_exog_lengths_must_match(self):
        with pytest.raises(ValueError):
            ExogenousTable(0, {"a": [1, 2], "b": [1]})

    def test_csv_round_trip(self, tmp_path):
        s = DailySeries.from_dates(date(2021, 3, 1), [1.5, 2.25, 1e-7, 123456.789])
        write_series_csv(s, tmp_path / "s.csv")
        back = read_series_csv(tmp_path / "s.csv")
        assert back.start_day == s.start_day
        assert np.array_equal(back.values, s.values)
