from datetime import date

import numpy as np
import pytest

from leachgrid.forecasters import LagWindowConfig, fit_linear, make_supervised
from leachgrid.synth import SynthConfig, generate
from leachgrid.timeseries import EXOG_COLUMNS, pearson, read_exog_csv, read_series_csv, write_exog_csv, write_series_csv


def test_degenerate_config_is_constant():
    s, _ = generate(SynthConfig(days=60, annual_amplitude=0, rain_coupling=0, noise_sd=0, base_inflow=123.0))
    assert np.all(s.values == 123.0)


def test_shape_and_calendar():
    s, ex = generate(SynthConfig(days=100, start=date(2019, 3, 1)))
    assert len(s) == len(ex) == 100
    assert s.start_date == date(2019, 3, 1) and ex.start_day == s.start_day
    assert set(ex.names) == set(EXOG_COLUMNS)
    assert np.all((s.values >= 0) & (s.values <= 800))
    assert np.all(ex.columns["rainfall_mm"] >= 0)


def test_deterministic():
    a, ea = generate(SynthConfig(seed=5))
    b, eb = generate(SynthConfig(seed=5))
    assert np.array_equal(a.values, b.values)
    assert all(np.array_equal(ea.columns[n], eb.columns[n]) for n in ea.names)


def test_seeds_differ():
    assert not np.array_equal(generate(SynthConfig(seed=1))[0].values, generate(SynthConfig(seed=2))[0].values)


@pytest.mark.parametrize("seed", range(5))
def test_inflow_tracks_rain(seed):
    s, ex = generate(SynthConfig(seed=seed))
    assert pearson(s.values, ex.columns["rainfall_mm"]) > 0.5


def test_extra_columns_cannot_raise_training_error():
    s, ex = generate(SynthConfig())
    w = LagWindowConfig(7, 1)
    X0, Y = make_supervised(s, None, w)
    X1, _ = make_supervised(s, ex, w)
    mse0 = np.mean((fit_linear(X0, Y).predict(X0) - Y) ** 2)
    mse1 = np.mean((fit_linear(X1, Y).predict(X1) - Y) ** 2)
    assert mse1 <= mse0 * (1 + 1e-9)


def test_csv_round_trip(tmp_path):
    s, ex = generate(SynthConfig(days=50))
    write_series_csv(s, tmp_path / "inflow.csv")
    write_exog_csv(ex, tmp_path / "exog.csv")
    s2 = read_series_csv(tmp_path / "inflow.csv")
    ex2 = read_exog_csv(tmp_path / "exog.csv")
    assert s2.start_day == s.start_day and np.array_equal(s2.values, s.values)
    assert all(np.array_equal(ex.columns[n], ex2.columns[n]) for n in ex.names)


def test_invalid_config():
    with pytest.raises(ValueError):
        SynthConfig(days=10)
    with pytest.raises(ValueError):
        SynthConfig(noise_sd=-1)
