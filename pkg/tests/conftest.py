from datetime import date

import numpy as np
import pytest

from leachgrid.synth import SynthConfig, generate
from leachgrid.timeseries import DailySeries, split_holdout


@pytest.fixture(scope="session")
def synth_635():
    return generate(SynthConfig(days=635, seed=0))


@pytest.fixture(scope="session")
def split_635(synth_635):
    series, exog = synth_635
    return split_holdout(series, exog, 100)


@pytest.fixture
def write_csv(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p

    return _write


def series_of(values, start=date(2020, 1, 6)):
    return DailySeries.from_dates(start, np.asarray(values, dtype=float))


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num, status, title, detail in sorted(results):
        terminalreporter.write_line(f"[{status}] {num:>2}. {title}: {detail}")
