from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from leachgrid.energy import REFERENCE_PUMP_MODEL, Co2Factor, PumpEnergyModel
from leachgrid.savings import (
    YearPlan,
    build_report,
    discount_by_uncertainty,
    midterm_savings,
    shortterm_savings,
    weekly_midterm_terms,
)

C0 = 1_620_109.2  # C(0) in Wh
C100 = 2_551_597.2
C160 = 3_110_490.0


def weekly_plan(work, weekend, weeks=52, extra=1):
    week = [work] * 5 + [weekend] * 2
    return YearPlan(np.array(week * weeks + [work] * extra, dtype=float), start_weekday=0)


class TestWeeks:
    def test_monday_start_year(self):
        assert len(YearPlan(np.zeros(365), 0).weeks()) == 52

    def test_wednesday_start(self):
        plan = YearPlan.from_start_date(date(2020, 1, 1), np.zeros(365))
        weeks = plan.weeks()
        assert plan.start_weekday == 2
        assert weeks[0][0][0] == 5 and len(weeks) == 51

    def test_no_complete_week(self):
        with pytest.raises(ValueError):
            YearPlan(np.zeros(6), 1).weeks()

    def test_out_of_range_volume(self):
        with pytest.raises(ValueError):
            YearPlan(np.array([801.0]))
        with pytest.raises(ValueError):
            YearPlan(np.array([-1.0]))


class TestShortTerm:
    def test_zero_plan_literal(self):
        plan = YearPlan(np.zeros(365), 0)
        assert shortterm_savings(plan, REFERENCE_PUMP_MODEL, "literal") == pytest.approx(549_217_018.8, abs=1e-3)

    def test_zero_plan_shift_only(self):
        plan = YearPlan(np.zeros(365), 0)
        assert shortterm_savings(plan, REFERENCE_PUMP_MODEL, "shift_only") == pytest.approx(42_122_839.2, abs=1e-3)

    def test_literal_is_annual_minus_shift(self):
        rng = np.random.default_rng(0)
        plan = YearPlan(rng.uniform(0, 800, 365), 3)
        annual = float(np.sum(24 * (388.12 * plan.daily_volumes + 67504.55)))
        lit = shortterm_savings(plan, REFERENCE_PUMP_MODEL, "literal")
        shift = shortterm_savings(plan, REFERENCE_PUMP_MODEL, "shift_only")
        assert lit + shift == pytest.approx(annual, rel=1e-12)

    def test_activity_day_max_picks_peak(self):
        v = np.full(14, 100.0)
        v[2] = 700.0  # Wednesday of week 1
        v[13] = 500.0  # Sunday of week 2
        plan = YearPlan(v, 0)
        m = REFERENCE_PUMP_MODEL
        expected = 0.5 * (24 * (388.12 * 700 + 67504.55) + 24 * (388.12 * 500 + 67504.55))
        assert shortterm_savings(plan, m, "shift_only") == pytest.approx(expected, rel=1e-12)
        fixed = 0.5 * 2 * C100
        assert shortterm_savings(plan, m, "shift_only", activity_day="mon") == pytest.approx(fixed, rel=1e-12)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            shortterm_savings(YearPlan(np.zeros(7)), REFERENCE_PUMP_MODEL, "other")
        with pytest.raises(ValueError):
            shortterm_savings(YearPlan(np.zeros(7)), REFERENCE_PUMP_MODEL, activity_day="funday")


class TestMidTerm:
    def test_weekend_capacity_binds(self):
        plan = weekly_plan(100.0, 100.0)
        terms = weekly_midterm_terms(plan, REFERENCE_PUMP_MODEL)
        assert terms[0] == pytest.approx([5 * C100, 2 * C160])
        assert midterm_savings(plan, REFERENCE_PUMP_MODEL) == pytest.approx(52 * 6_220_980.0, rel=1e-12)

    def test_workday_energy_binds(self):
        model = PumpEnergyModel(slope=1.0, intercept=0.0)
        plan = weekly_plan(1.0, 0.0, weeks=2)
        # workdays 5 * 24 Wh, weekend spare 2 * 24 * 260 Wh
        assert midterm_savings(plan, model) == pytest.approx(2 * 120.0)

    def test_full_weekend_leaves_only_intercept(self):
        plan = weekly_plan(100.0, 300.0, weeks=1)
        assert midterm_savings(plan, REFERENCE_PUMP_MODEL) == pytest.approx(2 * C0)

    def test_max_pump_validated(self):
        with pytest.raises(ValueError):
            midterm_savings(weekly_plan(1, 1), REFERENCE_PUMP_MODEL, max_pump=0)

    @settings(max_examples=50, deadline=None)
    @given(arrays(np.float64, 28, elements=st.floats(0, 800)), st.floats(0, 100))
    def test_bounds_and_monotone(self, v, bump):
        plan = YearPlan(v, 0)
        e = midterm_savings(plan, REFERENCE_PUMP_MODEL)
        terms = weekly_midterm_terms(plan, REFERENCE_PUMP_MODEL)
        assert 0 <= e <= terms[:, 0].sum() * (1 + 1e-12)
        assert e <= terms[:, 1].sum() * (1 + 1e-12)
        # more weekend water leaves less spare capacity
        w = v.copy()
        w[5::7] = np.minimum(w[5::7] + bump, 800)
        assert midterm_savings(YearPlan(w, 0), REFERENCE_PUMP_MODEL) <= e * (1 + 1e-12)


class TestDiscount:
    @given(st.floats(0, 1e10), st.floats(-1, 2))
    def test_range(self, e, m):
        d = discount_by_uncertainty(e, m)
        assert 0 <= d <= e

    def test_values(self):
        assert discount_by_uncertainty(100.0, 0.0) == 100.0
        assert discount_by_uncertainty(100.0, 0.2) == pytest.approx(80.0)
        assert discount_by_uncertainty(100.0, 1.0) == 0.0
        assert discount_by_uncertainty(100.0, 1.5) == 0.0

    def test_negative_energy(self):
        with pytest.raises(ValueError):
            discount_by_uncertainty(-1.0, 0.1)


class TestReport:
    def test_figures(self):
        plan = weekly_plan(100.0, 100.0)
        r = build_report(plan, REFERENCE_PUMP_MODEL, Co2Factor(), mape_percent=20.0)
        assert r.E_m == pytest.approx(323_490_960.0, rel=1e-12)
        assert r.E_m_discounted == pytest.approx(0.8 * r.E_m, rel=1e-12)
        assert r.co2_m == pytest.approx(169_185.77, abs=0.01)
        assert r.mape_used == pytest.approx(0.2)

    def test_files(self, tmp_path):
        r = build_report(YearPlan(np.zeros(365)), REFERENCE_PUMP_MODEL)
        r.write(tmp_path)
        text = (tmp_path / "savings_report.txt").read_text()
        assert "E_s_literal" in text and "Assumptions" in text
        rows = (tmp_path / "savings_report.csv").read_text().splitlines()
        assert rows[0] == "quantity,value,unit"
        values = dict(line.split(",")[:2] for line in rows[1:] if not line.startswith("assumption"))
        assert float(values["E_s_shift_only"]) == pytest.approx(42_122_839.2)
