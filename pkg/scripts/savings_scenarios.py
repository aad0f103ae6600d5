"""Savings figures for a synthetic year under a range of forecast errors.

    python scripts/savings_scenarios.py --seed 0
"""

import argparse

from leachgrid.energy import REFERENCE_PUMP_MODEL, Co2Factor
from leachgrid.savings import YearPlan, build_report
from leachgrid.synth import SynthConfig, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mape", default="0,5,10,15,20,30")
    args = ap.parse_args()

    series, _ = generate(SynthConfig(days=365, seed=args.seed))
    plan = YearPlan.from_series(series)
    print(f"plan: {len(plan.daily_volumes)} days, {len(plan.weeks())} complete weeks, "
          f"mean volume {plan.daily_volumes.mean():.1f} m3/day")
    print(f"{'MAPE %':>8}{'E_m kWh':>14}{'E_m disc. kWh':>16}{'CO2 disc. kg':>14}")
    for m in (float(x) for x in args.mape.split(",")):
        r = build_report(plan, REFERENCE_PUMP_MODEL, Co2Factor(), mape_percent=m)
        print(f"{m:>8.1f}{r.E_m / 1e3:>14.1f}{r.E_m_discounted / 1e3:>16.1f}{r.co2_m_discounted:>14.1f}")
    print(f"\nshift-only short-term savings: {r.E_s_shift_only / 1e3:.1f} kWh ({r.co2_s_shift_only:.1f} kg CO2)")


if __name__ == "__main__":
    main()
