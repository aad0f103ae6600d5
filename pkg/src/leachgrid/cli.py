"""Command-line entry point.

Data goes to files in ``--out-dir`` (and summaries to stdout); diagnostics
go to stderr. Exit status: 0 on success, 2 on input/config errors, 3 when
a requested post-hoc check fails, 1 on anything unexpected.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from datetime import date
from pathlib import Path


from leachgrid.config import ConfigError, RunConfig
from leachgrid.energy import fit_ols_1d
from leachgrid.evaluation import compare_models, persistence_heatmap, rolling_backtest
from leachgrid.forecasters import forecast, load_model, save_model
from leachgrid.reservoir import ReservoirState, parse_policy, simulate, summarize
from leachgrid.savings import YearPlan, build_report
from leachgrid.synth import SynthConfig, generate
from leachgrid.timeseries import (
    DailySeries,
    IngestError,
    align_exog,
    ingest_csv,
    interpolate_gaps,
    read_exog_csv,
    split_holdout,
    write_exog_csv,
    write_series_csv,
)

log = logging.getLogger("leachgrid")

EXIT_USAGE = 2
EXIT_CHECK = 3


def _load_series(path, cfg: RunConfig) -> DailySeries:
    obs = ingest_csv(
        path,
        value_column=cfg.get("data", "value_column"),
        date_column=cfg.get("data", "date_column"),
        date_format=cfg.get("data", "date_format"),
        delimiter=cfg.get("data", "delimiter"),
    )
    if len(obs) == 1:
        return DailySeries(obs[0].day, [obs[0].value])
    return interpolate_gaps(obs)


def _load_exog(path, series: DailySeries, cfg: RunConfig):
    if not path:
        return None
    table = read_exog_csv(path, date_column=cfg.get("data", "date_column"),
                          date_format=cfg.get("data", "date_format"), delimiter=cfg.get("data", "delimiter"))
    return align_exog(series, table)


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _record(cfg: RunConfig, args, out: Path) -> None:
    """Write the fully resolved configuration next to the outputs."""
    cfg.set("run", "subcommand", args.command)
    for key, value in sorted(vars(args).items()):
        if key in ("command", "func", "config", "out_dir") or value is None:
            continue
        cfg.set("args", key, value)
    cfg.write(out / "run_config.ini")


def cmd_ingest(args, cfg: RunConfig) -> int:
    series = _load_series(args.input, cfg)
    out = _out_dir(args)
    write_series_csv(series, out / args.output, cfg.get("data", "value_column"), cfg.get("data", "date_column"),
                     cfg.get("data", "delimiter"))
    log.info("ingested %d days (%s .. %s)", len(series), series.start_date, series.dates()[-1])
    _record(cfg, args, out)
    return 0


def cmd_fit(args, cfg: RunConfig) -> int:
    out = _out_dir(args)
    if args.model == "energy":
        x, y = [], []
        with open(args.series, newline="") as fh:
            for row in csv.DictReader(fh, delimiter=cfg.get("data", "delimiter")):
                x.append(float(row[args.volume_column]))
                y.append(float(row[args.energy_column]))
        model = fit_ols_1d(x, y, fit_date=date.fromisoformat(args.fit_date) if args.fit_date else None)
        model.save(out / "energy_model.txt")
        log.info("energy model: slope=%r W/m3 intercept=%r W (n=%d)", model.slope, model.intercept, model.n_samples)
    else:
        series = _load_series(args.series, cfg)
        exog = _load_exog(args.exog, series, cfg)
        model = cfg.build_model(args.model).fit(series, exog, args.horizon)
        save_model(model, out / "model.json")
        log.info("fitted %s on %d days for horizon %d", model.model_id, len(series), args.horizon)
    _record(cfg, args, out)
    return 0


def cmd_forecast(args, cfg: RunConfig) -> int:
    model = load_model(args.model_file)
    series = _load_series(args.series, cfg)
    exog = _load_exog(args.exog, series, cfg)
    row = exog.matrix()[-1] if (exog is not None and model.uses_exog) else None
    result = forecast(model, series, row, args.horizon)
    out = _out_dir(args)
    write_series_csv(result.as_series(), out / "forecast.csv")
    _record(cfg, args, out)
    return 0


def cmd_evaluate(args, cfg: RunConfig) -> int:
    names = cfg.model_names()
    horizons = cfg.getlist("evaluate", "horizons", int)
    refit = cfg.getbool("evaluate", "refit")
    zero_policy = cfg.get("evaluate", "zero_policy")
    series = _load_series(args.series, cfg)
    exog = _load_exog(args.exog, series, cfg)
    split = split_holdout(series, exog, cfg.getint("data", "validation_len"))
    out = _out_dir(args)

    summary = [("model", "horizon", "origins", "mape_percent")]
    ranking = [("horizon", "rank", "model", "mape_percent", "beats_baseline")]
    for n in horizons:
        reports = []
        for name in names:
            rep = rolling_backtest(lambda name=name: cfg.build_model(name), split, n, refit, zero_policy)
            rep.to_csv(out / f"backtest_{name}_N{n}.csv")
            reports.append(rep)
            summary.append((rep.model_id, n, rep.score.M, repr(rep.score.value_percent)))
            log.info("%-20s N=%-2d MAPE %.3f%%", rep.model_id, n, rep.score.value_percent)
        if any(r.model_id.startswith("persistence") for r in reports):
            for row in compare_models(reports):
                ranking.append((n, row.rank, row.model_id, repr(row.mape_percent), str(row.beats_baseline).lower()))

    k_max = cfg.getint("evaluate", "heatmap_k_max")
    heat = [("k", "N", "mape_percent")]
    heat += [(k, n, repr(m)) for k, n, m in persistence_heatmap(split, range(1, k_max + 1), horizons)]

    for fname, rows in (("summary.csv", summary), ("ranking.csv", ranking), ("persistence_heatmap.csv", heat)):
        with (out / fname).open("w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(rows)
    _record(cfg, args, out)
    return 0


def cmd_savings(args, cfg: RunConfig) -> int:
    series = _load_series(args.plan, cfg)
    days = cfg.getint("savings", "plan_days")
    plan = YearPlan.from_series(series, days if days > 0 else None)
    report = build_report(
        plan,
        cfg.energy_model(),
        cfg.co2(),
        mape_percent=args.mape,
        max_pump=cfg.getfloat("savings", "max_pump"),
        activity_day=cfg.get("savings", "activity_day"),
    )
    out = _out_dir(args)
    report.write(out)
    sys.stdout.write(report.to_text())
    _record(cfg, args, out)
    return 0


def cmd_simulate(args, cfg: RunConfig) -> int:
    policy = parse_policy(cfg.get("reservoir", "policy"))
    state = ReservoirState(
        level=cfg.getfloat("reservoir", "initial_level"),
        capacity=cfg.getfloat("reservoir", "capacity"),
        max_outflow=cfg.getfloat("reservoir", "max_outflow"),
        max_inflow=cfg.getfloat("reservoir", "max_inflow"),
    )
    inflow = _load_series(args.inflow, cfg)
    trace = simulate(state, inflow, policy)
    out = _out_dir(args)
    trace.to_csv(out / "trace.csv")
    summary = summarize(trace)
    lines = summary.lines()
    status = 0
    if args.check_balance:
        err = trace.balance_error()
        ok = err == 0.0
        lines.append(f"mass_balance={'ok' if ok else 'violated'}")
        if not ok:
            log.error("mass balance violated by %r m3", err)
            status = EXIT_CHECK
    sys.stdout.write("\n".join(lines) + "\n")
    _record(cfg, args, out)
    return status


def cmd_synth(args, cfg: RunConfig) -> int:
    sc = SynthConfig(
        days=cfg.getint("synth", "days"),
        base_inflow=cfg.getfloat("synth", "base_inflow"),
        annual_amplitude=cfg.getfloat("synth", "annual_amplitude"),
        rain_coupling=cfg.getfloat("synth", "rain_coupling"),
        noise_sd=cfg.getfloat("synth", "noise_sd"),
        seed=cfg.seed(),
        start=date.fromisoformat(cfg.get("synth", "start")),
    )
    series, exog = generate(sc)
    out = _out_dir(args)
    write_series_csv(series, out / "inflow.csv")
    write_exog_csv(exog, out / "exog.csv")
    _record(cfg, args, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="sectioned key-value config file")
    common.add_argument("--seed", type=int)
    common.add_argument("--out-dir", default=".")
    common.add_argument("--validation-len", type=int)
    common.add_argument("--horizons", help="comma-separated, e.g. 1,3,7,30")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="leachgrid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", parents=[common], help="read a dated CSV and fill gaps")
    s.add_argument("--input", required=True)
    s.add_argument("--output", default="series.csv")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("fit", parents=[common], help="fit a forecaster (or the pump energy model)")
    s.add_argument("--series", required=True)
    s.add_argument("--exog")
    s.add_argument("--model", required=True, help="forecaster name, or 'energy'")
    s.add_argument("--horizon", type=int, default=7)
    s.add_argument("--volume-column", default="volume")
    s.add_argument("--energy-column", default="energy")
    s.add_argument("--fit-date")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("forecast", parents=[common], help="forecast from a saved model")
    s.add_argument("--model-file", required=True)
    s.add_argument("--series", required=True)
    s.add_argument("--exog")
    s.add_argument("--horizon", type=int, default=7)
    s.set_defaults(func=cmd_forecast)

    s = sub.add_parser("evaluate", parents=[common], help="rolling-origin backtest of several models")
    s.add_argument("--series", required=True)
    s.add_argument("--exog")
    s.add_argument("--models", help="comma-separated model names")
    s.add_argument("--refit", action="store_true")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("savings", parents=[common], help="peak-shift energy and CO2 savings")
    s.add_argument("--plan", required=True, help="CSV of daily pumping volumes")
    s.add_argument("--mape", type=float, default=0.0, help="forecast MAPE in percent")
    s.add_argument("--energy-model", help="fitted energy model file")
    s.add_argument("--max-pump", type=float)
    s.set_defaults(func=cmd_savings)

    s = sub.add_parser("simulate", parents=[common], help="reservoir water balance")
    s.add_argument("--inflow", required=True, help="CSV of daily inflow (series or forecast)")
    s.add_argument("--initial-level", type=float)
    s.add_argument("--policy", help="maxdrain or target:<m3>")
    s.add_argument("--check-balance", action="store_true")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("synth", parents=[common], help="generate synthetic inflow and weather data")
    s.add_argument("--days", type=int)
    s.set_defaults(func=cmd_synth)
    return p


def _apply_overrides(cfg: RunConfig, args) -> None:
    """Flags win over the config file."""
    overrides = {
        "seed": ("run", "seed"),
        "validation_len": ("data", "validation_len"),
        "horizons": ("evaluate", "horizons"),
        "models": ("evaluate", "models"),
        "energy_model": ("energy", "model_file"),
        "max_pump": ("savings", "max_pump"),
        "initial_level": ("reservoir", "initial_level"),
        "policy": ("reservoir", "policy"),
        "days": ("synth", "days"),
    }
    for attr, (section, key) in overrides.items():
        value = getattr(args, attr, None)
        if value is not None:
            cfg.set(section, key, value)
    if getattr(args, "refit", False):
        cfg.set("evaluate", "refit", "true")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = RunConfig.load(args.config)
        _apply_overrides(cfg, args)
        return args.func(args, cfg)
    except (ConfigError, IngestError, ValueError, OSError, KeyError) as exc:
        print(f"leachgrid {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"leachgrid {args.command}: unexpected error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
