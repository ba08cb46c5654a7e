"""Command-line entry point.

Exit codes: 0 success, 1 invalid arguments or configuration, 2 the data
cannot support the request. Errors are reported as one line on stderr:
``tesolar: error: kind=<ErrorClass> reason=<message>``.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import __version__
from .clear_sky import clear_sky_series, clearness_index, load_site_config
from .errors import ConfigError, DataError, TesolarError
from .eval_harness import METHODS, ExperimentConfig, benchmark, leadtime_study
from .series_io import format_timestamp, parse_csv, resample, to_utc, write_csv
from .synthetic import SynthConfig, synthesize_year
from .tes import TesParams, default_season_length, run_pipeline


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: kind=UsageError reason={message}\n")


def _fail(code: int, exc: Exception) -> int:
    reason = " ".join(str(exc).split())
    print(f"tesolar: error: kind={type(exc).__name__} reason={reason}", file=sys.stderr)
    return code


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _write_meta(meta: dict, out: str | None):
    """Sidecar ``<out>.meta.json`` so CSV outputs keep their plain schema."""
    if out is not None and out != "-":
        Path(out + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _load_measured(args):
    text = Path(args.measured).read_text()
    series = parse_csv(text)
    if args.step is not None and args.step != series.step:
        series = resample(series, args.step)
    return series


def _season_length(args, step: int) -> int:
    return args.season_length or default_season_length(step)


def _samples(text: str, L: int, flag: str) -> int:
    """'6L' -> 6·L samples; a bare integer is a sample count."""
    m = re.fullmatch(r"\s*(\d+)\s*([lL])?\s*", text)
    if not m:
        raise ConfigError(f"{flag} must be a sample count or a multiple of L like '6L', got {text!r}")
    n = int(m.group(1))
    return n * L if m.group(2) else n


def _lead_steps(text: str, step: int) -> int:
    """'20m' (or '20') minutes -> number of steps; must divide exactly."""
    m = re.fullmatch(r"\s*(\d+(?:\.\d+)?)\s*(m|min)?\s*", text)
    if not m:
        raise ConfigError(f"--lead must be minutes like '20m', got {text!r}")
    seconds = float(m.group(1)) * 60.0
    steps = seconds / step
    if steps != int(steps) or steps < 1:
        raise ConfigError(f"lead {text} is not a whole number (>= 1) of {step} s steps")
    return int(steps)


def _tes_choice(args):
    given = [v is not None for v in (args.alpha, args.beta, args.gamma)]
    if any(given) and not all(given):
        raise ConfigError("--alpha, --beta and --gamma must be given together")
    if all(given) and args.fit:
        raise ConfigError("--fit conflicts with explicit --alpha/--beta/--gamma")
    return (args.alpha, args.beta, args.gamma) if all(given) else None


def _check_train(train: int, L: int, fitting: bool):
    if train < 2 * L:
        raise ConfigError(f"--train {train} is below the 2L minimum of {2 * L} samples (L={L})")
    if fitting and train < 3 * L:
        raise ConfigError(f"--train {train} is below the 3L = {3 * L} samples needed to fit parameters")


def cmd_clearsky(args):
    atm = load_site_config(args.site)
    n = int(round(args.hours * 3600 / args.step))
    if n < 1:
        raise ConfigError("--hours too small for the step")
    series = clear_sky_series(atm, to_utc(args.start), args.step, n)
    _write(write_csv(series), args.out)
    _write_meta(dict(command="clearsky", site=args.site, start=format_timestamp(series.start),
                     hours=args.hours, step=args.step, samples=n), args.out)


def cmd_kindex(args):
    atm = load_site_config(args.site)
    measured = _load_measured(args)
    clear = clear_sky_series(atm, measured.start, measured.step, len(measured))
    ks = clearness_index(measured, clear)
    lines = ["timestamp_utc,k,valid"]
    for t, k, ok in zip(clear.times(), ks.k.tolist(), ks.mask.tolist()):
        lines.append(f"{str(t)}Z,{k!r},{int(ok)}")
    _write("\n".join(lines) + "\n", args.out)
    _write_meta(dict(command="kindex", measured=args.measured, site=args.site, step=measured.step,
                     night_threshold_wm2=20.0, k_max=1.5), args.out)


def cmd_forecast(args):
    atm = load_site_config(args.site)
    fixed = _tes_choice(args)
    measured = _load_measured(args)
    L = _season_length(args, measured.step)
    train = _samples(args.train, L, "--train")
    _check_train(train, L, fixed is None)
    m_max = _lead_steps(args.lead, measured.step)
    mode = args.seasonal_init.replace("-", "_")
    params = None if fixed is None else TesParams(*fixed, L, mode)
    res = run_pipeline(measured, atm, train, m_max, params=params, season_length=L, mode=mode)
    lines = ["timestamp_utc,lead_minutes,k_hat,clear_sky_wm2,ghi_forecast_wm2"]
    for m, t, k, cs, ghi in zip(res.forecast.steps.tolist(), res.times, res.forecast.k_hat.tolist(),
                                res.clear_sky.tolist(), res.irradiance.tolist()):
        minutes = m * measured.step / 60
        lead = int(minutes) if minutes == int(minutes) else minutes
        lines.append(f"{str(t)}Z,{lead},{k!r},{cs!r},{ghi!r}")
    _write("\n".join(lines) + "\n", args.out)
    p = res.params
    _write_meta(dict(command="forecast", measured=args.measured, site=args.site, step=measured.step,
                     season_length=L, train=train, lead_steps=m_max, fitted=fixed is None,
                     alpha=p.alpha, beta=p.beta, gamma=p.gamma, seasonal_init=p.seasonal_init_mode),
                args.out)


def _experiment(args, study: str):
    atm = load_site_config(args.site)
    fixed = _tes_choice(args)
    measured = _load_measured(args)
    L = _season_length(args, measured.step)
    train = _samples(args.train, L, "--train")
    _check_train(train, L, fixed is None)
    m_max = _lead_steps(args.lead, measured.step)
    cfg = ExperimentConfig(
        train_len=train,
        lead_steps=tuple(range(1, m_max + 1)),
        n_experiments=args.experiments,
        seed=args.seed,
        methods=METHODS if study == "benchmark" else ("tes",),
        season_length=L,
        tes_params=fixed,
        seasonal_init_mode=args.seasonal_init.replace("-", "_"),
        average_window=_samples(args.average_window, L, "--average-window") if args.average_window else None,
        n_jobs=args.jobs,
    )
    clear = clear_sky_series(atm, measured.start, measured.step, len(measured))
    data = clearness_index(measured, clear)
    report = (benchmark if study == "benchmark" else leadtime_study)(data, cfg)
    report.config.update(measured=args.measured, site=args.site)
    _write(report.to_json(), args.out_json)
    if args.out_csv:
        Path(args.out_csv).write_text(report.to_csv())


def cmd_synth(args):
    atm = load_site_config(args.site)
    cfg = SynthConfig(atm, args.year, args.step, args.cloud_persistence, args.cloud_depth, args.seed)
    series = synthesize_year(cfg)
    _write(write_csv(series), args.out)
    _write_meta(dict(command="synth", site=args.site, year=args.year, step=args.step, seed=args.seed,
                     cloud_depth=args.cloud_depth, cloud_persistence=args.cloud_persistence), args.out)


def _add_tes_flags(p):
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--fit", action="store_true", help="grid-fit alpha, beta, gamma (default)")
    p.add_argument("--seasonal-init", choices=["additive", "paper-ratio", "paper_ratio"], default="additive")
    p.add_argument("--season-length", type=int, help="samples per season (default: one day)")


def _add_measured_flags(p):
    p.add_argument("--measured", required=True, help="CSV with timestamp_utc,ghi_wm2")
    p.add_argument("--site", required=True, help="site/atmosphere key=value file")
    p.add_argument("--step", type=int, help="resample to this step in seconds first")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tesolar", description="Intra-hour solar irradiance forecasting via the clearness index.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("clearsky", help="Bird clear-sky GHI curve")
    p.add_argument("--site", required=True)
    p.add_argument("--start", required=True, help="ISO-8601 UTC start")
    p.add_argument("--hours", type=float, required=True)
    p.add_argument("--step", type=int, default=300)
    p.add_argument("--out")
    p.set_defaults(func=cmd_clearsky)

    p = sub.add_parser("kindex", help="clearness index of a measured series")
    _add_measured_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kindex)

    p = sub.add_parser("forecast", help="TES forecast after the end of the measured series")
    _add_measured_flags(p)
    p.add_argument("--train", default="6L", help="training samples, or multiple of L like 6L")
    p.add_argument("--lead", default="20m", help="maximum lead time in minutes, e.g. 20m")
    _add_tes_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_forecast)

    for name, train, n in (("benchmark", "4L", 100), ("leadtime-study", "6L", 150)):
        p = sub.add_parser(name, help=f"randomized {name} report (JSON + CSV)")
        _add_measured_flags(p)
        p.add_argument("--train", default=train)
        p.add_argument("--lead", default="20m")
        p.add_argument("--experiments", type=int, default=n)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--average-window", help="samples or multiple of L (default: training length)")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--out-json")
        p.add_argument("--out-csv")
        _add_tes_flags(p)
        p.set_defaults(func=lambda a, name=name: _experiment(a, name))

    p = sub.add_parser("synth", help="synthetic year: clear sky times an AR(1) cloud factor")
    p.add_argument("--site", required=True)
    p.add_argument("--year", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cloud-depth", type=float, default=0.7)
    p.add_argument("--cloud-persistence", type=float, default=0.99)
    p.add_argument("--step", type=int, default=30)
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors, --help, --version
        return int(exc.code or 0)
    try:
        args.func(args)
    except ConfigError as exc:
        return _fail(1, exc)
    except (DataError, TesolarError) as exc:
        return _fail(2, exc)
    except OSError as exc:
        return _fail(2, exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
