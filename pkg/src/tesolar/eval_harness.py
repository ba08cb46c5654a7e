"""MAE metrics and the randomized rolling-origin experiments.

Every experiment draws its forecast origin from its own RNG stream, spawned
from the master seed by experiment index, so results do not depend on
execution order or on the number of worker processes.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from .baselines import average_forecast, persistence_forecast
from .clear_sky import ClearnessSeries
from .errors import ConfigError, InsufficientDataError
from .series_io import format_timestamp
from .tes import TesParams, default_season_length, fit, forecast, initialize

METHODS = ("tes", "persistence", "average")
QUARTILE_CONVENTION = "linear interpolation between order statistics (inclusive; numpy 'linear')"
AGGREGATE_CONVENTION = "pooled mean of per-experiment absolute errors over all lead times"


def mae(predicted, actual, mask=None) -> float:
    p = np.asarray(predicted, dtype=np.float64)
    a = np.asarray(actual, dtype=np.float64)
    if p.shape != a.shape:
        raise ConfigError(f"length mismatch: {p.shape} vs {a.shape}")
    ok = np.ones(p.shape, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    if ok.shape != p.shape:
        raise ConfigError("mask length mismatch")
    if not ok.any():
        raise InsufficientDataError("no valid pairs for MAE")
    return float(np.mean(np.abs(p[ok] - a[ok])))


def boxplot_stats(values) -> dict[str, float]:
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise InsufficientDataError("empty value list")
    q1, med, q3 = np.percentile(v, [25, 50, 75], method="linear")
    return dict(min=float(v.min()), q1=float(q1), median=float(med), q3=float(q3),
                max=float(v.max()), mean=float(v.mean()))


@dataclass(frozen=True)
class ExperimentConfig:
    """Randomized backtest settings.

    ``tes_params`` is (alpha, beta, gamma) or None to grid-fit per experiment.
    ``average_window`` defaults to ``train_len``; ``season_length`` to one day.
    """

    train_len: int
    lead_steps: tuple = (1, 2, 3, 4)
    n_experiments: int = 100
    seed: int = 0
    methods: tuple = ("tes",)
    season_length: int | None = None
    tes_params: tuple | None = None
    seasonal_init_mode: str = "additive"
    average_window: int | None = None
    n_jobs: int = 1

    def __post_init__(self):
        leads = tuple(int(m) for m in self.lead_steps)
        object.__setattr__(self, "lead_steps", leads)
        object.__setattr__(self, "methods", tuple(self.methods))
        if not leads or leads[0] < 1 or any(b <= a for a, b in zip(leads, leads[1:])):
            raise ConfigError("lead_steps must be a non-empty strictly increasing list of m >= 1")
        if self.n_experiments < 1:
            raise ConfigError("n_experiments must be >= 1")
        if self.train_len < 1:
            raise ConfigError("train_len must be >= 1")
        bad = set(self.methods) - set(METHODS)
        if bad or not self.methods:
            raise ConfigError(f"methods must be drawn from {METHODS}, got {self.methods}")
        if self.average_window is not None and self.average_window < 1:
            raise ConfigError("average_window must be >= 1")
        if self.tes_params is not None:
            object.__setattr__(self, "tes_params", tuple(float(x) for x in self.tes_params))
        if self.n_jobs < 1:
            raise ConfigError("n_jobs must be >= 1")

    def resolve(self, step: int) -> "ExperimentConfig":
        """Fill in defaults that depend on the data step and check 2L/3L minima."""
        L = self.season_length or default_season_length(step)
        window = self.average_window or self.train_len
        cfg = ExperimentConfig(**{**asdict(self), "season_length": L, "average_window": window})
        if "tes" in cfg.methods:
            minimum = 2 * L if cfg.tes_params is not None else 3 * L
            if cfg.train_len < minimum:
                raise ConfigError(
                    f"train_len {cfg.train_len} below the {minimum // L}L = {minimum} minimum "
                    f"({'fixed parameters' if cfg.tes_params else 'fitting'} needs {minimum // L} cycles)")
            if cfg.tes_params is not None:
                TesParams(*cfg.tes_params, L, cfg.seasonal_init_mode)
        return cfg


@dataclass(eq=False)
class ExperimentReport:
    config: dict
    per_method: dict  # method -> {lead m -> [abs error per experiment]}
    summary: dict  # method -> {lead m -> boxplot stats}
    pooled: dict  # method -> pooled mean error
    origins: list  # per experiment: index of the last training sample
    origin_times: list
    redraws: list  # per experiment: rejected draws before acceptance
    tes_params: list = field(default_factory=list)  # per experiment (alpha, beta, gamma)
    metadata: dict = field(default_factory=dict)

    @property
    def total_redraws(self) -> int:
        return int(sum(self.redraws))

    def to_dict(self) -> dict:
        return dict(
            config=self.config,
            per_method={m: {str(k): v for k, v in d.items()} for m, d in self.per_method.items()},
            summary={m: {str(k): v for k, v in d.items()} for m, d in self.summary.items()},
            pooled=self.pooled,
            origins=self.origins,
            origin_times=self.origin_times,
            redraws=self.redraws,
            total_redraws=self.total_redraws,
            tes_params=self.tes_params,
            metadata=self.metadata,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["method", "lead_minutes", "experiment", "mae"])
        step = self.config["step_seconds"]
        for method, by_lead in self.per_method.items():
            for m, values in by_lead.items():
                minutes = m * step / 60.0
                lead = int(minutes) if minutes == int(minutes) else minutes
                for i, v in enumerate(values):
                    w.writerow([method, lead, i, repr(v)])
        return out.getvalue()


def admissible_origins(data: ClearnessSeries, cfg: ExperimentConfig) -> np.ndarray:
    """Boolean array over last-training-sample indices t that satisfy the protocol.

    The window [t - train_len + 1, t] and all targets t + m lie inside the
    data, every target is valid, and the window holds a valid sample (for a
    fitted TES: a valid sample in the scored part after 2L).
    """
    n = len(data)
    ok = np.zeros(n, dtype=bool)
    hi = n - 1 - max(cfg.lead_steps)
    lo = cfg.train_len - 1
    if hi < lo:
        return ok
    idx = np.arange(lo, hi + 1)
    ok[idx] = True
    for m in cfg.lead_steps:
        ok[idx] &= data.mask[idx + m]
    csum = np.concatenate([[0], np.cumsum(data.mask)])
    first = idx - cfg.train_len + 1
    ok[idx] &= (csum[idx + 1] - csum[first]) > 0
    if "tes" in cfg.methods and cfg.tes_params is None:
        scored_from = first + 2 * cfg.season_length
        ok[idx] &= (csum[idx + 1] - csum[scored_from]) > 0
    return ok


def _draw_origin(rng, ok: np.ndarray, lo: int, hi: int) -> tuple[int, int]:
    redraws = 0
    while True:
        t = int(rng.integers(lo, hi + 1))
        if ok[t]:
            return t, redraws
        redraws += 1


def _run_one(data: ClearnessSeries, cfg: ExperimentConfig, ok, seed_seq) -> dict:
    rng = np.random.default_rng(seed_seq)
    lo = cfg.train_len - 1
    hi = len(data) - 1 - max(cfg.lead_steps)
    t, redraws = _draw_origin(rng, ok, lo, hi)
    history = data.slice(t - cfg.train_len + 1, t + 1)
    leads = np.asarray(cfg.lead_steps)
    m_max = int(leads[-1])
    actual = data.k[t + leads]
    errors = {}
    params = None
    for method in cfg.methods:
        if method == "tes":
            if cfg.tes_params is None:
                params = fit(history, cfg.season_length, cfg.seasonal_init_mode)
            else:
                params = TesParams(*cfg.tes_params, cfg.season_length, cfg.seasonal_init_mode)
            fc = forecast(initialize(history, params), m_max)
        elif method == "persistence":
            fc = persistence_forecast(history, m_max)
        else:
            fc = average_forecast(history, cfg.average_window, m_max)
        errors[method] = np.abs(fc.k_hat[leads - 1] - actual).tolist()
    tes = None if params is None else [params.alpha, params.beta, params.gamma]
    return dict(origin=t, redraws=redraws, errors=errors, tes_params=tes)


_WORKER: dict = {}


def _worker_init(data, cfg, ok):
    _WORKER.update(data=data, cfg=cfg, ok=ok)


def _worker_run(seed_seq):
    return _run_one(_WORKER["data"], _WORKER["cfg"], _WORKER["ok"], seed_seq)


def _run_experiments(data: ClearnessSeries, cfg: ExperimentConfig, study: str) -> ExperimentReport:
    cfg = cfg.resolve(data.step)
    ok = admissible_origins(data, cfg)
    if not ok.any():
        raise ConfigError("no admissible forecast origins in the data for this configuration")
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_experiments)
    if cfg.n_jobs == 1:
        results = [_run_one(data, cfg, ok, s) for s in seeds]
    else:
        with ProcessPoolExecutor(cfg.n_jobs, initializer=_worker_init, initargs=(data, cfg, ok)) as ex:
            results = list(ex.map(_worker_run, seeds, chunksize=max(1, cfg.n_experiments // (4 * cfg.n_jobs))))

    per_method = {
        m: {lead: [r["errors"][m][j] for r in results] for j, lead in enumerate(cfg.lead_steps)}
        for m in cfg.methods
    }
    summary = {m: {lead: boxplot_stats(v) for lead, v in d.items()} for m, d in per_method.items()}
    pooled = {m: float(np.mean([v for vals in d.values() for v in vals])) for m, d in per_method.items()}
    origins = [r["origin"] for r in results]
    t0 = int(data.start.timestamp())
    config = asdict(cfg)
    config.update(step_seconds=data.step, data_start=format_timestamp(data.start),
                  data_length=len(data), study=study)
    config["n_jobs"] = None  # execution detail, not part of the result
    return ExperimentReport(
        config=config,
        per_method=per_method,
        summary=summary,
        pooled=pooled,
        origins=origins,
        origin_times=[format_timestamp(datetime.fromtimestamp(t0 + o * data.step, tz=timezone.utc))
                      for o in origins],
        redraws=[r["redraws"] for r in results],
        tes_params=[r["tes_params"] for r in results] if "tes" in cfg.methods else [],
        metadata=dict(
            quartile_convention=QUARTILE_CONVENTION,
            aggregate=AGGREGATE_CONVENTION,
            targets="daytime (mask-valid) samples only",
            origin_sampling="uniform over window positions with rejection and redraw",
            tes_parameters="grid fit per experiment" if cfg.tes_params is None else "fixed",
            average_window=cfg.average_window,
        ),
    )


def leadtime_study(data: ClearnessSeries, cfg: ExperimentConfig) -> ExperimentReport:
    """Per-lead-time error distributions of the TES forecaster (box-plot study)."""
    if "tes" not in cfg.methods:
        raise ConfigError("leadtime study evaluates the tes method")
    return _run_experiments(data, cfg, "leadtime")


def benchmark(data: ClearnessSeries, cfg: ExperimentConfig) -> ExperimentReport:
    """Paired comparison of TES against the persistence and average baselines."""
    missing = set(METHODS) - set(cfg.methods)
    if missing:
        raise ConfigError(f"benchmark needs methods {METHODS}; missing {sorted(missing)}")
    return _run_experiments(data, cfg, "benchmark")
