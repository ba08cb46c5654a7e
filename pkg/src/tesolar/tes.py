"""Triple exponential smoothing (additive Holt-Winters) on clearness-index series.

Indexing: sample t of the training history (t = 0 is the first sample) uses
seasonal slot ``t % L``. The state counter ``t`` is the number of samples
consumed, so the last observation has index ``t - 1`` and an m-step forecast
reads slot ``(t - 1 + m) % L``.

Masked samples hold the placeholder k = 1. They enter the initial estimates
as-is; during recursion they are predict-and-skip steps: level advances by
the trend, trend and seasonal slots are untouched.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .clear_sky import K_MAX, ClearnessSeries, SiteAtmosphere, clear_sky_series, clearness_index
from .errors import ConfigError, DegenerateCycleError, InsufficientDataError, NumericDomainError
from .series_io import IrradianceSeries

SEASONAL_MODES = ("additive", "paper_ratio")
GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))


def _normalise_mode(mode: str) -> str:
    mode = mode.replace("-", "_")
    if mode not in SEASONAL_MODES:
        raise ConfigError(f"seasonal init mode must be one of {SEASONAL_MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True)
class TesParams:
    alpha: float
    beta: float
    gamma: float
    season_length: int
    seasonal_init_mode: str = "additive"

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ConfigError(f"{name} must lie in the open interval (0, 1), got {v}")
        if int(self.season_length) != self.season_length or self.season_length < 2:
            raise ConfigError(f"season length must be an integer >= 2, got {self.season_length}")
        object.__setattr__(self, "season_length", int(self.season_length))
        object.__setattr__(self, "seasonal_init_mode", _normalise_mode(self.seasonal_init_mode))


@dataclass(frozen=True)
class TesState:
    level: float
    trend: float
    seasonal: tuple
    t: int

    def __post_init__(self):
        object.__setattr__(self, "seasonal", tuple(float(c) for c in self.seasonal))

    @property
    def season_length(self) -> int:
        return len(self.seasonal)


@dataclass(frozen=True)
class InitialEstimates:
    level: float
    trend: float
    seasonal: tuple


@dataclass(frozen=True, eq=False)
class Forecast:
    """m-step-ahead clearness forecasts from observation index ``origin_t``.

    ``k_hat`` is clamped to [0, 1.5]; ``raw`` keeps the unclamped values.
    """

    origin_t: int
    steps: np.ndarray
    k_hat: np.ndarray
    raw: np.ndarray = field(default=None)

    def __post_init__(self):
        steps = np.asarray(self.steps, dtype=np.int64)
        if steps.ndim != 1 or len(steps) == 0 or steps[0] < 1 or np.any(np.diff(steps) <= 0):
            raise ConfigError("forecast steps must be a non-empty increasing sequence of m >= 1")
        raw = np.asarray(self.k_hat if self.raw is None else self.raw, dtype=np.float64)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "raw", raw)
        object.__setattr__(self, "k_hat", np.clip(np.asarray(self.k_hat, dtype=np.float64), 0.0, K_MAX))

    @property
    def horizon(self) -> list[tuple[int, float]]:
        return list(zip(self.steps.tolist(), self.k_hat.tolist()))


def initial_estimates(k, season_length: int, mode: str = "additive") -> InitialEstimates:
    """Starting level, trend and seasonal indices from the complete cycles of ``k``.

    level = k[0]; trend = mean over i of (k[L+i] − k[i]) / L; seasonal slot i
    averages, over cycles j, ``k[jL+i] − A_j`` (additive) or ``k[jL+i] / A_j``
    (paper_ratio), with A_j the cycle mean.
    """
    k = np.asarray(k, dtype=np.float64)
    L = int(season_length)
    mode = _normalise_mode(mode)
    if len(k) < 2 * L:
        raise InsufficientDataError(
            f"initialisation needs at least 2L = {2 * L} samples, got {len(k)}")
    n_cycles = len(k) // L
    cycles = k[: n_cycles * L].reshape(n_cycles, L)
    # mean taken relative to each cycle's first sample: exact for constant cycles
    ref = cycles[:, 0]
    cycle_means = ref + (cycles - ref[:, None]).sum(axis=1) / L
    level = float(k[0])
    trend = float(np.sum((k[L:2 * L] - k[:L]) / L) / L)
    if mode == "additive":
        seasonal = (cycles - cycle_means[:, None]).sum(axis=0) / n_cycles
    else:
        if np.any(cycle_means == 0):
            raise DegenerateCycleError("a seasonal cycle has zero mean; ratio indices undefined")
        seasonal = (cycles / cycle_means[:, None]).sum(axis=0) / n_cycles
    return InitialEstimates(level, trend, tuple(seasonal.tolist()))


def _step(s, b, c, t, k_t, valid, alpha, beta, gamma):
    """One smoothing step on plain floats; mutates the seasonal list ``c``."""
    slot = t % len(c)
    pred = s + b
    if not valid:
        return pred, b
    c_old = c[slot]
    # error-correction form of the smoothing equations; exact at fixed points
    s_new = pred + alpha * (k_t - c_old - pred)
    b_new = b + beta * (s_new - s - b)
    c[slot] = c_old + gamma * (k_t - pred - c_old)
    return s_new, b_new


def _check_history(history: ClearnessSeries, L: int, minimum: int):
    if len(history) < minimum:
        raise InsufficientDataError(
            f"need at least {minimum} samples ({minimum // L}L with L={L}), got {len(history)}")
    if not history.mask.any():
        raise InsufficientDataError("history has no valid (daytime) samples")


def initialize(history: ClearnessSeries | Sequence[float], params: TesParams) -> TesState:
    """Initial estimates from ``history``, then the recursion replayed over it.

    ``history`` may also be a plain sequence of k values, all taken as valid.
    The returned state has consumed every history sample (``t = len(history)``).
    """
    L = params.season_length
    if isinstance(history, ClearnessSeries):
        _check_history(history, L, 2 * L)
        k, mask = history.k.tolist(), history.mask.tolist()
    else:
        k = [float(x) for x in history]
        if not np.all(np.isfinite(k)):
            raise NumericDomainError("non-finite value in history")
        mask = [True] * len(k)
    init = initial_estimates(k, L, params.seasonal_init_mode)
    s, b, c = init.level, init.trend, list(init.seasonal)
    a, be, g = params.alpha, params.beta, params.gamma
    for t in range(1, len(k)):
        s, b = _step(s, b, c, t, k[t], mask[t], a, be, g)
    return TesState(s, b, c, len(k))


def update(state: TesState, k_t: float, params: TesParams, valid: bool = True) -> TesState:
    """Consume one observation. Invalid observations use predict-and-skip."""
    if state.season_length != params.season_length:
        raise ConfigError("state and params disagree on season length")
    if valid and not np.isfinite(k_t):
        raise NumericDomainError(f"non-finite observation {k_t}")
    c = list(state.seasonal)
    s, b = _step(state.level, state.trend, c, state.t, float(k_t), bool(valid),
                 params.alpha, params.beta, params.gamma)
    return TesState(s, b, c, state.t + 1)


def forecast(state: TesState, m_max: int) -> Forecast:
    if m_max < 1:
        raise ConfigError(f"m_max must be >= 1, got {m_max}")
    L = state.season_length
    m = np.arange(1, m_max + 1)
    seasonal = np.asarray(state.seasonal)
    raw = state.level + m * state.trend + seasonal[(state.t - 1 + m) % L]
    return Forecast(state.t - 1, m, raw, raw)


def _grid_smooth(k, valid, level, trend, seasonal, t_from, alpha, beta, gamma, score_from):
    """Run the recursion for many parameter triples at once.

    ``level``/``trend`` have shape (G,), ``seasonal`` (L, G) and is updated in
    place. One-step-ahead forecasts (clamped) are scored against valid samples
    with index >= ``score_from``. Returns (level, trend, abs_error_sum, count).
    """
    L = seasonal.shape[0]
    err = np.zeros_like(level)
    count = 0
    s, b = level, trend
    for t in range(t_from, len(k)):
        slot = t % L
        c_old = seasonal[slot]
        pred = s + b
        if not valid[t]:
            s = pred
            continue
        kt = k[t]
        if t >= score_from:
            err += np.abs(np.clip(pred + c_old, 0.0, K_MAX) - kt)
            count += 1
        s_new = pred + alpha * (kt - c_old - pred)
        b = b + beta * (s_new - s - b)
        seasonal[slot] = c_old + gamma * (kt - pred - c_old)
        s = s_new
    return s, b, err, count


def grid_scores(history: ClearnessSeries, season_length: int, mode: str = "additive",
                grid=GRID) -> tuple[np.ndarray, np.ndarray]:
    """One-step-ahead MAE of every (alpha, beta, gamma) grid triple.

    The first 2L samples initialise the smoother; the rest are scored.
    Returns (triples of shape (G, 3), mae of shape (G,)), triples in
    lexicographic order.
    """
    L = int(season_length)
    _check_history(history, L, 3 * L)
    k = history.k
    valid = history.mask
    if not valid[2 * L:].any():
        raise InsufficientDataError("no valid samples after the initialisation window")
    g = np.asarray(grid, dtype=np.float64)
    triples = np.stack(np.meshgrid(g, g, g, indexing="ij"), axis=-1).reshape(-1, 3)
    n = len(triples)
    init = initial_estimates(k[: 2 * L], L, mode)
    level = np.full(n, init.level)
    trend = np.full(n, init.trend)
    seasonal = np.repeat(np.asarray(init.seasonal)[:, None], n, axis=1)
    _, _, err, count = _grid_smooth(
        k, valid, level, trend, seasonal, 1,
        triples[:, 0].copy(), triples[:, 1].copy(), triples[:, 2].copy(), 2 * L)
    return triples, err / count


def fit(history: ClearnessSeries, season_length: int, mode: str = "additive") -> TesParams:
    """Grid search over alpha, beta, gamma in {0.05, ..., 0.95} minimising one-step MAE.

    Ties go to the lowest alpha, then beta, then gamma.
    """
    triples, mae = grid_scores(history, season_length, mode)
    best = int(np.argmin(mae))
    a, b, g = (float(x) for x in triples[best])
    return TesParams(a, b, g, season_length, mode)


def default_season_length(step: int) -> int:
    """Samples per day at ``step`` seconds."""
    if 86400 % step:
        raise ConfigError(f"a day is not a whole number of {step} s steps")
    return 86400 // step


@dataclass(frozen=True, eq=False)
class PipelineResult:
    """Forecast plus what is needed to turn it back into irradiance."""

    forecast: Forecast
    params: TesParams
    times: np.ndarray
    clear_sky: np.ndarray

    @property
    def irradiance(self) -> np.ndarray:
        return self.forecast.k_hat * self.clear_sky


def run_pipeline(measured: IrradianceSeries, atm: SiteAtmosphere, train_len: int, m_max: int,
                 params: TesParams | None = None, season_length: int | None = None,
                 mode: str = "additive") -> PipelineResult:
    """Clear-sky model -> clearness index -> TES training -> m-step forecast.

    Trains on the last ``train_len`` samples of ``measured`` and forecasts the
    ``m_max`` instants that follow. With ``params=None`` the smoothing factors
    are fitted on the training window.
    """
    L = season_length or (params.season_length if params else default_season_length(measured.step))
    if params is not None and params.season_length != L:
        raise ConfigError("params.season_length disagrees with season_length")
    if train_len < 2 * L:
        raise InsufficientDataError(f"train_len {train_len} is below the 2L = {2 * L} minimum")
    if len(measured) < train_len:
        raise InsufficientDataError(f"measured series has {len(measured)} < {train_len} samples")
    window = measured.slice(len(measured) - train_len, len(measured))
    clear = clear_sky_series(atm, window.start, window.step, train_len + m_max)
    history = clearness_index(window, clear.slice(0, train_len))
    if params is None:
        params = fit(history, L, mode)
    state = initialize(history, params)
    fc = forecast(state, m_max)
    times = clear.times()[train_len:]
    return PipelineResult(fc, params, times, clear.values[train_len:].copy())
