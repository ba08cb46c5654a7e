"""Persistence and trailing-average reference forecasters."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clear_sky import ClearnessSeries
from .errors import ConfigError, InsufficientDataError
from .tes import Forecast

BASELINE_KINDS = ("persistence", "average")


@dataclass(frozen=True)
class BaselineKind:
    kind: str
    window: int | None = None

    def __post_init__(self):
        if self.kind not in BASELINE_KINDS:
            raise ConfigError(f"unknown baseline {self.kind!r}")
        if self.kind == "average" and (self.window is None or self.window < 1):
            raise ConfigError("average baseline needs window >= 1")


def _flat(history: ClearnessSeries, value: float, m_max: int) -> Forecast:
    if m_max < 1:
        raise ConfigError(f"m_max must be >= 1, got {m_max}")
    return Forecast(len(history) - 1, np.arange(1, m_max + 1), np.full(m_max, value))


def persistence_forecast(history: ClearnessSeries, m_max: int) -> Forecast:
    """Repeat the last valid k for every horizon."""
    idx = np.flatnonzero(history.mask)
    if len(idx) == 0:
        raise InsufficientDataError("no valid sample in history")
    return _flat(history, float(history.k[idx[-1]]), m_max)


def average_forecast(history: ClearnessSeries, window: int, m_max: int) -> Forecast:
    """Mean of the valid k over the trailing ``window`` samples, for every horizon."""
    if window < 1:
        raise ConfigError(f"window must be >= 1, got {window}")
    k = history.k[-window:]
    ok = history.mask[-window:]
    if not ok.any():
        raise InsufficientDataError(f"no valid sample in the trailing {window} samples")
    vals = k[ok]
    # offset from the first value so a constant window averages exactly
    return _flat(history, float(vals[0] + np.mean(vals - vals[0])), m_max)


def baseline_forecast(history: ClearnessSeries, kind: BaselineKind, m_max: int) -> Forecast:
    if kind.kind == "persistence":
        return persistence_forecast(history, m_max)
    return average_forecast(history, kind.window, m_max)
