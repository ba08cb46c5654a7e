"""Synthetic irradiance years: Bird clear sky times an AR(1) cloud factor."""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .clear_sky import SiteAtmosphere, clear_sky_series
from .errors import ConfigError
from .series_io import IrradianceSeries

ENHANCEMENT_CEILING = 1.1
# cloud cover spans [-0.1, 1); negative cover is cloud enhancement
_COVER_OFFSET = 0.1


@dataclass(frozen=True)
class SynthConfig:
    site: SiteAtmosphere
    year: int
    step: int = 30
    cloud_persistence: float = 0.99
    cloud_depth: float = 0.7
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.site, SiteAtmosphere):
            raise ConfigError("site must be a SiteAtmosphere")
        if not 1900 <= self.year <= 2100:
            raise ConfigError(f"year {self.year} outside 1900-2100")
        if int(self.step) != self.step or self.step <= 0:
            raise ConfigError(f"step must be a positive integer, got {self.step}")
        if not 0.0 < self.cloud_persistence < 1.0:
            raise ConfigError(f"cloud_persistence must lie in (0, 1), got {self.cloud_persistence}")
        if not 0.0 <= self.cloud_depth <= 1.0:
            raise ConfigError(f"cloud_depth must lie in [0, 1], got {self.cloud_depth}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a non-negative 64-bit integer")


def ar1(n: int, persistence: float, rng: np.random.Generator) -> np.ndarray:
    """Stationary unit-variance AR(1): x[t+1] = φ·x[t] + sqrt(1 − φ²)·ε."""
    eps = rng.standard_normal(n)
    scale = np.sqrt(1.0 - persistence * persistence)
    x = np.empty(n)
    x[0] = eps[0]
    prev = eps[0]
    for i in range(1, n):
        prev = persistence * prev + scale * eps[i]
        x[i] = prev
    return x


def cloud_factor(x: np.ndarray, depth: float) -> np.ndarray:
    """Map the latent AR(1) state to a transmission factor in [1 − depth, 1.1].

    A logistic squash turns the state into cloud cover; depth 0 gives exactly 1.
    """
    cover = (1.0 + _COVER_OFFSET) / (1.0 + np.exp(-1.702 * x)) - _COVER_OFFSET
    return np.clip(1.0 - depth * cover, 1.0 - depth, ENHANCEMENT_CEILING)


def synthesize_year(config: SynthConfig) -> IrradianceSeries:
    """One calendar year of synthetic GHI at ``config.step``; night samples are 0."""
    start = datetime(config.year, 1, 1, tzinfo=timezone.utc)
    end = datetime(config.year + 1, 1, 1, tzinfo=timezone.utc)
    n = int((end - start).total_seconds()) // config.step
    clear = clear_sky_series(config.site, start, config.step, n)
    rng = np.random.default_rng(config.seed)
    factor = cloud_factor(ar1(n, config.cloud_persistence, rng), config.cloud_depth)
    return IrradianceSeries(start, config.step, clear.values * factor, np.ones(n, dtype=bool))
