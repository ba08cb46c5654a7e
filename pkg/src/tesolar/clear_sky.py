"""Bird & Hulstrom clear-sky model and the clearness index."""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from .errors import (AlignmentError, ConfigError, DataError, InsufficientDataError,
                     NumericDomainError, SunBelowHorizon)
from .series_io import IrradianceSeries, to_utc, unix_seconds
from .solar_geometry import (STANDARD_PRESSURE, GeoLocation, extraterrestrial_irradiance,
                             relative_air_mass, sun_position)

NIGHT_THRESHOLD = 20.0  # W/m², clear-sky level below which k is undefined
K_MAX = 1.5
NIGHT_K = 1.0


@dataclass(frozen=True)
class SiteAtmosphere:
    """Site coordinates plus the static Bird atmospheric inputs.

    ozone and precipitable_water are column amounts in atm-cm and cm; the
    aerosol optical depths are broadband-free values at 380 nm and 500 nm.
    """

    location: GeoLocation
    ozone: float = 0.3
    precipitable_water: float = 1.5
    aod_380nm: float = 0.15
    aod_500nm: float = 0.1
    ground_albedo: float = 0.2
    pressure: float = STANDARD_PRESSURE
    forward_scatter: float = 0.84

    def __post_init__(self):
        if not isinstance(self.location, GeoLocation):
            raise ConfigError("location must be a GeoLocation")
        checks = [
            ("ozone", self.ozone > 0),
            ("precipitable_water", self.precipitable_water > 0),
            ("aod_380nm", self.aod_380nm >= 0),
            ("aod_500nm", self.aod_500nm >= 0),
            ("ground_albedo", 0.0 <= self.ground_albedo <= 1.0),
            ("pressure", 300.0 <= self.pressure <= 1100.0),
            ("forward_scatter", 0.0 < self.forward_scatter <= 1.0),
        ]
        for name, ok in checks:
            if not ok:
                raise ConfigError(f"{name}={getattr(self, name)} out of range")


@dataclass(frozen=True)
class BirdComponents:
    """Bird model outputs. ``direct`` is the horizontal beam component
    (``direct_normal`` · cos z) so that ``total = (direct + scattered) / (1 − R_g·r_s)``."""

    zenith: float
    extraterrestrial: float
    direct_normal: float
    direct: float
    scattered: float
    total: float
    atmospheric_albedo: float
    t_rayleigh: float
    t_ozone: float
    t_mixed_gases: float
    t_water: float
    t_aerosol: float
    t_aerosol_absorption: float


def bird_irradiance(atm: SiteAtmosphere, zenith, extraterrestrial) -> dict[str, np.ndarray]:
    """Vectorised Bird model at given zenith angles (deg) and ETR (W/m²).

    Samples with zenith >= 90 are returned as zero irradiance.
    """
    z = np.atleast_1d(np.asarray(zenith, dtype=np.float64))
    etr = np.broadcast_to(np.asarray(extraterrestrial, dtype=np.float64), z.shape)
    day = z < 90.0
    zd = np.where(day, z, 0.0)

    am = relative_air_mass(zd)
    amp = am * atm.pressure / STANDARD_PRESSURE
    cos_z = np.cos(np.radians(zd))

    t_r = np.exp(-0.0903 * amp ** 0.84 * (1.0 + amp - amp ** 1.01))
    xo = atm.ozone * am
    t_o = (1.0 - 0.1611 * xo * (1.0 + 139.48 * xo) ** -0.3035
           - 0.002715 * xo / (1.0 + 0.044 * xo + 0.0003 * xo ** 2))
    t_um = np.exp(-0.0127 * amp ** 0.26)
    xw = atm.precipitable_water * am
    t_w = 1.0 - 2.4959 * xw / ((1.0 + 79.034 * xw) ** 0.6828 + 6.385 * xw)
    tau = 0.2758 * atm.aod_380nm + 0.35 * atm.aod_500nm
    t_a = np.exp(-(tau ** 0.873) * (1.0 + tau - tau ** 0.7088) * am ** 0.9108)
    t_aa = 1.0 - 0.1 * (1.0 - am + am ** 1.06) * (1.0 - t_a)

    trans = [np.clip(x, 0.0, 1.0) for x in (t_r, t_o, t_um, t_w, t_a)]
    t_r, t_o, t_um, t_w, t_a = trans
    # absorption-only transmittance cannot fall below the total aerosol one;
    # the polynomial in air mass violates that within ~1° of the horizon
    t_aa = np.clip(t_aa, t_a, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        scatter_ratio = np.where(t_aa > 0, t_a / t_aa, 1.0)

    r_s = 0.0685 + (1.0 - atm.forward_scatter) * (1.0 - scatter_ratio)
    dni = 0.9662 * etr * t_a * t_w * t_um * t_o * t_r
    direct = dni * cos_z
    scattered = (0.79 * etr * cos_z * t_aa * t_w * t_um * t_o
                 * (0.5 * (1.0 - t_r) + atm.forward_scatter * (1.0 - scatter_ratio))
                 / (1.0 - am + am ** 1.02))
    total = (direct + scattered) / (1.0 - atm.ground_albedo * r_s)

    out = dict(
        zenith=z, extraterrestrial=etr.copy(), direct_normal=dni, direct=direct,
        scattered=scattered, total=total, atmospheric_albedo=r_s,
        t_rayleigh=t_r, t_ozone=t_o, t_mixed_gases=t_um, t_water=t_w,
        t_aerosol=t_a, t_aerosol_absorption=t_aa,
    )
    checked = np.column_stack([v[day] for k, v in out.items() if k != "zenith"])
    if not np.all(np.isfinite(checked)):
        raise NumericDomainError("non-finite value in Bird model intermediates")
    for key in ("direct_normal", "direct", "scattered", "total"):
        out[key] = np.where(day, out[key], 0.0)
    return out


def bird_components(atm: SiteAtmosphere, t) -> BirdComponents:
    """All Bird model components at instant ``t``; raises SunBelowHorizon at night."""
    pos = sun_position(atm.location, t)
    if pos.zenith >= 90.0:
        raise SunBelowHorizon(f"sun below horizon at {to_utc(t).isoformat()}")
    res = bird_irradiance(atm, pos.zenith, extraterrestrial_irradiance(t))
    return BirdComponents(**{f.name: float(res[f.name][0]) for f in fields(BirdComponents)})


def clear_sky_series(atm: SiteAtmosphere, start, step: int, n: int) -> IrradianceSeries:
    """Clear-sky GHI on the grid start + i·step, i < n. Night samples are 0 and valid."""
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    if step <= 0:
        raise ConfigError(f"step must be positive, got {step}")
    t0 = unix_seconds(start)
    secs = t0 + int(step) * np.arange(n, dtype=np.int64)
    pos = sun_position(atm.location, secs)
    etr = extraterrestrial_irradiance(secs)
    ghi = bird_irradiance(atm, pos.zenith, etr)["total"]
    return IrradianceSeries(to_utc(start), int(step), ghi, np.ones(n, dtype=bool))


@dataclass(frozen=True, eq=False)
class ClearnessSeries:
    """Clearness index k with validity mask. Masked samples hold k = 1."""

    start: datetime
    step: int
    k: np.ndarray
    mask: np.ndarray = field(default=None)

    def __post_init__(self):
        k = np.array(self.k, dtype=np.float64)
        mask = np.ones(k.shape, dtype=bool) if self.mask is None else np.array(self.mask, dtype=bool)
        if k.ndim != 1 or mask.shape != k.shape:
            raise ConfigError("k and mask must be one-dimensional and of equal length")
        if int(self.step) != self.step or self.step <= 0:
            raise ConfigError(f"step must be a positive integer, got {self.step}")
        if not np.all(np.isfinite(k[mask])):
            raise ConfigError("valid k values must be finite")
        if np.any(k[mask] < 0) or np.any(k[mask] > K_MAX):
            raise ConfigError(f"valid k values must lie in [0, {K_MAX}]")
        k[~mask] = NIGHT_K
        k.flags.writeable = False
        mask.flags.writeable = False
        object.__setattr__(self, "start", to_utc(self.start))
        object.__setattr__(self, "step", int(self.step))
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "mask", mask)

    def __len__(self):
        return len(self.k)

    def __eq__(self, other):
        if not isinstance(other, ClearnessSeries):
            return NotImplemented
        return (self.start == other.start and self.step == other.step
                and self.k.tobytes() == other.k.tobytes()
                and self.mask.tobytes() == other.mask.tobytes())

    __hash__ = None

    def slice(self, lo: int, hi: int) -> "ClearnessSeries":
        start = self.start + timedelta(seconds=lo * self.step)
        return ClearnessSeries(start, self.step, self.k[lo:hi], self.mask[lo:hi])


def _check_aligned(a: IrradianceSeries, b: IrradianceSeries):
    if a.start != b.start or a.step != b.step or len(a) != len(b):
        raise AlignmentError(
            f"series differ: start {a.start}/{b.start}, step {a.step}/{b.step}, length {len(a)}/{len(b)}"
        )


def clearness_index(measured: IrradianceSeries, clear: IrradianceSeries) -> ClearnessSeries:
    """k = measured / clear-sky, clamped to [0, 1.5]; night or invalid samples are masked."""
    _check_aligned(measured, clear)
    phi_s = np.where(clear.valid, clear.values, 0.0)
    mask = measured.valid & (phi_s >= NIGHT_THRESHOLD)
    k = np.full(len(measured), NIGHT_K)
    k[mask] = np.clip(measured.values[mask] / phi_s[mask], 0.0, K_MAX)
    return ClearnessSeries(measured.start, measured.step, k, mask)


def clear_day_correlation(measured: IrradianceSeries, clear: IrradianceSeries, days) -> float:
    """Pearson correlation of measured vs clear-sky GHI over the daytime samples of ``days``."""
    _check_aligned(measured, clear)
    days = list(days)
    if not days:
        raise ConfigError("no days given")
    t = measured.unix_times()
    lo_t, hi_t = t[0], t[-1] + measured.step
    select = np.zeros(len(measured), dtype=bool)
    for d in days:
        if isinstance(d, datetime):
            d = d.date()
        if not isinstance(d, date):
            d = date.fromisoformat(str(d))
        d0 = int(datetime(d.year, d.month, d.day, tzinfo=timezone.utc).timestamp())
        d1 = d0 + 86400
        if d0 < lo_t or d1 > hi_t:
            raise InsufficientDataError(f"day {d} is not fully covered by the series")
        select |= (t >= d0) & (t < d1)
    use = select & measured.valid & clear.valid & (np.nan_to_num(clear.values) >= NIGHT_THRESHOLD)
    if use.sum() < 3:
        raise InsufficientDataError(f"only {int(use.sum())} daytime samples on the listed days")
    x = measured.values[use]
    y = clear.values[use]
    if np.std(x) == 0 or np.std(y) == 0:
        raise DataError("correlation undefined for a constant series")
    return float(np.clip(np.corrcoef(x, y)[0, 1], -1.0, 1.0))


# key -> (field, unit/description)
SITE_KEYS = {
    "latitude": "degrees north, [-90, 90]",
    "longitude": "degrees east, [-180, 180]",
    "elevation_m": "metres above sea level, >= -500",
    "ozone_atm_cm": "ozone column, atm-cm, > 0",
    "precipitable_water_cm": "precipitable water column, cm, > 0",
    "aod_380nm": "aerosol optical depth at 380 nm, >= 0",
    "aod_500nm": "aerosol optical depth at 500 nm, >= 0",
    "ground_albedo": "ground reflectivity R_g, [0, 1]",
    "pressure_hpa": "surface pressure, hPa, [300, 1100]",
    "forward_scatter": "aerosol forward-scatter ratio B_a, (0, 1]",
}


def parse_site_config(text: str) -> SiteAtmosphere:
    """Parse flat ``key=value`` site configuration text (``#`` starts a comment)."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"site config line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in SITE_KEYS:
            raise ConfigError(f"site config line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"site config line {lineno}: duplicate key {key!r}")
        try:
            values[key] = float(val)
        except ValueError:
            raise ConfigError(f"site config line {lineno}: {key} is not a number") from None
    for key in ("latitude", "longitude"):
        if key not in values:
            raise ConfigError(f"site config: missing required key {key!r}")
    loc = GeoLocation(values["latitude"], values["longitude"], values.get("elevation_m", 0.0))
    defaults = SiteAtmosphere(loc)
    return SiteAtmosphere(
        loc,
        ozone=values.get("ozone_atm_cm", defaults.ozone),
        precipitable_water=values.get("precipitable_water_cm", defaults.precipitable_water),
        aod_380nm=values.get("aod_380nm", defaults.aod_380nm),
        aod_500nm=values.get("aod_500nm", defaults.aod_500nm),
        ground_albedo=values.get("ground_albedo", defaults.ground_albedo),
        pressure=values.get("pressure_hpa", defaults.pressure),
        forward_scatter=values.get("forward_scatter", defaults.forward_scatter),
    )


def load_site_config(path) -> SiteAtmosphere:
    return parse_site_config(Path(path).read_text())


def format_site_config(atm: SiteAtmosphere) -> str:
    loc = atm.location
    rows = [
        ("latitude", loc.latitude), ("longitude", loc.longitude), ("elevation_m", loc.elevation),
        ("ozone_atm_cm", atm.ozone), ("precipitable_water_cm", atm.precipitable_water),
        ("aod_380nm", atm.aod_380nm), ("aod_500nm", atm.aod_500nm),
        ("ground_albedo", atm.ground_albedo), ("pressure_hpa", atm.pressure),
        ("forward_scatter", atm.forward_scatter),
    ]
    return "".join(f"{k}={v!r}  # {SITE_KEYS[k]}\n" for k, v in rows)
