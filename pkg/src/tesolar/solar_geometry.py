"""Sun position, relative optical air mass and extraterrestrial irradiance.

Sun position uses the NOAA low-precision ephemeris (Meeus series truncated as
in the NOAA solar calculator); the Earth-Sun distance factor uses Spencer's
Fourier series. Everything is vectorised over time.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

import numpy as np

from .errors import ConfigError, RangeError, SunBelowHorizon
from .series_io import to_utc

SOLAR_CONSTANT = 1367.0
STANDARD_PRESSURE = 1013.25

_MIN_UNIX = -2208988800  # 1900-01-01T00:00:00Z
_MAX_UNIX = 4133980799  # 2100-12-31T23:59:59Z


@dataclass(frozen=True)
class GeoLocation:
    latitude: float
    longitude: float
    elevation: float = 0.0

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise ConfigError(f"latitude {self.latitude} outside [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise ConfigError(f"longitude {self.longitude} outside [-180, 180]")
        if not self.elevation >= -500.0:
            raise ConfigError(f"elevation {self.elevation} below -500 m")


@dataclass(frozen=True)
class SolarPosition:
    """Geometric (unrefracted) sun position. Angles in degrees; may be arrays."""

    zenith: np.ndarray | float
    azimuth: np.ndarray | float
    day_angle: np.ndarray | float
    earth_sun_distance_factor: np.ndarray | float

    @property
    def elevation_angle(self):
        return 90.0 - self.zenith


def _as_unix(t) -> np.ndarray:
    """Seconds since the epoch for a datetime, ISO string, datetime64 or array thereof."""
    if isinstance(t, (datetime, str)):
        secs = np.asarray(to_utc(t).timestamp(), dtype=np.float64)
    else:
        arr = np.asarray(t)
        if np.issubdtype(arr.dtype, np.datetime64):
            secs = arr.astype("datetime64[s]").astype(np.int64).astype(np.float64)
        else:
            secs = arr.astype(np.float64)
    if np.any(secs < _MIN_UNIX) or np.any(secs > _MAX_UNIX):
        raise RangeError("timestamp outside the supported years 1900-2100")
    return secs


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def day_angle(t) -> np.ndarray:
    """Spencer day angle 2π(doy − 1)/days_in_year, in radians."""
    secs = _as_unix(t)
    days = np.floor(secs / 86400.0).astype(np.int64).astype("datetime64[D]")
    years = days.astype("datetime64[Y]")
    doy = (days - years).astype(np.int64)  # 0-based
    ylen = ((years + 1).astype("datetime64[D]") - years.astype("datetime64[D]")).astype(np.int64)
    return 2.0 * np.pi * doy / ylen


def earth_sun_distance_factor(t) -> np.ndarray:
    """Eccentricity correction (r0/r)² from Spencer's series."""
    g = day_angle(t)
    return (1.000110 + 0.034221 * np.cos(g) + 0.001280 * np.sin(g)
            + 0.000719 * np.cos(2 * g) + 0.000077 * np.sin(2 * g))


def extraterrestrial_irradiance(t):
    """Normal-incidence irradiance at the top of the atmosphere, W/m²."""
    return _scalar(SOLAR_CONSTANT * earth_sun_distance_factor(t))


def sun_position(loc: GeoLocation, t) -> SolarPosition:
    """Zenith and azimuth (clockwise from north) of the sun at ``t``."""
    secs = _as_unix(t)
    jd = secs / 86400.0 + 2440587.5
    jc = (jd - 2451545.0) / 36525.0

    mean_long = np.mod(280.46646 + jc * (36000.76983 + jc * 0.0003032), 360.0)
    mean_anom = np.radians(357.52911 + jc * (35999.05029 - 0.0001537 * jc))
    ecc = 0.016708634 - jc * (0.000042037 + 0.0000001267 * jc)
    center = (np.sin(mean_anom) * (1.914602 - jc * (0.004817 + 0.000014 * jc))
              + np.sin(2 * mean_anom) * (0.019993 - 0.000101 * jc)
              + np.sin(3 * mean_anom) * 0.000289)
    true_long = mean_long + center
    omega = np.radians(125.04 - 1934.136 * jc)
    app_long = np.radians(true_long - 0.00569 - 0.00478 * np.sin(omega))
    mean_obliq = 23.0 + (26.0 + (21.448 - jc * (46.815 + jc * (0.00059 - jc * 0.001813))) / 60.0) / 60.0
    obliq = np.radians(mean_obliq + 0.00256 * np.cos(omega))
    decl = np.arcsin(np.sin(obliq) * np.sin(app_long))

    y = np.tan(obliq / 2.0) ** 2
    l0 = np.radians(mean_long)
    eot = 4.0 * np.degrees(
        y * np.sin(2 * l0) - 2 * ecc * np.sin(mean_anom)
        + 4 * ecc * y * np.sin(mean_anom) * np.cos(2 * l0)
        - 0.5 * y * y * np.sin(4 * l0) - 1.25 * ecc * ecc * np.sin(2 * mean_anom)
    )

    minutes = np.mod(secs, 86400.0) / 60.0
    true_solar = np.mod(minutes + eot + 4.0 * loc.longitude, 1440.0)
    hour_angle = np.radians(true_solar / 4.0 - 180.0)

    lat = np.radians(loc.latitude)
    cos_z = np.sin(lat) * np.sin(decl) + np.cos(lat) * np.cos(decl) * np.cos(hour_angle)
    zenith = np.degrees(np.arccos(np.clip(cos_z, -1.0, 1.0)))
    azimuth = np.mod(np.degrees(np.arctan2(
        np.sin(hour_angle),
        np.cos(hour_angle) * np.sin(lat) - np.tan(decl) * np.cos(lat),
    )) + 180.0, 360.0)

    return SolarPosition(
        zenith=_scalar(zenith),
        azimuth=_scalar(azimuth),
        day_angle=_scalar(day_angle(secs)),
        earth_sun_distance_factor=_scalar(earth_sun_distance_factor(secs)),
    )


def relative_air_mass(zenith):
    """Kasten–Young (1989) relative optical air mass; NaN where zenith >= 90."""
    z = np.asarray(zenith, dtype=np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        am = 1.0 / (np.cos(np.radians(z)) + 0.50572 * (96.07995 - z) ** -1.6364)
    return np.where(z < 90.0, am, np.nan)


def air_mass(zenith: float, pressure: float = STANDARD_PRESSURE) -> float:
    """Pressure-corrected air mass m_p = m_r · p / 1013.25.

    Raises SunBelowHorizon for zenith >= 90°.
    """
    if not zenith < 90.0:
        raise SunBelowHorizon(f"zenith {zenith}° is at or below the horizon")
    if zenith < 0:
        raise ConfigError(f"zenith {zenith}° is negative")
    return float(relative_air_mass(zenith)) * pressure / STANDARD_PRESSURE
