from datetime import date

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tesolar.clear_sky import (NIGHT_THRESHOLD, ClearnessSeries, SiteAtmosphere, bird_components,
                               bird_irradiance, clear_day_correlation, clear_sky_series,
                               clearness_index, format_site_config, parse_site_config)
from tesolar.errors import AlignmentError, ConfigError, InsufficientDataError, SunBelowHorizon
from tesolar.series_io import IrradianceSeries
from tesolar.solar_geometry import GeoLocation
from tesolar.synthetic import SynthConfig, synthesize_year

from conftest import UTRECHT


def _atm(a, loc=UTRECHT, **kw):
    return SiteAtmosphere(loc, a["ozone"], a["precipitable_water"], a["aod380"], a["aod500"],
                          a["albedo"], a["pressure"], 0.84, **kw)


def test_site_validation():
    with pytest.raises(ConfigError):
        SiteAtmosphere(UTRECHT, ozone=0)
    with pytest.raises(ConfigError):
        SiteAtmosphere(UTRECHT, pressure=200)
    with pytest.raises(ConfigError):
        SiteAtmosphere(UTRECHT, forward_scatter=0)
    with pytest.raises(ConfigError):
        SiteAtmosphere(UTRECHT, ground_albedo=1.2)


def test_night_signal(utrecht):
    with pytest.raises(SunBelowHorizon):
        bird_components(utrecht, "2015-06-21T23:00:00Z")
    assert bird_irradiance(utrecht, [95.0], 1367.0)["total"][0] == 0.0


def test_zero_albedo_is_plain_sum():
    atm = SiteAtmosphere(UTRECHT, ground_albedo=0.0)
    c = bird_components(atm, "2015-06-21T11:40:00Z")
    assert c.total == c.direct + c.scattered


def test_eq1_identity_and_ranges(utrecht):
    z = np.linspace(0, 89.5, 400)
    r = bird_irradiance(utrecht, z, 1367.0)
    ident = (r["direct"] + r["scattered"]) / (1 - utrecht.ground_albedo * r["atmospheric_albedo"])
    np.testing.assert_allclose(r["total"], ident, rtol=1e-12, atol=1e-12)
    for key in ("t_rayleigh", "t_ozone", "t_mixed_gases", "t_water", "t_aerosol", "t_aerosol_absorption"):
        assert np.all((r[key] >= 0) & (r[key] <= 1))
    assert np.all((0 <= r["atmospheric_albedo"]) & (r["atmospheric_albedo"] < 1))
    assert np.all(0 <= r["direct"]) and np.all(r["direct"] <= r["total"]) and np.all(r["total"] <= 1367.0)


def test_matches_reference_bird(oracles):
    for name, g in oracles["bird_grid"].items():
        r = bird_irradiance(_atm(g["atmosphere"]), g["zenith"], 1367.0)
        np.testing.assert_allclose(r["total"], g["ghi"], rtol=0.01)
        np.testing.assert_allclose(r["direct_normal"], g["dni"], rtol=0.01)


def test_pvlib_live_cross_check():
    pvlib = pytest.importorskip("pvlib")
    atm = SiteAtmosphere(UTRECHT, ozone=0.32, precipitable_water=2.2, aod_380nm=0.2, aod_500nm=0.14)
    z = np.array([5.0, 25.0, 45.0, 70.0, 85.0])
    am = pvlib.atmosphere.get_relative_airmass(z, "kastenyoung1989")
    ref = pvlib.clearsky.bird(z, am, 0.2, 0.14, 2.2, ozone=0.32, pressure=101325.0,
                              dni_extra=1400.0, asymmetry=0.84, albedo=0.2)
    np.testing.assert_allclose(bird_irradiance(atm, z, 1400.0)["total"], ref["ghi"], rtol=0.01)


@given(st.floats(0, 85), st.sampled_from(["aod", "ozone", "water"]),
       st.floats(0.01, 2.0), st.floats(0.01, 2.0))
def test_total_non_increasing_in_absorbers(zenith, which, x1, x2):
    lo, hi = sorted((x1, x2))

    def total(x):
        kw = dict(aod=dict(aod_500nm=x, aod_380nm=1.5 * x), ozone=dict(ozone=x / 4),
                  water=dict(precipitable_water=x * 3))[which]
        return bird_irradiance(SiteAtmosphere(UTRECHT, **kw), zenith, 1367.0)["total"][0]

    assert total(hi) <= total(lo) + 1e-9


def test_june_day_single_peak_near_noon(utrecht):
    s = clear_sky_series(utrecht, "2015-06-21T00:00:00Z", 60, 1440)
    peak_minute = int(np.argmax(s.values))
    noon = 12 * 60 - 5.12 * 4 + 1.7  # UTC solar noon at Utrecht with equation of time
    assert abs(peak_minute - noon) <= 30
    day = s.values > 0
    rising = np.diff(s.values[day])
    turn = np.argmax(rising < 0)
    assert np.all(rising[:turn] >= 0) and np.all(rising[turn:] <= 0)


def test_polar_night_is_zero():
    atm = SiteAtmosphere(GeoLocation(78.2, 15.6))
    s = clear_sky_series(atm, "2015-12-15T00:00:00Z", 300, 288)
    assert np.all(s.values == 0.0) and s.valid.all()


def test_day_integral_matches_reference(utrecht, oracles):
    s = clear_sky_series(utrecht, "2015-06-21T00:00:00Z", 300, 288)
    integral = np.trapezoid(s.values, dx=300.0)
    assert integral == pytest.approx(oracles["utrecht_june21_reference_integral_J_m2"], rel=0.01)


def _pair(measured, clear):
    m = IrradianceSeries("2015-06-01T12:00:00Z", 60, measured)
    c = IrradianceSeries("2015-06-01T12:00:00Z", 60, clear)
    return clearness_index(m, c)


def test_clearness_examples():
    k = _pair([500.0, 0.0, 1200.0], [500.0, 5.0, 600.0])
    assert k.k.tolist() == [1.0, 1.0, 1.5]
    assert k.mask.tolist() == [True, False, True]


def test_clearness_invalid_measurement_masked():
    m = IrradianceSeries("2015-06-01T12:00:00Z", 60, [np.nan, 300.0])
    c = IrradianceSeries("2015-06-01T12:00:00Z", 60, [400.0, 600.0])
    k = clearness_index(m, c)
    assert k.mask.tolist() == [False, True] and k.k.tolist() == [1.0, 0.5]


def test_clearness_alignment():
    m = IrradianceSeries("2015-06-01T12:00:00Z", 60, [1.0, 2.0])
    with pytest.raises(AlignmentError):
        clearness_index(m, IrradianceSeries("2015-06-01T12:01:00Z", 60, [1.0, 2.0]))
    with pytest.raises(AlignmentError):
        clearness_index(m, IrradianceSeries("2015-06-01T12:00:00Z", 30, [1.0, 2.0]))


@given(st.lists(st.tuples(st.floats(0, 1400), st.floats(0, 1400)), min_size=1, max_size=30),
       st.floats(0.1, 10))
def test_clearness_scale_invariant(pairs, c):
    meas, clear = map(list, zip(*pairs))
    base = _pair(meas, clear)
    scaled = _pair([x * c for x in meas], [x * c for x in clear])
    stable = np.abs(np.asarray(clear) * c - NIGHT_THRESHOLD) > 1e-6 * NIGHT_THRESHOLD
    stable &= np.abs(np.asarray(clear) - NIGHT_THRESHOLD) > 1e-6 * NIGHT_THRESHOLD
    both = base.mask & scaled.mask & stable
    np.testing.assert_allclose(scaled.k[both], base.k[both], rtol=1e-12)


def test_clearness_series_invariants():
    with pytest.raises(ConfigError):
        ClearnessSeries("2015-06-01T00:00:00Z", 300, [1.6])
    s = ClearnessSeries("2015-06-01T00:00:00Z", 300, [0.3, 7.0], [True, False])
    assert s.k.tolist() == [0.3, 1.0]


def test_correlation_identical_and_errors(utrecht):
    clear = clear_sky_series(utrecht, "2015-06-01T00:00:00Z", 300, 288 * 3)
    assert clear_day_correlation(clear, clear, [date(2015, 6, 1), "2015-06-02"]) == pytest.approx(1.0)
    with pytest.raises(InsufficientDataError):
        clear_day_correlation(clear, clear, [date(2015, 6, 5)])
    with pytest.raises(ConfigError):
        clear_day_correlation(clear, clear, [])


def test_correlation_cloudless_synthetic(utrecht):
    year = synthesize_year(SynthConfig(utrecht, 2015, step=300, cloud_depth=0.0, seed=1))
    clear = clear_sky_series(utrecht, year.start, year.step, len(year))
    days = [date(2015, m, 10) for m in (2, 4, 6, 8, 10)]
    assert clear_day_correlation(year, clear, days) >= 0.9999


def test_site_config_round_trip():
    atm = SiteAtmosphere(GeoLocation(52.09, 5.12, 10.0), ozone=0.31, aod_500nm=0.12)
    assert parse_site_config(format_site_config(atm)) == atm
    assert parse_site_config("latitude=1\nlongitude = 2 # comment\n").location == GeoLocation(1, 2)


@pytest.mark.parametrize("text", [
    "latitude=1\nlongitude=2\ncolour=blue\n",
    "latitude=1\n",
    "latitude=1\nlongitude=2\nlatitude=3\n",
    "latitude=1\nlongitude=x\n",
    "latitude=1\nlongitude=2\nozone_atm_cm=-1\n",
    "latitude 1\n",
])
def test_site_config_errors(text):
    with pytest.raises(ConfigError):
        parse_site_config(text)
