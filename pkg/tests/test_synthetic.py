import numpy as np
import pytest

from tesolar.clear_sky import SiteAtmosphere, clear_sky_series
from tesolar.errors import ConfigError
from tesolar.solar_geometry import sun_position
from tesolar.synthetic import SynthConfig, cloud_factor, synthesize_year


@pytest.fixture(scope="module")
def year(utrecht):
    return synthesize_year(SynthConfig(utrecht, 2015, step=300, seed=11))


def test_no_cloud_equals_clear_sky(utrecht):
    s = synthesize_year(SynthConfig(utrecht, 2015, step=600, cloud_depth=0.0, seed=3))
    clear = clear_sky_series(utrecht, s.start, s.step, len(s))
    assert np.array_equal(s.values, clear.values)
    day = clear.values > 0
    assert np.corrcoef(s.values[day], clear.values[day])[0, 1] == pytest.approx(1.0, abs=1e-12)


def test_length_and_night(year, utrecht):
    assert len(year) == 365 * 288
    assert np.all(year.values >= 0)
    zen = sun_position(utrecht.location, year.unix_times()).zenith
    assert np.all(year.values[zen > 90] == 0.0)


def test_leap_year_length(utrecht):
    assert len(synthesize_year(SynthConfig(utrecht, 2016, step=3600))) == 366 * 24


def test_deterministic(utrecht, year):
    again = synthesize_year(SynthConfig(utrecht, 2015, step=300, seed=11))
    assert again.values.tobytes() == year.values.tobytes()
    other = synthesize_year(SynthConfig(utrecht, 2015, step=300, seed=12))
    assert other.values.tobytes() != year.values.tobytes()


def test_factor_bounds():
    x = np.linspace(-8, 8, 1001)
    for depth in (0.0, 0.3, 1.0):
        f = cloud_factor(x, depth)
        assert f.min() >= 1 - depth and f.max() <= 1.1
    assert np.all(cloud_factor(x, 0.0) == 1.0)


def test_ratio_to_clear_sky_within_factor_range(year, utrecht):
    clear = clear_sky_series(utrecht, year.start, year.step, len(year))
    day = clear.values > 1.0
    ratio = year.values[day] / clear.values[day]
    assert ratio.min() >= 0.3 - 1e-12 and ratio.max() <= 1.1 + 1e-12


@pytest.mark.parametrize("kw", [dict(cloud_persistence=0.0), dict(cloud_persistence=1.0),
                                dict(cloud_depth=-0.1), dict(cloud_depth=1.1), dict(step=0),
                                dict(seed=-1), dict(year=1800)])
def test_config_validation(utrecht, kw):
    base = dict(site=utrecht, year=2015)
    with pytest.raises(ConfigError):
        SynthConfig(**{**base, **kw})
