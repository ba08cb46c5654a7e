"""Shared setup for the experiment scripts: the mixed-cloud synthetic year."""
from tesolar.clear_sky import SiteAtmosphere, clear_sky_series, clearness_index
from tesolar.series_io import resample
from tesolar.solar_geometry import GeoLocation
from tesolar.synthetic import SynthConfig, synthesize_year

SITE = SiteAtmosphere(GeoLocation(52.09, 5.12))


def clearness_year(seed=7, year=2015, depth=0.7, persistence=0.99, step=300):
    """30 s synthetic GHI averaged to ``step`` and divided by the clear-sky curve."""
    raw = synthesize_year(SynthConfig(SITE, year, step=30, cloud_persistence=persistence,
                                      cloud_depth=depth, seed=seed))
    measured = resample(raw, step)
    return clearness_index(measured, clear_sky_series(SITE, measured.start, step, len(measured)))
