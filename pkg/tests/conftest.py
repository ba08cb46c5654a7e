import json
from pathlib import Path

import pytest
from hypothesis import settings

from tesolar.clear_sky import SiteAtmosphere
from tesolar.solar_geometry import GeoLocation

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"
_VERDICTS = pytest.StashKey[list]()
UTRECHT = GeoLocation(52.09, 5.12)


@pytest.fixture(scope="session")
def oracles():
    return json.loads((DATA / "oracles.json").read_text())


@pytest.fixture(scope="session")
def utrecht():
    return SiteAtmosphere(UTRECHT)


def mixed_cloud_clearness():
    """The shared mixed-cloud year: 30 s synthesis averaged to 5 min, as clearness."""
    from tesolar.clear_sky import clear_sky_series, clearness_index
    from tesolar.series_io import resample
    from tesolar.synthetic import SynthConfig, synthesize_year

    site = SiteAtmosphere(UTRECHT)
    raw = synthesize_year(SynthConfig(site, 2015, step=30, cloud_persistence=0.99, cloud_depth=0.7, seed=7))
    measured = resample(raw, 300)
    return clearness_index(measured, clear_sky_series(site, measured.start, 300, len(measured)))


@pytest.fixture(scope="session")
def mixed_k():
    return mixed_cloud_clearness()


@pytest.fixture
def verdict(request):
    """Record one acceptance line; they are echoed again in the terminal summary."""
    lines = request.config.stash.setdefault(_VERDICTS, [])

    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
