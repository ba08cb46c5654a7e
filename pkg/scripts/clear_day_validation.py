"""Clear-sky curve vs cloudless synthetic measurements on a few days, with Pearson r."""
import argparse
from datetime import date

import numpy as np

from _common import SITE
from tesolar.clear_sky import clear_day_correlation, clear_sky_series
from tesolar.series_io import resample
from tesolar.synthetic import SynthConfig, synthesize_year


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--days", nargs="+", default=["2015-03-21", "2015-06-21", "2015-09-23", "2015-12-21",
                                                   "2015-07-15"])
    ap.add_argument("--depth", type=float, default=0.0, help="cloud depth of the 'measured' year")
    args = ap.parse_args()

    measured = resample(synthesize_year(SynthConfig(SITE, 2015, step=30, cloud_depth=args.depth)), 300)
    clear = clear_sky_series(SITE, measured.start, 300, len(measured))
    days = [date.fromisoformat(d) for d in args.days]
    for d in days:
        lo = (d - date(2015, 1, 1)).days * 288
        m, c = measured.values[lo:lo + 288], clear.values[lo:lo + 288]
        print(f"{d}  peak clear {c.max():7.1f} W/m2  peak measured {np.nanmax(m):7.1f} W/m2  "
              f"daily energy ratio {np.nansum(m) / c.sum():.4f}")
    print(f"Pearson r over {len(days)} days: {clear_day_correlation(measured, clear, days):.6f}")


if __name__ == "__main__":
    main()
