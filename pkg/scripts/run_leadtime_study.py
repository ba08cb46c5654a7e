"""Box-plot statistics of TES error at 5, 10, 15 and 20 min lead (6L training, 150 experiments)."""
import argparse
from pathlib import Path

from _common import clearness_year
from tesolar.eval_harness import ExperimentConfig, leadtime_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--data-seed", type=int, default=7)
    ap.add_argument("--experiments", type=int, default=150)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out-dir", type=Path)
    args = ap.parse_args()

    rep = leadtime_study(clearness_year(args.data_seed),
                         ExperimentConfig(train_len=1728, n_experiments=args.experiments, seed=args.seed,
                                          n_jobs=args.jobs))
    print(f"{'lead':>5}  {'min':>6}  {'q1':>6}  {'median':>6}  {'q3':>6}  {'max':>6}  {'mean':>6}")
    for m, s in rep.summary["tes"].items():
        print(f"{5 * m:>3}min  " + "  ".join(f"{s[key]:6.3f}" for key in ("min", "q1", "median", "q3", "max", "mean")))
    print(f"redraws: {rep.total_redraws}")
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        (args.out_dir / f"leadtime_seed{args.seed}.json").write_text(rep.to_json())
        (args.out_dir / f"leadtime_seed{args.seed}.csv").write_text(rep.to_csv())


if __name__ == "__main__":
    main()
