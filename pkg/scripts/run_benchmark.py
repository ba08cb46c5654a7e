"""TES vs persistence vs average on the synthetic year, 4L history, 100 experiments.

    python scripts/run_benchmark.py --seeds 0 1 2 --out-dir results/
"""
import argparse
from pathlib import Path

from _common import clearness_year
from tesolar.eval_harness import METHODS, ExperimentConfig, benchmark


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=list(range(10)))
    ap.add_argument("--data-seed", type=int, default=7)
    ap.add_argument("--experiments", type=int, default=100)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out-dir", type=Path)
    args = ap.parse_args()

    k = clearness_year(args.data_seed)
    print(f"{'seed':>4}  {'tes':>6}  {'average':>7}  {'persist':>7}  ordered")
    for seed in args.seeds:
        cfg = ExperimentConfig(train_len=1152, n_experiments=args.experiments, seed=seed,
                               methods=METHODS, n_jobs=args.jobs)
        rep = benchmark(k, cfg)
        p = rep.pooled
        ordered = p["tes"] < p["average"] < p["persistence"]
        print(f"{seed:>4}  {p['tes']:6.3f}  {p['average']:7.3f}  {p['persistence']:7.3f}  {ordered}")
        if args.out_dir:
            args.out_dir.mkdir(parents=True, exist_ok=True)
            (args.out_dir / f"benchmark_seed{seed}.json").write_text(rep.to_json())
            (args.out_dir / f"benchmark_seed{seed}.csv").write_text(rep.to_csv())


if __name__ == "__main__":
    main()
