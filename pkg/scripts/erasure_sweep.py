"""Observed maximum list size against the gap to capacity, one CSV row per code.

    python scripts/erasure_sweep.py --q 5 --ell 2 --n 20 --eps 0.05 0.1 0.2 0.3
"""
import argparse
from pathlib import Path

from listrec.experiments import ExperimentConfig, rows_to_csv, run_erasure_experiment
from listrec.gf import field_of_order


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--q", type=int, default=5)
    ap.add_argument("--ell", type=int, default=2)
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--alpha", type=float, default=0.0)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.05, 0.1, 0.2, 0.3])
    ap.add_argument("--sampler", default="adversarial-scan")
    ap.add_argument("--codes", type=int, default=20)
    ap.add_argument("--rectangles", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/erasure_sweep.csv"))
    args = ap.parse_args()

    F = field_of_order(args.q)
    rows = []
    print(f"{'eps':>6} {'k':>3} {'real eps':>9} {'max':>5} {'mean':>7} {'p90':>6}")
    for i, eps in enumerate(args.eps):
        cfg = ExperimentConfig(p=F.p, m=F.m, ell=args.ell, n=args.n, eps=eps, alpha=args.alpha,
                               sampler=args.sampler, code_trials=args.codes,
                               rectangles_per_code=args.rectangles, seed=args.seed)
        rep = run_erasure_experiment(cfg, threads=args.threads)
        rows += rep.rows(seed_index=i)
        print(f"{eps:6.3f} {cfg.k:3d} {rep.realized_eps:9.4f} {rep.max:5d} {rep.mean:7.3f} {rep.p90:6.1f}")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(rows_to_csv(rows))


if __name__ == "__main__":
    main()
