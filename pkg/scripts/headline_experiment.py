"""Theory against simulation for the optimal, ridge and standard solutions.

    python scripts/headline_experiment.py --trials 10000 --samples 1000
"""

import argparse
import math

from noisysolve.model import NoiseModel, derive_params
from noisysolve.montecarlo import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--q", type=float, default=0.2)
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--N", type=int, default=40)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--samples", type=int, default=1_000)
    ap.add_argument("--seed", type=int, default=20240601)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    model = NoiseModel(args.a, args.p, args.q, args.n, args.N)
    d = derive_params(model)
    print(f"theta={d.theta:.6g} s={d.s:.6g} alpha={d.alpha:.6g} t={d.t:.6g}")
    cfg = ExperimentConfig(model, ["optimal", "tikhonov", "standard"], args.trials, args.seed,
                           args.samples, args.workers)
    res = run_experiment(cfg)
    print(f"{'filter':<28}{'empirical':>12}{'stderr':>10}{'median':>10}{'theory':>12}{'z':>8}")
    for e, t, z in zip(res.empirical, res.theory, res.z_scores()):
        print(f"{e.filter:<28}{e.mean:>12.5f}{e.stderr:>10.5f}{e.median:>10.5f}"
              f"{t.d_filter:>12.5f}{z:>8.2f}")
    gap = res.theory[2].d_filter - res.theory[0].d_filter
    print(f"theoretical gap D_std - D_opt = {gap:.5f}"
          + ("" if math.isfinite(gap) else " (divergent)"))


if __name__ == "__main__":
    main()
