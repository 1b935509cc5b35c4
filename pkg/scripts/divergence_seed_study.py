"""How often is the pooled inverse-trace estimate at n = N increasing over 1e2, 1e3, 1e4 samples?

The estimate has infinite mean, so its growth is typical rather than
guaranteed; this script measures the fraction of seeds on which nested
prefixes of one 1e4-sample pool are strictly increasing.

    python scripts/divergence_seed_study.py --seeds 100 --n 30
"""

import argparse
import csv
import sys

from noisysolve.model import NoiseModel, RngSpec
from noisysolve.risk import Spectrum, inverse_trace_stats, pool_spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--first-seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--samples", type=int, default=10_000)
    args = ap.parse_args()

    model = NoiseModel(1.0, 0.5, 0.2, args.n, args.n)
    counts = [c for c in (100, 1000, 10_000) if c <= args.samples]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["seed"] + [f"estimate_{c}" for c in counts] + ["increasing"])
    hits = 0
    for seed in range(args.first_seed, args.first_seed + args.seeds):
        spec = pool_spectrum(model, args.samples, RngSpec(seed, 0))
        est = [inverse_trace_stats(Spectrum(spec.values[:c]))[0] for c in counts]
        inc = all(a < b for a, b in zip(est, est[1:]))
        hits += inc
        w.writerow([seed] + [repr(e) for e in est] + [int(inc)])
        sys.stdout.flush()
    print(f"# increasing on {hits}/{args.seeds} seeds", file=sys.stderr)


if __name__ == "__main__":
    main()
