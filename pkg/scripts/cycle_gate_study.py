"""How often does a truly random 10^6-bit walk have fewer than 500 cycles?

Monte Carlo over numpy's PCG64 next to the exact law P(J <= j). The number
of returns to zero of a simple random walk of length n satisfies
P(zeros <= k) ~ 2 Phi((k + 1) / sqrt(n)) - 1, so P(J < 500) is about
2 Phi(500 / 1000) - 1 = 0.383 at n = 10^6.

    python3 scripts/cycle_gate_study.py --reps 300
"""

import argparse
import math

import numpy as np

from rand_sts.bits import BitSequence
from rand_sts.special import normal_cdf
from rand_sts.walks import WalkPath


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=10**6)
    ap.add_argument("--reps", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    J = np.array([WalkPath.of(BitSequence(rng.integers(0, 2, args.n))).J for _ in range(args.reps)])
    low = float(np.mean(J < 500))
    approx = 2 * normal_cdf(500 / math.sqrt(args.n)) - 1
    se = math.sqrt(low * (1 - low) / args.reps)
    print(f"n={args.n} reps={args.reps}")
    print(f"fraction with J < 500: {low:.3f} +/- {se:.3f}  (asymptotic {approx:.3f})")
    print(f"median J: {int(np.median(J))}")


if __name__ == "__main__":
    main()
