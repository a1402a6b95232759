"""Class probabilities for the overlapping-template test (m ones, block M).

Prints the exact values from the Markov-chain recursion next to the older
published table, plus empirical frequencies from random blocks.

    python3 scripts/overlap_table.py --blocks 200000
"""

import argparse

import numpy as np

from rand_sts.templates import OVERLAP_PI_PUBLISHED, count_overlapping_ones, overlap_class_probabilities


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--M", type=int, default=1032)
    ap.add_argument("--m", type=int, default=9)
    ap.add_argument("--blocks", type=int, default=100000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    exact = overlap_class_probabilities(args.M, args.m)
    rng = np.random.default_rng(args.seed)
    counts = np.zeros(6, dtype=np.int64)
    done = 0
    while done < args.blocks:
        k = min(20000, args.blocks - done)
        blocks = rng.integers(0, 2, size=(k, args.M), dtype=np.uint8)
        counts += np.bincount(np.minimum(count_overlapping_ones(blocks, args.m), 5), minlength=6)
        done += k
    freq = counts / args.blocks
    print("class  exact      published  empirical")
    for i in range(6):
        pub = f"{OVERLAP_PI_PUBLISHED[i]:.6f}" if (args.M, args.m) == (1032, 9) else "   -    "
        print(f"{i:>5}  {exact[i]:.6f}   {pub}   {freq[i]:.6f}")


if __name__ == "__main__":
    main()
