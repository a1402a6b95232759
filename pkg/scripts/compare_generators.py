"""Proportion of passing per test for the three reference generators side by side.

Both accountings of excursion-test refusals (J < 500) are shown: left out,
and pooled as P = 0.

    python3 scripts/compare_generators.py --m 100 --tests 1-6,11-15
"""

import argparse

from rand_sts.battery import parse_selection
from rand_sts.campaign import CampaignConfig, TestSummary, run_campaign
from rand_sts.generators import GeneratorSpec
from rand_sts.result import ARITY


def with_zeros(s):
    return TestSummary(s.test_id, s.pvalues + (0.0,) * (ARITY[s.test_id] * s.inapplicable), s.sequences)


def cell(summary, alpha):
    v = summary.verdict(alpha)
    if v.observed_proportion is None:
        return "n/a"
    mark = "" if v.proportion_status == "Success" else "*"
    if v.uniformity_status == "Non-uniform":
        mark += "u"
    return f"{v.observed_proportion:.4f}{mark}"


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--m", type=int, default=100)
    ap.add_argument("--alpha", type=float, default=0.01)
    ap.add_argument("--tests", default="all")
    ap.add_argument("--gens", default="pm,knuth,bbs")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    tests = parse_selection(args.tests)
    gens = args.gens.split(",")
    reports = {g: run_campaign(CampaignConfig(GeneratorSpec(g), m=args.m, alpha=args.alpha, tests=tests), jobs=args.jobs) for g in gens}
    header = ["test"] + [f"{g}" for g in gens] + [f"{g}(P=0)" for g in gens]
    print("\t".join(header))
    for t in tests:
        row = [str(t)]
        row += [cell(reports[g].summary(t), args.alpha) for g in gens]
        row += [cell(with_zeros(reports[g].summary(t)), args.alpha) for g in gens]
        print("\t".join(row))
    print("* below threshold   u non-uniform (POP < 0.0001)")


if __name__ == "__main__":
    main()
