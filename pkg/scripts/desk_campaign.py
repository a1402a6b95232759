"""Run one campaign and print the appendix-style report.

    python3 scripts/desk_campaign.py --gen bbs --m 100
    python3 scripts/desk_campaign.py --gen knuth --m 300 --tests 11,14,15 --inapplicable fail
"""

import argparse
import logging
import time

from rand_sts.battery import parse_selection
from rand_sts.campaign import CampaignConfig, render_report, run_campaign
from rand_sts.generators import GeneratorSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--gen", choices=("pm", "knuth", "bbs"), default="bbs")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--bits-per-word", type=int)
    ap.add_argument("--m", type=int, default=100)
    ap.add_argument("--alpha", type=float, default=0.01)
    ap.add_argument("--tests", default="all")
    ap.add_argument("--inapplicable", choices=("exclude", "fail"), default="exclude")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--tsv", help="also write the TSV report here")
    ap.add_argument("--json", help="also save raw P-values here")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    config = CampaignConfig(
        GeneratorSpec(args.gen, seed=args.seed, bits_per_word=args.bits_per_word),
        m=args.m,
        alpha=args.alpha,
        tests=parse_selection(args.tests),
        inapplicable=args.inapplicable,
    )
    t0 = time.perf_counter()
    report = run_campaign(
        config,
        jobs=args.jobs,
        progress=lambda k, m: logging.info("sequence %d/%d", k, m) if k % 10 == 0 or k == m else None,
    )
    print(render_report(report, "text"))
    print(f"elapsed {time.perf_counter() - t0:.0f}s")
    if args.tsv:
        with open(args.tsv, "w", encoding="utf-8") as fh:
            fh.write(render_report(report, "tsv"))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())


if __name__ == "__main__":
    main()
