"""rand-sts command line: generate, test, campaign, report.

Exit codes: 0 success, 1 a test failed, 2 usage or configuration error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings
from dataclasses import replace

from .battery import TESTS, TestParams, parse_selection, run_test
from .bits import BitSequence, from_ascii, from_bytes, prefix
from .campaign import CampaignReport, load_config, render_histogram_csv, render_report, run_campaign
from .errors import ConfigError, DomainError, LengthError, ParseError, RecommendationWarning
from .generators import GeneratorSpec

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("rand_sts")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on its own; raise instead so main() owns exit codes
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _test_table() -> str:
    return "\n".join(f"  {t:2d}  {info.name} (n >= {info.min_n})" for t, info in TESTS.items())


def _default_jobs() -> int:
    value = os.environ.get("RAND_STS_JOBS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        raise UsageError(f"RAND_STS_JOBS must be an integer, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="rand-sts",
        description="Statistical randomness tests for bit sequences.",
        epilog="Tests are numbered:\n" + _test_table(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write bits from a reference generator")
    g.add_argument("--gen", required=True, choices=("pm", "knuth", "bbs"))
    g.add_argument("--seed", type=int, default=1, help="LCG seed")
    g.add_argument("--p", type=int, help="BBS prime p (= 3 mod 4)")
    g.add_argument("--q", type=int, help="BBS prime q (= 3 mod 4)")
    g.add_argument("--x0", type=int, default=3, help="BBS start value")
    g.add_argument("--bits-per-word", type=int, help="leading bits kept per LCG word")
    g.add_argument("--n", type=int, required=True, help="number of bits")
    g.add_argument("--format", choices=("ascii", "binary"), default="ascii")
    g.add_argument("--output", "-o", required=True)

    t = sub.add_parser(
        "test",
        help="run tests on one bit file",
        epilog="Tests are numbered:\n" + _test_table(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    t.add_argument("input")
    t.add_argument("--format", choices=("ascii", "binary"), default="ascii")
    t.add_argument("--n", type=int, help="bits to use (required for binary input shorter than the file)")
    t.add_argument("--tests", default="all", help='"all", "1,3,6" or ranges like "7-11"')
    t.add_argument("--alpha", type=float, default=0.01)
    t.add_argument("--template", help="test 7 template bit string")
    t.add_argument("--t8-m", type=int, help="test 8 run length")
    t.add_argument("--serial-m", type=int)
    t.add_argument("--apen-m", type=int)
    t.add_argument("--lc-M", type=int)
    t.add_argument("--universal-L", type=int)
    t.add_argument("--blockfreq-M", type=int)

    c = sub.add_parser("campaign", help="run a multi-sequence campaign from a key=value config")
    c.add_argument("--config", required=True)
    c.add_argument("--output", "-o", required=True, help="report path")
    c.add_argument("--format", choices=("tsv", "text"), default="tsv")
    c.add_argument("--emit-hist", metavar="PATH", help="also write histogram counts as CSV")
    c.add_argument("--json", metavar="PATH", help="also save raw P-values for the report subcommand")
    c.add_argument("--jobs", type=int, help="worker processes (default $RAND_STS_JOBS or 1)")

    r = sub.add_parser("report", help="re-render a report from saved P-values")
    r.add_argument("results", help="JSON written by campaign --json")
    r.add_argument("--format", choices=("tsv", "text"), default="tsv")
    r.add_argument("--output", "-o", help="default stdout")
    r.add_argument("--emit-hist", metavar="PATH")
    return parser


def _write(path: str, data: str | bytes) -> None:
    mode = "wb" if isinstance(data, bytes) else "w"
    kwargs = {} if isinstance(data, bytes) else {"encoding": "utf-8"}
    with open(path, mode, **kwargs) as fh:
        fh.write(data)


def cmd_generate(args) -> int:
    kw = {"seed": args.seed, "x0": args.x0, "bits_per_word": args.bits_per_word}
    if args.p is not None:
        kw["p"] = args.p
    if args.q is not None:
        kw["q"] = args.q
    spec = GeneratorSpec(args.gen, **kw)
    seq = spec.generate(args.n)
    _write(args.output, seq.to_bytes() if args.format == "binary" else str(seq))
    print(f"{seq.n} bits written to {args.output}", file=sys.stderr)
    return EXIT_OK


def _read_sequence(args) -> BitSequence:
    if args.format == "binary":
        with open(args.input, "rb") as fh:
            return from_bytes(fh.read(), args.n)
    with open(args.input, encoding="ascii", errors="replace") as fh:
        seq = from_ascii(fh.read())
    return prefix(seq, args.n) if args.n is not None else seq


def _params_from_args(args) -> TestParams:
    changes = {
        "template": args.template,
        "t8_m": args.t8_m,
        "serial_m": args.serial_m,
        "apen_m": args.apen_m,
        "lc_M": args.lc_M,
        "universal_L": args.universal_L,
        "blockfreq_M": args.blockfreq_M,
    }
    return replace(TestParams(), **{k: v for k, v in changes.items() if v is not None})


def cmd_test(args) -> int:
    if not 0.0 < args.alpha < 1.0:
        raise UsageError("--alpha must lie in (0, 1)")
    try:
        selection = parse_selection(args.tests)
    except ValueError as e:
        raise UsageError(str(e)) from None
    params = _params_from_args(args)
    seq = _read_sequence(args)
    short = [t for t in selection if seq.n < TESTS[t].min_n]
    if short:
        names = "; ".join(f"test {t} ({TESTS[t].name}) needs n >= {TESTS[t].min_n}" for t in short)
        raise UsageError(f"sequence has {seq.n} bits: {names}")
    ok = True
    for t in selection:
        res = run_test(t, seq, params)
        labels = res.labels or ("",) * len(res.p_values)
        for p, label in zip(res.p_values, labels):
            if not res.applicable:
                line = f"{t}  {'-':>12}  N/A   {res.fail_reason}"
            else:
                passed = p >= args.alpha
                ok &= passed
                line = f"{t}  {p:.6e}  {'PASS' if passed else 'FAIL'}"
            if label:
                line += f"  [{label}]"
            print(line.rstrip())
            if not res.applicable:
                break
    return EXIT_OK if ok else EXIT_FAIL


def cmd_campaign(args) -> int:
    config = load_config(args.config)
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")

    def progress(done, total):
        log.info("sequence %d/%d", done, total)

    report = run_campaign(config, jobs=jobs, progress=progress)
    _emit(report, args.output, args.format, args.emit_hist)
    if args.json:
        _write(args.json, report.to_json())
    return EXIT_OK


def cmd_report(args) -> int:
    with open(args.results, encoding="utf-8") as fh:
        text = fh.read()
    try:
        report = CampaignReport.from_json(text)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"malformed results file: {e}") from e
    if args.output is None:
        sys.stdout.write(render_report(report, args.format))
        if args.emit_hist:
            _write(args.emit_hist, render_histogram_csv(report))
    else:
        _emit(report, args.output, args.format, args.emit_hist)
    return EXIT_OK


def _emit(report: CampaignReport, path: str, fmt: str, hist_path: str | None) -> None:
    _write(path, render_report(report, fmt))
    if hist_path:
        _write(hist_path, render_histogram_csv(report))


COMMANDS = {"generate": cmd_generate, "test": cmd_test, "campaign": cmd_campaign, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if not args.verbose:
        warnings.simplefilter("ignore", RecommendationWarning)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError, DomainError, LengthError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
