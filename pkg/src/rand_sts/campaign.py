"""Multi-sequence campaigns: proportion of passing, P-value uniformity and
appendix-style reports."""

from __future__ import annotations

import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, Iterable, Sequence

import numpy as np

from .battery import ALL_TESTS, TESTS, TestParams, parse_selection, run_test
from .bits import prefix
from .errors import ConfigError, DomainError, LengthError
from .generators import GeneratorSpec
from .special import igamc

log = logging.getLogger(__name__)

__all__ = [
    "APPENDIX_EDGES",
    "APPENDIX_LABELS",
    "PValueBins",
    "TestVerdict",
    "TestSummary",
    "CampaignConfig",
    "CampaignReport",
    "threshold",
    "proportion",
    "pop_uniformity",
    "bin_pvalues",
    "parse_config",
    "load_config",
    "run_campaign",
    "render_report",
    "render_histogram_csv",
]

POP_MIN_SAMPLES = 55
POP_UNIFORM = 0.0001

APPENDIX_EDGES = (0.0, 0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
APPENDIX_LABELS = ("0-.01", ".01-.1", ".1-.2", ".2-.3", ".3-.4", ".4-.5", ".5-.6", ".6-.7", ".7-.8", ".8-.9", ".9-1")

SUCCESS, UNSUCCESS = "Success", "Unsuccess"
UNIFORM, NON_UNIFORM = "Uniform", "Non-uniform"
POLICIES = ("exclude", "fail")


def threshold(alpha: float, sample_count: int) -> float:
    """Minimum passing proportion (1 - a) - 3 sqrt(a (1 - a) / m)."""
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")
    if sample_count * alpha < 1.0 - 1e-9:
        raise ConfigError(f"need at least 1/alpha = {1 / alpha:g} samples, got {sample_count}")
    return (1.0 - alpha) - 3.0 * math.sqrt(alpha * (1.0 - alpha) / sample_count)


def proportion(pvalues: Sequence[float], alpha: float = 0.01) -> tuple[float, str]:
    if len(pvalues) == 0:
        raise DomainError("no P-values")
    p = np.asarray(pvalues, dtype=np.float64)
    observed = float(np.count_nonzero(p >= alpha)) / p.size
    status = SUCCESS if observed >= threshold(alpha, p.size) else UNSUCCESS
    return observed, status


def _decile_counts(p: np.ndarray) -> np.ndarray:
    return np.bincount(np.minimum((p * 10).astype(np.int64), 9), minlength=10)


def pop_uniformity(pvalues: Sequence[float]) -> tuple[float, str]:
    """P-value of the 10-decile chi-square test of P-value uniformity."""
    p = np.asarray(pvalues, dtype=np.float64)
    if p.size < POP_MIN_SAMPLES:
        raise DomainError(f"uniformity check needs >= {POP_MIN_SAMPLES} P-values, got {p.size}")
    counts = _decile_counts(p)
    expected = p.size / 10.0
    chi2 = float(np.sum((counts - expected) ** 2) / expected)
    pop = igamc(4.5, chi2 / 2.0)
    return pop, UNIFORM if pop >= POP_UNIFORM else NON_UNIFORM


@dataclass(frozen=True)
class PValueBins:
    appendix: tuple[int, ...]  # 11 display columns
    deciles: tuple[int, ...]  # 10 equal bins used for the uniformity check

    @property
    def total(self) -> int:
        return sum(self.appendix)


def bin_pvalues(pvalues: Iterable[float]) -> PValueBins:
    p = np.asarray(list(pvalues), dtype=np.float64)
    cols = np.searchsorted(np.asarray(APPENDIX_EDGES), p, side="right") - 1
    appendix = np.bincount(np.clip(cols, 0, 10), minlength=11)
    return PValueBins(tuple(int(c) for c in appendix), tuple(int(c) for c in _decile_counts(p)))


@dataclass(frozen=True)
class TestVerdict:
    __test__ = False

    expected_proportion: float | None
    observed_proportion: float | None
    proportion_status: str
    pop: float | None
    uniformity_status: str


@dataclass(frozen=True)
class TestSummary:
    """Pooled P-values of one test across a campaign."""

    __test__ = False

    test_id: int
    pvalues: tuple[float, ...]
    sequences: int
    inapplicable: int = 0

    @property
    def name(self) -> str:
        return TESTS[self.test_id].name

    @property
    def bins(self) -> PValueBins:
        return bin_pvalues(self.pvalues)

    def verdict(self, alpha: float) -> TestVerdict:
        n = len(self.pvalues)
        if n == 0:
            return TestVerdict(None, None, "n/a", None, "n/a")
        try:
            expected = threshold(alpha, n)
        except ConfigError:
            expected = None
        observed = float(np.count_nonzero(np.asarray(self.pvalues) >= alpha)) / n
        if expected is None:
            status = "n/a"
        else:
            status = SUCCESS if observed >= expected else UNSUCCESS
        if n >= POP_MIN_SAMPLES:
            pop, uniformity = pop_uniformity(self.pvalues)
        else:
            pop, uniformity = None, "n/a"
        return TestVerdict(expected, observed, status, pop, uniformity)


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class CampaignConfig:
    """What to generate, how many sequences, and which tests at which lengths.

    ``inapplicable`` decides what happens to sequences a test refuses (runs
    prerequisite, J < 500): ``"exclude"`` leaves them out of the pooled
    P-values and counts them separately, ``"fail"`` pools them as P = 0.
    """

    generator: GeneratorSpec
    m: int = 300
    alpha: float = 0.01
    tests: tuple[int, ...] = ALL_TESTS
    lengths: dict[int, int] = field(default_factory=lambda: {t: info.used_n for t, info in TESTS.items()})
    params: TestParams = TestParams()
    inapplicable: str = "exclude"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.m * self.alpha < 1.0 - 1e-9:
            raise ConfigError(f"m={self.m} is below 1/alpha={1 / self.alpha:g}")
        if self.inapplicable not in POLICIES:
            raise ConfigError(f"inapplicable must be one of {POLICIES}")
        for t in self.tests:
            if t not in TESTS:
                raise ConfigError(f"unknown test {t}")
            n = self.length(t)
            if n < TESTS[t].min_n:
                raise ConfigError(f"test {t} needs n >= {TESTS[t].min_n}, configured {n}")

    def length(self, test_id: int) -> int:
        return self.lengths.get(test_id, TESTS[test_id].used_n)

    @property
    def bits_per_sequence(self) -> int:
        return max((self.length(t) for t in self.tests), default=0)


_PARAM_KEYS = {
    "blockfreq.M": ("blockfreq_M", int),
    "longest_run.M": ("longest_run_M", int),
    "dft.log_base": ("dft_log_base", str),
    "dft.variance_divisor": ("dft_variance_divisor", int),
    "template": ("template", str),
    "template.blocks": ("template_blocks", int),
    "t8.m": ("t8_m", int),
    "t8.M": ("t8_M", int),
    "t8.table": ("t8_table", str),
    "universal.L": ("universal_L", int),
    "lc.M": ("lc_M", int),
    "serial.m": ("serial_m", int),
    "apen.m": ("apen_m", int),
    "excursions.min_cycles": ("min_cycles", int),
}


def parse_config(text: str) -> CampaignConfig:
    """Build a config from ``key = value`` lines ('#' starts a comment)."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        raw[key] = value
    try:
        return _config_from_mapping(raw)
    except (ValueError, TypeError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e)) from e


def _config_from_mapping(raw: dict[str, str]) -> CampaignConfig:
    raw = dict(raw)
    kind = raw.pop("generator", None)
    if kind is None:
        raise ConfigError("missing 'generator' (pm | knuth | bbs)")
    gen: dict[str, int] = {}
    for key in ("pm.seed", "knuth.seed"):
        value = raw.pop(key, None)
        if value is not None and key.startswith(kind + "."):
            gen["seed"] = int(value)
    for key in ("bbs.p", "bbs.q", "bbs.x0"):
        value = raw.pop(key, None)
        if value is not None and kind == "bbs":
            gen[key.split(".")[1]] = int(value)
    for key in ("pm.bits_per_word", "knuth.bits_per_word"):
        value = raw.pop(key, None)
        if value is not None and key.startswith(kind + "."):
            gen["bits_per_word"] = int(value)
    generator = GeneratorSpec(kind, **gen)

    kwargs: dict = {}
    if "m" in raw:
        kwargs["m"] = int(raw.pop("m"))
    if "alpha" in raw:
        kwargs["alpha"] = float(raw.pop("alpha"))
    if "tests" in raw:
        kwargs["tests"] = parse_selection(raw.pop("tests"))
    if "inapplicable" in raw:
        kwargs["inapplicable"] = raw.pop("inapplicable")
    lengths = {t: info.used_n for t, info in TESTS.items()}
    params: dict = {}
    for key in list(raw):
        if key.startswith("length."):
            lengths[int(key.split(".", 1)[1])] = int(raw.pop(key))
        elif key in _PARAM_KEYS:
            attr, conv = _PARAM_KEYS[key]
            params[attr] = conv(raw.pop(key))
    if raw:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(raw))}")
    return CampaignConfig(generator, lengths=lengths, params=TestParams(**params), **kwargs)


def load_config(path) -> CampaignConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# ---------------------------------------------------------------------------
# running


@dataclass(frozen=True)
class CampaignReport:
    config: CampaignConfig
    summaries: tuple[TestSummary, ...]

    def summary(self, test_id: int) -> TestSummary:
        for s in self.summaries:
            if s.test_id == test_id:
                return s
        raise KeyError(test_id)

    def verdicts(self) -> dict[int, TestVerdict]:
        return {s.test_id: s.verdict(self.config.alpha) for s in self.summaries}

    def to_json(self) -> str:
        cfg = self.config
        doc = {
            "generator": {k: str(v) if isinstance(v, int) else v for k, v in asdict(cfg.generator).items()},
            "m": cfg.m,
            "alpha": cfg.alpha,
            "tests": list(cfg.tests),
            "lengths": {str(t): cfg.length(t) for t in cfg.tests},
            "params": asdict(cfg.params),
            "inapplicable": cfg.inapplicable,
            "results": [
                {"test": s.test_id, "sequences": s.sequences, "inapplicable": s.inapplicable, "pvalues": list(s.pvalues)}
                for s in self.summaries
            ],
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "CampaignReport":
        doc = json.loads(text)
        g = doc["generator"]
        bpw = g.get("bits_per_word")
        generator = GeneratorSpec(
            g["kind"],
            seed=int(g["seed"]),
            p=int(g["p"]),
            q=int(g["q"]),
            x0=int(g["x0"]),
            bits_per_word=None if bpw in (None, "None") else int(bpw),
        )
        known = {f.name for f in fields(TestParams)}
        params = TestParams(**{k: v for k, v in doc["params"].items() if k in known})
        lengths = {t: info.used_n for t, info in TESTS.items()}
        lengths.update({int(k): v for k, v in doc["lengths"].items()})
        config = CampaignConfig(
            generator,
            m=doc["m"],
            alpha=doc["alpha"],
            tests=tuple(doc["tests"]),
            lengths=lengths,
            params=params,
            inapplicable=doc["inapplicable"],
        )
        summaries = tuple(
            TestSummary(r["test"], tuple(r["pvalues"]), r["sequences"], r["inapplicable"]) for r in doc["results"]
        )
        return cls(config, summaries)


def _evaluate_sequence(config: CampaignConfig, k: int) -> dict[int, tuple[bool, tuple[float, ...]]]:
    try:
        seq = config.generator.for_sequence(k).generate(config.bits_per_sequence)
        out = {}
        for t in config.tests:
            res = run_test(t, prefix(seq, config.length(t)), config.params)
            out[t] = (res.applicable, res.p_values)
        return out
    except (ConfigError, DomainError, LengthError) as e:
        raise ConfigError(f"sequence {k}: {e}") from e
    except Exception as e:
        raise RuntimeError(f"sequence {k}: {e}") from e


def _evaluate_star(args):
    return _evaluate_sequence(*args)


def run_campaign(
    config: CampaignConfig,
    jobs: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> CampaignReport:
    """Generate ``config.m`` sequences and run the selected tests on each.

    Sequence k uses ``config.generator.for_sequence(k)``; every test reads a
    prefix of the same sequence. Output does not depend on ``jobs``.
    """
    pooled: dict[int, list[float]] = {t: [] for t in config.tests}
    skipped = dict.fromkeys(config.tests, 0)
    work = ((config, k) for k in range(config.m))
    if jobs > 1:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(_evaluate_star, work, chunksize=1)
    else:
        pool = None
        results = map(_evaluate_star, work)
    try:
        for k, per_test in enumerate(results):
            for t, (applicable, pvals) in per_test.items():
                if applicable:
                    pooled[t].extend(pvals)
                else:
                    skipped[t] += 1
                    if config.inapplicable == "fail":
                        pooled[t].extend(pvals)
            if progress is not None:
                progress(k + 1, config.m)
            log.debug("sequence %d/%d done", k + 1, config.m)
    finally:
        if pool is not None:
            pool.shutdown()
    summaries = tuple(TestSummary(t, tuple(pooled[t]), config.m, skipped[t]) for t in config.tests)
    return CampaignReport(config, summaries)


# ---------------------------------------------------------------------------
# rendering

HIST_HEADER = ("Test",) + APPENDIX_LABELS
STATUS_HEADER = (
    "Test",
    "Expected Proportion",
    "Observed Proportion",
    "Status for Proportion of passing",
    "P-value of P-values",
    "Status for Uniform/Non-uniform distribution",
)
SKIP_HEADER = ("Test", "Sequences not applicable", "Sequences tested")


def _fmt_fixed(x: float | None) -> str:
    return "n/a" if x is None else f"{x:.6f}"


def _fmt_sci(x: float | None) -> str:
    return "n/a" if x is None else f"{x:.6e}"


def _tables(report: CampaignReport) -> list[list[tuple[str, ...]]]:
    hist = [HIST_HEADER]
    status = [STATUS_HEADER]
    for s in report.summaries:
        hist.append((str(s.test_id),) + tuple(str(c) for c in s.bins.appendix))
        v = s.verdict(report.config.alpha)
        status.append(
            (
                str(s.test_id),
                _fmt_fixed(v.expected_proportion),
                _fmt_fixed(v.observed_proportion),
                v.proportion_status,
                _fmt_sci(v.pop),
                v.uniformity_status,
            )
        )
    tables = [hist, status]
    skipped = [s for s in report.summaries if s.inapplicable]
    if skipped:
        tables.append([SKIP_HEADER] + [(str(s.test_id), str(s.inapplicable), str(s.sequences)) for s in skipped])
    return tables


def render_report(report: CampaignReport, fmt: str = "tsv") -> str:
    """Histogram table and proportion/uniformity table, appendix layout.

    A third table listing sequences a test declined appears only when there
    were any.
    """
    tables = _tables(report)
    if fmt == "tsv":
        return "\n\n".join("\n".join("\t".join(row) for row in table) for table in tables) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    cfg = report.config
    titles = [
        "Counting of P-values lying in the given ranges",
        "Status for Proportion of Passing and Uniformity of distribution",
        "Sequences on which a test was not applicable",
    ]
    out = io.StringIO()
    out.write(f"generator: {cfg.generator.kind}   sequences: {cfg.m}   alpha: {cfg.alpha:g}\n")
    for title, table in zip(titles, tables):
        widths = [max(len(row[i]) for row in table) for i in range(len(table[0]))]
        out.write(f"\n{title}\n\n")
        for row in table:
            out.write("  ".join(cell.rjust(w) if i else cell.ljust(w) for i, (cell, w) in enumerate(zip(row, widths))))
            out.write("\n")
    return out.getvalue()


def render_histogram_csv(report: CampaignReport) -> str:
    """Long-format counts for external plotting: test,layout,lower,upper,count."""
    out = io.StringIO()
    out.write("test,layout,lower,upper,count\n")
    for s in report.summaries:
        bins = s.bins
        for i, c in enumerate(bins.appendix):
            out.write(f"{s.test_id},appendix,{APPENDIX_EDGES[i]:g},{APPENDIX_EDGES[i + 1]:g},{c}\n")
        for i, c in enumerate(bins.deciles):
            out.write(f"{s.test_id},decile,{i / 10:g},{(i + 1) / 10:g},{c}\n")
    return out.getvalue()

