"""Statistical randomness test battery: 15 tests, reference generators and campaigns."""

from .battery import ALL_TESTS, TESTS, TestParams, parse_selection, run_test
from .bits import BitSequence, from_ascii, from_bytes
from .campaign import CampaignConfig, CampaignReport, pop_uniformity, proportion, render_report, run_campaign, threshold
from .errors import ConfigError, DomainError, LengthError, ParseError, RecommendationWarning
from .generators import GeneratorSpec, generate
from .result import TestResult

__all__ = [
    "ALL_TESTS",
    "TESTS",
    "TestParams",
    "parse_selection",
    "run_test",
    "BitSequence",
    "from_ascii",
    "from_bytes",
    "CampaignConfig",
    "CampaignReport",
    "pop_uniformity",
    "proportion",
    "render_report",
    "run_campaign",
    "threshold",
    "ConfigError",
    "DomainError",
    "LengthError",
    "ParseError",
    "RecommendationWarning",
    "GeneratorSpec",
    "generate",
    "TestResult",
]

__version__ = "0.1.0"
