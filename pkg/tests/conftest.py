"""Shared test configuration.

Collects the per-criterion outcomes from test_acceptance.py and prints one
line per criterion at the end of the run, so a plain ``pytest`` invocation
shows the acceptance gate explicitly.
"""

import re
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

GOLDEN_DIR = Path(__file__).parent / "golden"

_ACCEPTANCE_PATTERN = re.compile(r"test_acceptance\.py::test_c(\d+)_(\w+)")
_acceptance_results: dict[int, tuple[str, str]] = {}


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260819)


def pytest_runtest_logreport(report):
    match = _ACCEPTANCE_PATTERN.search(report.nodeid)
    if not match:
        return
    number, name = int(match.group(1)), match.group(2)
    if report.when == "call":
        outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        _acceptance_results[number] = (name, outcome)
    elif report.failed:
        _acceptance_results[number] = (name, "FAIL")
    elif report.skipped:
        _acceptance_results.setdefault(number, (name, "SKIP"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria", sep="-")
    for number in sorted(_acceptance_results):
        name, outcome = _acceptance_results[number]
        terminalreporter.write_line(f"criterion {number:02d} {name}: {outcome}")
