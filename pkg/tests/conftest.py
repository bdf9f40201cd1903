import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from windguide.airframe import AircraftParams, GuidanceConfig, NormalizationBasis  # noqa: E402


@pytest.fixture
def basis():
    return NormalizationBasis()


@pytest.fixture
def params():
    return AircraftParams()


@pytest.fixture
def guidance_config():
    return GuidanceConfig()


ACCEPTANCE_LINES = []


def report(number, title, ok, detail=""):
    """Record and print one acceptance verdict line."""
    line = f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
