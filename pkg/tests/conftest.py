import sys
from pathlib import Path

import pytest

from racerad import RadarConfig

sys.path.insert(0, str(Path(__file__).parent))

REPO = Path(__file__).resolve().parents[1]


@pytest.fixture
def cfg():
    """The 60 GHz racing-sensor configuration."""
    return RadarConfig()


@pytest.fixture
def complex_cfg():
    return RadarConfig(adc_mode="complex")


@pytest.fixture
def configs_dir():
    return REPO / "configs"


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary prints them after the run."""
    def record(number, title, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
