from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from zaremba.cfcore import Alphabet
from zaremba.ensemble import Mode, build_ensemble

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# the smallest desk-scale relaxed configuration whose ladder admits every factor
TINY_N = 10**12
TINY_EPS = 0.5
TINY_SCALE = 2.0
TINY_ALPHABET = Alphabet.range(2)

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def tiny_ensemble():
    return build_ensemble(TINY_N, TINY_EPS, TINY_ALPHABET, Mode.relaxed(TINY_SCALE))


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
