import os

import pytest
from hypothesis import HealthCheck, settings

from nsfd_predprey.config import CASES
from nsfd_predprey.model import PreyPredatorModel

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=1000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

H_VALUES = (0.1, 1.0, 10.0, 100.0)


def case_model(key: str) -> PreyPredatorModel:
    m1, m2 = CASES[key]
    return PreyPredatorModel.rational(m1, m2)


@pytest.fixture(params=list(CASES))
def case(request):
    return request.param, case_model(request.param)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
