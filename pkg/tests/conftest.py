import os
import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def record_criterion():
    def record(number: int, title: str, ok: bool):
        ACCEPTANCE[number] = (title, ok)
        print(f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {title}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}")
