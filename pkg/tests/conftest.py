import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

box = st.complex_numbers(max_magnitude=1.4, allow_nan=False, allow_infinity=False).filter(
    lambda z: abs(z.real) <= 1 and abs(z.imag) <= 1)


def generic(rng, k):
    return [complex(*rng.uniform(-1, 1, 2)) for _ in range(k)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
