import numpy as np
import pytest

from lorasat import preset_scenario

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def scenario():
    return preset_scenario("default")


@pytest.fixture(scope="session")
def ber_scenario():
    return preset_scenario("ber-paper")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
