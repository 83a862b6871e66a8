import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_diagram(rng, n, scale=10.0, integer=False):
    births = rng.uniform(0, scale, n)
    lengths = rng.uniform(0, scale / 2, n)
    if integer:
        births = np.floor(births)
        lengths = np.floor(lengths) + 1
    return np.column_stack([births, births + lengths])


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
