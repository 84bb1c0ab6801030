import numpy as np
import pytest

from shiftlab.weights import WeightSpec


@pytest.fixture
def genhyp_spec():
    # w = 2 for k > 0, 1/2 for k <= 0
    return WeightSpec.two_sided(0.5, 2.0, first_right=1)


@pytest.fixture
def trivcr_spec():
    # w = 1/2 for k >= 0, 1 for k < 0
    return WeightSpec.two_sided(1.0, 0.5, first_right=0)


def random_spec(rng: np.random.Generator, max_period=4, lo=0.25, hi=4.0, core_max=4, signs=True) -> WeightSpec:
    def block(n):
        mags = np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))
        if signs:
            mags *= rng.choice([-1.0, 1.0], size=n)
        return mags.tolist()

    return WeightSpec(
        int(rng.integers(-3, 4)),
        block(int(rng.integers(0, core_max + 1))),
        block(int(rng.integers(1, max_period + 1))),
        block(int(rng.integers(1, max_period + 1))),
    )


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
