import random

import pytest

from freqcube import available_engines


@pytest.fixture
def rng():
    """Fixed-seed generator so every property test replays identically."""
    return random.Random(0xC0FFEE)


def pytest_generate_tests(metafunc):
    if "engine" in metafunc.fixturenames:
        metafunc.parametrize("engine", available_engines())
