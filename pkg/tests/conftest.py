import numpy as np
import pytest

from selfaffine.timeseries import ReturnsSeries


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_returns(values) -> ReturnsSeries:
    return ReturnsSeries(np.asarray(values, dtype=float))
