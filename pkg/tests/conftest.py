import math

import numpy as np
import pytest

from semiquat.curves import example31, fuzz_family
from semiquat.involute import make_involute
from semiquat.semialgebra import MetricContext

SQRT2 = math.sqrt(2.0)


@pytest.fixture(scope="session")
def ctx():
    return MetricContext.default()


@pytest.fixture(scope="session")
def xi():
    return example31()


@pytest.fixture(scope="session")
def example_pair(xi, ctx):
    return make_involute(xi, 2.0, ctx)


@pytest.fixture(scope="session")
def fuzz20(ctx):
    return fuzz_family(20, seed=1, domain=(-1.5, 1.5), ctx=ctx)


@pytest.fixture(scope="session")
def grid21():
    return np.linspace(-1.0, 1.0, 21)
