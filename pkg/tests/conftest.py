import numpy as np
import pytest

from lpwitness.tanner import CodeParams, TannerGraph, construct_regular


@pytest.fixture(scope="session")
def hamming_graph():
    return TannerGraph.from_checks(7, [[0, 1, 2, 4], [0, 1, 3, 5], [0, 2, 3, 6]])


@pytest.fixture(scope="session")
def single_check_graph():
    return TannerGraph.from_checks(3, [[0, 1, 2]])


@pytest.fixture(scope="session")
def triangle_graph():
    return TannerGraph.from_checks(3, [[0, 1], [1, 2], [0, 2]])


@pytest.fixture(scope="session")
def girth8_graph():
    """(3,4)-regular, N=96, girth >= 8: depth-1 trees everywhere."""
    return construct_regular(CodeParams(96, 3, 4, seed=5), 8)


@pytest.fixture(scope="session")
def girth10_graph():
    """(3,4)-regular, N=480, girth >= 10: depth-2 trees everywhere."""
    return construct_regular(CodeParams(480, 3, 4, seed=3), 10)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
