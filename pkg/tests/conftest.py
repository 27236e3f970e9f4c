import pytest

from mrw.engine import Bounds


@pytest.fixture
def bounds():
    return Bounds(size_bound=8)


@pytest.fixture
def big_bounds():
    return Bounds(size_bound=100)
