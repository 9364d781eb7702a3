import pytest

from ssdlat import build, chain


@pytest.fixture(scope="session")
def square():
    """The four-element Boolean diagram."""
    return build([1, 2, 1], {0: [(1, 1), (1, 2)], 1: [(1, 1), (2, 1)]})


@pytest.fixture(scope="session")
def m3():
    """Three atoms under one top: modular, not slim."""
    return build([1, 3, 1], {0: [(1, 1), (1, 2), (1, 3)], 1: [(1, 1), (2, 1), (3, 1)]})


@pytest.fixture(scope="session")
def hexagon():
    """The six-element crown: slim, planar, not semimodular."""
    return build(
        [1, 2, 2, 1],
        {0: [(1, 1), (1, 2)], 1: [(1, 1), (2, 2)], 2: [(1, 1), (2, 1)]},
    )


@pytest.fixture(scope="session")
def sqtop():
    """A square with a chain on top (size 5, ranks (1, 1))."""
    return build(
        [1, 2, 1, 1],
        {0: [(1, 1), (1, 2)], 1: [(1, 1), (2, 1)], 2: [(1, 1)]},
    )


@pytest.fixture(scope="session")
def sqbot():
    """A square hanging off a pendant bottom (size 5, ranks (0, 0))."""
    return build(
        [1, 1, 2, 1],
        {0: [(1, 1)], 1: [(1, 1), (1, 2)], 2: [(1, 1), (2, 1)]},
    )


@pytest.fixture(scope="session")
def chains():
    return {k: chain(k) for k in range(1, 7)}
