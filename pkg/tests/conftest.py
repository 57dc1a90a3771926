import pytest

from minbudget import build_instance


@pytest.fixture
def fig1():
    """Seven jobs whose reduced diagram and stats are pinned in the tests."""
    return build_instance(
        [("a", 2), ("b", 2), ("c", -1), ("d", 3), ("e", -4), ("f", -4), ("g", 1)],
        [("a", "c"), ("c", "e"), ("b", "e"), ("b", "d"), ("e", "g"), ("e", "f"), ("d", "f")],
    )


@pytest.fixture
def fig3():
    """Three independent two-job chains, each positive-then-negative."""
    return build_instance(
        [("a", 1), ("b", -2), ("c", 2), ("d", -3), ("e", 3), ("f", -4)],
        [("a", "b"), ("c", "d"), ("e", "f")],
    )


@pytest.fixture
def convex_example():
    """Two negatives x < y; S(p) = {x, y}, S(q) = {y}."""
    return build_instance(
        [("x", -3), ("y", -2), ("p", 2), ("q", 1)],
        [("p", "x"), ("p", "y"), ("q", "y")],
    )
