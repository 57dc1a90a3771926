import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from minbudget import (
    CbrTriple,
    as_cost,
    build_instance,
    classify_subset,
    concat_stats,
    cost_to_str,
    enumerate_ideals,
    is_linear_extension,
    restrict,
    schedule_stats,
)
from minbudget.errors import (
    CoverageMismatch,
    CycleDetected,
    DuplicateJob,
    MissingCost,
    TooLarge,
    UnknownEndpoint,
    UnknownJob,
)
from minbudget.generators import random_dag
from oracles import count_ideals, random_feasible

F = Fraction


def test_cost_parsing():
    assert as_cost(3) == F(3)
    assert as_cost("-7") == F(-7)
    assert as_cost("2/3") == F(2, 3)
    with pytest.raises(ValueError):
        as_cost(1.5)
    assert cost_to_str(F(-7)) == "-7"
    assert cost_to_str(F(2, 3)) == "2/3"


def test_build_computes_closure(fig1):
    derived = {
        ("a", "e"), ("a", "g"), ("a", "f"),
        ("b", "f"), ("b", "g"),
        ("c", "g"), ("c", "f"),
    }
    assert derived < fig1.closure
    assert fig1.closure == fig1.edges | derived | {("c", "e")}


def test_build_single_job_and_errors():
    single = build_instance([("x", 0)])
    assert single.n == 1 and single.closure == frozenset()
    with pytest.raises(CycleDetected):
        build_instance([("a", 1), ("b", 1)], [("a", "b"), ("b", "a")])
    with pytest.raises(CycleDetected):
        build_instance([("a", 1)], [("a", "a")])
    with pytest.raises(DuplicateJob):
        build_instance([("a", 1), ("a", 2)])
    with pytest.raises(UnknownEndpoint):
        build_instance([("a", 1)], [("a", "zz")])


def test_classify_subset(fig1):
    ac = classify_subset(fig1, {"a", "c"})
    assert ac.is_ideal and not ac.is_filter and ac.is_interval
    empty = classify_subset(fig1, set())
    assert empty.is_ideal and empty.is_filter and empty.is_interval
    efg = classify_subset(fig1, {"e", "f", "g"})
    assert efg.is_filter and efg.is_interval and not efg.is_ideal
    with pytest.raises(UnknownJob):
        classify_subset(fig1, {"zz"})


def test_classify_non_interval(fig1):
    # a and e are comparable through c, which is missing.
    assert not classify_subset(fig1, {"a", "e"}).is_interval


def test_enumerate_ideals_counts(fig3):
    antichain = build_instance([("x", 1), ("y", 1), ("z", 1)])
    assert sum(1 for _ in enumerate_ideals(antichain)) == 8
    chain = build_instance([("a", 1), ("b", 1), ("c", 1)], [("a", "b"), ("b", "c")])
    assert [sorted(i) for i in enumerate_ideals(chain)] == [
        [], ["a"], ["a", "b"], ["a", "b", "c"],
    ]
    assert sum(1 for _ in enumerate_ideals(fig3)) == 27


def test_enumerate_ideals_order_and_validity(fig1):
    seen = list(enumerate_ideals(fig1))
    assert len(seen) == len(set(seen))
    keys = [(len(s), tuple(sorted(s))) for s in seen]
    assert keys == sorted(keys)
    for ideal in seen:
        assert classify_subset(fig1, ideal).is_ideal


def test_enumerate_ideals_matches_recursive_count():
    rng = random.Random(11)
    for _ in range(30):
        inst = random_dag(rng, rng.randint(0, 10), density=rng.choice([0.1, 0.3, 0.6]))
        assert sum(1 for _ in enumerate_ideals(inst)) == count_ideals(inst)


def test_enumerate_ideals_cap():
    big = build_instance([(f"j{k}", 1) for k in range(25)])
    with pytest.raises(TooLarge):
        next(enumerate_ideals(big))


def test_restrict(fig1):
    sub = restrict(fig1, {"a", "c", "e"})
    assert sub.closure == {("a", "c"), ("c", "e"), ("a", "e")}
    assert [sub.cost(j) for j in ("a", "c", "e")] == [F(2), F(-1), F(-4)]
    assert restrict(fig1, set()).n == 0
    assert restrict(fig1, fig1.ids) == fig1
    with pytest.raises(UnknownJob):
        restrict(fig1, {"zz"})


def test_restrict_commutes_with_closure():
    rng = random.Random(5)
    for _ in range(25):
        inst = random_dag(rng, rng.randint(1, 9), density=0.4)
        sub = {j for j in inst.ids if rng.random() < 0.5}
        induced = {(u, v) for u, v in inst.closure if u in sub and v in sub}
        assert restrict(inst, sub).closure == induced


def test_is_linear_extension(fig1):
    assert is_linear_extension(fig1, ("a", "c", "b", "e", "d", "f", "g"))
    assert not is_linear_extension(fig1, ("c", "a", "b", "e", "d", "f", "g"))
    empty = build_instance([])
    assert is_linear_extension(empty, ())
    with pytest.raises(CoverageMismatch):
        is_linear_extension(fig1, ("a", "c"))


def test_schedule_stats(fig1):
    stats = schedule_stats(fig1.costs, ("a", "c", "b", "e", "d", "f", "g"))
    assert stats == CbrTriple(F(-1), F(3), F(-4))
    assert schedule_stats({}, ()) == CbrTriple.zero()
    assert schedule_stats({"x": F(-5)}, ("x",)) == CbrTriple(F(-5), F(0), F(-5))
    with pytest.raises(MissingCost):
        schedule_stats({}, ("x",))


def test_concat_stats_examples():
    left = CbrTriple(F(2), F(3), F(-1))
    right = CbrTriple(F(-1), F(1), F(-2))
    assert concat_stats(left, right) == CbrTriple(F(1), F(3), F(-2))
    for t in (left, right):
        assert concat_stats(t, CbrTriple.zero()) == t
        assert concat_stats(CbrTriple.zero(), t) == t


def test_triple_invariants_rejected():
    with pytest.raises(ValueError):
        CbrTriple(F(1), F(-1), F(2))
    with pytest.raises(ValueError):
        CbrTriple(F(1), F(0), F(1))
    with pytest.raises(ValueError):
        CbrTriple(F(2), F(1), F(0))


costs_list = st.lists(st.integers(-9, 9).map(Fraction), max_size=12)


@given(costs_list)
def test_stats_invariants(costs):
    ids = [f"j{k}" for k in range(len(costs))]
    stats = schedule_stats(dict(zip(ids, costs)), tuple(ids))
    assert stats.b >= max(Fraction(0), stats.c)
    assert stats.r <= min(Fraction(0), stats.c)
    assert stats.c == stats.b + stats.r


@given(costs_list, st.integers(0, 12))
def test_concat_matches_split_stats(costs, cut):
    ids = [f"j{k}" for k in range(len(costs))]
    table = dict(zip(ids, costs))
    cut = min(cut, len(ids))
    whole = schedule_stats(table, tuple(ids))
    glued = concat_stats(
        schedule_stats(table, tuple(ids[:cut])), schedule_stats(table, tuple(ids[cut:]))
    )
    assert glued == whole


def test_prefix_is_ideal_suffix_is_filter():
    rng = random.Random(7)
    for _ in range(25):
        inst = random_dag(rng, rng.randint(1, 9), density=0.4)
        schedule = random_feasible(rng, inst)
        cut = rng.randint(0, inst.n)
        assert classify_subset(inst, schedule[:cut]).is_ideal
        assert classify_subset(inst, schedule[cut:]).is_filter
