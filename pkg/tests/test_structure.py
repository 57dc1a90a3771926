import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from minbudget import (
    Block,
    BlockSchedule,
    build_instance,
    cbr_compare,
    cbr_key,
    check_iis,
    classify_subset,
    consistency_swap,
    contiguify,
    enumerate_ideals,
    generic_solve,
    is_irreducible,
    min_budget_exact,
    prefix_select,
    restrict,
    schedule_stats,
    subset_cbr,
)
from minbudget.errors import (
    CoverageMismatch,
    NotAnInterval,
    NotCertified,
    NotFeasibleInput,
    NotIrreducible,
    PartitionInvalid,
)
from minbudget.generators import random_dag
from minbudget.instance import CbrTriple
from oracles import random_feasible

F = Fraction


def triple(c, b):
    return CbrTriple.of(F(c), F(b))


triples = st.builds(
    lambda c, slack: CbrTriple.of(F(c), max(F(0), F(c)) + F(slack)),
    st.integers(-6, 6),
    st.integers(0, 6),
)


def test_cbr_compare_examples():
    assert cbr_compare(triple(-1, 1), triple(5, 5)) == "before"
    assert cbr_compare(triple(-1, 1), triple(-1, 2)) == "before"
    assert cbr_compare(triple(-1, 2), triple(-1, 1)) == "after"
    assert cbr_compare(triple(3, 3), triple(3, 3)) == "equivalent"
    # same class and budget: smaller return first
    assert cbr_compare(CbrTriple(F(-2), F(1), F(-3)), CbrTriple(F(-1), F(1), F(-2))) == "before"


@given(triples)
def test_nothing_after_empty_set(t):
    assert cbr_compare(t, CbrTriple.zero()) in ("before", "equivalent")


@given(triples, triples, triples)
def test_cbr_is_total_preorder(a, b, c):
    assert cbr_compare(a, a) == "equivalent"
    assert cbr_compare(a, b) in ("before", "equivalent", "after")
    if cbr_compare(a, b) != "after" and cbr_compare(b, c) != "after":
        assert cbr_compare(a, c) != "after"


def test_is_irreducible_examples():
    good = build_instance([("a", 1), ("b", -2)], [("a", "b")])
    assert is_irreducible(good, {"a", "b"})
    bad = build_instance([("a", -1), ("b", 1)], [("a", "b")])
    assert not is_irreducible(bad, {"a", "b"})
    for cost in (-3, 0, 3):
        single = build_instance([("s", cost)])
        assert is_irreducible(single, {"s"})


def test_is_irreducible_requires_interval(fig1):
    with pytest.raises(NotAnInterval):
        is_irreducible(fig1, {"a", "e"})


def blocks_for(inst, parts, orders=None):
    out = []
    for k, part in enumerate(parts):
        order = tuple(orders[k]) if orders else tuple(sorted(part))
        out.append(Block.from_schedule(inst.costs, order))
    return BlockSchedule(tuple(out))


def test_check_iis_fig3_partitions(fig3):
    for parts in (
        [("a", "b"), ("c", "d"), ("e", "f")],
        [("a", "b", "c", "d"), ("e", "f")],
        [("a", "b", "c", "d", "e", "f")],
    ):
        report = check_iis(fig3, blocks_for(fig3, parts, orders=parts))
        assert report.passed, (parts, report)


def test_check_iis_rejects_reordered_blocks(fig3):
    swapped = blocks_for(fig3, [("c", "d"), ("a", "b"), ("e", "f")],
                         orders=[("c", "d"), ("a", "b"), ("e", "f")])
    report = check_iis(fig3, swapped)
    assert not report.passed
    assert not report.keys_nondecreasing


def test_check_iis_rejects_suboptimal_block(fig1):
    # one block covering everything, scheduled feasibly but not optimally
    order = ("b", "d", "a", "c", "e", "f", "g")
    assert schedule_stats(fig1.costs, order).b == 5
    report = check_iis(fig1, blocks_for(fig1, [order], orders=[order]))
    assert report.feasible and not report.optimal and not report.passed


def test_check_iis_coverage(fig3):
    partial = blocks_for(fig3, [("a", "b")], orders=[("a", "b")])
    with pytest.raises(CoverageMismatch):
        check_iis(fig3, partial)


def test_generic_solve_fig3(fig3):
    bs = generic_solve(fig3)
    assert bs.stats.b == 1
    assert check_iis(fig3, bs).passed
    # The whole set is the unique minimal ideal: its key (NEG, 1, -4)
    # precedes every proper chain prefix, so one block comes out.
    assert len(bs.blocks) == 1


def test_generic_solve_all_positive_antichain():
    inst = build_instance([("x", 1), ("y", 2)])
    bs = generic_solve(inst)
    assert bs.stats.b == 3
    assert [sorted(b.jobs) for b in bs.blocks] == [["x", "y"]]
    assert generic_solve(build_instance([])).blocks == ()


def test_generic_solve_random_matches_oracle():
    rng = random.Random(31)
    for _ in range(30):
        inst = random_dag(rng, rng.randint(1, 9), density=rng.choice([0.2, 0.4]))
        bs = generic_solve(inst)
        assert bs.stats.b == min_budget_exact(inst)[0]
        assert check_iis(inst, bs).passed


def test_consistency_swap_two_jobs():
    inst = build_instance([("j", 1), ("k", -1)])
    left, right = consistency_swap(inst, (), ("j",), (), ("k",), ())
    assert left == right == ("k", "j")
    original = schedule_stats(inst.costs, ("j", "k")).b
    assert schedule_stats(inst.costs, left).b == 0 <= original


def test_consistency_swap_fig3(fig3):
    # I = {c,d} follows J = {a,b} in the preorder, R holds the rest.
    s = ("c", "d", "a", "b", "e", "f")
    assert schedule_stats(fig3.costs, s).b == 2
    left, right = consistency_swap(fig3, (), ("c", "d"), (), ("a", "b"), ("e", "f"))
    best = min(schedule_stats(fig3.costs, left).b, schedule_stats(fig3.costs, right).b)
    assert best <= 2


def test_consistency_swap_validates_partition(fig3):
    with pytest.raises(PartitionInvalid):
        consistency_swap(fig3, ("a",), ("a", "b"), (), ("c", "d"), ("e", "f"))
    with pytest.raises(PartitionInvalid):
        consistency_swap(fig3, (), ("a", "b"), (), ("c", "d"), ("e",))


def _random_swap_case(rng, inst):
    """Five-part split of the jobs with optimally scheduled middle parts,
    arranged so the earlier one is not below the later one."""
    ids = list(inst.ids)
    rng.shuffle(ids)
    cuts = sorted(rng.randint(0, len(ids)) for _ in range(4))
    l, i, m, j, r = (ids[: cuts[0]], ids[cuts[0] : cuts[1]], ids[cuts[1] : cuts[2]],
                     ids[cuts[2] : cuts[3]], ids[cuts[3] :])
    if cbr_key(subset_cbr(inst, i)) < cbr_key(subset_cbr(inst, j)):
        i, j = j, i
    first = min_budget_exact(restrict(inst, i))[1]
    second = min_budget_exact(restrict(inst, j))[1]
    return tuple(l), first, tuple(m), second, tuple(r)


def test_consistency_swap_randomized():
    rng = random.Random(37)
    checked = 0
    while checked < 100:
        inst = random_dag(rng, rng.randint(2, 8), density=0.3)
        l, first, m, second, r = _random_swap_case(rng, inst)
        s = l + first + m + second + r
        base = schedule_stats(inst.costs, s).b
        left, right = consistency_swap(inst, l, first, m, second, r)
        assert min(
            schedule_stats(inst.costs, left).b, schedule_stats(inst.costs, right).b
        ) <= base
        checked += 1


def test_contiguify_idempotent(fig3):
    block = Block.from_schedule(fig3.costs, ("a", "b"))
    s = ("a", "b", "c", "d", "e", "f")
    assert contiguify(fig3, s, block) == s


def test_contiguify_fig3_example(fig3):
    block = Block.from_schedule(fig3.costs, ("a", "b"))
    s = ("a", "c", "b", "e", "d", "f")
    result = contiguify(fig3, s, block)
    # The split lands where the interval attains its budget: right
    # after job a, so the interval is reinserted at the front.
    assert result == ("a", "b", "c", "e", "d", "f")
    assert schedule_stats(fig3.costs, result).b <= schedule_stats(fig3.costs, s).b


def test_contiguify_errors(fig3):
    block = Block.from_schedule(fig3.costs, ("a", "b"))
    with pytest.raises(NotFeasibleInput):
        contiguify(fig3, ("b", "a", "c", "d", "e", "f"), block)
    reducible = build_instance([("a", -1), ("b", 1)], [("a", "b")])
    bad = Block.from_schedule(reducible.costs, ("a", "b"))
    with pytest.raises(NotIrreducible):
        contiguify(reducible, ("a", "b"), bad)


def _sample_irreducible(rng, inst):
    """A random irreducible interval; ideals are intervals, and some
    singleton always qualifies as a fallback."""
    ideals = [i for i in enumerate_ideals(inst) if i]
    rng.shuffle(ideals)
    for ideal in ideals[:6]:
        if is_irreducible(inst, ideal):
            return set(ideal)
    return {rng.choice(inst.ids)}


def test_contiguify_never_raises_budget():
    rng = random.Random(41)
    for _ in range(100):
        inst = random_dag(rng, rng.randint(1, 7), density=0.35)
        interval = _sample_irreducible(rng, inst)
        budget, order = min_budget_exact(restrict(inst, interval))
        block = Block.from_schedule(inst.costs, order)
        s = random_feasible(rng, inst)
        result = contiguify(inst, s, block)
        assert schedule_stats(inst.costs, result).b <= schedule_stats(inst.costs, s).b


def fig3_blocks(fig3):
    return [Block.from_schedule(fig3.costs, o) for o in (("a", "b"), ("c", "d"), ("e", "f"))]


def test_prefix_select_modes(fig3):
    blocks = fig3_blocks(fig3)
    assert prefix_select(blocks, "min_return") == 3
    # Folded budgets stay at 1 for every prefix (max(1, -1+2) = 1), so
    # the cheapest prefix within the cap is the full one.
    assert prefix_select(blocks, "min_cost_with_budget_cap", budget_cap=F(1)) == 3
    assert prefix_select(blocks, "min_cost_with_budget_cap", budget_cap=F(0)) == 0
    assert prefix_select(blocks, "min_ideal") == 3
    for mode in ("min_return", "min_ideal"):
        assert prefix_select([], mode) == 0
    assert prefix_select([], "min_cost_with_budget_cap", budget_cap=F(0)) == 0


def test_prefix_select_requires_sorted_keys(fig3):
    blocks = fig3_blocks(fig3)
    with pytest.raises(NotCertified):
        prefix_select(list(reversed(blocks)), "min_return")


def test_prefix_select_min_ideal_matches_enumeration():
    rng = random.Random(43)
    for _ in range(20):
        inst = random_dag(rng, rng.randint(1, 9), density=0.35)
        bs = generic_solve(inst)
        l = prefix_select(list(bs.blocks), "min_ideal")
        chosen = frozenset(j for b in bs.blocks[:l] for j in b.jobs)
        best = min(cbr_key(subset_cbr(inst, i)) for i in enumerate_ideals(inst))
        assert cbr_key(subset_cbr(inst, chosen)) == best
