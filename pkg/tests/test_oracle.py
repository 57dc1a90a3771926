import random
from fractions import Fraction

import pytest

from minbudget import (
    CbrTriple,
    build_instance,
    build_table,
    enumerate_ideals,
    is_linear_extension,
    min_budget_exact,
    naive_min_budget,
    restrict,
    schedule_stats,
    subset_cbr,
)
from minbudget.errors import TooLarge
from minbudget.generators import random_dag
from oracles import brute_min_budget, random_feasible

F = Fraction


def test_min_budget_figures(fig1, fig3):
    budget, schedule = min_budget_exact(fig1)
    assert budget == 3
    assert is_linear_extension(fig1, schedule)
    assert schedule_stats(fig1.costs, schedule).b == 3
    assert brute_min_budget(fig1) == 3

    budget3, _ = min_budget_exact(fig3)
    assert budget3 == 1
    assert naive_min_budget(fig3) == 1


def test_min_budget_all_negative_antichain():
    inst = build_instance([("x", -1), ("y", -2), ("z", -3)])
    assert min_budget_exact(inst)[0] == 0


def test_min_budget_empty():
    inst = build_instance([])
    assert min_budget_exact(inst) == (F(0), ())


def test_naive_examples():
    chain = build_instance([("a", 1), ("b", -2)], [("a", "b")])
    assert naive_min_budget(chain) == 1
    antichain = build_instance([("a", 1), ("b", -2)])
    assert naive_min_budget(antichain) == 0
    with pytest.raises(TooLarge):
        naive_min_budget(build_instance([(f"j{k}", 1) for k in range(10)]))


def test_subset_cbr(fig1, fig3):
    assert subset_cbr(fig3, {"a", "b"}) == CbrTriple(F(-1), F(1), F(-2))
    assert subset_cbr(fig1, set()) == CbrTriple.zero()
    assert subset_cbr(fig1, fig1.ids) == CbrTriple(F(-1), F(3), F(-4))


def test_dp_cross_validates_naive():
    rng = random.Random(17)
    for _ in range(60):
        inst = random_dag(rng, rng.randint(1, 8), density=rng.choice([0.1, 0.3, 0.6]))
        assert min_budget_exact(inst)[0] == naive_min_budget(inst)


def test_budget_lower_bounds_feasible_schedules():
    rng = random.Random(23)
    for _ in range(25):
        inst = random_dag(rng, rng.randint(1, 8), density=0.4)
        for ideal in enumerate_ideals(inst):
            if rng.random() < 0.7:
                continue
            sub = restrict(inst, ideal)
            stats = subset_cbr(inst, ideal)
            assert stats.b >= max(F(0), stats.c)
            if sub.n:
                sched = random_feasible(rng, sub)
                assert stats.b <= schedule_stats(sub.costs, sched).b


def test_table_entries_and_cap(fig3):
    table = build_table(fig3)
    assert table.entries[0] == (F(0), None)
    assert len(table.entries) == 27
    full = (1 << fig3.n) - 1
    assert table.budget_of(full) == 1
    with pytest.raises(TooLarge):
        build_table(fig3, max_entries=5)


def test_traceback_deterministic(fig3):
    assert min_budget_exact(fig3) == min_budget_exact(fig3)
