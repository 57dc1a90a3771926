"""Seeded random instance generators for the CLI and the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import BadParameters
from .instance import Instance, build_instance
from .sp import SpLeaf, SpParallel, SpSeries, SpTree, tree_jobs, tree_pairs
from .transforms import EnergyBarrierInstance, WeightedInterval


def _check_range(lo: int, hi: int) -> None:
    if lo > hi:
        raise BadParameters(f"empty cost range [{lo}, {hi}]")


def _job_ids(prefix: str, n: int) -> list[str]:
    width = max(2, len(str(max(n - 1, 0))))
    return [f"{prefix}{k:0{width}d}" for k in range(n)]


def random_dag(rng: random.Random, n: int, density: float = 0.3,
               cost_lo: int = -5, cost_hi: int = 5) -> Instance:
    """Random DAG: edges follow a hidden permutation with the given density."""
    if n < 0:
        raise BadParameters("n must be nonnegative")
    if not 0 <= density <= 1:
        raise BadParameters("density must be within [0, 1]")
    _check_range(cost_lo, cost_hi)
    ids = _job_ids("j", n)
    hidden = ids[:]
    rng.shuffle(hidden)
    edges = [
        (hidden[a], hidden[b])
        for a in range(n)
        for b in range(a + 1, n)
        if rng.random() < density
    ]
    jobs = [(j, rng.randint(cost_lo, cost_hi)) for j in ids]
    return build_instance(jobs, edges)


def random_sp_tree(rng: random.Random, n: int, prefix: str = "j") -> SpTree:
    """Uniformly tagged random binary decomposition tree over n leaves."""
    if n < 1:
        raise BadParameters("a decomposition tree needs at least one job")
    ids = _job_ids(prefix, n)

    def grow(lo: int, hi: int) -> SpTree:
        if hi - lo == 1:
            return SpLeaf(ids[lo])
        cut = rng.randint(lo + 1, hi - 1)
        kind = SpSeries if rng.random() < 0.5 else SpParallel
        return kind(grow(lo, cut), grow(cut, hi))

    return grow(0, n)


def random_sp_instance(rng: random.Random, n: int, cost_lo: int = -5,
                       cost_hi: int = 5) -> tuple[Instance, SpTree]:
    _check_range(cost_lo, cost_hi)
    tree = random_sp_tree(rng, n)
    jobs = [(j, rng.randint(cost_lo, cost_hi)) for j in tree_jobs(tree)]
    return build_instance(jobs, tree_pairs(tree)), tree


def random_convex_instance(
    rng: random.Random,
    nplus: int,
    nminus: int,
    side: str = "nminus",
    cost_lo: int = -5,
    cost_hi: int = 5,
) -> tuple[Instance, tuple[str, ...]]:
    """Bipartite instance convex on the requested side, plus the arrangement.

    Each job on the non-arranged side is wired to a random nonempty
    consecutive run of the arranged side.
    """
    if nplus < 0 or nminus < 0:
        raise BadParameters("side sizes must be nonnegative")
    _check_range(cost_lo, cost_hi)
    if cost_hi < 0 or cost_lo > -1:
        raise BadParameters("cost range must allow both signs")
    pos_ids = _job_ids("p", nplus)
    neg_ids = _job_ids("n", nminus)
    jobs = [(j, rng.randint(0, cost_hi)) for j in pos_ids]
    jobs += [(j, rng.randint(cost_lo, -1)) for j in neg_ids]

    if side == "nminus":
        arranged, other = neg_ids[:], pos_ids
    elif side == "nplus":
        arranged, other = pos_ids[:], neg_ids
    else:
        raise BadParameters(f"unknown side {side!r}")
    rng.shuffle(arranged)

    edges = []
    for j in other:
        if not arranged:
            break
        a = rng.randrange(len(arranged))
        b = rng.randrange(len(arranged))
        lo, hi = min(a, b), max(a, b)
        for partner in arranged[lo : hi + 1]:
            edge = (j, partner) if side == "nminus" else (partner, j)
            edges.append(edge)
    return build_instance(jobs, edges), tuple(arranged)


def random_laminar_system(
    rng: random.Random, max_intervals: int, lo: int = 0, hi: int = 16,
    max_weight: int = 4,
) -> tuple[WeightedInterval, ...]:
    """Laminar system built by recursive splitting of [lo, hi]."""
    out: list[WeightedInterval] = []

    def split(a: int, b: int, budget: int) -> None:
        if budget <= 0 or b - a < 1:
            return
        if rng.random() < 0.7:
            out.append(
                WeightedInterval(Fraction(a), Fraction(b), Fraction(rng.randint(1, max_weight)))
            )
            budget -= 1
        if b - a >= 2 and budget > 0:
            mid = rng.randint(a + 1, b - 1)
            left_budget = budget // 2
            split(a, mid, left_budget)
            split(mid + 1, b, budget - left_budget)

    # Sibling ranges are disjoint and children nest in their parent, so
    # the system is laminar by construction.
    split(lo, hi, max_intervals)
    return tuple(out)


def random_energy_instance(rng: random.Random, max_intervals: int) -> EnergyBarrierInstance:
    if max_intervals < 0:
        raise BadParameters("interval budget must be nonnegative")
    first = max_intervals // 2
    initial = random_laminar_system(rng, first)
    final = random_laminar_system(rng, max_intervals - first)
    # The weight function lives on the union, so a span present in both
    # systems must carry one weight.
    initial_w = {iv.span: iv.w for iv in initial}
    final = tuple(
        WeightedInterval(iv.lo, iv.hi, initial_w.get(iv.span, iv.w)) for iv in final
    )
    return EnergyBarrierInstance(initial, final)
