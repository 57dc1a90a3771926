"""Instance-level reductions and the reconfiguration-barrier import.

* ``bipartite_reduce`` keeps only the nonnegative-to-negative order
  pairs; the minimum budget is unchanged and ``repair_schedule``
  constructively turns any feasible schedule of the reduction into one
  feasible for the original order without raising the budget.
* ``reverse_instance`` flips the relation and negates the costs,
  swapping the roles of budget and return.
* ``energy_import`` encodes the problem of transforming one laminar
  interval system into another (single add/remove steps, bounded peak
  weight deficit) as a scheduling instance whose minimum budget is zero
  iff the deficit bound is met.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    BadParameters,
    CoverageMismatch,
    InfeasibleInput,
    NegativeThreshold,
    NonIntegerWeights,
    NotLaminar,
)
from .instance import (
    Instance,
    JobId,
    Schedule,
    ZERO,
    _from_closure,
    as_cost,
    build_instance,
    is_linear_extension,
    schedule_stats,
)
from .oracle import DEFAULT_MAX_ENTRIES, min_budget_exact


def bipartite_reduce(inst: Instance) -> Instance:
    """Keep exactly the closure pairs from nonnegative to negative jobs."""
    pairs = {
        (u, v) for u, v in inst.closure if inst.cost(u) >= 0 > inst.cost(v)
    }
    # Pairs into the negative side cannot chain, so the set is its own closure.
    return _from_closure(inst.jobs, pairs)


def _violations(inst: Instance, order: Sequence[JobId]) -> list[tuple[int, int]]:
    pos = {j: k for k, j in enumerate(order)}
    return [
        (pos[u], pos[v])
        for v, u in inst.closure  # v must precede u but is scheduled later
        if pos[u] < pos[v]
    ]


def repair_schedule(original: Instance, schedule: Sequence[JobId]) -> Schedule:
    """Make a reduced-feasible schedule feasible for the full order.

    Repeatedly takes a closest out-of-order pair (k before l although
    l precedes k in the order) and moves the negative job l directly
    before k, or, when both costs are nonnegative, moves k directly
    after l.  Every step keeps the reduced order satisfied, never raises
    the budget, and removes exactly one violation.
    """
    reduced = bipartite_reduce(original)
    order = list(schedule)
    try:
        if not is_linear_extension(reduced, order):
            raise InfeasibleInput("schedule is not feasible for the reduced order")
    except CoverageMismatch as exc:
        raise InfeasibleInput(str(exc)) from exc

    budget = schedule_stats(original.costs, order).b
    rounds = 0
    pending = _violations(original, order)
    while pending:
        rounds += 1
        assert rounds <= len(order) ** 2 + 1, "repair must terminate in n^2 steps"
        k_pos, l_pos = min(pending, key=lambda kl: (kl[1] - kl[0], kl[0]))
        k, l = order[k_pos], order[l_pos]
        if original.cost(l) < 0:
            order.pop(l_pos)
            order.insert(k_pos, l)
        else:
            order.pop(k_pos)
            order.insert(l_pos, k)  # l shifted left by the pop, so this lands after it
        assert is_linear_extension(reduced, order)
        new_budget = schedule_stats(original.costs, order).b
        assert new_budget <= budget
        budget = new_budget
        remaining = _violations(original, order)
        assert len(remaining) == len(pending) - 1
        pending = remaining
    assert is_linear_extension(original, order)
    return tuple(order)


def reverse_instance(inst: Instance) -> Instance:
    """Flip the relation and negate every cost."""
    jobs = tuple((j, -c) for j, c in inst.jobs)
    pairs = {(v, u) for u, v in inst.closure}
    return _from_closure(jobs, pairs)


def reverse_schedule(schedule: Sequence[JobId]) -> Schedule:
    return tuple(reversed(schedule))


@dataclass(frozen=True)
class WeightedInterval:
    """A closed interval [lo, hi] with a positive weight."""

    lo: Fraction
    hi: Fraction
    w: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise BadParameters(f"interval [{self.lo}, {self.hi}] is empty")
        if self.w <= 0:
            raise BadParameters(f"weight must be positive, got {self.w}")

    @property
    def span(self) -> tuple[Fraction, Fraction]:
        return (self.lo, self.hi)

    def intersects(self, other: "WeightedInterval") -> bool:
        return max(self.lo, other.lo) <= min(self.hi, other.hi)

    def contains(self, other: "WeightedInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


def _check_laminar(name: str, system: Sequence[WeightedInterval]) -> None:
    spans = set()
    for iv in system:
        if iv.span in spans:
            raise NotLaminar(f"duplicate interval {iv.span} in the {name} system")
        spans.add(iv.span)
    for a in range(len(system)):
        for b in range(a + 1, len(system)):
            x, y = system[a], system[b]
            if x.intersects(y) and not (x.contains(y) or y.contains(x)):
                raise NotLaminar(
                    f"intervals {x.span} and {y.span} overlap without nesting in the {name} system"
                )


@dataclass(frozen=True)
class EnergyBarrierInstance:
    """Two laminar systems of weighted closed intervals."""

    initial: tuple[WeightedInterval, ...]
    final: tuple[WeightedInterval, ...]

    def __post_init__(self) -> None:
        _check_laminar("initial", self.initial)
        _check_laminar("final", self.final)
        final_by_span = {iv.span: iv for iv in self.final}
        for iv in self.initial:
            other = final_by_span.get(iv.span)
            if other is not None and other.w != iv.w:
                raise BadParameters(
                    f"interval {iv.span} has weight {iv.w} initially but {other.w} finally"
                )

    @property
    def total_weight(self) -> Fraction:
        return sum((iv.w for iv in self.initial + self.final), ZERO)


def _interval_job_id(prefix: str, iv: WeightedInterval) -> JobId:
    return f"{prefix}_{iv.lo}_{iv.hi}"


THRESHOLD_JOB: JobId = "threshold"


def energy_import(eb: EnergyBarrierInstance, threshold: Fraction | int | str) -> Instance:
    """Scheduling instance deciding whether the barrier is at most the threshold.

    One job per interval in the symmetric difference of the systems:
    removing an initial-only interval costs its weight, adding a
    final-only interval returns its weight, plus one job carrying minus
    the threshold.  A removal precedes an addition exactly when the two
    intervals properly overlap, since both cannot coexist laminarly.
    The integer-weight requirement keeps the budget integral, so the
    yes answer is exactly "minimum budget zero".
    """
    bound = as_cost(threshold)
    if bound < 0:
        raise NegativeThreshold(f"threshold must be nonnegative, got {bound}")
    for iv in eb.initial + eb.final:
        if iv.w.denominator != 1:
            raise NonIntegerWeights(
                f"weight {iv.w} of interval {iv.span} is not an integer"
            )

    final_spans = {iv.span for iv in eb.final}
    initial_spans = {iv.span for iv in eb.initial}
    removals = sorted(
        (iv for iv in eb.initial if iv.span not in final_spans), key=lambda iv: iv.span
    )
    additions = sorted(
        (iv for iv in eb.final if iv.span not in initial_spans), key=lambda iv: iv.span
    )

    jobs: list[tuple[JobId, Fraction]] = []
    for iv in removals:
        jobs.append((_interval_job_id("rm", iv), iv.w))
    for iv in additions:
        jobs.append((_interval_job_id("add", iv), -iv.w))
    jobs.append((THRESHOLD_JOB, -bound))

    edges = [
        (_interval_job_id("rm", r), _interval_job_id("add", a))
        for r in removals
        for a in additions
        if r.intersects(a) and not r.contains(a) and not a.contains(r)
    ]
    return build_instance(jobs, edges)


def energy_barrier_value(
    eb: EnergyBarrierInstance,
    max_entries: int = DEFAULT_MAX_ENTRIES,
    on_probe: Callable[[int, bool], None] | None = None,
) -> Fraction:
    """Smallest integer threshold with a zero-budget schedule.

    Binary search over integers in [0, total weight]; feasibility is
    monotone in the threshold.  ``on_probe`` observes every probe as
    (threshold, reachable) for cross-validation.
    """
    lo = 0
    hi = int(eb.total_weight)
    # Removing everything first never exceeds the total initial weight,
    # so the upper end of the range is always feasible.
    while lo < hi:
        mid = (lo + hi) // 2
        budget, _ = min_budget_exact(energy_import(eb, mid), max_entries=max_entries)
        reachable = budget == 0
        if on_probe is not None:
            on_probe(mid, reachable)
        if reachable:
            hi = mid
        else:
            lo = mid + 1
    return Fraction(lo)
