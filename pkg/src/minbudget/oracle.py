"""Exact exponential-time solver over the ideal lattice.

Ground truth for every polynomial algorithm in the package: a dynamic
program that assigns each ideal I the value

    B[I] = min over removable j of max(B[I minus j], c(I)),   B[empty] = 0,

where j is removable iff it is maximal in I.  A schedule of I ending in
j consists of a schedule of I minus j followed by j; its prefix costs
are those of the first part plus c(I) itself, so the recurrence is
exact.  Validated against explicit enumeration of linear extensions
(``naive_min_budget``) in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import TooLarge
from .instance import (
    CbrTriple,
    Instance,
    JobId,
    Schedule,
    ZERO,
    _bits,
    _ideal_mask_layers,
    is_linear_extension,
    restrict,
    schedule_stats,
)

DEFAULT_MAX_ENTRIES = 1 << 20
NAIVE_JOB_CAP = 9


@dataclass(frozen=True)
class IdealDpTable:
    """Memo over the ideal lattice.

    ``entries`` maps each ideal (bitmask over sorted job ids) to its
    minimum budget and the last job of a budget-attaining schedule
    (None only for the empty ideal).  Ties in the minimum are broken by
    the smallest job id, which makes tracebacks deterministic.
    """

    ids: tuple[JobId, ...]
    entries: dict[int, tuple[Fraction, JobId | None]]

    def budget_of(self, mask: int) -> Fraction:
        return self.entries[mask][0]

    def traceback(self, mask: int) -> Schedule:
        order: list[JobId] = []
        while mask:
            _, last = self.entries[mask]
            assert last is not None
            order.append(last)
            mask ^= 1 << self.ids.index(last)
        return tuple(reversed(order))


def build_table(inst: Instance, max_entries: int = DEFAULT_MAX_ENTRIES) -> IdealDpTable:
    """Run the lattice DP over all ideals of the instance."""
    costs = [inst.cost(j) for j in inst.ids]
    entries: dict[int, tuple[Fraction, JobId | None]] = {}
    for layer in _ideal_mask_layers(inst, max_count=max_entries):
        for mask in layer:
            if mask == 0:
                entries[0] = (ZERO, None)
                continue
            total = sum((costs[p] for p in _bits(mask)), ZERO)
            best: Fraction | None = None
            best_last: JobId | None = None
            for p in _bits(mask):
                if inst.succ_mask(p) & mask:
                    continue  # not maximal in the ideal, not removable
                candidate = max(entries[mask ^ (1 << p)][0], total)
                if best is None or candidate < best:
                    best = candidate
                    best_last = inst.ids[p]
            assert best is not None
            entries[mask] = (best, best_last)
    return IdealDpTable(ids=inst.ids, entries=entries)


def min_budget_exact(
    inst: Instance, max_entries: int = DEFAULT_MAX_ENTRIES
) -> tuple[Fraction, Schedule]:
    """Minimum budget of the instance and a schedule attaining it."""
    table = build_table(inst, max_entries=max_entries)
    full = (1 << inst.n) - 1
    budget = table.budget_of(full)
    schedule = table.traceback(full)
    assert is_linear_extension(inst, schedule)
    assert schedule_stats(inst.costs, schedule).b == budget
    return budget, schedule


def subset_cbr(
    inst: Instance, sub: Iterable[JobId], max_entries: int = DEFAULT_MAX_ENTRIES
) -> CbrTriple:
    """Set-level (cost, budget, return) of an arbitrary subset of jobs."""
    sub_inst = restrict(inst, sub)
    budget, _ = min_budget_exact(sub_inst, max_entries=max_entries)
    total = sub_inst.cost_of(sub_inst.ids)
    return CbrTriple(total, budget, total - budget)


def naive_min_budget(inst: Instance) -> Fraction:
    """Minimum budget by explicit enumeration of all linear extensions.

    Independent second oracle: shares no code path with the lattice DP.
    """
    if inst.n > NAIVE_JOB_CAP:
        raise TooLarge(f"naive enumeration capped at {NAIVE_JOB_CAP} jobs")
    n = inst.n
    costs = [inst.cost(j) for j in inst.ids]
    full = (1 << n) - 1
    best: list[Fraction | None] = [None]

    def walk(done: int, running: Fraction, peak: Fraction) -> None:
        if done == full:
            if best[0] is None or peak < best[0]:
                best[0] = peak
            return
        for p in range(n):
            bit = 1 << p
            if done & bit or inst.pred_mask(p) & ~done:
                continue
            total = running + costs[p]
            walk(done | bit, total, max(peak, total))

    walk(0, ZERO, ZERO)
    assert best[0] is not None
    return best[0]
