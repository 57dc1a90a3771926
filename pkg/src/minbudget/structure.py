"""Preorder on job sets, irreducible intervals, and block-schedule machinery.

The central comparison orders job sets by (cost sign class, budget,
return): sets of negative total cost come first, compared by budget
then return; sets of nonnegative cost compare by return alone.  A
schedule split into contiguous blocks of irreducible intervals, each
scheduled optimally and listed in nondecreasing key order, is optimal
for the whole instance; ``check_iis`` certifies exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Sequence

from .errors import (
    CoverageMismatch,
    NotAnInterval,
    NotCertified,
    NotFeasibleInput,
    NotIrreducible,
    PartitionInvalid,
)
from .instance import (
    CbrTriple,
    Instance,
    JobId,
    Schedule,
    ZERO,
    _bits,
    classify_subset,
    concat_stats,
    is_linear_extension,
    restrict,
    schedule_stats,
)
from .oracle import DEFAULT_MAX_ENTRIES, build_table, min_budget_exact

Ordering = Literal["before", "equivalent", "after"]

NEG = 0
NONNEG = 1


def cbr_key(stats: CbrTriple) -> tuple[int, Fraction, Fraction]:
    """Sort key realizing the set preorder; key equality is equivalence."""
    if stats.c < 0:
        return (NEG, stats.b, stats.r)
    return (NONNEG, stats.r, ZERO)


def cbr_compare(first: CbrTriple, second: CbrTriple) -> Ordering:
    """Compare two triples under the total preorder."""
    a, b = cbr_key(first), cbr_key(second)
    if a < b:
        return "before"
    if a > b:
        return "after"
    return "equivalent"


@dataclass(frozen=True)
class Block:
    """A set of jobs together with a schedule of exactly those jobs."""

    jobs: frozenset[JobId]
    order: Schedule
    stats: CbrTriple

    def __post_init__(self) -> None:
        if len(self.order) != len(self.jobs) or set(self.order) != self.jobs:
            raise PartitionInvalid("block order must be a permutation of its job set")

    @staticmethod
    def from_schedule(costs: Mapping[JobId, Fraction], order: Sequence[JobId]) -> "Block":
        order = tuple(order)
        return Block(frozenset(order), order, schedule_stats(costs, order))

    def key(self) -> tuple[int, Fraction, Fraction]:
        return cbr_key(self.stats)


@dataclass(frozen=True)
class BlockSchedule:
    """An ordered list of disjoint blocks; concatenation gives one schedule."""

    blocks: tuple[Block, ...]

    @staticmethod
    def empty() -> "BlockSchedule":
        return BlockSchedule(())

    @property
    def jobs(self) -> frozenset[JobId]:
        out: frozenset[JobId] = frozenset()
        for block in self.blocks:
            out |= block.jobs
        return out

    @property
    def schedule(self) -> Schedule:
        return tuple(j for block in self.blocks for j in block.order)

    @property
    def stats(self) -> CbrTriple:
        folded = CbrTriple.zero()
        for block in self.blocks:
            folded = concat_stats(folded, block.stats)
        return folded

    @property
    def budget(self) -> Fraction:
        return self.stats.b


def block_for(inst: Instance, jobs: Iterable[JobId], max_entries: int = DEFAULT_MAX_ENTRIES) -> Block:
    """Block whose schedule is an optimal (oracle traceback) order of ``jobs``."""
    sub = restrict(inst, jobs)
    budget, order = min_budget_exact(sub, max_entries=max_entries)
    stats = schedule_stats(inst.costs, order)
    assert stats.b == budget
    return Block(frozenset(sub.ids), order, stats)


def _keys_nondecreasing(blocks: Sequence[Block]) -> bool:
    keys = [block.key() for block in blocks]
    return all(keys[i] <= keys[i + 1] for i in range(len(keys) - 1))


def is_irreducible(
    inst: Instance, interval: Iterable[JobId], max_entries: int = DEFAULT_MAX_ENTRIES
) -> bool:
    """True iff the interval is a minimal ideal of itself under the preorder."""
    members = set(interval)
    if not classify_subset(inst, members).is_interval:
        raise NotAnInterval(f"{sorted(members)} is not an interval of the order")
    sub = restrict(inst, members)
    table = build_table(sub, max_entries=max_entries)
    costs = [sub.cost(j) for j in sub.ids]
    full = (1 << sub.n) - 1
    own_key = cbr_key(CbrTriple.of(sum(costs, ZERO), table.budget_of(full)))
    for mask, (budget, _) in table.entries.items():
        total = sum((costs[p] for p in _bits(mask)), ZERO)
        if own_key > cbr_key(CbrTriple.of(total, budget)):
            return False
    return True


@dataclass(frozen=True)
class IisReport:
    """Per-condition verdicts for an increasing-irreducible-structure check."""

    feasible: bool
    block_intervals: tuple[bool, ...]
    block_irreducible: tuple[bool, ...]
    block_optimal: tuple[bool, ...]
    keys_nondecreasing: bool

    @property
    def intervals(self) -> bool:
        return all(self.block_intervals)

    @property
    def irreducible(self) -> bool:
        return all(self.block_irreducible)

    @property
    def optimal(self) -> bool:
        return all(self.block_optimal)

    @property
    def passed(self) -> bool:
        return self.feasible and self.intervals and self.irreducible and self.optimal and self.keys_nondecreasing


def check_iis(
    inst: Instance, bs: BlockSchedule, max_entries: int = DEFAULT_MAX_ENTRIES
) -> IisReport:
    """Certify a block schedule: feasibility, intervals, irreducibility,
    per-block optimality, and nondecreasing keys.

    Raises CoverageMismatch when the blocks do not partition the job set;
    all other defects come back as verdicts, not exceptions.
    """
    covered: set[JobId] = set()
    for block in bs.blocks:
        if covered & block.jobs:
            raise CoverageMismatch("blocks overlap")
        covered |= block.jobs
    if covered != set(inst.ids):
        raise CoverageMismatch("blocks must cover exactly the instance's jobs")

    feasible = is_linear_extension(inst, bs.schedule)

    intervals: list[bool] = []
    irreducible: list[bool] = []
    optimal: list[bool] = []
    recomputed: list[CbrTriple] = []
    for block in bs.blocks:
        ok_interval = classify_subset(inst, block.jobs).is_interval
        intervals.append(ok_interval)
        irreducible.append(
            ok_interval and is_irreducible(inst, block.jobs, max_entries=max_entries)
        )
        stats = schedule_stats(inst.costs, block.order)
        recomputed.append(stats)
        sub = restrict(inst, block.jobs)
        best, _ = min_budget_exact(sub, max_entries=max_entries)
        optimal.append(stats == block.stats and stats.b == best)

    keys = [cbr_key(s) for s in recomputed]
    nondecreasing = all(keys[i] <= keys[i + 1] for i in range(len(keys) - 1))
    return IisReport(
        feasible=feasible,
        block_intervals=tuple(intervals),
        block_irreducible=tuple(irreducible),
        block_optimal=tuple(optimal),
        keys_nondecreasing=nondecreasing,
    )


def generic_solve(inst: Instance, max_entries: int = DEFAULT_MAX_ENTRIES) -> BlockSchedule:
    """Reference solver: repeatedly peel off an inclusion-maximal minimal ideal.

    Each iteration enumerates the ideals of the remaining sub-instance,
    takes the minimal equivalence class under the preorder, and picks the
    member of largest cardinality (ties: lexicographically smallest id
    set).  Desk scale only; the polynomial solvers exist for real inputs.
    """
    remaining = list(inst.ids)
    blocks: list[Block] = []
    while remaining:
        sub = restrict(inst, remaining)
        table = build_table(sub, max_entries=max_entries)
        costs = [sub.cost(j) for j in sub.ids]

        best_key: tuple[int, Fraction, Fraction] | None = None
        keyed: list[tuple[tuple[int, Fraction, Fraction], int]] = []
        for mask, (budget, _) in table.entries.items():
            total = sum((costs[p] for p in _bits(mask)), ZERO)
            key = cbr_key(CbrTriple.of(total, budget))
            keyed.append((key, mask))
            if best_key is None or key < best_key:
                best_key = key
        candidates = [mask for key, mask in keyed if key == best_key and mask]
        assert candidates, "a nonempty minimal ideal always exists"
        chosen = min(candidates, key=lambda m: (-bin(m).count("1"), sub.ids_of(m)))

        order = table.traceback(chosen)
        stats = schedule_stats(inst.costs, order)
        assert stats.b == table.budget_of(chosen)
        blocks.append(Block(frozenset(sub.ids_of(chosen)), order, stats))
        picked = set(sub.ids_of(chosen))
        remaining = [j for j in remaining if j not in picked]
    return BlockSchedule(tuple(blocks))


def consistency_swap(
    inst: Instance,
    left: Sequence[JobId],
    first: Sequence[JobId],
    middle: Sequence[JobId],
    second: Sequence[JobId],
    right: Sequence[JobId],
) -> tuple[Schedule, Schedule]:
    """Rearrangements that move the ``second`` part in front of ``first``.

    Input is the five-part split L, I, M, J, R of a schedule
    L + I + M + J + R where I and J carry optimal sub-schedules.
    Returns (L + J + I + M + R, L + M + J + I + R).  The outputs need
    not be feasible; they exist to validate budget claims.
    """
    parts = [tuple(left), tuple(first), tuple(middle), tuple(second), tuple(right)]
    seen: set[JobId] = set()
    for part in parts:
        for j in part:
            inst.index(j)
            if j in seen:
                raise PartitionInvalid(f"job {j!r} appears in two parts")
            seen.add(j)
    if seen != set(inst.ids):
        raise PartitionInvalid("the five parts must cover all jobs")
    l, i, m, j, r = parts
    return (l + j + i + m + r, l + m + j + i + r)


def contiguify(
    inst: Instance,
    schedule: Sequence[JobId],
    block: Block,
    max_entries: int = DEFAULT_MAX_ENTRIES,
) -> Schedule:
    """Pull an irreducible interval together without increasing the budget.

    Splits the schedule at the point where the interval attains its
    budget: for a negative-cost interval, the shortest prefix P whose
    interval part reaches budget b(I) (and contains everything scheduled
    before the interval); for a nonnegative-cost interval, the shortest
    suffix Q whose interval part reaches return r(I).  The result
    (P minus I) + optimal-I + (Q minus I) may be infeasible; only the
    budget guarantee is promised.
    """
    schedule = tuple(schedule)
    if not is_linear_extension(inst, schedule):
        raise NotFeasibleInput("input schedule is not a linear extension")
    if not block.jobs:
        return schedule
    try:
        if not is_irreducible(inst, block.jobs, max_entries=max_entries):
            raise NotIrreducible(f"{sorted(block.jobs)} is not irreducible")
    except NotAnInterval as exc:
        raise NotIrreducible(str(exc)) from exc

    n = len(schedule)
    positions = [k for k, j in enumerate(schedule) if j in block.jobs]
    first_pos, last_pos = positions[0], positions[-1]

    if block.stats.c < 0:
        # Shortest prefix whose interval part has budget >= b(I), and
        # which contains every job scheduled before the whole interval.
        running = ZERO
        peak = ZERO  # budget of the interval part of the prefix; empty prefix counted
        cut = None
        for p in range(n + 1):
            if peak >= block.stats.b and p >= first_pos:
                cut = p
                break
            if p < n and schedule[p] in block.jobs:
                running += inst.cost(schedule[p])
                peak = max(peak, running)
        assert cut is not None, "the interval part of the full schedule attains b(I)"
    else:
        # Shortest suffix whose interval part has return <= r(I), and
        # which contains every job scheduled after the whole interval.
        running = ZERO
        trough = ZERO  # return of the interval part of the suffix; empty suffix counted
        cut = None
        for q in range(n + 1):
            if trough <= block.stats.r and q >= n - 1 - last_pos:
                cut = n - q
                break
            pos = n - 1 - q
            if pos >= 0 and schedule[pos] in block.jobs:
                running += inst.cost(schedule[pos])
                trough = min(trough, running)
        assert cut is not None, "the interval part of the full schedule attains r(I)"

    prefix = [j for j in schedule[:cut] if j not in block.jobs]
    suffix = [j for j in schedule[cut:] if j not in block.jobs]
    return tuple(prefix) + block.order + tuple(suffix)


PrefixMode = Literal["min_cost_with_budget_cap", "min_return", "min_ideal"]


def prefix_select(
    blocks: Sequence[Block],
    mode: PrefixMode,
    budget_cap: Fraction | None = None,
) -> int:
    """Pick a block-prefix length l in 0..k by folded stats.

    The folded stats of a block prefix equal the set-level stats of its
    job union: a block prefix of an increasing irreducible structure is
    itself such a structure for its own restriction (irreducibility does
    not depend on the jobs outside the interval), hence optimal, hence
    its schedule-level triple is the set-level one.  This keeps the scan
    purely arithmetic.
    """
    if not _keys_nondecreasing(blocks):
        raise NotCertified("block keys must be nondecreasing")
    folded = [CbrTriple.zero()]
    for block in blocks:
        folded.append(concat_stats(folded[-1], block.stats))

    if mode == "min_cost_with_budget_cap":
        if budget_cap is None or budget_cap < 0:
            raise ValueError("min_cost_with_budget_cap needs a nonnegative budget cap")
        eligible = [l for l, t in enumerate(folded) if t.b <= budget_cap]
        return min(eligible, key=lambda l: (folded[l].c, l))
    if mode == "min_return":
        return min(range(len(folded)), key=lambda l: (folded[l].r, l))
    if mode == "min_ideal":
        best = min(cbr_key(t) for t in folded)
        return max(l for l, t in enumerate(folded) if cbr_key(t) == best)
    raise ValueError(f"unknown mode {mode!r}")
