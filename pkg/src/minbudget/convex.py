"""Dynamic program for bipartite orders convex in the negative side.

All precedence pairs must run from nonnegative-cost jobs to
negative-cost jobs, and there must be a linear arrangement of the
negative jobs in which every positive job's successor set is
consecutive.  Orders convex in the positive side are solved through the
reverse instance (relation flipped, costs negated), which swaps the
roles of budget and return.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Sequence

from .errors import EmptyNegativeSet, NotBipartite, NotCertified, NotConvex
from .instance import CbrTriple, Instance, JobId, Schedule, restrict, schedule_stats
from .structure import Block, BlockSchedule, cbr_key
from .sp import parallel_merge, series_compose
from . import transforms

# Exhaustive arrangement search is refused beyond this many jobs on the
# arranged side; larger instances must supply a convex_order.
ARRANGEMENT_SEARCH_CAP = 10

Side = Literal["nminus", "nplus"]


@dataclass(frozen=True)
class ConvexCertificate:
    """A linear arrangement witnessing convexity on one side.

    For side "nminus" the order lists the negative jobs and every
    positive job's successors are consecutive in it; for side "nplus"
    the order lists the nonnegative jobs and every negative job's
    predecessors are consecutive.
    """

    order: tuple[JobId, ...]
    side: Side


@dataclass(frozen=True)
class ConvexSolution:
    schedule: Schedule
    budget: Fraction
    blocks: BlockSchedule | None
    side: Side


def _split_signs(inst: Instance) -> tuple[list[JobId], list[JobId]]:
    pos = [j for j in inst.ids if inst.cost(j) >= 0]
    neg = [j for j in inst.ids if inst.cost(j) < 0]
    return pos, neg


def _require_bipartite(inst: Instance) -> None:
    for u, v in inst.closure:
        if not (inst.cost(u) >= 0 > inst.cost(v)):
            raise NotBipartite(
                f"pair ({u!r}, {v!r}) is not nonnegative-to-negative"
            )


def _consecutive(order: Sequence[JobId], members: Iterable[JobId]) -> bool:
    positions = sorted(order.index(j) for j in members)
    return not positions or positions[-1] - positions[0] + 1 == len(positions)


def _arrangement(universe: Sequence[JobId], sets: list[frozenset[JobId]]) -> tuple[JobId, ...] | None:
    """Backtracking search for an order making every set consecutive.

    A partial arrangement stays extendable only while every started,
    unfinished set ends at the current rightmost position; candidates
    are therefore restricted to the intersection of the open sets.
    """
    remaining = sorted(universe)
    placed: list[JobId] = []
    filled = {k: 0 for k in range(len(sets))}
    open_sets: set[int] = set()

    def rec() -> bool:
        if not remaining:
            return True
        for x in list(remaining):
            if any(x not in sets[k] for k in open_sets):
                continue
            touched = [k for k in range(len(sets)) if x in sets[k]]
            remaining.remove(x)
            placed.append(x)
            before = set(open_sets)
            for k in touched:
                filled[k] += 1
                if filled[k] == len(sets[k]):
                    open_sets.discard(k)
                else:
                    open_sets.add(k)
            if rec():
                return True
            open_sets.clear()
            open_sets.update(before)
            for k in touched:
                filled[k] -= 1
            placed.pop()
            remaining.append(x)
            remaining.sort()
        return False

    return tuple(placed) if rec() else None


def convex_recognize(
    inst: Instance,
    supplied_order: Sequence[JobId] | None = None,
    sides: tuple[Side, ...] = ("nminus", "nplus"),
) -> ConvexCertificate:
    """Find or verify a convexity certificate for a bipartite instance."""
    _require_bipartite(inst)
    pos, neg = _split_signs(inst)
    succ_sets = {i: frozenset(v for u, v in inst.closure if u == i) for i in pos}
    pred_sets = {j: frozenset(u for u, v in inst.closure if v == j) for j in neg}

    if supplied_order is not None:
        order = tuple(str(j) for j in supplied_order)
        if sorted(order) != sorted(neg) or len(set(order)) != len(order):
            raise NotConvex("convex_order must list every negative job exactly once")
        if all(_consecutive(order, succ_sets[i]) for i in pos):
            return ConvexCertificate(order, "nminus")
        raise NotConvex("supplied convex_order violates the consecutive property")

    capped = False
    for side in sides:
        universe = neg if side == "nminus" else pos
        sets = (
            [s for s in succ_sets.values() if s]
            if side == "nminus"
            else [s for s in pred_sets.values() if s]
        )
        if len(universe) > ARRANGEMENT_SEARCH_CAP:
            capped = True
            continue
        order = _arrangement(universe, sets)
        if order is not None:
            return ConvexCertificate(order, side)
    if capped:
        raise NotConvex(
            "side too large for arrangement search; supply convex_order in the instance file"
        )
    raise NotConvex("no arrangement makes the neighbor sets consecutive")


def guess_first_negative(per_j: Mapping[JobId, CbrTriple]) -> JobId:
    """Candidate whose first-block triple is minimal; earliest entry wins ties.

    Iteration order of the mapping encodes the arrangement positions.
    """
    if not per_j:
        raise EmptyNegativeSet("no negative jobs to guess among")
    best_job = None
    best_key = None
    for job, stats in per_j.items():
        key = cbr_key(stats)
        if best_key is None or key < best_key:
            best_job, best_key = job, key
    assert best_job is not None
    return best_job


def _pick_candidate(
    inst: Instance,
    arrangement: Sequence[JobId],
    candidates: list[tuple[int, BlockSchedule]],
) -> BlockSchedule:
    """Choose among the per-first-negative candidates of one DP state.

    Candidates are ranked by total budget, then first-block key, then
    arrangement position.  Budget first: some optimal schedule of the
    state starts with a negative job preceded exactly by its
    predecessors (delaying unrelated nonnegative jobs past the first
    negative never raises a prefix), so the best guessed extension
    attains the true optimum, while every extension only adds
    constraints and can never beat it.

    The stored first block must also carry its true set-level stats.
    When its cost is negative this is automatic: extending the order
    can only raise a set's budget, so the ranked winner's claim is
    sandwiched between the true value and the true minimum.  When every
    candidate's first block has nonnegative cost, a claimed return may
    undercut the true one (a larger forced budget means a smaller
    return), so the claim is certified by re-solving the first block's
    restriction, which is again convex under the induced arrangement.
    """
    ranked = sorted(
        candidates, key=lambda pc: (pc[1].stats.b, cbr_key(pc[1].blocks[0].stats), pc[0])
    )
    best_budget = ranked[0][1].stats.b
    for _, candidate in ranked:
        first = candidate.blocks[0]
        if first.stats.c < 0:
            return candidate
        if candidate.stats.b > best_budget:
            break
        if first.jobs == candidate.jobs:
            # Single block: its schedule is the whole state's, already
            # known to attain the state optimum.
            if first.stats.b == best_budget:
                return candidate
            continue
        # A consecutive successor set stays consecutive within any
        # subset, so the parent arrangement induces a certificate.
        sub = restrict(inst, first.jobs)
        induced = ConvexCertificate(
            tuple(j for j in arrangement if j in first.jobs), "nminus"
        )
        true_budget = convex_solve(sub, induced).stats.b
        if first.stats.b == true_budget:
            return candidate
    raise AssertionError("no certified guess among budget-optimal candidates")


def convex_solve(inst: Instance, cert: ConvexCertificate) -> BlockSchedule:
    """Solve an instance convex in its negative side along the certificate.

    Positive jobs without successors are set aside first and appended as
    trailing singleton blocks (their return is 0, the maximum key, so
    the increasing structure survives); the interval DP would otherwise
    attribute them to both sub-intervals of a split.  The DP processes
    every interval of the arrangement by size, guessing the first
    negative job of the sub-schedule.
    """
    _require_bipartite(inst)
    if cert.side != "nminus":
        raise NotCertified("convex_solve needs a certificate for the negative side")
    pos, neg = _split_signs(inst)
    if sorted(cert.order) != sorted(neg):
        raise NotCertified("certificate order must list every negative job exactly once")
    where = {j: p for p, j in enumerate(cert.order)}
    spans: dict[JobId, tuple[int, int]] = {}
    free_pos: list[JobId] = []
    for i in pos:
        succ = [where[v] for u, v in inst.closure if u == i]
        if not succ:
            free_pos.append(i)
            continue
        lo, hi = min(succ), max(succ)
        if hi - lo + 1 != len(succ):
            raise NotCertified(f"successors of {i!r} are not consecutive in the order")
        spans[i] = (lo, hi)

    m = len(cert.order)
    memo: dict[tuple[int, int], BlockSchedule] = {
        (lo, lo): BlockSchedule.empty() for lo in range(m + 1)
    }
    for length in range(1, m + 1):
        for lo in range(0, m - length + 1):
            hi = lo + length
            inner_pos = [i for i, (a, b) in spans.items() if lo <= a and b < hi]
            candidates: list[tuple[int, BlockSchedule]] = []
            for p in range(lo, hi):
                j = cert.order[p]
                left_bs = memo[(lo, p)]
                right_bs = memo[(p + 1, hi)]
                preds = [i for i in inner_pos if spans[i][0] <= p <= spans[i][1]]
                # Convexity splits the retained positives three ways.
                left_only = {i for i in inner_pos if spans[i][1] < p}
                right_only = {i for i in inner_pos if spans[i][0] > p}
                assert left_only | right_only | set(preds) == set(inner_pos)
                assert left_bs.jobs & set(inner_pos) == left_only
                assert right_bs.jobs & set(inner_pos) == right_only

                head = Block.from_schedule(inst.costs, tuple(sorted(preds)) + (j,))
                rest = parallel_merge(left_bs, right_bs)
                candidates.append((p, series_compose(BlockSchedule((head,)), rest)))
            memo[(lo, hi)] = _pick_candidate(inst, cert.order, candidates)

    blocks = list(memo[(0, m)].blocks)
    for i in sorted(free_pos):
        blocks.append(Block.from_schedule(inst.costs, (i,)))
    return BlockSchedule(tuple(blocks))


def solve_convex_auto(
    inst: Instance,
    side: Side | Literal["auto"] = "auto",
    supplied_order: Sequence[JobId] | None = None,
) -> ConvexSolution:
    """Route to the DP directly or through the reverse instance.

    The negative-side route returns the increasing-structure certificate;
    the positive-side route solves the reversed instance (reduced back to
    a bipartite order, since negating costs can strand zero-cost jobs on
    the wrong side), repairs the schedule to respect the full reversed
    order, and reverses it.  Only the schedule and budget are claimed for
    that orientation.
    """
    sides: tuple[Side, ...] = ("nminus", "nplus") if side == "auto" else (side,)
    # A supplied order arranges the negative side; ignore it when the
    # caller forces the positive-side route.
    usable_order = supplied_order if "nminus" in sides else None
    cert = convex_recognize(inst, supplied_order=usable_order, sides=sides)

    if cert.side == "nminus":
        bs = convex_solve(inst, cert)
        return ConvexSolution(bs.schedule, bs.stats.b, bs, "nminus")

    reversed_inst = transforms.reverse_instance(inst)
    reduced = transforms.bipartite_reduce(reversed_inst)
    strict_pos = [j for j in cert.order if reduced.cost(j) < 0]
    bs = convex_solve(reduced, ConvexCertificate(tuple(strict_pos), "nminus"))
    repaired = transforms.repair_schedule(reversed_inst, bs.schedule)
    schedule = transforms.reverse_schedule(repaired)
    stats = schedule_stats(inst.costs, schedule)
    # Reverse duality: the budget here is minus the return over there.
    assert stats.b == -schedule_stats(reversed_inst.costs, repaired).r
    return ConvexSolution(schedule, stats.b, None, "nplus")
