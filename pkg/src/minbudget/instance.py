"""Instance model and elementary cost/budget/return arithmetic.

Jobs carry exact rational costs (`fractions.Fraction`); all budget
comparisons downstream rely on exact arithmetic, so floats are rejected
at the boundary instead of silently converted.  The precedence order is
stored as its strict transitive closure over job ids sorted
lexicographically, with per-job predecessor/successor bitmasks for the
enumeration machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    CoverageMismatch,
    CycleDetected,
    DuplicateJob,
    MissingCost,
    TooLarge,
    UnknownEndpoint,
    UnknownJob,
)

JobId = str
Cost = Fraction
Schedule = tuple[JobId, ...]

ZERO = Fraction(0)

# Ideal enumeration refuses instances above this many jobs by default.
DEFAULT_IDEAL_CAP = 24


def as_cost(value: int | str | Fraction) -> Fraction:
    """Parse an exact cost from an int, a Fraction, or a "3" / "p/q" string."""
    if isinstance(value, bool):
        raise ValueError("cost must not be a boolean")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad cost literal {value!r}") from exc
    raise ValueError(f"cost must be an integer or rational string, got {value!r}")


def cost_to_str(value: Fraction) -> str:
    """Render a cost as a decimal integer or "p/q" string."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class CbrTriple:
    """Cost, budget, and return of a schedule or job set.

    Invariants: b >= 0, r <= 0, and c = b + r (hence b >= c).
    """

    c: Fraction
    b: Fraction
    r: Fraction

    def __post_init__(self) -> None:
        if self.b < 0:
            raise ValueError(f"budget must be nonnegative, got {self.b}")
        if self.r > 0:
            raise ValueError(f"return must be nonpositive, got {self.r}")
        if self.c != self.b + self.r:
            raise ValueError(f"cost {self.c} != budget {self.b} + return {self.r}")

    @staticmethod
    def zero() -> "CbrTriple":
        return CbrTriple(ZERO, ZERO, ZERO)

    @staticmethod
    def of(c: Fraction, b: Fraction) -> "CbrTriple":
        return CbrTriple(c, b, c - b)

    def as_strings(self) -> dict[str, str]:
        return {"c": cost_to_str(self.c), "b": cost_to_str(self.b), "r": cost_to_str(self.r)}


class Instance:
    """A finite set of jobs with exact costs under an acyclic precedence order.

    Immutable and hashable.  Equality compares the job/cost set and the
    transitive closure, i.e. the partial order itself; the particular
    edge list that generated the order is kept only for serialization.
    """

    __slots__ = ("jobs", "edges", "closure", "ids", "_index", "_costs", "_pred", "_succ")

    def __init__(
        self,
        jobs: tuple[tuple[JobId, Fraction], ...],
        edges: frozenset[tuple[JobId, JobId]],
        closure: frozenset[tuple[JobId, JobId]],
        ids: tuple[JobId, ...],
        pred: tuple[int, ...],
        succ: tuple[int, ...],
    ) -> None:
        # Internal constructor; use build_instance() / restrict().
        object.__setattr__(self, "jobs", jobs)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "closure", closure)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "_index", {j: k for k, j in enumerate(ids)})
        object.__setattr__(self, "_costs", {j: c for j, c in jobs})
        object.__setattr__(self, "_pred", pred)
        object.__setattr__(self, "_succ", succ)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Instance is immutable")

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def costs(self) -> Mapping[JobId, Fraction]:
        return MappingProxyType(self._costs)

    def cost(self, job: JobId) -> Fraction:
        try:
            return self._costs[job]
        except KeyError:
            raise UnknownJob(f"job {job!r} not in instance") from None

    def cost_of(self, jobs: Iterable[JobId]) -> Fraction:
        return sum((self.cost(j) for j in jobs), ZERO)

    def index(self, job: JobId) -> int:
        try:
            return self._index[job]
        except KeyError:
            raise UnknownJob(f"job {job!r} not in instance") from None

    def mask_of(self, jobs: Iterable[JobId]) -> int:
        mask = 0
        for j in jobs:
            mask |= 1 << self.index(j)
        return mask

    def ids_of(self, mask: int) -> tuple[JobId, ...]:
        return tuple(self.ids[p] for p in _bits(mask))

    def pred_mask(self, pos: int) -> int:
        """Strict predecessors (closure) of the job at sorted position ``pos``."""
        return self._pred[pos]

    def succ_mask(self, pos: int) -> int:
        return self._succ[pos]

    def has_pair(self, before: JobId, after: JobId) -> bool:
        return (before, after) in self.closure

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return frozenset(self.jobs) == frozenset(other.jobs) and self.closure == other.closure

    def __hash__(self) -> int:
        return hash((frozenset(self.jobs), self.closure))

    def __repr__(self) -> str:
        return f"Instance({len(self.ids)} jobs, {len(self.closure)} order pairs)"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def build_instance(
    jobs: Sequence[tuple[JobId, int | str | Fraction]],
    edges: Iterable[tuple[JobId, JobId]] = (),
) -> Instance:
    """Validate jobs and edges and compute the transitive closure.

    Job ids are coerced to strings.  Rejects duplicate ids, edges with
    undeclared endpoints, and cyclic edge relations.
    """
    normalized: list[tuple[JobId, Fraction]] = []
    seen: set[JobId] = set()
    for raw_id, raw_cost in jobs:
        jid = str(raw_id)
        if jid in seen:
            raise DuplicateJob(f"duplicate job id {jid!r}")
        seen.add(jid)
        normalized.append((jid, as_cost(raw_cost)))

    edge_set: set[tuple[JobId, JobId]] = set()
    for u, v in edges:
        u, v = str(u), str(v)
        if u not in seen or v not in seen:
            raise UnknownEndpoint(f"edge ({u!r}, {v!r}) has an undeclared endpoint")
        if u == v:
            raise CycleDetected(f"self-loop on {u!r}")
        edge_set.add((u, v))

    ids = tuple(sorted(seen))
    index = {j: k for k, j in enumerate(ids)}
    n = len(ids)
    direct_succ = [0] * n
    indegree = [0] * n
    for u, v in edge_set:
        ui, vi = index[u], index[v]
        if not direct_succ[ui] >> vi & 1:
            direct_succ[ui] |= 1 << vi
            indegree[vi] += 1

    # Kahn's algorithm: detects cycles and yields a topological order.
    topo: list[int] = [p for p in range(n) if indegree[p] == 0]
    head = 0
    while head < len(topo):
        u = topo[head]
        head += 1
        for v in _bits(direct_succ[u]):
            indegree[v] -= 1
            if indegree[v] == 0:
                topo.append(v)
    if len(topo) != n:
        raise CycleDetected("precedence edges contain a directed cycle")

    succ = [0] * n
    for u in reversed(topo):
        acc = direct_succ[u]
        for v in _bits(direct_succ[u]):
            acc |= succ[v]
        succ[u] = acc
    pred = [0] * n
    for u in range(n):
        for v in _bits(succ[u]):
            pred[v] |= 1 << u

    closure = frozenset(
        (ids[u], ids[v]) for u in range(n) for v in _bits(succ[u])
    )
    return Instance(
        jobs=tuple(normalized),
        edges=frozenset(edge_set),
        closure=closure,
        ids=ids,
        pred=tuple(pred),
        succ=tuple(succ),
    )


def _from_closure(
    jobs: tuple[tuple[JobId, Fraction], ...],
    closure_pairs: set[tuple[JobId, JobId]],
) -> Instance:
    """Build an instance whose relation is already transitively closed.

    The declared edge list is set to the covering pairs (the Hasse
    diagram) for readable serialization.
    """
    ids = tuple(sorted(j for j, _ in jobs))
    index = {j: k for k, j in enumerate(ids)}
    n = len(ids)
    succ = [0] * n
    for u, v in closure_pairs:
        succ[index[u]] |= 1 << index[v]
    pred = [0] * n
    for u in range(n):
        for v in _bits(succ[u]):
            pred[v] |= 1 << u
    hasse = frozenset(
        (ids[u], ids[v])
        for u in range(n)
        for v in _bits(succ[u])
        if not succ[u] & pred[v]
    )
    return Instance(
        jobs=jobs,
        edges=hasse,
        closure=frozenset(closure_pairs),
        ids=ids,
        pred=tuple(pred),
        succ=tuple(succ),
    )


def transitive_reduction(inst: Instance) -> frozenset[tuple[JobId, JobId]]:
    """Covering pairs of the order (its Hasse diagram)."""
    pairs = set()
    for u in range(inst.n):
        su = inst.succ_mask(u)
        for v in _bits(su):
            if not su & inst.pred_mask(v):
                pairs.add((inst.ids[u], inst.ids[v]))
    return frozenset(pairs)


@dataclass(frozen=True)
class SubsetClasses:
    is_ideal: bool
    is_filter: bool
    is_interval: bool


def classify_subset(inst: Instance, sub: Iterable[JobId]) -> SubsetClasses:
    """Report whether ``sub`` is an ideal, a filter, and/or an interval.

    A subset is an interval iff it equals the intersection of its
    downward and upward closures, which matches the ideal-and-filter
    definition.
    """
    mask = inst.mask_of(sub)
    is_ideal = all(inst.pred_mask(p) & ~mask == 0 for p in _bits(mask))
    is_filter = all(inst.succ_mask(p) & ~mask == 0 for p in _bits(mask))
    down = mask
    up = mask
    for p in _bits(mask):
        down |= inst.pred_mask(p)
        up |= inst.succ_mask(p)
    return SubsetClasses(is_ideal, is_filter, down & up == mask)


def restrict(inst: Instance, sub: Iterable[JobId]) -> Instance:
    """Induced sub-instance; its closure is the restriction of the closure."""
    keep = set()
    for j in sub:
        inst.index(j)
        keep.add(j)
    jobs = tuple((j, c) for j, c in inst.jobs if j in keep)
    pairs = {(u, v) for u, v in inst.closure if u in keep and v in keep}
    return _from_closure(jobs, pairs)


def is_linear_extension(inst: Instance, schedule: Sequence[JobId]) -> bool:
    """True iff the schedule covers all jobs and respects the order."""
    if len(schedule) != inst.n or set(schedule) != set(inst.ids):
        raise CoverageMismatch("schedule must cover exactly the instance's jobs")
    pos = {j: k for k, j in enumerate(schedule)}
    return all(pos[u] < pos[v] for u, v in inst.closure)


def schedule_stats(costs: Mapping[JobId, Fraction], schedule: Sequence[JobId]) -> CbrTriple:
    """Total cost, max prefix cost (empty prefix included), and return."""
    total = ZERO
    peak = ZERO
    for j in schedule:
        try:
            total += costs[j]
        except KeyError:
            raise MissingCost(f"no cost for job {j!r}") from None
        if total > peak:
            peak = total
    return CbrTriple(total, peak, total - peak)


def concat_stats(first: CbrTriple, second: CbrTriple) -> CbrTriple:
    """Stats of a concatenation from the stats of its two halves."""
    return CbrTriple(
        first.c + second.c,
        max(first.b, first.c + second.b),
        min(first.r + second.c, second.r),
    )


def _ideal_mask_layers(inst: Instance, max_count: int | None = None) -> Iterator[list[int]]:
    """Yield ideal bitmasks grouped by cardinality, smallest layers first.

    Deterministic: within a layer, masks appear in first-generated order
    from ascending-bit expansion of the previous layer.
    """
    seen = {0}
    layer = [0]
    n = inst.n
    yield layer
    while layer:
        nxt: list[int] = []
        for mask in layer:
            for p in range(n):
                bit = 1 << p
                if mask & bit or inst.pred_mask(p) & ~mask:
                    continue
                grown = mask | bit
                if grown not in seen:
                    seen.add(grown)
                    if max_count is not None and len(seen) > max_count:
                        raise TooLarge(
                            f"ideal lattice exceeds the cap of {max_count} entries"
                        )
                    nxt.append(grown)
        if nxt:
            yield nxt
        layer = nxt


def enumerate_ideals(inst: Instance, cap: int = DEFAULT_IDEAL_CAP) -> Iterator[frozenset[JobId]]:
    """Yield every ideal exactly once, by cardinality then lexicographically."""
    if inst.n > cap:
        raise TooLarge(f"instance has {inst.n} jobs, enumeration cap is {cap}")
    for layer in _ideal_mask_layers(inst):
        for mask in sorted(layer, key=inst.ids_of):
            yield frozenset(inst.ids_of(mask))
