"""Series-parallel recognition and the recursive block-schedule solver.

Recognition works top-down: split on connected components of the
comparability graph (parallel), otherwise scan one topological order
for the smallest proper prefix A whose crossing pair count equals
|A| * |rest| (a complete ideal-filter bipartition, i.e. a series cut).
Solving then merges block lists for parallel nodes and re-partitions
concatenations for series nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .errors import JobOverlap, NotCertified, NotSeriesParallel, TreeMismatch
from .instance import CbrTriple, Instance, JobId, _bits, concat_stats, schedule_stats
from .structure import Block, BlockSchedule, cbr_key, _keys_nondecreasing


@dataclass(frozen=True)
class SpLeaf:
    job: JobId


@dataclass(frozen=True)
class SpSeries:
    left: "SpTree"
    right: "SpTree"


@dataclass(frozen=True)
class SpParallel:
    left: "SpTree"
    right: "SpTree"


SpTree = Union[SpLeaf, SpSeries, SpParallel]


def tree_jobs(tree: SpTree) -> tuple[JobId, ...]:
    """Leaf ids in left-to-right order."""
    if isinstance(tree, SpLeaf):
        return (tree.job,)
    return tree_jobs(tree.left) + tree_jobs(tree.right)


def tree_pairs(tree: SpTree) -> frozenset[tuple[JobId, JobId]]:
    """The (transitively closed) order generated by the tree."""
    if isinstance(tree, SpLeaf):
        return frozenset()
    left, right = tree_pairs(tree.left), tree_pairs(tree.right)
    if isinstance(tree, SpParallel):
        return left | right
    cross = frozenset(
        (u, v) for u in tree_jobs(tree.left) for v in tree_jobs(tree.right)
    )
    return left | right | cross


def tree_to_expr(tree: SpTree) -> object:
    """Nested-array form: ["S", l, r], ["P", l, r], or a job id."""
    if isinstance(tree, SpLeaf):
        return tree.job
    tag = "S" if isinstance(tree, SpSeries) else "P"
    return [tag, tree_to_expr(tree.left), tree_to_expr(tree.right)]


def expr_to_tree(expr: object) -> SpTree:
    """Parse the nested-array form back into a tree."""
    if isinstance(expr, str):
        return SpLeaf(expr)
    if isinstance(expr, (list, tuple)) and len(expr) == 3 and expr[0] in ("S", "P"):
        left, right = expr_to_tree(expr[1]), expr_to_tree(expr[2])
        return SpSeries(left, right) if expr[0] == "S" else SpParallel(left, right)
    raise TreeMismatch(f"bad series-parallel expression node: {expr!r}")


def _components(inst: Instance, mask: int) -> list[int]:
    """Connected components of the comparability graph within ``mask``."""
    out = []
    todo = mask
    while todo:
        seed = todo & -todo
        comp = seed
        frontier = seed
        while frontier:
            grown = comp
            for p in _bits(frontier):
                grown |= (inst.pred_mask(p) | inst.succ_mask(p)) & mask
            frontier = grown & ~comp
            comp = grown
        out.append(comp)
        todo &= ~comp
    return out


def _topo_positions(inst: Instance, mask: int) -> list[int]:
    """One topological order of the jobs in ``mask`` (smallest id first)."""
    order = []
    placed = 0
    members = list(_bits(mask))
    while len(order) < len(members):
        for p in members:
            bit = 1 << p
            if placed & bit or inst.pred_mask(p) & mask & ~placed:
                continue
            order.append(p)
            placed |= bit
            break
    return order


def _recognize(inst: Instance, mask: int) -> SpTree:
    if mask & (mask - 1) == 0:
        return SpLeaf(inst.ids[mask.bit_length() - 1])

    comps = _components(inst, mask)
    if len(comps) > 1:
        comps.sort(key=lambda m: (m & -m).bit_length())
        tree = _recognize(inst, comps[0])
        for comp in comps[1:]:
            tree = SpParallel(tree, _recognize(inst, comp))
        return tree

    topo = _topo_positions(inst, mask)
    size = len(topo)
    prefix_mask = 0
    for s in range(1, size):
        prefix_mask |= 1 << topo[s - 1]
        rest = mask & ~prefix_mask
        crossing = sum(
            bin(inst.succ_mask(p) & rest).count("1") for p in _bits(prefix_mask)
        )
        if crossing == s * (size - s):
            return SpSeries(_recognize(inst, prefix_mask), _recognize(inst, rest))
    raise NotSeriesParallel("no parallel or series split exists")


def sp_recognize(inst: Instance) -> SpTree:
    """Decomposition tree whose generated order equals the instance's closure."""
    if inst.n == 0:
        raise NotSeriesParallel("the empty order has no decomposition tree")
    tree = _recognize(inst, (1 << inst.n) - 1)
    assert tree_pairs(tree) == inst.closure
    assert set(tree_jobs(tree)) == set(inst.ids)
    return tree


def parallel_merge(first: BlockSchedule, second: BlockSchedule) -> BlockSchedule:
    """Stable two-way merge of block lists by key; ties take ``first``'s block."""
    if first.jobs & second.jobs:
        raise JobOverlap(f"shared jobs: {sorted(first.jobs & second.jobs)}")
    a, b = list(first.blocks), list(second.blocks)
    merged: list[Block] = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i].key() <= b[j].key():
            merged.append(a[i])
            i += 1
        else:
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return BlockSchedule(tuple(merged))


def _fuse(blocks: list[Block], folded: CbrTriple) -> Block:
    jobs: frozenset[JobId] = frozenset()
    order: tuple[JobId, ...] = ()
    for block in blocks:
        jobs |= block.jobs
        order += block.order
    return Block(jobs, order, folded)


def series_compose(first: BlockSchedule, second: BlockSchedule) -> BlockSchedule:
    """Re-partition the concatenation of two block schedules composed in series.

    Candidate first blocks are unions of the first p left blocks and
    the whole left side plus the first q right blocks; folded stats of
    either shape are exact set-level stats because a series composition
    forces all left jobs before all right jobs.  The minimal candidate
    under the preorder is fused into one block (preferring the
    all-left-plus-q shape with q maximal, else p maximal) and the scan
    repeats on what remains.  Job order never changes, only block
    boundaries move.
    """
    for bs in (first, second):
        if not _keys_nondecreasing(bs.blocks):
            raise NotCertified("inputs must have nondecreasing block keys")
    if first.jobs & second.jobs:
        raise JobOverlap(f"shared jobs: {sorted(first.jobs & second.jobs)}")

    left = list(first.blocks)
    right = list(second.blocks)
    out: list[Block] = []
    while left or right:
        if not left:
            out.extend(right)
            break
        if not right:
            out.extend(left)
            break

        left_folds = [CbrTriple.zero()]
        for block in left:
            left_folds.append(concat_stats(left_folds[-1], block.stats))
        right_folds = [CbrTriple.zero()]
        for block in right:
            right_folds.append(concat_stats(right_folds[-1], block.stats))
        full_left = left_folds[-1]

        p_keys = [cbr_key(left_folds[p]) for p in range(1, len(left) + 1)]
        q_folds = [concat_stats(full_left, t) for t in right_folds]
        q_keys = [cbr_key(t) for t in q_folds]
        best = min(p_keys + q_keys)

        if best in q_keys:
            q = max(i for i, key in enumerate(q_keys) if key == best)
            fused = _fuse(left + right[:q], q_folds[q])
            left = []
            right = right[q:]
        else:
            p = max(i + 1 for i, key in enumerate(p_keys) if key == best)
            fused = _fuse(left[:p], left_folds[p])
            left = left[p:]
        out.append(fused)
    return BlockSchedule(tuple(out))


def sp_solve(inst: Instance, tree: SpTree) -> BlockSchedule:
    """Solve an instance along its decomposition tree."""
    if set(tree_jobs(tree)) != set(inst.ids):
        raise TreeMismatch("tree leaves do not match the instance's jobs")
    if tree_pairs(tree) != inst.closure:
        raise TreeMismatch("tree does not generate the instance's order")

    def rec(node: SpTree) -> BlockSchedule:
        if isinstance(node, SpLeaf):
            block = Block.from_schedule(inst.costs, (node.job,))
            return BlockSchedule((block,))
        left, right = rec(node.left), rec(node.right)
        if isinstance(node, SpParallel):
            return parallel_merge(left, right)
        return series_compose(left, right)

    return rec(tree)


def solve_sp(inst: Instance, tree: SpTree | None = None) -> BlockSchedule:
    """Recognize (unless a tree is supplied) and solve."""
    if inst.n == 0:
        return BlockSchedule.empty()
    return sp_solve(inst, tree if tree is not None else sp_recognize(inst))
