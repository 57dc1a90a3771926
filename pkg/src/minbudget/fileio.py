"""JSON file formats and DOT export.

Instance files::

    {"jobs": [{"id": "a", "cost": 2}, {"id": "b", "cost": "-1/2"}],
     "precedences": [["a", "b"]],
     "sp": ["S", "a", "b"],          # optional decomposition expression
     "convex_order": ["b"]}           # optional arrangement of negatives

Certificates::

    {"blocks": [{"jobs": [...], "order": [...], "c": "-1", "b": "1", "r": "-2"}]}

Reconfiguration systems::

    {"initial": [{"lo": "0", "hi": "1", "w": "2"}], "final": [...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .errors import MinBudgetError, ParseError, TreeMismatch
from .instance import (
    CbrTriple,
    Instance,
    JobId,
    Schedule,
    as_cost,
    build_instance,
    cost_to_str,
    transitive_reduction,
)
from .sp import SpTree, expr_to_tree, tree_pairs, tree_jobs, tree_to_expr
from .structure import Block, BlockSchedule
from .transforms import EnergyBarrierInstance, WeightedInterval


@dataclass(frozen=True)
class InstanceDocument:
    """A parsed instance file: the instance plus optional solver hints."""

    instance: Instance
    sp_tree: SpTree | None = None
    convex_order: tuple[JobId, ...] | None = None


def _load_json(path: str | Path) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def cost_from_json(value: Any) -> Any:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"costs must be integers or 'p/q' strings, got {value!r}")
    try:
        return as_cost(value)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def cost_to_json(value: Any) -> Any:
    return value.numerator if value.denominator == 1 else cost_to_str(value)


def parse_instance_payload(payload: Any, source: str = "<instance>") -> InstanceDocument:
    if not isinstance(payload, dict) or "jobs" not in payload:
        raise ParseError(f"{source}: expected an object with a 'jobs' array")
    try:
        jobs = [(str(entry["id"]), cost_from_json(entry["cost"])) for entry in payload["jobs"]]
        precedences = [(str(u), str(v)) for u, v in payload.get("precedences", [])]
    except (TypeError, KeyError, ValueError) as exc:
        raise ParseError(f"{source}: malformed jobs or precedences: {exc}") from exc
    try:
        instance = build_instance(jobs, precedences)
    except MinBudgetError as exc:
        raise ParseError(f"{source}: {exc}") from exc

    sp_tree = None
    if "sp" in payload and payload["sp"] is not None:
        sp_tree = expr_to_tree(payload["sp"])
        if set(tree_jobs(sp_tree)) != set(instance.ids):
            raise TreeMismatch(f"{source}: sp expression leaves do not match the jobs")
        if tree_pairs(sp_tree) != instance.closure:
            raise TreeMismatch(f"{source}: sp expression disagrees with the precedences")

    convex_order = None
    if "convex_order" in payload and payload["convex_order"] is not None:
        convex_order = tuple(str(j) for j in payload["convex_order"])
        for j in convex_order:
            if j not in instance.costs:
                raise ParseError(f"{source}: convex_order names unknown job {j!r}")
    return InstanceDocument(instance, sp_tree, convex_order)


def load_instance(path: str | Path) -> InstanceDocument:
    return parse_instance_payload(_load_json(path), source=str(path))


def instance_payload(
    inst: Instance,
    sp_tree: SpTree | None = None,
    convex_order: Sequence[JobId] | None = None,
) -> dict:
    payload: dict[str, Any] = {
        "jobs": [{"id": j, "cost": cost_to_json(c)} for j, c in inst.jobs],
        "precedences": sorted([u, v] for u, v in inst.edges),
    }
    if sp_tree is not None:
        payload["sp"] = tree_to_expr(sp_tree)
    if convex_order is not None:
        payload["convex_order"] = list(convex_order)
    return payload


def dump_instance(
    inst: Instance,
    sp_tree: SpTree | None = None,
    convex_order: Sequence[JobId] | None = None,
) -> str:
    return json.dumps(instance_payload(inst, sp_tree, convex_order), indent=2) + "\n"


def certificate_payload(bs: BlockSchedule) -> dict:
    return {
        "blocks": [
            {"jobs": sorted(block.jobs), "order": list(block.order), **block.stats.as_strings()}
            for block in bs.blocks
        ]
    }


def dump_certificate(bs: BlockSchedule) -> str:
    return json.dumps(certificate_payload(bs), indent=2) + "\n"


def parse_certificate_payload(payload: Any, source: str = "<certificate>") -> BlockSchedule:
    if not isinstance(payload, dict) or not isinstance(payload.get("blocks"), list):
        raise ParseError(f"{source}: expected an object with a 'blocks' array")
    blocks = []
    try:
        for entry in payload["blocks"]:
            stats = CbrTriple(
                cost_from_json(entry["c"]),
                cost_from_json(entry["b"]),
                cost_from_json(entry["r"]),
            )
            blocks.append(
                Block(frozenset(map(str, entry["jobs"])), tuple(map(str, entry["order"])), stats)
            )
    except (TypeError, KeyError, ValueError, MinBudgetError) as exc:
        raise ParseError(f"{source}: malformed block: {exc}") from exc
    return BlockSchedule(tuple(blocks))


def load_certificate(path: str | Path) -> BlockSchedule:
    return parse_certificate_payload(_load_json(path), source=str(path))


def parse_energy_payload(payload: Any, source: str = "<energy>") -> EnergyBarrierInstance:
    if not isinstance(payload, dict):
        raise ParseError(f"{source}: expected an object with 'initial' and 'final' arrays")
    try:
        systems = {
            name: tuple(
                WeightedInterval(
                    cost_from_json(entry["lo"]),
                    cost_from_json(entry["hi"]),
                    cost_from_json(entry["w"]),
                )
                for entry in payload.get(name, [])
            )
            for name in ("initial", "final")
        }
    except (TypeError, KeyError, ValueError) as exc:
        raise ParseError(f"{source}: malformed interval: {exc}") from exc
    return EnergyBarrierInstance(systems["initial"], systems["final"])


def load_energy(path: str | Path) -> EnergyBarrierInstance:
    return parse_energy_payload(_load_json(path), source=str(path))


def dump_energy(eb: EnergyBarrierInstance) -> str:
    payload = {
        name: [
            {"lo": cost_to_json(iv.lo), "hi": cost_to_json(iv.hi), "w": cost_to_json(iv.w)}
            for iv in system
        ]
        for name, system in (("initial", eb.initial), ("final", eb.final))
    }
    return json.dumps(payload, indent=2) + "\n"


def to_dot(inst: Instance, schedule: Schedule | None = None) -> str:
    """Covering relation as a DOT digraph, costs (and schedule positions) labeled."""
    position = {j: k + 1 for k, j in enumerate(schedule)} if schedule else {}
    lines = ["digraph precedence {", "  rankdir=LR;"]
    for j, cost in sorted(inst.jobs):
        label = f"{j}: {cost_to_str(cost)}"
        if j in position:
            label += f" (#{position[j]})"
        lines.append(f'  "{j}" [label="{label}"];')
    for u, v in sorted(transitive_reduction(inst)):
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
