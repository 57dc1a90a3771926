"""Command-line surface: solve, check, oracle, gen, bench, transform.

Exit codes: 0 success/pass, 1 logical failure (failed certificate,
solver/oracle disagreement), 2 input error, 3 resource guard.
"""

from __future__ import annotations

import csv
import io
import json
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click

from . import fileio, transforms
from .convex import solve_convex_auto
from .errors import (
    MinBudgetError,
    NotBipartite,
    NotConvex,
    NotSeriesParallel,
    TooLarge,
    UnsolvableAtScale,
)
from .instance import Instance, Schedule, cost_to_str, is_linear_extension, schedule_stats
from .oracle import min_budget_exact
from .sp import solve_sp, sp_recognize
from .structure import BlockSchedule, check_iis
from .generators import (
    random_convex_instance,
    random_dag,
    random_energy_instance,
    random_sp_instance,
)

EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

DEFAULT_ORACLE_JOB_CAP = 20
DEFAULT_ORACLE_ENTRY_CAP = 1 << 20


def _fail(code: int, message: str) -> "SystemExit":
    click.echo(f"error: {message}", err=True)
    return SystemExit(code)


@dataclass
class SolveReport:
    instance_id: str
    method: str
    budget: Fraction
    schedule: Schedule
    certificate: BlockSchedule | None
    wall_ms: float

    def to_json(self) -> dict:
        return {
            "instance": self.instance_id,
            "method": self.method,
            "budget": fileio.cost_to_json(self.budget),
            "schedule": list(self.schedule),
            "certificate": (
                fileio.certificate_payload(self.certificate) if self.certificate else None
            ),
            "ms": round(self.wall_ms, 3),
        }


def _solve_with_method(
    doc: fileio.InstanceDocument, method: str, side: str, job_cap: int
) -> tuple[str, Fraction, Schedule, BlockSchedule | None]:
    inst = doc.instance

    if method in ("auto", "sp"):
        try:
            bs = solve_sp(inst, doc.sp_tree)
            return ("sp", bs.stats.b, bs.schedule, bs)
        except NotSeriesParallel:
            if method == "sp":
                raise
    if method in ("auto", "convex"):
        try:
            sol = solve_convex_auto(inst, side=side, supplied_order=doc.convex_order)
            return ("convex", sol.budget, sol.schedule, sol.blocks)
        except NotBipartite:
            if method == "convex":
                raise
            try:
                reduced = transforms.bipartite_reduce(inst)
                sol = solve_convex_auto(reduced, side=side)
                repaired = transforms.repair_schedule(inst, sol.schedule)
                budget = schedule_stats(inst.costs, repaired).b
                return ("reduce+convex", budget, repaired, None)
            except (NotConvex, NotBipartite):
                pass
        except NotConvex:
            if method == "convex":
                raise
    if method in ("auto", "oracle"):
        if inst.n > job_cap:
            raise UnsolvableAtScale(
                f"{inst.n} jobs exceed the oracle cap of {job_cap} and no polynomial class matched"
            )
        budget, schedule = min_budget_exact(inst, max_entries=DEFAULT_ORACLE_ENTRY_CAP)
        return ("oracle", budget, schedule, None)
    raise UnsolvableAtScale("no solver matched the requested method")


@click.group()
def main() -> None:
    """Exact minimum-budget scheduling under precedence constraints."""


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["auto", "sp", "convex", "oracle"]), default="auto")
@click.option("--side", type=click.Choice(["auto", "nminus", "nplus"]), default="auto")
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
@click.option("--dot", type=click.Path(dir_okay=False), default=None,
              help="Also write a DOT rendering of the covering relation.")
@click.option("--oracle-cap", type=int, default=DEFAULT_ORACLE_JOB_CAP, show_default=True,
              help="Job-count cap for the exact oracle fallback.")
def solve(path: str, method: str, side: str, as_json: bool, dot: str | None, oracle_cap: int) -> None:
    """Solve an instance file and print budget, schedule, and certificate."""
    try:
        doc = fileio.load_instance(path)
        start = time.perf_counter()
        used, budget, schedule, certificate = _solve_with_method(doc, method, side, oracle_cap)
        wall_ms = (time.perf_counter() - start) * 1000.0
    except (TooLarge, UnsolvableAtScale) as exc:
        raise _fail(EXIT_RESOURCE, str(exc))
    except MinBudgetError as exc:
        raise _fail(EXIT_INPUT, str(exc))

    inst = doc.instance
    assert is_linear_extension(inst, schedule)
    assert schedule_stats(inst.costs, schedule).b == budget

    report = SolveReport(Path(path).stem, used, budget, schedule, certificate, wall_ms)
    if dot is not None:
        Path(dot).write_text(fileio.to_dot(inst, schedule), encoding="utf-8")
    if as_json:
        click.echo(json.dumps(report.to_json(), indent=2))
    else:
        click.echo(f"instance: {report.instance_id}")
        click.echo(f"method: {report.method}")
        click.echo(f"budget: {cost_to_str(report.budget)}")
        click.echo(f"schedule: {' '.join(report.schedule)}")
        if report.certificate is not None:
            keys = ", ".join(
                "({}, {}, {})".format(*[cost_to_str(x) for x in (b.stats.c, b.stats.b, b.stats.r)])
                for b in report.certificate.blocks
            )
            click.echo(f"blocks: {keys}")


@main.command()
@click.argument("instance_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("certificate_path", type=click.Path(exists=True, dir_okay=False))
def check(instance_path: str, certificate_path: str) -> None:
    """Verify a block-schedule certificate against an instance."""
    try:
        doc = fileio.load_instance(instance_path)
        bs = fileio.load_certificate(certificate_path)
        report = check_iis(doc.instance, bs)
    except TooLarge as exc:
        raise _fail(EXIT_RESOURCE, str(exc))
    except MinBudgetError as exc:
        raise _fail(EXIT_INPUT, str(exc))
    click.echo(f"feasible schedule: {report.feasible}")
    click.echo(f"blocks are intervals: {report.intervals}")
    click.echo(f"blocks are irreducible: {report.irreducible}")
    click.echo(f"blocks scheduled optimally: {report.optimal}")
    click.echo(f"keys nondecreasing: {report.keys_nondecreasing}")
    click.echo(f"overall: {'pass' if report.passed else 'fail'}")
    if not report.passed:
        raise SystemExit(EXIT_FAIL)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
@click.option("--oracle-cap", type=int, default=DEFAULT_ORACLE_JOB_CAP, show_default=True)
def oracle(path: str, as_json: bool, oracle_cap: int) -> None:
    """Exact minimum budget by the ideal-lattice dynamic program."""
    try:
        doc = fileio.load_instance(path)
        if doc.instance.n > oracle_cap:
            raise TooLarge(f"{doc.instance.n} jobs exceed the oracle cap of {oracle_cap}")
        budget, schedule = min_budget_exact(doc.instance)
    except TooLarge as exc:
        raise _fail(EXIT_RESOURCE, str(exc))
    except MinBudgetError as exc:
        raise _fail(EXIT_INPUT, str(exc))
    if as_json:
        click.echo(json.dumps({"budget": fileio.cost_to_json(budget), "schedule": list(schedule)}))
    else:
        click.echo(f"budget: {cost_to_str(budget)}")
        click.echo(f"schedule: {' '.join(schedule)}")


def _parse_cost_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise _fail(EXIT_INPUT, f"bad cost range {text!r}, expected LO:HI")


@main.command()
@click.argument("kind", type=click.Choice(["sp", "convex", "dag", "energy"]))
@click.option("--n", type=int, default=8, show_default=True,
              help="Job count (sp, dag) or interval budget (energy).")
@click.option("--nplus", type=int, default=4, show_default=True)
@click.option("--nminus", type=int, default=3, show_default=True)
@click.option("--side", type=click.Choice(["nminus", "nplus"]), default="nminus")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--cost-range", default="-5:5", show_default=True)
@click.option("--density", type=float, default=0.3, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write here instead of stdout.")
def gen(kind: str, n: int, nplus: int, nminus: int, side: str, seed: int,
        cost_range: str, density: float, out: str | None) -> None:
    """Generate a random instance (deterministic for a given seed)."""
    lo, hi = _parse_cost_range(cost_range)
    rng = random.Random(seed)
    try:
        if kind == "sp":
            if n == 0:
                text = fileio.dump_instance(random_dag(rng, 0))
            else:
                inst, tree = random_sp_instance(rng, n, lo, hi)
                text = fileio.dump_instance(inst, sp_tree=tree)
        elif kind == "convex":
            inst, order = random_convex_instance(rng, nplus, nminus, side, lo, hi)
            convex_order = order if side == "nminus" else None
            text = fileio.dump_instance(inst, convex_order=convex_order)
        elif kind == "dag":
            text = fileio.dump_instance(random_dag(rng, n, density, lo, hi))
        else:
            text = fileio.dump_energy(random_energy_instance(rng, n))
    except MinBudgetError as exc:
        raise _fail(EXIT_INPUT, str(exc))
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _bench_methods(doc: fileio.InstanceDocument):
    """Yield (method name, solver thunk) pairs applicable to the instance."""
    inst = doc.instance
    yield "sp", lambda: solve_sp(inst, doc.sp_tree).stats.b

    def run_convex() -> Fraction:
        return solve_convex_auto(inst, supplied_order=doc.convex_order).budget

    yield "convex", run_convex

    def run_reduced() -> Fraction:
        reduced = transforms.bipartite_reduce(inst)
        sol = solve_convex_auto(reduced)
        repaired = transforms.repair_schedule(inst, sol.schedule)
        return schedule_stats(inst.costs, repaired).b

    yield "reduce+convex", run_reduced


@main.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--repeat", type=int, default=1, show_default=True,
              help="Timing repetitions per solve; the best run is reported.")
@click.option("--oracle-cap", type=int, default=DEFAULT_ORACLE_JOB_CAP, show_default=True)
def bench(directory: str, repeat: int, oracle_cap: int) -> None:
    """Cross-check every applicable solver on a directory of instances (CSV)."""
    rows = []
    disagreement = False
    for path in sorted(Path(directory).glob("*.json")):
        try:
            doc = fileio.load_instance(path)
        except MinBudgetError as exc:
            raise _fail(EXIT_INPUT, str(exc))
        oracle_budget = None
        if doc.instance.n <= oracle_cap:
            try:
                oracle_budget, _ = min_budget_exact(doc.instance)
            except TooLarge:
                oracle_budget = None

        results: list[tuple[str, Fraction, float]] = []
        for name, thunk in _bench_methods(doc):
            best_ms = None
            budget = None
            try:
                for _ in range(max(1, repeat)):
                    start = time.perf_counter()
                    budget = thunk()
                    elapsed = (time.perf_counter() - start) * 1000.0
                    best_ms = elapsed if best_ms is None else min(best_ms, elapsed)
            except (NotSeriesParallel, NotConvex, NotBipartite, TooLarge):
                continue
            assert budget is not None and best_ms is not None
            results.append((name, budget, best_ms))
        if oracle_budget is not None:
            results.append(("oracle", oracle_budget, 0.0))

        for name, budget, ms in results:
            agree = "" if oracle_budget is None else str(budget == oracle_budget).lower()
            if agree == "false":
                disagreement = True
            rows.append(
                {
                    "instance": path.stem,
                    "method": name,
                    "budget": cost_to_str(budget),
                    "oracle_budget": "" if oracle_budget is None else cost_to_str(oracle_budget),
                    "agree": agree,
                    "ms": f"{ms:.3f}",
                }
            )

    buffer = io.StringIO()
    writer = csv.DictWriter(
        buffer, fieldnames=["instance", "method", "budget", "oracle_budget", "agree", "ms"]
    )
    writer.writeheader()
    writer.writerows(rows)
    click.echo(buffer.getvalue(), nl=False)
    if disagreement:
        raise SystemExit(EXIT_FAIL)


@main.group()
def transform() -> None:
    """Instance-level reductions."""


@transform.command("bipartite")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def transform_bipartite(path: str, out: str | None) -> None:
    """Drop every order pair not running nonnegative-to-negative."""
    try:
        doc = fileio.load_instance(path)
        text = fileio.dump_instance(transforms.bipartite_reduce(doc.instance))
    except MinBudgetError as exc:
        raise _fail(EXIT_INPUT, str(exc))
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


@transform.command("reverse")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def transform_reverse(path: str, out: str | None) -> None:
    """Flip the relation and negate the costs."""
    try:
        doc = fileio.load_instance(path)
        text = fileio.dump_instance(transforms.reverse_instance(doc.instance))
    except MinBudgetError as exc:
        raise _fail(EXIT_INPUT, str(exc))
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


@transform.command("energy-import")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--threshold", required=True, help="Nonnegative deficit bound.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def transform_energy_import(path: str, threshold: str, out: str | None) -> None:
    """Encode a reconfiguration system as a scheduling instance."""
    try:
        eb = fileio.load_energy(path)
        text = fileio.dump_instance(transforms.energy_import(eb, threshold))
    except MinBudgetError as exc:
        raise _fail(EXIT_INPUT, str(exc))
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


@transform.command("energy-barrier")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def transform_energy_barrier(path: str) -> None:
    """Smallest integer deficit bound admitting a zero-budget schedule."""
    try:
        eb = fileio.load_energy(path)
        value = transforms.energy_barrier_value(eb)
    except TooLarge as exc:
        raise _fail(EXIT_RESOURCE, str(exc))
    except MinBudgetError as exc:
        raise _fail(EXIT_INPUT, str(exc))
    click.echo(f"barrier: {cost_to_str(value)}")


if __name__ == "__main__":
    main()
