"""Exact minimum-budget scheduling under precedence constraints.

Schedules a partially ordered set of jobs with signed exact-rational
costs so that the maximum cumulative cost over all prefixes (the
budget) is as small as possible.  Ships an exponential exact oracle
over the ideal lattice, polynomial solvers for series-parallel and
convex bipartite orders, the structural machinery certifying their
output, instance-level reductions, and a CLI.
"""

from .errors import MinBudgetError
from .instance import (
    CbrTriple,
    Cost,
    Instance,
    JobId,
    Schedule,
    as_cost,
    build_instance,
    classify_subset,
    concat_stats,
    cost_to_str,
    enumerate_ideals,
    is_linear_extension,
    restrict,
    schedule_stats,
)
from .oracle import IdealDpTable, build_table, min_budget_exact, naive_min_budget, subset_cbr
from .structure import (
    Block,
    BlockSchedule,
    IisReport,
    cbr_compare,
    cbr_key,
    check_iis,
    consistency_swap,
    contiguify,
    generic_solve,
    is_irreducible,
    prefix_select,
)
from .sp import (
    SpLeaf,
    SpParallel,
    SpSeries,
    SpTree,
    parallel_merge,
    series_compose,
    solve_sp,
    sp_recognize,
    sp_solve,
)
from .convex import (
    ConvexCertificate,
    ConvexSolution,
    convex_recognize,
    convex_solve,
    guess_first_negative,
    solve_convex_auto,
)
from .transforms import (
    EnergyBarrierInstance,
    WeightedInterval,
    bipartite_reduce,
    energy_barrier_value,
    energy_import,
    repair_schedule,
    reverse_instance,
    reverse_schedule,
)

__version__ = "0.1.0"

__all__ = [
    "Block",
    "BlockSchedule",
    "CbrTriple",
    "ConvexCertificate",
    "ConvexSolution",
    "Cost",
    "EnergyBarrierInstance",
    "IdealDpTable",
    "IisReport",
    "Instance",
    "JobId",
    "MinBudgetError",
    "Schedule",
    "SpLeaf",
    "SpParallel",
    "SpSeries",
    "SpTree",
    "WeightedInterval",
    "as_cost",
    "bipartite_reduce",
    "build_instance",
    "build_table",
    "cbr_compare",
    "cbr_key",
    "check_iis",
    "classify_subset",
    "concat_stats",
    "consistency_swap",
    "contiguify",
    "convex_recognize",
    "convex_solve",
    "cost_to_str",
    "energy_barrier_value",
    "energy_import",
    "enumerate_ideals",
    "generic_solve",
    "guess_first_negative",
    "is_irreducible",
    "is_linear_extension",
    "min_budget_exact",
    "naive_min_budget",
    "parallel_merge",
    "prefix_select",
    "repair_schedule",
    "restrict",
    "reverse_instance",
    "reverse_schedule",
    "schedule_stats",
    "series_compose",
    "solve_convex_auto",
    "solve_sp",
    "sp_recognize",
    "sp_solve",
    "subset_cbr",
]
