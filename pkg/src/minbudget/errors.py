"""Exception types shared across the library."""


class MinBudgetError(Exception):
    """Base class for all errors raised by this package."""


class CycleDetected(MinBudgetError):
    """The declared precedence relation contains a directed cycle."""


class DuplicateJob(MinBudgetError):
    """A job id occurs more than once in an instance."""


class UnknownEndpoint(MinBudgetError):
    """A precedence edge refers to an undeclared job."""


class UnknownJob(MinBudgetError):
    """A subset or schedule refers to a job not in the instance."""


class CoverageMismatch(MinBudgetError):
    """A schedule or block partition does not cover exactly the expected jobs."""


class MissingCost(MinBudgetError):
    """A scheduled job has no cost entry."""


class TooLarge(MinBudgetError):
    """An exact enumeration would exceed its configured size cap."""


class NotAnInterval(MinBudgetError):
    """The given subset is not an interval of the partial order."""


class NotIrreducible(MinBudgetError):
    """The given interval is not irreducible."""


class NotFeasibleInput(MinBudgetError):
    """An operation required a feasible schedule but got an infeasible one."""


class NotCertified(MinBudgetError):
    """A block list does not satisfy the increasing-structure preconditions."""


class PartitionInvalid(MinBudgetError):
    """The given parts do not partition the instance's jobs."""


class NotSeriesParallel(MinBudgetError):
    """The partial order admits no series-parallel decomposition."""


class JobOverlap(MinBudgetError):
    """Two block schedules to be merged share a job."""


class TreeMismatch(MinBudgetError):
    """A decomposition tree does not generate the instance's order."""


class NotBipartite(MinBudgetError):
    """The order has a precedence pair outside nonnegative-to-negative."""


class NotConvex(MinBudgetError):
    """No linear arrangement with consecutive neighbor sets was found."""


class EmptyNegativeSet(MinBudgetError):
    """An operation that guesses a first negative job got no candidates."""


class InfeasibleInput(MinBudgetError):
    """The input schedule is not feasible for the relaxed instance."""


class NonIntegerWeights(MinBudgetError):
    """Reconfiguration weights must be integers."""


class NegativeThreshold(MinBudgetError):
    """The energy threshold must be nonnegative."""


class NotLaminar(MinBudgetError):
    """An interval system is not laminar (or contains duplicates)."""


class BadParameters(MinBudgetError):
    """Generator or operation parameters are out of range."""


class ParseError(MinBudgetError):
    """An input file could not be parsed against its schema."""


class UnsolvableAtScale(MinBudgetError):
    """No polynomial solver applies and the exact oracle cap is exceeded."""
