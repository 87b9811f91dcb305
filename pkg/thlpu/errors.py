
"""Exceptions raised across the package"""


class ThlpuError(Exception):
    """Base class of every error raised on purpose by the package"""


class InstanceError(ThlpuError, ValueError):
    """Invalid instance data, malformed instance file or raw dataset"""


class ModelError(ThlpuError, ValueError):
    """Misuse of the MILP container (duplicate names, unknown variables, frozen model)"""


class PointError(ThlpuError, ValueError):
    """A point is fractional where it must be integral, or violates model rows"""


class SolutionError(ThlpuError, ValueError):
    """Combinatorial solution that is not a valid tree of hubs"""


class IndexSetError(ThlpuError, ValueError):
    """Node sets F and J outside the domain of the valid inequality"""


class BackendError(ThlpuError, RuntimeError):
    """Solver backend missing, crashed, or produced unreadable output"""


class BudgetError(ThlpuError, RuntimeError):
    """Exhaustive enumeration larger than the configured budget"""


class FormulationError(ThlpuError, RuntimeError):
    """LP relaxation infeasible or unbounded: the model itself is wrong"""
