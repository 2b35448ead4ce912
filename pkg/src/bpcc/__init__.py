"""Bin packing with compatible categories: construction, bounds, VNS, exact search."""

from .bounds import Bound, BoundMethod, l_cont, l_mt
from .exact import ExactResult, solve_exact
from .greedy import ffcd, initial_solution
from .model import (
    TABLE1,
    BpccError,
    CompatibilityMatrix,
    InfeasibleSolutionError,
    Instance,
    InvalidInstanceError,
    Solution,
    bin_feasible,
    check_solution,
    fitness_h,
    objective_z,
    validate_instance,
)
from .vns import VnsParams, VnsResult, run_vns

__all__ = [
    "TABLE1",
    "Bound",
    "BoundMethod",
    "BpccError",
    "CompatibilityMatrix",
    "ExactResult",
    "InfeasibleSolutionError",
    "Instance",
    "InvalidInstanceError",
    "Solution",
    "VnsParams",
    "VnsResult",
    "bin_feasible",
    "check_solution",
    "ffcd",
    "fitness_h",
    "initial_solution",
    "l_cont",
    "l_mt",
    "objective_z",
    "run_vns",
    "solve_exact",
    "validate_instance",
]
