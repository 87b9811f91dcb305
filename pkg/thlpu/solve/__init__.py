
from .solution import Solution, SolveResult, edge_tier, tier_cost, evaluate_solution, flow_decomposition, \
    hub_path_costs, write_solution, read_solution
from .backends import HighsBackend, CbcBackend, get_backend, solve
from .oracle import oracle_optimum, enumeration_size
