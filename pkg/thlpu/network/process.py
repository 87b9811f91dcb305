"""Conversions between model points and combinatorial solutions"""

import numpy as np

from .milp import Point, BINARY
from .form_agg import build_thlpu, add_inherited_thlp_cuts
from .form_disagg import EDGE_FAMILIES, ARC_FAMILIES, build_dthlpu, add_lemma2
from ..errors import PointError, SolutionError
from ..solve.solution import Solution, flow_decomposition, edge_tier


def decode_agg(point, aggvars, instance, tol=1e-6):
    return _decode(point, aggvars, instance, tol)


def decode_disagg(point, disaggvars, instance, tol=1e-6):
    return _decode(point, disaggvars, instance, tol)


def _decode(point, variables, instance, tol):
    model = point.model
    if not point.is_integral(tol):
        raise PointError("point is fractional on binary variables")

    # rows made of binaries only fix the whole structure
    binary_rows = [row for row in range(model.num_rows)
                   if all(model.var_kinds[col] == BINARY for col in model.row_cols[row])]
    violated = model.check_point(point, tol=tol, rows=binary_rows)
    if violated:
        raise PointError("point violates structural rows {}".format(violated[:5]))

    values = np.round(point.values)
    hubs = [k for (i, k), col in variables.z.items() if i == k and values[col] == 1]
    alloc = [None] * instance.n
    for (i, k), col in variables.z.items():
        if values[col] == 1:
            if alloc[i] is not None:
                raise PointError("node {} allocated twice".format(i + 1))
            alloc[i] = k
    if any(k is None for k in alloc):
        raise PointError("some node is not allocated")
    tree = [edge for edge in variables.model.dic_vars[variables.edge_families[0]]
            if sum(values[variables.model.dic_vars[family][edge]] for family in variables.edge_families) == 1]
    upgrades = [k for (k,), col in variables.t.items() if values[col] == 1]

    solution = Solution(hubs, tree, alloc, upgrades)
    try:
        solution.validate(instance)
    except SolutionError as exc:
        raise PointError("decoded structure is not a solution: {}".format(exc)) from exc
    return solution


def _flows(instance, solution):
    """r[i, k, m] for every origin, 0-based"""
    flows = np.zeros((instance.n, instance.n, instance.n))
    for i in range(instance.n):
        for (k, m), value in flow_decomposition(instance, solution, i).items():
            flows[i, k, m] = value
    return flows


def _binary_values(values, variables, solution):
    for (i, k), col in variables.z.items():
        values[col] = float(solution.alloc[i] == k)
    for (k,), col in variables.t.items():
        values[col] = float(k in solution.upgrades)


def encode_agg(instance, solution, aggvars):
    """0/1 point of a solution: r by flow decomposition, theta tight at the tier of each edge"""
    solution.validate(instance)
    values = np.zeros(aggvars.model.num_vars)
    _binary_values(values, aggvars, solution)
    for edge in solution.tree_edges:
        values[aggvars.s[edge]] = 1.
    flows = _flows(instance, solution)
    for (i, k, m), col in aggvars.r.items():
        values[col] = flows[i, k, m]
    for (i, k, m), col in aggvars.theta.items():
        cost = instance.tiers[edge_tier(k, m, solution.upgrades), k, m]
        values[col] = cost * (flows[i, k, m] + flows[i, m, k])
    return Point(aggvars.model, values)


def encode_disagg(instance, solution, disaggvars):
    """0/1 point of a solution with each tree edge and its flows in the class of its upgraded endpoints"""
    solution.validate(instance)
    model = disaggvars.model
    values = np.zeros(model.num_vars)
    _binary_values(values, disaggvars, solution)
    for k, m in solution.tree_edges:
        values[model.dic_vars[EDGE_FAMILIES[edge_tier(k, m, solution.upgrades)]][k, m]] = 1.
    flows = _flows(instance, solution)
    for h, family in enumerate(ARC_FAMILIES):
        for (i, k, m), col in model.dic_vars[family].items():
            if edge_tier(k, m, solution.upgrades) == h:
                values[col] = flows[i, k, m]
    return Point(model, values)


def build_model(instance, derived, formulation='agg', static_rows=False):
    """(Model, variables) of either formulation, optionally with the static strengthening rows"""
    if formulation == 'agg':
        model, variables = build_thlpu(instance, derived)
        if static_rows:
            model, variables = add_inherited_thlp_cuts(model, variables, derived)
    elif formulation == 'disagg':
        model, variables = build_dthlpu(instance, derived)
        if static_rows:
            model, variables = add_lemma2(model, variables, derived)
    else:
        raise ValueError("formulation must be 'agg' or 'disagg', got {}".format(formulation))
    return model, variables


def decode(point, variables, instance, tol=1e-6):
    return _decode(point, variables, instance, tol)


def encode(instance, solution, variables):
    if variables.formulation == 'agg':
        return encode_agg(instance, solution, variables)
    return encode_disagg(instance, solution, variables)
