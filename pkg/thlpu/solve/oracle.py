"""
Exact optimum by exhaustive enumeration: hub subsets, labelled trees on the hubs (Prüfer
sequences), upgrade subsets and every allocation of the spokes.

For one hub set all allocations are costed at once: the aggregated hub-to-hub flows of each
allocation are contracted with the path cost matrix of each (tree, upgrades) pair.
Ties go to the lexicographically smallest (hubs, upgrades, tree, alloc).
"""

# pylint: disable=too-many-locals

import math
import logging
import itertools
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .solution import Solution, evaluate_solution, edge_tier
from ..errors import BudgetError
from ..utils import prufer_trees, tree_paths

logger = logging.getLogger(__name__)

MAX_EVALUATIONS = 5e7


def enumeration_size(n, p, q):
    """C(n, p) p^(p-2) C(p, q) p^(n-p) full structures"""
    trees = 1 if p <= 2 else p ** (p - 2)
    return math.comb(n, p) * trees * math.comb(p, q) * p ** (n - p)


def oracle_optimum(instance, max_evaluations=MAX_EVALUATIONS, workers=1):
    """Return (Solution, objective); refuses instances above the evaluation budget"""
    size = enumeration_size(instance.n, instance.p, instance.q)
    if size > max_evaluations:
        raise BudgetError("oracle would evaluate {:.3g} structures, budget is {:.3g}".format(size, max_evaluations))
    logger.info("Oracle on {}: {} structures".format(instance.name, size))

    hub_sets = list(itertools.combinations(range(instance.n), instance.p))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            candidates = list(executor.map(best_for_hubs, itertools.repeat(instance), hub_sets,
                                           chunksize=max(1, len(hub_sets) // (4 * workers))))
    else:
        candidates = [best_for_hubs(instance, hubs) for hubs in hub_sets]

    best, best_value = None, math.inf
    for candidate in candidates:  # hub sets come in lexicographic order
        if candidate is not None and candidate[1] < best_value:
            best, best_value = candidate
    if best is None:
        raise BudgetError("no feasible structure found on {}".format(instance.name))

    objective = evaluate_solution(instance, best)
    logger.info("Oracle optimum {:.6f} with hubs {}".format(objective, best.labels()['hubs']))
    return best, objective


def best_for_hubs(instance, hubs):
    """(Solution, value) minimizing over trees, upgrades and allocations for one hub set"""
    n, p, q = instance.n, instance.p, instance.q
    hubs = tuple(hubs)
    spokes = [i for i in range(n) if i not in hubs]

    choices = [[hub for hub in hubs if instance.can_allocate(i, hub)] for i in spokes]
    if any(not options for options in choices):
        return None
    allocations = np.array(list(itertools.product(*choices)), dtype=np.int64).reshape(-1, len(spokes))

    # full allocation vectors, lexicographic in the spoke choices
    alloc = np.empty((allocations.shape[0], n), dtype=np.int64)
    alloc[:, list(hubs)] = np.array(hubs)
    alloc[:, spokes] = allocations
    slot_of = np.zeros(n, dtype=np.int64)
    slot_of[list(hubs)] = np.arange(p)
    slot = slot_of[alloc]
    one_hot = np.zeros((alloc.shape[0], n, p))
    np.put_along_axis(one_hot, slot[:, :, None], 1., axis=2)

    # spoke legs and hub to hub aggregated flows of every allocation
    nodes = np.arange(n)
    legs = instance.w.sum(axis=1)[None, :] * instance.d[nodes[None, :], alloc] \
        + instance.w.sum(axis=0)[None, :] * instance.d[alloc, nodes[None, :]]
    access = legs.sum(axis=1)
    hub_flows = np.einsum("aik,ij,ajl->akl", one_hot, instance.w, one_hot, optimize=True)
    hub_flows = hub_flows.reshape(alloc.shape[0], p * p)

    structures = []
    path_costs = []
    trees = sorted(tree for tree in prufer_trees(hubs) if all(instance.has_edge(k, m) for k, m in tree))
    for upgrades in itertools.combinations(hubs, q):
        for tree in trees:
            structures.append((upgrades, tree))
            path_costs.append(_path_costs(instance, hubs, tree, upgrades).ravel())
    if not structures:
        return None

    values = np.array(path_costs) @ hub_flows.T + access[None, :]
    flat = int(np.argmin(values))
    row, col = divmod(flat, values.shape[1])
    upgrades, tree = structures[row]
    return Solution(hubs, tree, alloc[col], upgrades), float(values[row, col])


def _path_costs(instance, hubs, tree, upgrades):
    size = len(hubs)
    costs = np.zeros((size, size))
    for (k, m), path in tree_paths(hubs, tree).items():
        costs[hubs.index(k), hubs.index(m)] = sum(instance.tiers[edge_tier(a, b, upgrades), a, b] for a, b in path)
    return costs
