"""
Combinatorial answers (hubs, small tree, allocation, upgrades), their ground-truth cost
and the per-origin flows they induce on the small tree
"""

import math
import logging

import numpy as np

from ..errors import SolutionError
from ..utils import open_json, save_json, canonical_edge, is_spanning_tree, tree_paths, oriented_tree

logger = logging.getLogger(__name__)

STATUSES = ('optimal', 'feasible-time-limit', 'infeasible', 'error')


class Solution:
    """Hubs, tree edges and upgrades are sorted tuples, alloc[i] is the hub serving node i (0-based)"""

    def __init__(self, hubs, tree_edges, alloc, upgrades):
        self.hubs = tuple(sorted(int(k) for k in set(hubs)))
        self.tree_edges = tuple(sorted({canonical_edge(int(k), int(m)) for k, m in tree_edges}))
        self.alloc = tuple(int(k) for k in alloc)
        self.upgrades = tuple(sorted(int(k) for k in set(upgrades)))

    @classmethod
    def from_labels(cls, hubs, tree_edges, alloc, upgrades):
        """Build from 1-based labels, alloc given as a mapping node -> hub"""
        n = max(alloc)
        if sorted(alloc) != list(range(1, n + 1)):
            raise SolutionError("allocation must list every node 1..n exactly once")
        return cls([k - 1 for k in hubs], [(k - 1, m - 1) for k, m in tree_edges],
                   [alloc[i] - 1 for i in range(1, n + 1)], [k - 1 for k in upgrades])

    def key(self):
        """Lexicographic encoding used for deterministic tie-breaking"""
        return self.hubs, self.upgrades, self.tree_edges, self.alloc

    def upgraded_endpoints(self, k, m):
        return int(k in self.upgrades) + int(m in self.upgrades)

    def validate(self, instance):
        n = instance.n
        if len(self.alloc) != n:
            raise SolutionError("allocation covers {} nodes, instance has {}".format(len(self.alloc), n))
        if len(self.hubs) != instance.p:
            raise SolutionError("{} hubs, expected p = {}".format(len(self.hubs), instance.p))
        if not set(self.upgrades) <= set(self.hubs):
            raise SolutionError("upgraded nodes {} are not all hubs".format(self.labels()['upgrades']))
        if len(self.upgrades) != instance.q:
            raise SolutionError("{} upgrades, expected q = {}".format(len(self.upgrades), instance.q))
        for k in self.hubs:
            if self.alloc[k] != k:
                raise SolutionError("hub {} is not allocated to itself".format(k + 1))
        for i, k in enumerate(self.alloc):
            if k not in self.hubs:
                raise SolutionError("node {} allocated to non hub {}".format(i + 1, k + 1))
            if not instance.can_allocate(i, k):
                raise SolutionError("allocation pair ({}, {}) is not an edge".format(i + 1, k + 1))
        for k, m in self.tree_edges:
            if not instance.has_edge(k, m):
                raise SolutionError("tree edge {{{}, {}}} is not an edge".format(k + 1, m + 1))
        if len(self.tree_edges) != len(self.hubs) - 1 or not is_spanning_tree(self.hubs, self.tree_edges):
            raise SolutionError("tree edges do not form a spanning tree on the hubs")

    def labels(self):
        """1-based view used by every file and printout"""
        return {'hubs': [k + 1 for k in self.hubs],
                'tree_edges': [[k + 1, m + 1] for k, m in self.tree_edges],
                'alloc': {str(i + 1): k + 1 for i, k in enumerate(self.alloc)},
                'upgrades': [k + 1 for k in self.upgrades]}

    def __eq__(self, other):
        return isinstance(other, Solution) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        dic_labels = self.labels()
        return "Solution(hubs={hubs}, tree={tree_edges}, upgrades={upgrades})".format(**dic_labels)


class SolveResult:
    """Outcome of one backend run. Gaps are relative to the incumbent"""

    def __init__(self, status, objective=None, bound=None, nodes=0, time=0., limit_hit=False, message=''):
        assert status in STATUSES, "unknown status {}".format(status)
        self.status = status
        self.objective = objective
        self.bound = bound
        self.nodes = nodes
        self.time = time
        self.limit_hit = limit_hit
        self.message = message
        self.cut_stats = {}

    @property
    def has_incumbent(self):
        return self.status in ('optimal', 'feasible-time-limit') and self.objective is not None

    def gap(self):
        if not self.has_incumbent or self.bound is None:
            return None
        if abs(self.objective) < 1e-12:
            return 0.
        return max(self.objective - self.bound, 0.) / abs(self.objective)

    def as_dict(self):
        return {'status': self.status, 'objective': self.objective, 'bound': self.bound, 'gap': self.gap(),
                'nodes': self.nodes, 'time': self.time, 'limit_hit': self.limit_hit,
                'message': self.message, 'cuts': dict(self.cut_stats)}

    def __repr__(self):
        return "SolveResult(status={}, objective={}, bound={}, nodes={}, time={:.2f}s)".format(
            self.status, self.objective, self.bound, self.nodes, self.time)


def edge_tier(k, m, upgrades):
    """Number of upgraded endpoints of edge {k, m}: 0 -> c, 1 -> c', 2 -> c''"""
    return int(k in upgrades) + int(m in upgrades)


def tier_cost(instance, k, m, upgrades):
    return instance.tiers[edge_tier(k, m, upgrades), k, m]


def hub_path_costs(instance, solution):
    """P[k, m]: cost per unit of flow along the small-tree path between hubs k and m"""
    paths = tree_paths(solution.hubs, solution.tree_edges)
    costs = np.zeros((instance.n, instance.n))
    for (k, m), path in paths.items():
        costs[k, m] = sum(tier_cost(instance, a, b, solution.upgrades) for a, b in path)
    return costs


def evaluate_solution(instance, solution):
    """Total routing cost: spoke leg, hub-to-hub path, hub to destination leg for every O-D pair"""
    solution.validate(instance)
    alloc = np.array(solution.alloc)
    nodes = np.arange(instance.n)
    costs = hub_path_costs(instance, solution)
    per_pair = (instance.d[nodes, alloc][:, None] + instance.d[alloc, nodes][None, :]
                + costs[alloc][:, alloc])
    return float((instance.w * per_pair).sum())


def flow_decomposition(instance, solution, i):
    """
    Flow of origin i on every small-tree arc oriented away from the hub of i.
    Keys are 0-based arcs (k, m), values the flow destined beyond the arc
    """
    solution.validate(instance)
    root = solution.alloc[i]
    dic_flows = {}
    for arc, beyond in oriented_tree(solution.hubs, solution.tree_edges, root):
        destinations = [j for j, k in enumerate(solution.alloc) if k in beyond]
        dic_flows[arc] = float(instance.w[i, destinations].sum())
    return dic_flows


def write_solution(solution, path, objective=None, result=None):
    dic_out = solution.labels()
    dic_out['objective'] = objective
    if result is not None:
        dic_out['result'] = result.as_dict()
    save_json(dic_out, path)
    logger.info("Saved solution in {}".format(path))


def read_solution(path):
    """Return (Solution, objective)"""
    dic_in = open_json(path)
    try:
        alloc = {int(i): int(k) for i, k in dic_in['alloc'].items()}
        solution = Solution.from_labels(dic_in['hubs'], dic_in['tree_edges'], alloc, dic_in['upgrades'])
    except KeyError as exc:
        raise SolutionError("solution file {} misses field {}".format(path, exc)) from exc
    objective = dic_in.get('objective')
    if objective is not None and not math.isfinite(objective):
        raise SolutionError("solution file {} has a non finite objective".format(path))
    return solution, objective
