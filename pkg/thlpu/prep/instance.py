"""
Instances of the tree-of-hubs location problem with upgrading: validation, synthesis of the
four cost tiers from discount factors, derived flow totals and bounds, normalized JSON format.

Nodes are 0-based in memory and 1-based in every file.
"""

# pylint: disable=too-many-instance-attributes, too-many-arguments

import itertools
import logging

import numpy as np
import networkx as nx

from ..errors import InstanceError
from ..utils import open_json, save_json, canonical_edge

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
TIERS = ('c', 'c_prime', 'c_dprime')


class Instance:
    """Immutable problem data. Tier costs are read through the canonical edge (min, max)"""

    def __init__(self, w, d, c, c_prime, c_dprime, p, q, edges=None, coords=None, factors=None, name='instance'):

        self.w = _square(w, 'w')
        self.n = self.w.shape[0]
        self.d = _square(d, 'd', self.n)
        self.c = _square(c, 'c', self.n)
        self.c_prime = _square(c_prime, 'c_prime', self.n)
        self.c_dprime = _square(c_dprime, 'c_dprime', self.n)
        self.p = int(p)
        self.q = int(q)
        self.coords = None if coords is None else np.array(coords, dtype=np.float64)
        self.factors = None if factors is None else tuple(float(el) for el in factors)
        self.name = name

        if edges is None:
            self.edges = tuple(itertools.combinations(range(self.n), 2))
            self.complete = True
        else:
            self.edges = tuple(sorted({canonical_edge(int(k), int(m)) for k, m in edges}))
            self.complete = len(self.edges) == self.n * (self.n - 1) // 2
        self._check()

        self.adjacency = np.zeros((self.n, self.n), dtype=bool)
        for k, m in self.edges:
            self.adjacency[k, m] = self.adjacency[m, k] = True

        # tiers[h][k, m]: unit cost on edge {k, m} with h upgraded endpoints, symmetric, zero off E
        self.tiers = np.zeros((3, self.n, self.n))
        for h, cost in enumerate((self.c, self.c_prime, self.c_dprime)):
            for k, m in self.edges:
                self.tiers[h, k, m] = self.tiers[h, m, k] = cost[k, m]

        for array in (self.w, self.d, self.c, self.c_prime, self.c_dprime, self.tiers, self.adjacency):
            array.setflags(write=False)

    def _check(self):
        if np.any(self.w < 0):
            raise InstanceError("flow matrix w has negative entries")
        if np.any(self.d < 0):
            raise InstanceError("base cost matrix d has negative entries")
        if np.any(np.abs(np.diag(self.d)) > 0):
            raise InstanceError("base cost matrix d must have a zero diagonal")
        if not 2 <= self.p <= self.n - 1:
            raise InstanceError("p = {} outside [2, n-1] with n = {}".format(self.p, self.n))
        if not 1 <= self.q <= self.p - 1:
            raise InstanceError("q = {} outside [1, p-1] with p = {}".format(self.q, self.p))
        if any(k == m or not 0 <= k < self.n or not 0 <= m < self.n for k, m in self.edges):
            raise InstanceError("edge list contains self loops or unknown nodes")
        if self.coords is not None and self.coords.shape != (self.n, 2):
            raise InstanceError("coordinates must be an n x 2 array")

        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        if not nx.is_connected(graph):
            raise InstanceError("graph (N, E) is not connected")

        tol = 1e-12
        for k, m in self.edges:
            for a, b in ((k, m), (m, k)):
                if not (-tol <= self.c_dprime[a, b] <= self.c_prime[a, b] + tol
                        and self.c_prime[a, b] <= self.c[a, b] + tol
                        and self.c[a, b] <= self.d[a, b] + tol):
                    raise InstanceError("cost tiers not monotone on edge {{{}, {}}}".format(a + 1, b + 1))

    def has_edge(self, k, m):
        return bool(self.adjacency[k, m])

    def neighbors(self, m):
        return [k for k in range(self.n) if self.adjacency[k, m]]

    def can_allocate(self, i, k):
        return i == k or bool(self.adjacency[i, k])

    def truncate(self, n):
        """Sub-instance on the first n nodes keeping p, q and the synthesis path"""
        if n > self.n:
            raise InstanceError("cannot truncate an instance of {} nodes to {}".format(self.n, n))
        edges = None if self.complete else [(k, m) for k, m in self.edges if m < n]
        if self.factors is not None:
            source = {'coords': self.coords[:n]} if self.coords is not None else {'d': self.d[:n, :n]}
            return build_instance(w=self.w[:n, :n], p=self.p, q=self.q, factors=self.factors, edges=edges,
                                  name='{}-n{}'.format(self.name, n), **source)
        return Instance(self.w[:n, :n], self.d[:n, :n], self.c[:n, :n], self.c_prime[:n, :n],
                        self.c_dprime[:n, :n], self.p, self.q, edges=edges, name='{}-n{}'.format(self.name, n))

    def with_params(self, p=None, q=None, factors=None):
        """Same network and flows with another hub count, upgrade count or discount triple"""
        p = self.p if p is None else p
        q = self.q if q is None else q
        edges = None if self.complete else self.edges
        if factors is None and self.factors is None:
            return Instance(self.w, self.d, self.c, self.c_prime, self.c_dprime, p, q, edges=edges,
                            coords=self.coords, name=self.name)
        factors = self.factors if factors is None else factors
        return build_instance(coords=self.coords, d=None if self.coords is not None else self.d, w=self.w,
                              p=p, q=q, factors=factors, edges=edges, name=self.name)

    def __repr__(self):
        return "Instance(name={}, n={}, |E|={}, p={}, q={}, factors={})".format(
            self.name, self.n, len(self.edges), self.p, self.q, self.factors)


class DerivedQuantities:
    """
    Flow totals and flow bounds:
    O[i] outbound, D[i] inbound, O3[i, k, m] bound on origin-i flow across edge {k, m}
    and bound[i, k, m] = max(O3[i, k, m], O3[i, m, k]) used as big-M
    """

    def __init__(self, instance):
        w = instance.w
        n = instance.n
        self.O = w.sum(axis=1)
        self.D = w.sum(axis=0)

        base = self.O - np.diag(w)
        o3 = base[:, None, None] - np.minimum(w[:, :, None], w[:, None, :])
        o3[np.arange(n), np.arange(n), :] = base[:, None]
        o3[:, np.arange(n), np.arange(n)] = 0.
        self.O3 = o3
        self.bound = np.maximum(o3, o3.transpose(0, 2, 1))

        for array in (self.O, self.D, self.O3, self.bound):
            array.setflags(write=False)


def derive(instance):
    return DerivedQuantities(instance)


def euclidean(coords):
    coords = np.asarray(coords, dtype=np.float64)
    return np.sqrt(((coords[:, None, :] - coords[None, :, :]) ** 2).sum(axis=-1))


def check_factors(factors):
    try:
        alpha, rho, gamma = (float(el) for el in factors)
    except (TypeError, ValueError) as exc:
        raise InstanceError("discount factors must be a triple (alpha, rho, gamma)") from exc
    if not 0 <= gamma <= rho <= alpha <= 1:
        raise InstanceError("discount factors must satisfy 0 <= gamma <= rho <= alpha <= 1, got {}"
                            .format((alpha, rho, gamma)))
    return alpha, rho, gamma


def build_instance(w, p, q, factors, coords=None, d=None, edges=None, name='instance'):
    """Instance with c = alpha d, c' = rho d, c'' = gamma d from either 2D points or an explicit d"""
    alpha, rho, gamma = check_factors(factors)
    w = _square(w, 'w')
    if (coords is None) == (d is None):
        raise InstanceError("provide exactly one of coordinates or a base cost matrix d")
    if coords is not None:
        coords = np.asarray(coords, dtype=np.float64)
        if coords.shape != (w.shape[0], 2):
            raise InstanceError("expected {} 2D points, got shape {}".format(w.shape[0], coords.shape))
        d = euclidean(coords)
    d = _square(d, 'd', w.shape[0])
    return Instance(w, d, alpha * d, rho * d, gamma * d, p, q, edges=edges, coords=coords,
                    factors=(alpha, rho, gamma), name=name)


def write_instance(instance, path):
    dic_out = {'version': FORMAT_VERSION, 'name': instance.name, 'n': instance.n,
               'p': instance.p, 'q': instance.q, 'w': instance.w.tolist()}
    if not instance.complete:
        dic_out['edges'] = [[k + 1, m + 1] for k, m in instance.edges]
    if instance.coords is not None and instance.factors is not None:
        dic_out['coords'] = instance.coords.tolist()
    else:
        dic_out['d'] = instance.d.tolist()
    if instance.factors is not None:
        dic_out['costs'] = dict(zip(('alpha', 'rho', 'gamma'), instance.factors))
    else:
        dic_out['costs'] = {tier: getattr(instance, tier).tolist() for tier in TIERS}
    save_json(dic_out, path)
    logger.info("Saved instance {} in {}".format(instance.name, path))


def read_instance(path):
    return instance_from_dict(open_json(path))


def instance_from_dict(dic_in):
    for key in ('n', 'w', 'p', 'q', 'costs'):
        if key not in dic_in:
            raise InstanceError("instance document misses field '{}'".format(key))
    if ('coords' in dic_in) == ('d' in dic_in):
        raise InstanceError("instance document needs exactly one of 'coords' or 'd'")
    if dic_in.get('version', FORMAT_VERSION) != FORMAT_VERSION:
        raise InstanceError("unsupported instance format version {}".format(dic_in['version']))

    n = int(dic_in['n'])
    w = _square(dic_in['w'], 'w', n)
    edges = dic_in.get('edges')
    if edges is not None:
        edges = [(int(k) - 1, int(m) - 1) for k, m in edges]
    name = dic_in.get('name', 'instance')
    costs = dic_in['costs']

    if all(key in costs for key in ('alpha', 'rho', 'gamma')):
        factors = (costs['alpha'], costs['rho'], costs['gamma'])
        return build_instance(w, dic_in['p'], dic_in['q'], factors, coords=dic_in.get('coords'),
                              d=dic_in.get('d'), edges=edges, name=name)
    if all(key in costs for key in TIERS):
        if 'd' not in dic_in:
            raise InstanceError("explicit tier costs require an explicit base cost matrix d")
        return Instance(w, dic_in['d'], costs['c'], costs['c_prime'], costs['c_dprime'],
                        dic_in['p'], dic_in['q'], edges=edges, name=name)
    raise InstanceError("costs must hold either alpha/rho/gamma or c/c_prime/c_dprime")


def _square(matrix, label, n=None):
    try:
        array = np.array(matrix, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InstanceError("matrix {} is not numeric".format(label)) from exc
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise InstanceError("matrix {} must be square, got shape {}".format(label, array.shape))
    if n is not None and array.shape[0] != n:
        raise InstanceError("matrix {} must be {}x{}, got {}".format(label, n, n, array.shape))
    if not np.all(np.isfinite(array)):
        raise InstanceError("matrix {} has non finite entries".format(label))
    return array
