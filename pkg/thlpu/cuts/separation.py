"""
Valid inequalities linking the flow that origin i sends into hub m with the small-tree edges at m.

For F a node set without m and J a node set without i and m, with Q = sum_{j in J + m} w_ij:

    Q sum_{k in F} s_km + sum_{k not in F} r_ikm >= sum_{j in J + m} w_ij (z_jm - z_im)

On the disaggregated model s reads y + y' + y'' and r reads x + x' + x''.
Production separation restricts to singletons J = {j}, F = {k}.
"""

# pylint: disable=too-many-arguments, too-many-locals

import logging

import numpy as np

from ..errors import IndexSetError, ModelError
from ..utils import open_json, save_json

logger = logging.getLogger(__name__)

FAMILIES = {
    'agg': (('s',), ('r',), 'sepa', 'separadas-agg'),
    'disagg': (('y', 'yp', 'ypp'), ('x', 'xp', 'xpp'), 'sepd', 'separadas-disagg'),
}


class Cut:
    """Row sum(coef * column) sense rhs, tagged with its family and generating indices (0-based)"""

    def __init__(self, family, indices, terms, sense, rhs, violation, prefix):
        self.family = family
        self.indices = tuple(int(el) for el in indices)
        self.terms = terms
        self.sense = sense
        self.rhs = rhs
        self.violation = violation
        self.prefix = prefix

    @property
    def name(self):
        return '_'.join([self.prefix] + [str(el + 1) for el in self.indices])

    def violation_at(self, point):
        activity = sum(coef * point.values[col] for col, coef in self.terms)
        return self.rhs - activity if self.sense == '>=' else activity - self.rhs

    def __repr__(self):
        return "Cut({}, violation={:.6g})".format(self.name, self.violation)


def point_arrays(point, instance, formulation):
    """Dense z[i, k], edge usage S[k, m] (symmetric) and arc flows R[i, k, m] at a point"""
    edge_families, arc_families = FAMILIES[formulation][:2]
    n = instance.n
    z = point.family('z', (n, n))
    edge_usage = sum(point.family(family, (n, n)) for family in edge_families)
    edge_usage = edge_usage + edge_usage.T
    flows = sum(point.family(family, (n, n, n)) for family in arc_families)
    return z, edge_usage, flows


def rhs_value(instance, z, i, m, targets):
    return sum(instance.w[i, j] * (z[j, m] - z[i, m]) for j in targets)


def violation_general(point, instance, i, m, F, J, formulation):
    """RHS - LHS at the point, positive when the (F, J) inequality is violated"""
    n = instance.n
    F, J = set(F), set(J)
    if not 0 <= i < n or not 0 <= m < n:
        raise IndexSetError("origin {} or hub {} outside the node set".format(i + 1, m + 1))
    if m in F or not F <= set(range(n)):
        raise IndexSetError("F must be a subset of N without m")
    if J & {i, m} or not J <= set(range(n)):
        raise IndexSetError("J must be a subset of N without i and m")

    z, edge_usage, flows = point_arrays(point, instance, formulation)
    targets = sorted(J | {m})
    amount = instance.w[i, targets].sum()
    lhs = 0.
    for k in instance.neighbors(m):
        lhs += amount * edge_usage[k, m] if k in F else flows[i, k, m]
    return rhs_value(instance, z, i, m, targets) - lhs


def l_of_q(point, instance, i, m, Q, formulation):
    """
    min over F of sum_{k not in F} flow_k + Q sum_{k in F} usage_k, with its minimizer
    F = {k: flow_k / usage_k >= Q}; zero usage counts as an infinite ratio when flow_k > 0
    """
    assert Q >= 0, "Q must be nonnegative"
    _, edge_usage, flows = point_arrays(point, instance, formulation)
    value = 0.
    chosen = set()
    for k in instance.neighbors(m):
        flow, usage = flows[i, k, m], edge_usage[k, m]
        if usage > 0:
            if flow / usage >= Q:
                chosen.add(k)
        elif flow > 0:
            chosen.add(k)
        value += min(flow, Q * usage)
    return value, chosen


def most_violated_for_j(point, instance, i, m, J, formulation):
    """Best F for a fixed J through L(Q); returns (F, violation)"""
    J = set(J)
    if J & {i, m}:
        raise IndexSetError("J must be a subset of N without i and m")
    z, _, _ = point_arrays(point, instance, formulation)
    targets = sorted(J | {m})
    value, chosen = l_of_q(point, instance, i, m, instance.w[i, targets].sum(), formulation)
    return chosen, rhs_value(instance, z, i, m, targets) - value


def separate_singleton(point, instance, derived, formulation, tol=1e-6):
    """
    For every origin i, hub m and j outside {i, m}: pick the k adjacent to m minimizing
    alpha s_km - r_ikm (smallest k on ties) and emit the cut when it is violated.
    At most one cut per (i, j, m), sorted by decreasing violation
    """
    del derived  # bounds are not needed by this family
    n = instance.n
    w = instance.w
    z, edge_usage, flows = point_arrays(point, instance, formulation)

    cuts = []
    for m in range(n):
        candidates = np.array(instance.neighbors(m), dtype=np.int64)
        if candidates.size == 0:
            continue
        for i in range(n):
            if i == m:
                continue
            others = np.array([j for j in range(n) if j not in (i, m)], dtype=np.int64)
            alpha = w[i, m] + w[i, others]
            gain = w[i, others] * (z[others, m] - z[i, m]) + w[i, m] * (z[m, m] - z[i, m])
            gamma = gain - flows[i, candidates, m].sum()
            scores = alpha[:, None] * edge_usage[candidates, m][None, :] - flows[i, candidates, m][None, :]
            best = np.argmin(scores, axis=1)
            violations = gamma - scores[np.arange(others.size), best]
            for idx in np.nonzero(violations > tol)[0]:
                j, k = int(others[idx]), int(candidates[best[idx]])
                cuts.append(singleton_cut(point.model, instance, i, j, m, k, formulation, float(violations[idx])))
    cuts.sort(key=lambda cut: -cut.violation)
    logger.debug("Separated {} violated cuts".format(len(cuts)))
    return cuts


def singleton_cut(model, instance, i, j, m, k, formulation, violation):
    """(w_ij + w_im) s_km + sum_{l != k} r_ilm - w_ij z_jm + w_ij z_im - w_im z_mm + w_im z_im >= 0"""
    edge_families, arc_families, prefix, family = FAMILIES[formulation]
    w = instance.w
    alpha = w[i, j] + w[i, m]
    edge = (min(k, m), max(k, m))
    terms = [(model.col(name, *edge), alpha) for name in edge_families]
    for other in instance.neighbors(m):
        if other != k:
            terms += [(model.col(name, i, other, m), 1.) for name in arc_families]
    for coef, (a, b) in ((-w[i, j], (j, m)), (w[i, j], (i, m)), (-w[i, m], (m, m)), (w[i, m], (i, m))):
        col = model.get_col('z', a, b)
        if col is not None and coef != 0:
            terms.append((col, coef))
    return Cut(family, (i, j, m, k), terms, '>=', 0., violation, prefix)


def add_cuts(model, cuts):
    """Append cuts to an open model, skipping rows already present; returns the number added"""
    added = 0
    for cut in cuts:
        if cut.name in model.dic_rows:
            continue
        model.add_constraint(cut.prefix, cut.indices, cut.terms, cut.sense, cut.rhs)
        added += 1
    return added


def write_cut_pool(cuts, model, path):
    dic_out = {'model': model.name, 'cuts': [
        {'family': cut.family, 'name': cut.name, 'indices': [el + 1 for el in cut.indices],
         'terms': [[model.var_names[col], coef] for col, coef in cut.terms],
         'sense': cut.sense, 'rhs': cut.rhs, 'violation': cut.violation} for cut in cuts]}
    save_json(dic_out, path)
    logger.info("Saved {} cuts in {}".format(len(cuts), path))


def read_cut_pool(path, model):
    """Cuts of a pool file resolved against the columns of model"""
    cuts = []
    prefixes = {family: prefix for _, _, prefix, family in FAMILIES.values()}
    for dic_cut in open_json(path)['cuts']:
        try:
            terms = [(model.dic_cols[name], coef) for name, coef in dic_cut['terms']]
        except KeyError as exc:
            raise ModelError("cut {} uses unknown variable {}".format(dic_cut['name'], exc)) from exc
        cuts.append(Cut(dic_cut['family'], [el - 1 for el in dic_cut['indices']], terms, dic_cut['sense'],
                        dic_cut['rhs'], dic_cut['violation'], prefixes.get(dic_cut['family'], 'cut')))
    return cuts
