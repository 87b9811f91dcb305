"""
Disaggregated formulation: small-tree edges and arc flows split by the number of upgraded
endpoints (y, y', y'' and x, x', x''), Lemma-type strengthening rows and the exact map of its
points onto the aggregated variables
"""

import copy
import logging

import numpy as np

from .milp import Model, Point, CONTINUOUS
from .form_agg import add_common_vars, allocation_terms, add_structure_rows, add_conservation_rows
from ..errors import PointError

logger = logging.getLogger(__name__)

EDGE_FAMILIES = ('y', 'yp', 'ypp')
ARC_FAMILIES = ('x', 'xp', 'xpp')


class DisaggVars:
    """Column maps of the disaggregated model; index 0, 1, 2 of the families = upgraded endpoints"""

    formulation = 'disagg'
    edge_families = EDGE_FAMILIES
    arc_families = ARC_FAMILIES

    def __init__(self, model):
        self.model = model
        self.z = model.dic_vars['z']
        self.t = model.dic_vars['t']
        self.y, self.y_prime, self.y_dprime = (model.dic_vars[family] for family in EDGE_FAMILIES)
        self.x, self.x_prime, self.x_dprime = (model.dic_vars[family] for family in ARC_FAMILIES)

    def with_model(self, model):
        other = copy.copy(self)
        other.model = model
        return other

    def edge_terms(self, k, m, coef=1.):
        edge = (min(k, m), max(k, m))
        return [(self.model.dic_vars[family][edge], coef) for family in EDGE_FAMILIES]

    def arc_terms(self, i, k, m, coef=1.):
        return [(self.model.dic_vars[family][i, k, m], coef) for family in ARC_FAMILIES]


def build_dthlpu(instance, derived):
    """Return (Model, DisaggVars) of the disaggregated formulation, finalized"""
    n = instance.n
    model = Model('dthlpu')
    add_common_vars(model, instance, EDGE_FAMILIES)
    for family in ARC_FAMILIES:
        for i in range(n):
            for k, m in instance.edges:
                model.add_var(family, (i, k, m), CONTINUOUS)
                model.add_var(family, (i, m, k), CONTINUOUS)

    objective = allocation_terms(model, instance, derived)
    for tier, family in zip((0, 1, 2), ARC_FAMILIES):
        for (_, k, m), col in model.dic_vars[family].items():
            objective.append((col, instance.tiers[tier, k, m]))
    model.set_objective(objective)
    add_structure_rows(model, instance, EDGE_FAMILIES)

    t = model.dic_vars['t']
    y, y_prime, y_dprime = (model.dic_vars[family] for family in EDGE_FAMILIES)
    for k, m in instance.edges:
        model.add_constraint('f2', (k, m), [(y_dprime[k, m], 1.), (t[k,], -1.)], '<=')
        model.add_constraint('f3', (k, m), [(y_dprime[k, m], 1.), (t[m,], -1.)], '<=')
        model.add_constraint('f4', (k, m), [(y_prime[k, m], 1.), (y_dprime[k, m], 1.), (t[k,], -1.), (t[m,], -1.)],
                             '<=')

    for number, (edge_family, arc_family) in enumerate(zip(EDGE_FAMILIES, ARC_FAMILIES), start=1):
        edge, arc = model.dic_vars[edge_family], model.dic_vars[arc_family]
        for i in range(n):
            for k, m in instance.edges:
                flow = [(arc[i, k, m], 1.), (arc[i, m, k], 1.)]
                if i not in (k, m):
                    model.add_constraint('g{}a'.format(number), (i, k, m),
                                         flow + [(edge[k, m], -derived.O3[i, k, m])], '<=')
                else:
                    other = m if i == k else k
                    model.add_constraint('g{}b'.format(number), (i, other),
                                         flow + [(edge[k, m], -derived.O3[i, i, other])], '<=')

    add_conservation_rows(model, instance, derived, ARC_FAMILIES, 'h')
    model.finalize()
    logger.info("Built disaggregated model: {} variables {}, {} rows".format(
        model.num_vars, dict(model.family_sizes()), model.num_rows))
    return model, DisaggVars(model)


def add_lemma2(model, disaggvars, derived):
    """
    Both-direction flow of origin i on {k, m} over all classes is bounded by the endpoint hubs
    (lem1/lem2, lem3/lem4 when i is an endpoint) and an edge of the small tree excludes an
    allocation along it (lem5). Returns the strengthened copy, finalized
    """
    model = model.copy()
    z = model.dic_vars['z']
    n = len(model.dic_vars['t'])
    edges = list(model.dic_vars['y'])
    for i in range(n):
        for k, m in edges:
            flow = [term for family in ARC_FAMILIES
                    for term in ((model.dic_vars[family][i, k, m], 1.), (model.dic_vars[family][i, m, k], 1.))]
            big_m = derived.bound[i, k, m]
            first, second = ('lem1', 'lem2') if i not in (k, m) else ('lem3', 'lem4')
            model.add_constraint(first, (i, k, m), flow + [(z[k, k], -big_m)], '<=')
            model.add_constraint(second, (i, k, m), flow + [(z[m, m], -big_m)], '<=')
    for k, m in edges:
        terms = [(model.dic_vars[family][k, m], 1.) for family in EDGE_FAMILIES]
        model.add_constraint('lem5', (k, m), terms + [(z[k, m], 1.), (z[m, k], 1.)], '<=', 1.)
    model.finalize()
    logger.info("Appended {} strengthening rows".format(2 * n * len(edges) + len(edges)))
    return model, disaggvars.with_model(model)


def map_disagg_to_agg(point_d, disaggvars, aggvars, instance, tol=1e-6):
    """
    s = y + y' + y'', r = x + x' + x'', theta = c (x_ikm + x_imk) + c' (...) + c'' (...).
    Exact arithmetic on the point; the input must satisfy the disaggregated rows
    """
    violated = point_d.model.check_point(point_d, tol=tol)
    if violated:
        raise PointError("input point violates {} disaggregated rows, e.g. {}".format(len(violated), violated[:5]))

    values = np.zeros(aggvars.model.num_vars)
    for family in ('z', 't'):
        for idx, col in aggvars.model.dic_vars[family].items():
            values[col] = point_d.values[disaggvars.model.dic_vars[family][idx]]
    for idx, col in aggvars.s.items():
        values[col] = sum(point_d.values[disaggvars.model.dic_vars[family][idx]] for family in EDGE_FAMILIES)
    for idx, col in aggvars.r.items():
        values[col] = sum(point_d.values[disaggvars.model.dic_vars[family][idx]] for family in ARC_FAMILIES)
    for (i, k, m), col in aggvars.theta.items():
        values[col] = sum(instance.tiers[tier, k, m] * (point_d.values[disaggvars.model.dic_vars[family][i, k, m]]
                                                        + point_d.values[disaggvars.model.dic_vars[family][i, m, k]])
                          for tier, family in enumerate(ARC_FAMILIES))
    return Point(aggvars.model, values, tol=tol)


def upgrade_class_consistent(point, disaggvars, tol=1e-6):
    """On an integral point, every used edge sits in the class given by its upgraded endpoints"""
    t = disaggvars.t
    for h, family in enumerate(EDGE_FAMILIES):
        for (k, m), col in disaggvars.model.dic_vars[family].items():
            if point.values[col] > 1 - tol:
                upgraded = int(round(point.values[t[k,]])) + int(round(point.values[t[m,]]))
                if upgraded != h:
                    return False
    return True

