"""
Aggregated formulation: allocation z, upgrades t, small-tree edges s, arc flows r per origin
and edge costs theta linearized with big-M rows on the upgrade variables
"""

import copy
import logging

from .milp import Model, BINARY, CONTINUOUS

logger = logging.getLogger(__name__)


class AggVars:
    """Column maps of the aggregated model, keyed by 0-based node indices"""

    formulation = 'agg'
    edge_families = ('s',)
    arc_families = ('r',)

    def __init__(self, model, instance):
        self.model = model
        self.z = model.dic_vars['z']
        self.t = model.dic_vars['t']
        self.s = model.dic_vars['s']
        self.r = model.dic_vars['r']
        self.theta = model.dic_vars['theta']
        self.delta = instance.tiers[0] - instance.tiers[2]
        self.delta_p = instance.tiers[1] - instance.tiers[2]

    def with_model(self, model):
        """Same column maps bound to a copy of the model (copies keep column numbers)"""
        other = copy.copy(self)
        other.model = model
        return other

    def edge_terms(self, k, m, coef=1.):
        return [(self.s[min(k, m), max(k, m)], coef)]

    def arc_terms(self, i, k, m, coef=1.):
        return [(self.r[i, k, m], coef)]


def add_common_vars(model, instance, edge_families):
    """z, t and the binary edge families shared by both formulations"""
    n = instance.n
    for i in range(n):
        for k in range(n):
            if instance.can_allocate(i, k):
                model.add_var('z', (i, k), BINARY)
    for k in range(n):
        model.add_var('t', (k,), BINARY)
    for family in edge_families:
        for k, m in instance.edges:
            model.add_var(family, (k, m), BINARY)


def allocation_terms(model, instance, derived):
    """Spoke legs: (O_i d_ik + D_i d_ki) z_ik, hub self allocation is free"""
    terms = []
    for (i, k), col in model.dic_vars['z'].items():
        if i != k:
            terms.append((col, derived.O[i] * instance.d[i, k] + derived.D[i] * instance.d[k, i]))
    return terms


def add_structure_rows(model, instance, edge_families, suffix=''):
    """Hub, edge and upgrade counts, single allocation, edge-hub links and upgrade-hub links"""
    n = instance.n
    z, t = model.dic_vars['z'], model.dic_vars['t']

    def edge_sum(k, m):
        return [(model.dic_vars[family][k, m], 1.) for family in edge_families]

    model.add_constraint('a' + suffix, (), [(z[k, k], 1.) for k in range(n)], '=', instance.p)
    model.add_constraint('st' + suffix, (), [term for k, m in instance.edges for term in edge_sum(k, m)],
                         '=', instance.p - 1)
    for i in range(n):
        model.add_constraint('b' + suffix, (i,), [(z[i, k], 1.) for k in range(n) if (i, k) in z], '=', 1.)
    for k, m in instance.edges:
        model.add_constraint('ca' + suffix, (k, m), edge_sum(k, m) + [(z[m, k], 1.), (z[k, k], -1.)], '<=')
        model.add_constraint('cb' + suffix, (k, m), edge_sum(k, m) + [(z[k, m], 1.), (z[m, m], -1.)], '<=')
    model.add_constraint('d' + suffix, (), [(t[k,], 1.) for k in range(n)], '=', instance.q)
    for k in range(n):
        model.add_constraint('e' + suffix, (k,), [(t[k,], 1.), (z[k, k], -1.)], '<=')


def add_conservation_rows(model, instance, derived, arc_families, family):
    """Flow of each origin i balanced at each node k"""
    n = instance.n
    z = model.dic_vars['z']
    for i in range(n):
        for k in range(n):
            terms = []
            if (i, k) in z:
                terms.append((z[i, k], derived.O[i]))
            for m in instance.neighbors(k):
                for arc_family in arc_families:
                    terms.append((model.dic_vars[arc_family][i, m, k], 1.))
                    terms.append((model.dic_vars[arc_family][i, k, m], -1.))
            for j in range(n):
                if (j, k) in z and instance.w[i, j] != 0:
                    terms.append((z[j, k], -instance.w[i, j]))
            model.add_constraint(family, (i, k), terms, '=')


def build_thlpu(instance, derived):
    """Return (Model, AggVars) of the aggregated formulation, finalized"""
    n = instance.n
    model = Model('thlpu')
    add_common_vars(model, instance, ('s',))
    for i in range(n):
        for k, m in instance.edges:
            model.add_var('r', (i, k, m), CONTINUOUS)
            model.add_var('r', (i, m, k), CONTINUOUS)
    for i in range(n):
        for k, m in instance.edges:
            model.add_var('theta', (i, k, m), CONTINUOUS)

    t = model.dic_vars['t']
    s, r, theta = model.dic_vars['s'], model.dic_vars['r'], model.dic_vars['theta']

    model.set_objective(allocation_terms(model, instance, derived) + [(col, 1.) for col in theta.values()])
    add_structure_rows(model, instance, ('s',), suffix='1')

    # arc flows only on small-tree edges; arcs leaving the origin share one bound for both directions
    for i in range(n):
        for k, m in instance.edges:
            flow = [(r[i, k, m], 1.), (r[i, m, k], 1.)]
            if i not in (k, m):
                model.add_constraint('g11a', (i, k, m), flow + [(s[k, m], -derived.O3[i, k, m])], '<=')
            else:
                other = m if i == k else k
                model.add_constraint('g11b', (i, other), flow + [(s[k, m], -derived.O3[i, i, other])], '<=')

    add_conservation_rows(model, instance, derived, ('r',), 'h1')

    tiers = instance.tiers
    for i in range(n):
        for k, m in instance.edges:
            big_m = derived.bound[i, k, m]
            delta = tiers[0, k, m] - tiers[2, k, m]
            delta_p = tiers[1, k, m] - tiers[2, k, m]
            cost = [(theta[i, k, m], 1.)]
            flow_c, flow_cp, flow_cdp = (_flow(r, i, k, m, tiers[h, k, m]) for h in range(3))

            model.add_constraint('teta1', (i, k, m), cost + flow_cdp, '>=')
            model.add_constraint('teta2a', (i, k, m), cost + [(t[k,], delta_p * big_m)] + flow_cp, '>=')
            model.add_constraint('teta2b', (i, k, m), cost + [(t[m,], delta_p * big_m)] + flow_cp, '>=')
            model.add_constraint('teta3', (i, k, m),
                                 cost + [(t[k,], delta * big_m), (t[m,], delta * big_m)] + flow_c, '>=')

    model.finalize()
    logger.info("Built aggregated model: {} variables {}, {} rows".format(
        model.num_vars, dict(model.family_sizes()), model.num_rows))
    return model, AggVars(model, instance)


def add_inherited_thlp_cuts(model, aggvars, derived):
    """
    Flow of origin i across edge {k, m} needs both endpoints to be hubs:
    r_ikm + r_imk <= max(O3[i,k,m], O3[i,m,k]) z_kk and the same with z_mm.
    Works on an open copy and returns it finalized
    """
    model = model.copy()
    r, z = model.dic_vars['r'], model.dic_vars['z']
    n = len(model.dic_vars['t'])
    edges = list(model.dic_vars['s'])
    for i in range(n):
        for k, m in edges:
            flow = [(r[i, k, m], 1.), (r[i, m, k], 1.)]
            big_m = derived.bound[i, k, m]
            model.add_constraint('thlpa', (i, k, m), flow + [(z[k, k], -big_m)], '<=')
            model.add_constraint('thlpb', (i, k, m), flow + [(z[m, m], -big_m)], '<=')
    model.finalize()
    logger.info("Appended {} inherited rows".format(2 * n * len(edges)))
    return model, aggvars.with_model(model)


def _flow(r, i, k, m, coef):
    return [(r[i, k, m], -coef), (r[i, m, k], -coef)]
