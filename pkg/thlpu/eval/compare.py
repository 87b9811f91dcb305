"""
Aggregated vs disaggregated formulation, each with and without separated cuts:
LP bounds, optima, and the expected orderings between them
"""

import os
import logging

from tabulate import tabulate

from ..cuts import CutLoopParams, cut_loop
from ..network import build_model
from ..prep import derive
from ..solve import solve
from ..utils import save_json

logger = logging.getLogger(__name__)

VARIANTS = (('agg', False), ('disagg', False), ('agg', True), ('disagg', True))


def variant_name(formulation, vi):
    return formulation + ('+vi' if vi else '')


def bounds_and_optimum(instance, derived, formulation, vi, params, backend, time_limit_s):
    model, _ = build_model(instance, derived, formulation)
    if vi:
        model, stats, _ = cut_loop(model, instance, derived, formulation, params, backend=backend)
        lp_bound = stats['bounds'][-1] if stats['bounds'] else solve(model.relax(), backend)[0].objective
    else:
        lp_bound = solve(model.relax(), backend)[0].objective
    result, _ = solve(model, backend, time_limit_s=time_limit_s)
    return lp_bound, result


def compare_formulations(instances, backend='highs', params=None, time_limit_s=None, tol=1e-6, out=None):
    """
    One summary dict per instance with the LP bound and optimum of every variant and flags:
    optima_agree, disagg_dominates (LP(disagg) >= LP(agg)), cuts_help (LP(agg+vi) >= LP(agg)).
    Instances whose optima disagree are dumped to <out>/compare-failures.json
    """
    params = CutLoopParams() if params is None else params
    summaries = []
    failures = []
    for instance in instances:
        derived = derive(instance)
        dic_summary = {'instance': instance.name, 'n': instance.n, 'p': instance.p, 'q': instance.q,
                       'factors': instance.factors}
        optima = []
        for formulation, vi in VARIANTS:
            name = variant_name(formulation, vi)
            lp_bound, result = bounds_and_optimum(instance, derived, formulation, vi, params, backend, time_limit_s)
            dic_summary['lp_' + name] = lp_bound
            dic_summary['opt_' + name] = result.objective if result.status == 'optimal' else None
            dic_summary['status_' + name] = result.status
            optima.append(dic_summary['opt_' + name])

        solved = [value for value in optima if value is not None]
        reference = max(abs(value) for value in solved) if solved else 1.
        dic_summary['optima_agree'] = len(solved) == len(optima) and \
            max(solved) - min(solved) <= tol * max(reference, 1.)
        dic_summary['disagg_dominates'] = dic_summary['lp_disagg'] >= dic_summary['lp_agg'] - 1e-9 * max(
            abs(dic_summary['lp_agg']), 1.)
        dic_summary['cuts_help'] = dic_summary['lp_agg+vi'] >= dic_summary['lp_agg'] - 1e-9 * max(
            abs(dic_summary['lp_agg']), 1.)
        if not dic_summary['optima_agree']:
            logger.warning("Optima disagree on {}: {}".format(instance.name, optima))
            failures.append(dic_summary)
        summaries.append(dic_summary)

    if failures and out:
        os.makedirs(out, exist_ok=True)
        save_json(failures, os.path.join(out, 'compare-failures.json'))
    return summaries


def print_comparison(summaries):
    headers = ['instance'] + ['LP ' + variant_name(*variant) for variant in VARIANTS] + ['optimum', 'agree']
    results = []
    for dic_summary in summaries:
        results.append([dic_summary['instance']]
                       + [dic_summary['lp_' + variant_name(*variant)] for variant in VARIANTS]
                       + [dic_summary['opt_agg'], dic_summary['optima_agree']])
    print(tabulate(results, headers=headers, floatfmt='.2f'))
