"""
Experimental grid: for every instance (n, p, q, discount triple) and every variant
(formulation x with or without separated cuts) measure the root LP gap, the final gap,
branch-and-bound nodes, wall time and cuts; write one CSV row per run and print averages
grouped by (n, p, q)
"""

# pylint: disable=too-many-instance-attributes, too-many-locals

import os
import time
import logging
import itertools
from concurrent.futures import ProcessPoolExecutor

import pandas as pd
from tabulate import tabulate

from ..cuts import CutLoopParams, cut_loop
from ..errors import ThlpuError, InstanceError
from ..network import build_model
from ..prep import derive, check_factors, example1, instance_from_phub
from ..solve import solve
from ..utils import open_json, now_time, relative_gap, set_logger

logger = logging.getLogger(__name__)

FACTOR_LEVELS = (0.8, 0.5, 0.2)
DATASETS = ('fixture', 'CAB', 'AP')
FORMULATIONS = ('agg', 'disagg')


def factor_triples(levels=FACTOR_LEVELS):
    """Ordered triples alpha >= rho >= gamma over the levels with at least one strict inequality"""
    levels = sorted(levels, reverse=True)
    return [triple for triple in itertools.combinations_with_replacement(levels, 3) if len(set(triple)) > 1]


class ExperimentSpec:
    """Grid definition, read from JSON with the keys of DEFAULTS"""

    DEFAULTS = {'dataset': 'fixture', 'path': None, 'n': [], 'p': [], 'q': [], 'factors': 'grid',
                'formulations': ['agg'], 'vi': [False, True], 'time_limit': 300., 'node_limit': None,
                'backend': 'highs', 'workers': 1, 'out': os.path.join('data', 'bench'), 'static_rows': False,
                'max_lp_rounds': 10, 'max_cuts_total': 100, 'lb_stall_threshold': 0.01}

    def __init__(self, **kwargs):
        unknown = set(kwargs) - set(self.DEFAULTS)
        if unknown:
            raise InstanceError("unknown experiment keys {}".format(sorted(unknown)))
        dic_spec = dict(self.DEFAULTS, **kwargs)
        self.dataset = dic_spec['dataset']
        self.path = dic_spec['path']
        self.n_list = [int(el) for el in dic_spec['n']]
        self.p_list = [int(el) for el in dic_spec['p']]
        self.q_list = [int(el) for el in dic_spec['q']]
        factors = dic_spec['factors']
        self.factors = factor_triples() if factors == 'grid' else [tuple(el) for el in factors]
        self.formulations = list(dic_spec['formulations'])
        self.vi = [bool(el) for el in dic_spec['vi']]
        self.time_limit = dic_spec['time_limit']
        self.node_limit = dic_spec['node_limit']
        self.backend = dic_spec['backend']
        self.workers = int(dic_spec['workers'])
        self.out = dic_spec['out']
        self.static_rows = bool(dic_spec['static_rows'])
        self.params = CutLoopParams(dic_spec['max_lp_rounds'], dic_spec['max_cuts_total'],
                                    dic_spec['lb_stall_threshold'])
        self._check()

    @classmethod
    def from_json(cls, path):
        return cls(**open_json(path))

    def _check(self):
        if self.dataset not in DATASETS:
            raise InstanceError("dataset must be one of {}".format(DATASETS))
        if self.dataset != 'fixture' and self.path is None:
            raise InstanceError("dataset {} needs the path of the OR-Library file".format(self.dataset))
        for triple in self.factors:
            check_factors(triple)
            if len(set(triple)) == 1:
                raise InstanceError("factor triple {} has no strict inequality".format(triple))
        for formulation in self.formulations:
            if formulation not in FORMULATIONS:
                raise InstanceError("unknown formulation {}".format(formulation))

    def cells(self):
        """(n, p, q, factors) with q < p < n, in grid order"""
        cells = []
        for n, p, q in itertools.product(self.n_list, self.p_list, self.q_list):
            if not q < p < n:
                logger.info("Skipping n={} p={} q={}: needs q < p < n".format(n, p, q))
                continue
            cells += [(n, p, q, triple) for triple in self.factors]
        return cells

    def variants(self):
        return list(itertools.product(self.formulations, self.vi))

    def instance(self, n, p, q, factors):
        if self.dataset == 'fixture':
            return example1(p=p, q=q, factors=factors, n=n)
        return instance_from_phub(self.path, self.dataset, n, p, q, factors)


class ReportRow:

    COLUMNS = ('instance', 'n', 'p', 'q', 'alpha', 'rho', 'gamma', 'formulation', 'vi', 'lp_bound', 'objective',
               'best_bound', 'root_gap', 'final_gap', 'nodes', 'time', 'cuts', 'solved', 'status', 'error')

    def __init__(self, **kwargs):
        self.dic_row = {column: kwargs.get(column) for column in self.COLUMNS}

    def as_dict(self):
        return dict(self.dic_row)


def run_variant(spec, cell, formulation, vi):
    """One grid cell; failures end up in the row, never raised"""
    n, p, q, factors = cell
    dic_row = dict(n=n, p=p, q=q, alpha=factors[0], rho=factors[1], gamma=factors[2], formulation=formulation,
                   vi=vi, cuts=0, nodes=0, solved=False)
    start = time.time()
    try:
        instance = spec.instance(n, p, q, factors)
        dic_row['instance'] = '{}-p{}-q{}-{}-{}-{}'.format(instance.name, p, q, *factors)
        derived = derive(instance)
        model, _ = build_model(instance, derived, formulation, static_rows=spec.static_rows)
        if vi:
            model, stats, _ = cut_loop(model, instance, derived, formulation, spec.params, backend=spec.backend)
            lp_bound = stats['bounds'][-1] if stats['bounds'] else None
            dic_row['cuts'] = stats['cuts_added']
        else:
            lp_result, _ = solve(model.relax(), spec.backend)
            lp_bound = lp_result.objective
        if lp_bound is None:
            lp_result, _ = solve(model.relax(), spec.backend)
            lp_bound = lp_result.objective

        result, _ = solve(model, spec.backend, time_limit_s=spec.time_limit, node_limit=spec.node_limit)
        dic_row.update(lp_bound=lp_bound, objective=result.objective, best_bound=result.bound, nodes=result.nodes,
                       status=result.status, solved=result.status == 'optimal')
        if result.has_incumbent:
            dic_row['root_gap'] = relative_gap(result.objective, lp_bound)
            dic_row['final_gap'] = result.gap()
        else:
            dic_row['error'] = result.message
    except (ThlpuError, OSError) as exc:
        logger.warning("Cell {} {} vi={} failed: {}".format(cell, formulation, vi, exc))
        dic_row.update(status='error', error=str(exc))
    dic_row['time'] = time.time() - start
    return ReportRow(**dic_row)


def _run_variant_args(args):
    return run_variant(*args)


class GridRunner:

    HEADERS = ('n', 'p', 'q', 'formulation', 'vi', 'root gap', 'final gap', 'nodes', 'time [s]', 'cuts', 'unsolved')

    def __init__(self, spec):
        self.spec = spec
        self.rows = []
        self.table = None
        self.path_csv = None

    def run(self):
        jobs = [(self.spec, cell, formulation, vi) for cell in self.spec.cells()
                for formulation, vi in self.spec.variants()]
        logger.info("Grid with {} runs on {} worker(s)".format(len(jobs), self.spec.workers))
        if self.spec.workers > 1 and jobs:
            with ProcessPoolExecutor(max_workers=self.spec.workers) as executor:
                self.rows = list(executor.map(_run_variant_args, jobs))
        else:
            self.rows = []
            for idx, job in enumerate(jobs):
                self.rows.append(run_variant(*job))
                logger.info("Run {}/{} done: {}".format(idx + 1, len(jobs), self.rows[-1].dic_row['instance']))
        self.table = aggregate(self.rows)
        return self.rows, self.table

    def save(self):
        os.makedirs(self.spec.out, exist_ok=True)
        stamp = now_time()
        self.path_csv = os.path.join(self.spec.out, 'bench-{}.csv'.format(stamp))
        frame(self.rows).to_csv(self.path_csv, index=False)
        self.table.to_csv(os.path.join(self.spec.out, 'bench-{}-table.csv'.format(stamp)), index=False)
        logger.info("Saved {} rows in {}".format(len(self.rows), self.path_csv))
        return self.path_csv

    def printer(self):
        print('\n' + '-' * 100)
        if self.table is None or self.table.empty:
            print("No runs")
        else:
            print(tabulate(self.table.values.tolist(), headers=self.HEADERS, floatfmt='.4f'))
        print('-' * 100 + '\n')


def frame(rows):
    return pd.DataFrame([row.as_dict() for row in rows], columns=list(ReportRow.COLUMNS))


def aggregate(rows):
    """Averages over the discount triples of each (n, p, q) and variant"""
    keys = ['n', 'p', 'q', 'formulation', 'vi']
    df = frame(rows)
    if df.empty:
        return pd.DataFrame(columns=keys + ['root_gap', 'final_gap', 'nodes', 'time', 'cuts', 'unsolved'])
    df['unsolved'] = ~df['solved'].astype(bool)
    for column in ('root_gap', 'final_gap', 'nodes', 'time', 'cuts'):
        df[column] = pd.to_numeric(df[column])
    table = df.groupby(keys, sort=True).agg(root_gap=('root_gap', 'mean'), final_gap=('final_gap', 'mean'),
                                            nodes=('nodes', 'mean'), time=('time', 'mean'), cuts=('cuts', 'mean'),
                                            unsolved=('unsolved', 'sum'))
    return table.reset_index()


def run_grid(spec):
    """Return (rows, aggregated table); writes CSV files and a log file under spec.out"""
    if spec.out:
        os.makedirs(spec.out, exist_ok=True)
        set_logger(os.path.join(spec.out, 'bench-{}.log'.format(now_time())))
    runner = GridRunner(spec)
    runner.run()
    if spec.out:
        runner.save()
    runner.printer()
    return runner.rows, runner.table
