"""
MILP backends. Every backend takes a finalized Model and returns (SolveResult, Point or None).

    highs  in-process through highspy, either by passing the matrices (io_api='direct')
           or by reading the LP/MPS file the model writes (io_api='lp' or 'mps')
    cbc    the cbc executable on an LP file; solution file and log are parsed
"""

# pylint: disable=too-many-locals, too-many-arguments

import os
import re
import math
import time
import shutil
import logging
import tempfile
import subprocess

import numpy as np

from .solution import SolveResult
from ..errors import ThlpuError, BackendError
from ..network.milp import Point, BINARY, mps_col_alias

try:
    import highspy
except ImportError:
    highspy = None

logger = logging.getLogger(__name__)

BACKENDS = ('highs', 'cbc')


class HighsBackend:

    name = 'highs'
    IO_APIS = ('direct', 'lp', 'mps')

    def __init__(self, io_api='direct', threads=None):
        if highspy is None:
            raise BackendError("highspy is not available, install it with: pip install highspy")
        assert io_api in self.IO_APIS, "io_api must be one of {}".format(self.IO_APIS)
        self.io_api = io_api
        self.threads = threads

    def solve(self, model, time_limit_s=None, node_limit=None, mip_rel_gap=1e-9):
        h = highspy.Highs()
        h.setOptionValue('output_flag', False)
        if time_limit_s is not None:
            h.setOptionValue('time_limit', float(time_limit_s))
        if node_limit is not None:
            h.setOptionValue('mip_max_nodes', int(node_limit))
        h.setOptionValue('mip_rel_gap', float(mip_rel_gap))
        if self.threads is not None:
            h.setOptionValue('threads', int(self.threads))

        if self.io_api == 'direct':
            h.passModel(self._highs_lp(model))
        else:
            with tempfile.TemporaryDirectory() as dir_tmp:
                path = os.path.join(dir_tmp, 'model.' + self.io_api)
                if self.io_api == 'lp':
                    model.write_lp(path)
                else:
                    model.write_mps(path)
                h.readModel(path)

        start = time.time()
        h.run()
        elapsed = time.time() - start

        status = h.getModelStatus()
        info = h.getInfo()
        message = h.modelStatusToString(status)
        mip = model.has_binaries
        nodes = max(int(info.mip_node_count), 0) if mip else 0
        has_solution = info.primal_solution_status == 2  # kSolutionStatusFeasible

        if status == highspy.HighsModelStatus.kOptimal:
            objective = info.objective_function_value
            bound = info.mip_dual_bound if mip else objective
            result = SolveResult('optimal', objective, bound, nodes, elapsed, message=message)
        elif status in (highspy.HighsModelStatus.kInfeasible, highspy.HighsModelStatus.kUnboundedOrInfeasible):
            return SolveResult('infeasible', nodes=nodes, time=elapsed, message=message), None
        elif status in _limit_statuses():
            if not has_solution or not mip:
                return SolveResult('error', nodes=nodes, time=elapsed, limit_hit=True,
                                   message='{} without incumbent'.format(message)), None
            objective = info.objective_function_value
            bound = info.mip_dual_bound
            bound = bound if math.isfinite(bound) else None
            result = SolveResult('feasible-time-limit', objective, bound, nodes, elapsed, limit_hit=True,
                                 message=message)
        else:
            return SolveResult('error', nodes=nodes, time=elapsed, message=message), None

        values = np.array(h.getSolution().col_value, dtype=np.float64)
        if self.io_api != 'direct':
            values = self._reorder(model, h.getLp().col_names_, values)
        return result, Point(model, _clip(model, values))

    @staticmethod
    def _highs_lp(model):
        inf = highspy.kHighsInf
        lp = highspy.HighsLp()
        lp.num_col_ = model.num_vars
        lp.num_row_ = model.num_rows
        cost = np.zeros(model.num_vars)
        cost[model.obj_cols] = model.obj_coefs
        lp.col_cost_ = cost
        lp.col_lower_ = np.array([-inf if el == -math.inf else el for el in model.var_lower])
        lp.col_upper_ = np.array([inf if el == math.inf else el for el in model.var_upper])
        lower = np.array([-inf if sense == '<=' else rhs for sense, rhs in zip(model.row_senses, model.row_rhs)])
        upper = np.array([inf if sense == '>=' else rhs for sense, rhs in zip(model.row_senses, model.row_rhs)])
        lp.row_lower_ = lower
        lp.row_upper_ = upper

        # column-wise matrix
        rows = np.concatenate([np.full(len(cols), row, dtype=np.int64) for row, cols in enumerate(model.row_cols)]
                              + [np.zeros(0, dtype=np.int64)])
        cols = np.concatenate([np.array(cols, dtype=np.int64) for cols in model.row_cols]
                              + [np.zeros(0, dtype=np.int64)])
        coefs = np.concatenate([np.array(coefs, dtype=np.float64) for coefs in model.row_coefs] + [np.zeros(0)])
        order = np.lexsort((rows, cols))
        start = np.zeros(model.num_vars + 1, dtype=np.int64)
        start[1:] = np.cumsum(np.bincount(cols, minlength=model.num_vars))
        lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
        lp.a_matrix_.start_ = start
        lp.a_matrix_.index_ = rows[order]
        lp.a_matrix_.value_ = coefs[order]

        if model.has_binaries:
            lp.integrality_ = [highspy.HighsVarType.kInteger if kind == BINARY else highspy.HighsVarType.kContinuous
                               for kind in model.var_kinds]
        return lp

    @staticmethod
    def _reorder(model, col_names, values):
        """Columns read back from a file come in order of appearance"""
        dic_aliases = {mps_col_alias(col): col for col in range(model.num_vars)}
        ordered = np.zeros(model.num_vars)
        for name, value in zip(col_names, values):
            col = model.dic_cols.get(name, dic_aliases.get(name))
            if col is None:
                raise BackendError("solver returned unknown column {}".format(name))
            ordered[col] = value
        return ordered


class CbcBackend:
    """File based: write LP, run cbc, parse the solution file and the log"""

    name = 'cbc'
    RE_NODES = re.compile(r'Enumerated nodes:\s+(\d+)')
    RE_BOUND = re.compile(r'Lower bound:\s+([-+\d.eE]+)')
    RE_OBJECTIVE = re.compile(r'objective value\s+([-+\d.eE]+)', re.IGNORECASE)

    def __init__(self, executable='cbc', dir_work=None):
        self.executable = executable
        self.dir_work = dir_work

    def solve(self, model, time_limit_s=None, node_limit=None, mip_rel_gap=1e-9):
        executable = shutil.which(self.executable)
        if executable is None:
            raise BackendError("{} executable not found on PATH".format(self.executable))
        with tempfile.TemporaryDirectory(dir=self.dir_work) as dir_tmp:
            path_lp = os.path.join(dir_tmp, 'model.lp')
            path_sol = os.path.join(dir_tmp, 'model.sol')
            model.write_lp(path_lp)

            command = [executable, '-printingOptions', 'all', '-import', path_lp]
            if time_limit_s is not None:
                command += ['-sec', str(float(time_limit_s))]
            if node_limit is not None:
                command += ['-maxNodes', str(int(node_limit))]
            command += ['-ratioGap', str(float(mip_rel_gap)), '-solve', '-solu', path_sol]

            start = time.time()
            try:
                process = subprocess.run(command, stdout=subprocess.PIPE, stderr=subprocess.STDOUT, check=False)
            except OSError as exc:
                raise BackendError("could not run {}".format(executable)) from exc
            elapsed = time.time() - start
            log = process.stdout.decode(errors='replace')
            logger.debug(log)
            if not os.path.exists(path_sol):
                raise BackendError("cbc wrote no solution file, return code {}".format(process.returncode))
            with open(path_sol, 'r') as f:
                lines = f.read().splitlines()
        return self.parse(model, lines, log, elapsed)

    def parse(self, model, lines, log, elapsed=0.):
        if not lines:
            raise BackendError("empty cbc solution file")
        header = lines[0]
        nodes = self._search(self.RE_NODES, log, int, 0)
        mip = model.has_binaries
        if 'infeasible' in header.lower():
            return SolveResult('infeasible', nodes=nodes, time=elapsed, message=header), None

        match = self.RE_OBJECTIVE.search(header)
        if match is None:
            return SolveResult('error', nodes=nodes, time=elapsed, message=header), None
        objective = float(match.group(1))

        values = np.zeros(model.num_vars)
        for line in lines[1:]:
            tokens = line.replace('**', ' ').split()
            if len(tokens) >= 3 and tokens[1] in model.dic_cols:
                try:
                    values[model.dic_cols[tokens[1]]] = float(tokens[2])
                except ValueError as exc:
                    raise BackendError("unparsable cbc solution line: {}".format(line)) from exc

        if header.startswith('Optimal'):
            result = SolveResult('optimal', objective, objective, nodes, elapsed, message=header)
        elif header.startswith('Stopped'):
            if not mip:
                return SolveResult('error', nodes=nodes, time=elapsed, limit_hit=True, message=header), None
            if 'no feasible' in header.lower() or objective >= 1e50:
                return SolveResult('error', nodes=nodes, time=elapsed, limit_hit=True, message=header), None
            bound = self._search(self.RE_BOUND, log, float, None)
            result = SolveResult('feasible-time-limit', objective, bound, nodes, elapsed, limit_hit=True,
                                 message=header)
        else:
            return SolveResult('error', nodes=nodes, time=elapsed, message=header), None
        return result, Point(model, _clip(model, values))

    @staticmethod
    def _search(regex, text, cast, default):
        matches = regex.findall(text)
        return cast(matches[-1]) if matches else default


def get_backend(name='highs', **kwargs):
    if name == 'highs':
        return HighsBackend(**kwargs)
    if name == 'cbc':
        return CbcBackend(**kwargs)
    raise BackendError("unknown backend {}, choose among {}".format(name, BACKENDS))


def solve(model, backend='highs', time_limit_s=None, node_limit=None, mip_rel_gap=1e-9):
    """Solve a finalized model; backend is a name or a backend object"""
    if isinstance(backend, str):
        backend = get_backend(backend)
    if not model.finalized:
        raise BackendError("model {} is not finalized".format(model.name))
    try:
        result, point = backend.solve(model, time_limit_s=time_limit_s, node_limit=node_limit,
                                      mip_rel_gap=mip_rel_gap)
    except ThlpuError:
        raise
    except (RuntimeError, ValueError, TypeError, ArithmeticError, IndexError, KeyError, OSError) as exc:
        raise BackendError("{} failed on {}: {!r}".format(backend.name, model.name, exc)) from exc
    logger.debug("{} on {}: {}".format(backend.name, model.name, result))
    return result, point


def _limit_statuses():
    names = ('kTimeLimit', 'kIterationLimit', 'kSolutionLimit', 'kInterrupt', 'kObjectiveBound',
             'kObjectiveTarget')
    return tuple(getattr(highspy.HighsModelStatus, name) for name in names
                 if hasattr(highspy.HighsModelStatus, name))


def _clip(model, values):
    """Solver tolerances leave tiny bound violations"""
    return np.clip(values, model.var_lower, model.var_upper)
