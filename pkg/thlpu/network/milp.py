"""
Solver-neutral MILP container: named variables and rows indexed by (family, node indices),
LP and fixed MPS writers, linear relaxation and point checks.

Names are built from the family and the 1-based node indices, e.g. z_1_2 or teta2a_3_1_2.
"""

# pylint: disable=too-many-instance-attributes

import copy
import math
import logging
from collections import OrderedDict

import numpy as np

from ..errors import ModelError, PointError

logger = logging.getLogger(__name__)

BINARY = 'binary'
CONTINUOUS = 'continuous'
SENSES = ('<=', '>=', '=')
TERMS_PER_LINE = 6


def make_name(family, idx):
    return '_'.join([family] + [str(el + 1) for el in idx])


def fmt(value):
    """Shortest text that reads back to the same 64-bit float (at most 17 significant digits)"""
    value = float(value)
    if value == 0.:
        return '0'
    text = repr(value)
    return text[:-2] if text.endswith('.0') else text


class Model:
    """Minimization model. Variables and rows are numbered in insertion order"""

    def __init__(self, name='thlpu'):
        self.name = name
        self.finalized = False

        self.var_names = []
        self.var_kinds = []
        self.var_lower = []
        self.var_upper = []
        self.dic_cols = {}
        self.dic_vars = OrderedDict()  # family -> {indices: column}

        self.row_names = []
        self.row_families = []
        self.row_cols = []
        self.row_coefs = []
        self.row_senses = []
        self.row_rhs = []
        self.dic_rows = {}

        self.obj_cols = []
        self.obj_coefs = []

    # ------------------------------------------------------------------ build
    def add_var(self, family, idx=(), kind=CONTINUOUS, lower=0., upper=math.inf):
        self._check_open()
        idx = tuple(int(el) for el in idx)
        name = make_name(family, idx)
        if name in self.dic_cols or name in self.dic_rows:
            raise ModelError("duplicate name {}".format(name))
        if kind not in (BINARY, CONTINUOUS):
            raise ModelError("unknown variable kind {}".format(kind))
        if kind == BINARY:
            lower, upper = 0., 1.
        if lower > upper:
            raise ModelError("empty bounds [{}, {}] for {}".format(lower, upper, name))

        col = len(self.var_names)
        self.var_names.append(name)
        self.var_kinds.append(kind)
        self.var_lower.append(float(lower))
        self.var_upper.append(float(upper))
        self.dic_cols[name] = col
        self.dic_vars.setdefault(family, OrderedDict())[idx] = col
        return col

    def add_constraint(self, family, idx, terms, sense, rhs=0.):
        """terms: iterable of (column, coefficient); repeated columns are summed"""
        self._check_open()
        idx = tuple(int(el) for el in idx)
        name = make_name(family, idx)
        if name in self.dic_rows or name in self.dic_cols:
            raise ModelError("duplicate name {}".format(name))
        if sense not in SENSES:
            raise ModelError("unknown sense {} for row {}".format(sense, name))
        cols, coefs = self._merge(terms, name)

        row = len(self.row_names)
        self.row_names.append(name)
        self.row_families.append(family)
        self.row_cols.append(cols)
        self.row_coefs.append(coefs)
        self.row_senses.append(sense)
        self.row_rhs.append(float(rhs))
        self.dic_rows[name] = row
        return row

    def set_objective(self, terms):
        self._check_open()
        self.obj_cols, self.obj_coefs = self._merge(terms, 'objective')

    def finalize(self):
        if not self.obj_cols:
            raise ModelError("model {} has an empty objective".format(self.name))
        self.finalized = True
        logger.debug("Finalized model {}: {} variables, {} rows".format(self.name, self.num_vars, self.num_rows))
        return self

    def _merge(self, terms, name):
        dic_terms = OrderedDict()
        for col, coef in terms:
            if not isinstance(col, (int, np.integer)) or not 0 <= col < len(self.var_names):
                raise ModelError("unknown variable {} in {}".format(col, name))
            dic_terms[int(col)] = dic_terms.get(int(col), 0.) + float(coef)
        cols = [col for col, coef in dic_terms.items() if coef != 0.]
        return cols, [dic_terms[col] for col in cols]

    def _check_open(self):
        if self.finalized:
            raise ModelError("model {} is finalized; work on model.copy()".format(self.name))

    # ------------------------------------------------------------------ access
    @property
    def num_vars(self):
        return len(self.var_names)

    @property
    def num_rows(self):
        return len(self.row_names)

    @property
    def has_binaries(self):
        return BINARY in self.var_kinds

    def col(self, family, *idx):
        return self.dic_vars[family][tuple(idx)]

    def get_col(self, family, *idx):
        """Column or None when the variable does not exist (e.g. off the edge set)"""
        return self.dic_vars.get(family, {}).get(tuple(idx))

    def family_sizes(self, rows=False):
        if rows:
            dic_sizes = OrderedDict()
            for family in self.row_families:
                dic_sizes[family] = dic_sizes.get(family, 0) + 1
            return dic_sizes
        return OrderedDict((family, len(cols)) for family, cols in self.dic_vars.items())

    def copy(self):
        """Open (not finalized) deep copy"""
        other = copy.deepcopy(self)
        other.finalized = False
        return other

    def relax(self):
        """Copy with every binary re-typed continuous in [0, 1]; finalization state is kept"""
        other = copy.deepcopy(self)
        other.var_kinds = [CONTINUOUS for _ in self.var_kinds]
        other.name = self.name if self.name.endswith('-lp') else self.name + '-lp'
        return other

    # ------------------------------------------------------------------ points
    def objective_value(self, point):
        values = _values(point)
        return float(np.dot(self.obj_coefs, values[self.obj_cols])) if self.obj_cols else 0.

    def row_activity(self, row, point):
        values = _values(point)
        return float(np.dot(self.row_coefs[row], values[self.row_cols[row]])) if self.row_cols[row] else 0.

    def check_point(self, point, tol=1e-6, rows=None):
        """
        Names of violated bounds and rows. Tolerance is absolute, scaled by max(1, |rhs|)
        """
        values = _values(point)
        violated = []
        for col, value in enumerate(values):
            if value < self.var_lower[col] - tol or value > self.var_upper[col] + tol:
                violated.append(self.var_names[col])
        for row in range(self.num_rows) if rows is None else rows:
            activity = self.row_activity(row, values)
            slack = tol * max(1., abs(self.row_rhs[row]))
            sense, rhs = self.row_senses[row], self.row_rhs[row]
            if (sense == '<=' and activity > rhs + slack) or (sense == '>=' and activity < rhs - slack) \
                    or (sense == '=' and abs(activity - rhs) > slack):
                violated.append(self.row_names[row])
        return violated

    def zero_point(self):
        return Point(self, np.zeros(self.num_vars))

    # ------------------------------------------------------------------ writers
    def write_lp(self, path):
        with open(path, 'w') as f:
            f.write(self.to_lp())
        logger.info("Saved LP file {}".format(path))

    def to_lp(self):
        self._check_final()
        lines = ['\\ Model {}'.format(self.name), 'Minimize']
        lines += _lp_expression('obj', self.obj_cols, self.obj_coefs, self.var_names)
        lines.append('Subject To')
        for row, name in enumerate(self.row_names):
            sense = {'<=': '<=', '>=': '>=', '=': '='}[self.row_senses[row]]
            expression = _lp_expression(name, self.row_cols[row], self.row_coefs[row], self.var_names)
            expression[-1] += ' {} {}'.format(sense, fmt(self.row_rhs[row]))
            lines += expression

        bounds = []
        for col, name in enumerate(self.var_names):
            if self.var_kinds[col] == BINARY:
                continue
            lower, upper = self.var_lower[col], self.var_upper[col]
            if lower == 0. and upper == math.inf:
                continue
            if lower == -math.inf and upper == math.inf:
                bounds.append(' {} free'.format(name))
            else:
                bounds.append(' {} <= {} <= {}'.format(_lp_bound(lower), name, _lp_bound(upper)))
        if bounds:
            lines += ['Bounds'] + bounds

        binaries = [name for col, name in enumerate(self.var_names) if self.var_kinds[col] == BINARY]
        if binaries:
            lines.append('Binaries')
            for start in range(0, len(binaries), TERMS_PER_LINE * 2):
                lines.append(' ' + ' '.join(binaries[start:start + TERMS_PER_LINE * 2]))
        lines.append('End')
        return '\n'.join(lines) + '\n'

    def write_mps(self, path):
        with open(path, 'w') as f:
            f.write(self.to_mps())
        logger.info("Saved MPS file {}".format(path))

    def to_mps(self):
        """
        Fixed MPS: type in column 2, names in columns 5-12 and 15-22, numbers from column 25.
        Columns and rows get 8-character aliases (C0000001, R0000001); the alias table is emitted
        as comment lines. Numbers are exact, so one whose text is longer than 12 characters
        runs past column 36: free-format readers (HiGHS, cbc) take it whole
        """
        self._check_final()
        col_alias = [mps_col_alias(col) for col in range(self.num_vars)]
        row_alias = [mps_row_alias(row) for row in range(self.num_rows)]

        lines = ['* Model {}'.format(self.name), '* alias table']
        lines += ['* {} {}'.format(alias, name) for alias, name in zip(col_alias, self.var_names)]
        lines += ['* {} {}'.format(alias, name) for alias, name in zip(row_alias, self.row_names)]
        lines += ['NAME          {}'.format(self.name[:8].upper()), 'ROWS', ' N  OBJ']
        kinds = {'<=': 'L', '>=': 'G', '=': 'E'}
        lines += [' {}  {}'.format(kinds[sense], alias) for sense, alias in zip(self.row_senses, row_alias)]

        # column-wise entries
        entries = [[] for _ in range(self.num_vars)]
        for col, coef in zip(self.obj_cols, self.obj_coefs):
            entries[col].append(('OBJ', coef))
        for row in range(self.num_rows):
            for col, coef in zip(self.row_cols[row], self.row_coefs[row]):
                entries[col].append((row_alias[row], coef))

        lines.append('COLUMNS')
        in_integer_block = False
        for col in range(self.num_vars):
            binary = self.var_kinds[col] == BINARY
            if binary != in_integer_block:
                marker = "'INTORG'" if binary else "'INTEND'"
                lines.append('    MARKER                 {:<10}'.format("'MARKER'") + marker)
                in_integer_block = binary
            if not entries[col]:
                entries[col].append(('OBJ', 0.))
            for row_name, coef in entries[col]:
                lines.append('    {:<8}  {:<8}  {}'.format(col_alias[col], row_name, fmt(coef)))
        if in_integer_block:
            lines.append("    MARKER                 'MARKER'  'INTEND'")

        lines.append('RHS')
        for row, rhs in enumerate(self.row_rhs):
            if rhs != 0.:
                lines.append('    {:<8}  {:<8}  {}'.format('RHS', row_alias[row], fmt(rhs)))

        bounds = []
        for col in range(self.num_vars):
            alias = col_alias[col]
            lower, upper = self.var_lower[col], self.var_upper[col]
            if self.var_kinds[col] == BINARY:
                bounds.append(' BV BND       {}'.format(alias))
            elif lower == -math.inf and upper == math.inf:
                bounds.append(' FR BND       {}'.format(alias))
            else:
                if lower != 0.:
                    bounds.append(' {} BND       {:<8}  {}'.format('MI' if lower == -math.inf else 'LO', alias,
                                                                   '' if lower == -math.inf else fmt(lower)))
                if upper != math.inf:
                    bounds.append(' UP BND       {:<8}  {}'.format(alias, fmt(upper)))
        if bounds:
            lines += ['BOUNDS'] + [line.rstrip() for line in bounds]
        lines.append('ENDATA')
        return '\n'.join(lines) + '\n'

    def _check_final(self):
        if not self.finalized:
            raise ModelError("model {} must be finalized before writing".format(self.name))


class Point:
    """Values for every model column (a solution or an LP relaxation point)"""

    def __init__(self, model, values, tol=1e-6):
        values = np.array(values, dtype=np.float64)
        if values.shape != (model.num_vars,):
            raise PointError("point has {} values, model has {} variables".format(values.size, model.num_vars))
        lower = np.array(model.var_lower)
        upper = np.array(model.var_upper)
        if np.any(values < lower - tol) or np.any(values > upper + tol):
            raise PointError("point violates variable bounds")
        self.model = model
        self.values = values

    def value(self, family, *idx):
        col = self.model.get_col(family, *idx)
        return 0. if col is None else float(self.values[col])

    def set(self, family, idx, value):
        self.values[self.model.col(family, *idx)] = value

    def family(self, family, shape):
        """Dense array of a family, zero where the variable does not exist"""
        array = np.zeros(shape)
        for idx, col in self.model.dic_vars.get(family, {}).items():
            array[idx] = self.values[col]
        return array

    def is_integral(self, tol=1e-6):
        binaries = [col for col, kind in enumerate(self.model.var_kinds) if kind == BINARY]
        values = self.values[binaries]
        return bool(np.all(np.abs(values - np.round(values)) <= tol))

    def objective(self):
        return self.model.objective_value(self)


def mps_col_alias(col):
    return 'C{:07d}'.format(col + 1)


def mps_row_alias(row):
    return 'R{:07d}'.format(row + 1)


def _values(point):
    return point.values if isinstance(point, Point) else np.asarray(point, dtype=np.float64)


def _lp_expression(name, cols, coefs, var_names):
    """Rows wrapped every few terms to stay below the line length limits of LP readers"""
    terms = ['{}{} {}'.format('+' if coef >= 0 else '-', fmt(abs(coef)), var_names[col])
             for col, coef in zip(cols, coefs)]
    if not terms:
        terms = ['0 {}'.format(var_names[0])]
    lines = []
    for start in range(0, len(terms), TERMS_PER_LINE):
        chunk = ' '.join(terms[start:start + TERMS_PER_LINE])
        lines.append((' {}: '.format(name) if start == 0 else '   ') + chunk)
    return lines


def _lp_bound(value):
    if value == math.inf:
        return '+inf'
    if value == -math.inf:
        return '-inf'
    return fmt(value)
