"""Aggregated formulation: sizes, encoding of known networks, decoding, worked-example optima"""

import os
import sys

import pytest

# Python does not consider the current directory to be a package
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

FIGURES = ('thlp', 'thlpu-flat', 'thlpu', 'thlpu-x')


def test_sizes():
    from thlpu.prep import example1, derive
    from thlpu.network import build_thlpu
    instance = example1()
    model, aggvars = build_thlpu(instance, derive(instance))
    assert dict(model.family_sizes()) == {'z': 100, 't': 10, 's': 45, 'r': 900, 'theta': 450}
    dic_rows = model.family_sizes(rows=True)
    assert dic_rows['b1'] == 10 and dic_rows['ca1'] == dic_rows['cb1'] == 45
    assert dic_rows['g11a'] == 360 and dic_rows['g11b'] == 90
    assert dic_rows['h1'] == 100
    for family in ('teta1', 'teta2a', 'teta2b', 'teta3'):
        assert dic_rows[family] == 450
    assert aggvars.delta[0, 1] == pytest.approx(instance.c[0, 1] - instance.c_dprime[0, 1])
    assert model.finalized


def test_sparse_sizes():
    from thlpu.prep import example1, derive
    from thlpu.network import build_thlpu
    edges = [(k, m) for k in range(10) for m in range(k + 1, 10) if m - k <= 2]
    instance = example1(p=4, q=1, edges=edges)
    model, _ = build_thlpu(instance, derive(instance))
    dic_sizes = model.family_sizes()
    assert dic_sizes['s'] == len(edges) == 17
    assert dic_sizes['z'] == 10 + 2 * 17
    assert dic_sizes['r'] == 10 * 2 * 17


def test_encode_figures():
    """Every drawn network is a feasible point whose model objective is its routing cost"""
    from thlpu.prep import figure_instance, figure_solution, derive
    from thlpu.network import build_model, encode
    from thlpu.solve import evaluate_solution
    for name in FIGURES:
        instance = figure_instance(name)
        solution = figure_solution(name)
        for static_rows in (False, True):
            model, aggvars = build_model(instance, derive(instance), 'agg', static_rows=static_rows)
            point = encode(instance, solution, aggvars)
            assert model.check_point(point) == []
            assert point.objective() == pytest.approx(evaluate_solution(instance, solution), rel=1e-9)


def test_decode_encoded():
    from thlpu.prep import figure_instance, figure_solution, derive
    from thlpu.network import build_thlpu, encode_agg, decode_agg
    instance = figure_instance('thlpu')
    solution = figure_solution('thlpu')
    _, aggvars = build_thlpu(instance, derive(instance))
    assert decode_agg(encode_agg(instance, solution, aggvars), aggvars, instance) == solution


def test_decode_errors():
    from thlpu.prep import figure_instance, figure_solution, derive
    from thlpu.network import build_thlpu, encode_agg, decode_agg
    from thlpu.errors import PointError
    instance = figure_instance('thlpu')
    solution = figure_solution('thlpu')
    _, aggvars = build_thlpu(instance, derive(instance))

    point = encode_agg(instance, solution, aggvars)
    point.set('z', (3, 8), 0.5)
    with pytest.raises(PointError):
        decode_agg(point, aggvars, instance)

    point = encode_agg(instance, solution, aggvars)
    point.set('t', (0,), 1.)  # three upgrades
    with pytest.raises(PointError):
        decode_agg(point, aggvars, instance)


def test_inherited_rows_tighten():
    pytest.importorskip("highspy")
    from thlpu.prep import example1, derive
    from thlpu.network import build_model
    from thlpu.solve import solve
    instance = example1(n=7, p=3, q=1)
    derived = derive(instance)
    bounds = []
    for static_rows in (False, True):
        model, _ = build_model(instance, derived, 'agg', static_rows=static_rows)
        assert model.family_sizes(rows=True).get('thlpa', 0) == (7 * 21 if static_rows else 0)
        result, _ = solve(model.relax())
        bounds.append(result.objective)
    assert bounds[1] >= bounds[0] - 1e-6 * abs(bounds[0])


def test_small_optimum():
    """Relaxation below the optimum, decoded optimum costs what the solver reports"""
    pytest.importorskip("highspy")
    from thlpu.prep import example1, derive
    from thlpu.network import build_model, decode
    from thlpu.solve import solve, evaluate_solution
    instance = example1(n=6, p=3, q=1)
    model, aggvars = build_model(instance, derive(instance), 'agg')
    result, point = solve(model)
    assert result.status == 'optimal'
    solution = decode(point, aggvars, instance)
    assert evaluate_solution(instance, solution) == pytest.approx(result.objective, rel=1e-6)
    relaxed, _ = solve(model.relax())
    assert relaxed.objective <= result.objective + 1e-6 * result.objective


@pytest.mark.slow
@pytest.mark.parametrize('name', ['thlp', 'thlpu-flat', 'thlpu'])
def test_worked_example_optima(name):
    """p = 5 optima equal the cost of the drawn networks"""
    pytest.importorskip("highspy")
    from thlpu.prep import figure_instance, figure_solution, derive
    from thlpu.network import build_model
    from thlpu.solve import solve, evaluate_solution
    instance = figure_instance(name)
    expected = evaluate_solution(instance, figure_solution(name))
    model, _ = build_model(instance, derive(instance), 'agg')
    result, _ = solve(model, time_limit_s=600)
    assert result.status == 'optimal'
    assert result.objective == pytest.approx(expected, rel=1e-6)


def test_upgrade_rows():
    """Upgrade count, upgrade-hub links and the tier rows all read the single-index t columns"""
    from thlpu.prep import example1, derive
    from thlpu.network import build_thlpu
    instance = example1(n=6, p=3, q=1)
    model, aggvars = build_thlpu(instance, derive(instance))
    assert sorted(aggvars.t) == [(k,) for k in range(6)]

    def row(name):
        idx = model.dic_rows[name]
        return dict(zip(model.row_cols[idx], model.row_coefs[idx]))

    assert row('d1') == {model.col('t', k): 1. for k in range(6)}
    assert row('e1_3') == {model.col('t', 2): 1., model.col('z', 2, 2): -1.}
    # theta of origin 1 on edge {2, 4}
    assert model.col('t', 1) in row('teta2a_1_2_4') and model.col('t', 3) not in row('teta2a_1_2_4')
    assert model.col('t', 3) in row('teta2b_1_2_4')
    teta3 = row('teta3_1_2_4')
    assert teta3[model.col('t', 1)] == teta3[model.col('t', 3)] > 0
