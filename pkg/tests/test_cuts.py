"""Separated inequalities: violations, singleton separation, L(Q) and the root cut loop"""

import os
import sys
import itertools

import numpy as np
import pytest

# Python does not consider the current directory to be a package
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))


def tst_root_point(instance, formulation='agg'):
    from thlpu.prep import derive
    from thlpu.network import build_model
    from thlpu.solve import solve
    derived = derive(instance)
    model, variables = build_model(instance, derived, formulation)
    result, point = solve(model.relax())
    assert result.status == 'optimal'
    return model, variables, derived, point


def tst_fractional_point():
    """Five nodes, hand-set usage and flows around hub 3 for origin 1"""
    from thlpu.prep import example1, derive
    from thlpu.network import build_thlpu
    instance = example1(n=5, p=3, q=1)
    model, _ = build_thlpu(instance, derive(instance))
    point = model.zero_point()
    for edge, value in (((0, 2), 0.5), ((1, 2), 0.25), ((2, 4), 0.4)):
        point.set('s', edge, value)
    for arc, value in (((0, 0, 2), 10.), ((0, 1, 2), 30.), ((0, 3, 2), 5.)):
        point.set('r', arc, value)
    point.set('z', (2, 2), 1.)
    point.set('z', (1, 2), 0.5)
    return instance, point


def test_violation_empty_target():
    from thlpu.prep import figure_instance, figure_solution, derive
    from thlpu.network import build_thlpu, encode_agg
    from thlpu.cuts import violation_general
    instance = figure_instance('thlpu')
    assert instance.w[5, 8] == 0
    _, aggvars = build_thlpu(instance, derive(instance))
    for point in (aggvars.model.zero_point(), encode_agg(instance, figure_solution('thlpu'), aggvars)):
        for F in ([], [0], [1, 3, 7], list(range(8))):
            assert violation_general(point, instance, 5, 8, F, [], 'agg') <= 0


def test_violation_integral_points():
    from thlpu.prep import figure_instance, figure_solution, derive
    from thlpu.network import build_model, encode
    from thlpu.cuts import violation_general
    rng = np.random.default_rng(3)
    instance = figure_instance('thlpu')
    derived = derive(instance)
    for formulation in ('agg', 'disagg'):
        _, variables = build_model(instance, derived, formulation)
        point = encode(instance, figure_solution('thlpu'), variables)
        for _ in range(200):
            i, m = rng.choice(10, size=2, replace=False)
            others = [node for node in range(10) if node not in (i, m)]
            J = [node for node in others if rng.random() < 0.4]
            F = [node for node in range(10) if node != m and rng.random() < 0.3]
            assert violation_general(point, instance, i, m, F, J, formulation) <= 1e-9


def test_violation_forced():
    from thlpu.prep import example1, derive
    from thlpu.network import build_thlpu
    from thlpu.cuts import violation_general
    instance = example1(n=6, p=3, q=1)
    model, _ = build_thlpu(instance, derive(instance))
    point = model.zero_point()
    for j in (3, 4, 2):
        point.set('z', (j, 2), 1.)
    violation = violation_general(point, instance, 0, 2, [1], [3, 4], 'agg')
    assert violation == pytest.approx(instance.w[0, 3] + instance.w[0, 4] + instance.w[0, 2])
    assert violation > 0


def test_bad_index_sets():
    from thlpu.cuts import violation_general
    from thlpu.errors import IndexSetError
    instance, point = tst_fractional_point()
    with pytest.raises(IndexSetError):
        violation_general(point, instance, 0, 2, [2], [], 'agg')
    with pytest.raises(IndexSetError):
        violation_general(point, instance, 0, 2, [], [0], 'agg')
    with pytest.raises(IndexSetError):
        violation_general(point, instance, 0, 2, [], [7], 'agg')


def test_l_of_q():
    """Piecewise linear minimum against every subset F of the neighbours of the hub"""
    from thlpu.cuts import l_of_q, point_arrays
    instance, point = tst_fractional_point()
    _, edge_usage, flows = point_arrays(point, instance, 'agg')
    neighbors = instance.neighbors(2)

    def objective(F, Q):
        return sum(Q * edge_usage[k, 2] if k in F else flows[0, k, 2] for k in neighbors)

    for Q in (0., 1., 20., 60., 100., 1e6):
        value, chosen = l_of_q(point, instance, 0, 2, Q, 'agg')
        brute = min(objective(set(F), Q) for size in range(len(neighbors) + 1)
                    for F in itertools.combinations(neighbors, size))
        assert value == pytest.approx(brute)
        assert objective(chosen, Q) == pytest.approx(value)
    assert l_of_q(point, instance, 0, 2, 0., 'agg')[0] == 0
    assert l_of_q(point, instance, 0, 2, 1e6, 'agg')[1] == {3}


def test_most_violated_for_j():
    from thlpu.cuts import most_violated_for_j, violation_general
    instance, point = tst_fractional_point()
    neighbors = instance.neighbors(2)
    for J in ([], [1], [3, 4], [1, 3, 4]):
        chosen, violation = most_violated_for_j(point, instance, 0, 2, J, 'agg')
        brute = max(violation_general(point, instance, 0, 2, F, J, 'agg') for size in range(len(neighbors) + 1)
                    for F in itertools.combinations(neighbors, size))
        assert violation == pytest.approx(brute)
        assert violation_general(point, instance, 0, 2, chosen, J, 'agg') == pytest.approx(violation)


def test_no_flow_no_cut():
    from thlpu.prep import build_instance, derive
    from thlpu.network import build_thlpu
    from thlpu.cuts import separate_singleton
    coords = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 2)]
    instance = build_instance(np.zeros((5, 5)), 3, 1, (0.8, 0.4, 0.2), coords=coords)
    derived = derive(instance)
    model, _ = build_thlpu(instance, derived)
    assert separate_singleton(model.zero_point(), instance, derived, 'agg') == []


def test_singleton_maximality():
    """Chosen k beats every other neighbour of the hub for the same (i, j, m)"""
    pytest.importorskip("highspy")
    from thlpu.prep import example1
    from thlpu.cuts import separate_singleton, violation_general
    instance = example1(p=5, q=2)
    _, _, derived, point = tst_root_point(instance)
    cuts = separate_singleton(point, instance, derived, 'agg')
    assert cuts
    assert len({cut.indices[:3] for cut in cuts}) == len(cuts)
    assert all(first.violation >= second.violation for first, second in zip(cuts[:-1], cuts[1:]))
    for cut in cuts[:50]:
        i, j, m, k = cut.indices
        assert cut.violation_at(point) == pytest.approx(cut.violation, rel=1e-7, abs=1e-7)
        assert violation_general(point, instance, i, m, [k], [j], 'agg') == pytest.approx(cut.violation)
        for other in instance.neighbors(m):
            assert violation_general(point, instance, i, m, [other], [j], 'agg') <= cut.violation + 1e-7


@pytest.mark.parametrize('n', [6, 7])
def test_soundness(n):
    """No cut separated at the root cuts off the exact optimum"""
    pytest.importorskip("highspy")
    from thlpu.prep import example1
    from thlpu.network import encode
    from thlpu.solve import oracle_optimum
    from thlpu.cuts import separate_singleton
    instance = example1(n=n, p=3, q=1)
    optimum, _ = oracle_optimum(instance)
    for formulation in ('agg', 'disagg'):
        _, variables, derived, point = tst_root_point(instance, formulation)
        exact = encode(instance, optimum, variables)
        assert separate_singleton(exact, instance, derived, formulation) == []
        for cut in separate_singleton(point, instance, derived, formulation):
            assert cut.violation_at(exact) <= 1e-6


def test_agg_disagg_consistency():
    """Cuts at a disaggregated point and at its image are the same inequalities"""
    pytest.importorskip("highspy")
    from thlpu.prep import example1
    from thlpu.network import build_thlpu, map_disagg_to_agg
    from thlpu.cuts import separate_singleton
    instance = example1(n=7, p=3, q=1)
    _, disaggvars, derived, point_d = tst_root_point(instance, 'disagg')
    _, aggvars = build_thlpu(instance, derived)
    point_a = map_disagg_to_agg(point_d, disaggvars, aggvars, instance, tol=1e-4)
    cuts_d = separate_singleton(point_d, instance, derived, 'disagg')
    cuts_a = separate_singleton(point_a, instance, derived, 'agg')
    assert [cut.indices for cut in cuts_d] == [cut.indices for cut in cuts_a]
    for cut_d, cut_a in zip(cuts_d, cuts_a):
        assert cut_d.name.startswith('sepd_') and cut_a.name.startswith('sepa_')
        assert cut_d.violation == pytest.approx(cut_a.violation)
        assert cut_a.violation_at(point_a) == pytest.approx(cut_d.violation_at(point_d), abs=1e-6)


def test_cut_pool(tmp_path):
    pytest.importorskip("highspy")
    from thlpu.prep import example1
    from thlpu.cuts import separate_singleton, add_cuts, write_cut_pool, read_cut_pool
    instance = example1(p=5, q=2)
    model, _, derived, point = tst_root_point(instance)
    cuts = separate_singleton(point, instance, derived, 'agg')[:10]
    path = str(tmp_path / 'cuts.json')
    write_cut_pool(cuts, model, path)
    other = read_cut_pool(path, model)
    assert [cut.name for cut in other] == [cut.name for cut in cuts]
    assert other[0].terms == cuts[0].terms

    model = model.copy()
    assert add_cuts(model, cuts) == len(cuts)
    assert add_cuts(model, other) == 0


def test_loop_without_budget():
    from thlpu.prep import example1, derive
    from thlpu.network import build_model
    from thlpu.cuts import CutLoopParams, cut_loop
    instance = example1(n=6, p=3, q=1)
    derived = derive(instance)
    model, _ = build_model(instance, derived)
    strong, stats, cuts = cut_loop(model, instance, derived, 'agg', CutLoopParams(max_cuts_total=0))
    assert strong.num_rows == model.num_rows and strong.finalized
    assert stats['rounds'] == 0 and stats['cuts_added'] == 0 and cuts == []


def test_bad_params():
    from thlpu.cuts import CutLoopParams
    with pytest.raises(AssertionError):
        CutLoopParams(max_lp_rounds=0)
    with pytest.raises(AssertionError):
        CutLoopParams(max_cuts_total=-1)


@pytest.mark.parametrize('formulation', ['agg', 'disagg'])
def test_loop_bounds(formulation):
    pytest.importorskip("highspy")
    from thlpu.prep import example1, derive
    from thlpu.network import build_model
    from thlpu.cuts import cut_loop
    instance = example1(n=7, p=3, q=1)
    derived = derive(instance)
    model, _ = build_model(instance, derived, formulation)
    strong, stats, cuts = cut_loop(model, instance, derived, formulation)
    bounds = stats['bounds']
    assert 1 <= stats['rounds'] == len(bounds) <= 10
    assert all(after >= before - 1e-7 * abs(before) for before, after in zip(bounds[:-1], bounds[1:]))
    assert stats['cuts_added'] == len(cuts) <= 100
    assert strong.num_rows == model.num_rows + stats['cuts_added']
    assert stats['stop'] in ('stall', 'rounds', 'budget', 'no violated cut')


@pytest.mark.slow
def test_loop_improves_worked_example():
    pytest.importorskip("highspy")
    from thlpu.prep import example1, derive
    from thlpu.network import build_model
    from thlpu.cuts import cut_loop
    instance = example1(p=3, q=1)
    derived = derive(instance)
    model, _ = build_model(instance, derived)
    _, stats, _ = cut_loop(model, instance, derived, 'agg')
    assert stats['cuts_added'] > 0
    assert stats['bounds'][-1] > stats['bounds'][0]
