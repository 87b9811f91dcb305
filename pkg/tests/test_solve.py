"""Routing cost of a solution, per-origin flows on the small tree, solver statuses and files"""

import os
import sys

import numpy as np
import pytest

# Python does not consider the current directory to be a package
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))


def tst_square_instance(w):
    from thlpu.prep import build_instance
    coords = [(0, 0), (3, 0), (0, 4), (3, 4)]
    return build_instance(w, 2, 1, (0.8, 0.4, 0.2), coords=coords, name='square')


def test_evaluate_by_hand():
    """One spoke-hub-hub-spoke path and one spoke round trip"""
    from thlpu.solve import Solution, evaluate_solution
    w = np.zeros((4, 4))
    w[2, 3] = 10
    w[2, 2] = 1
    solution = Solution(hubs=(0, 1), tree_edges=[(1, 0)], alloc=(0, 1, 0, 1), upgrades=(0,))
    instance = tst_square_instance(w)
    assert evaluate_solution(instance, solution) == pytest.approx(10 * (4 + 0.4 * 3 + 4) + 1 * (4 + 4))
    assert solution.tree_edges == ((0, 1),)
    assert evaluate_solution(tst_square_instance(np.zeros((4, 4))), solution) == 0


def test_tier_of_edge():
    from thlpu.solve import edge_tier, tier_cost
    instance = tst_square_instance(np.ones((4, 4)))
    upgrades = {0, 3}
    assert [edge_tier(1, 2, upgrades), edge_tier(1, 0, upgrades), edge_tier(0, 3, upgrades)] == [0, 1, 2]
    # |(3,0) - (0,4)| = 5
    assert tier_cost(instance, 1, 2, upgrades) == pytest.approx(0.8 * 5)
    assert tier_cost(instance, 2, 3, upgrades) == pytest.approx(0.4 * 3)
    assert tier_cost(instance, 0, 3, upgrades) == pytest.approx(0.2 * 5)


def test_worked_example_flows():
    """Origin 6 routed on the hub network with upgraded hubs 7 and 9"""
    from thlpu.prep import figure_instance, figure_solution
    from thlpu.solve import flow_decomposition
    instance = figure_instance('thlpu')
    solution = figure_solution('thlpu')
    flows = flow_decomposition(instance, solution, 5)
    assert flows == {(1, 8): 3410, (8, 6): 2631, (6, 0): 673, (6, 2): 922}


def test_flows_leave_the_root():
    from thlpu.prep import figure_instance, figure_solution, derive
    from thlpu.solve import flow_decomposition
    instance = figure_instance('thlpu')
    solution = figure_solution('thlpu')
    derived = derive(instance)
    for i in range(instance.n):
        root = solution.alloc[i]
        flows = flow_decomposition(instance, solution, i)
        local = sum(instance.w[i, j] for j in range(instance.n) if solution.alloc[j] == root)
        assert sum(value for (k, _), value in flows.items() if k == root) == derived.O[i] - local
        assert all(k != m and (min(k, m), max(k, m)) in solution.tree_edges for k, m in flows)


def test_local_demand_has_no_flow():
    from thlpu.prep import Instance, figure_instance, figure_solution
    from thlpu.solve import flow_decomposition
    instance = figure_instance('thlpu')
    w = np.array(instance.w)
    w[3] = 0
    w[3, [3, 4, 8]] = 5  # node 4 only ships inside the group of hub 9
    local = Instance(w, instance.d, instance.c, instance.c_prime, instance.c_dprime, 5, 2)
    assert all(value == 0 for value in flow_decomposition(local, figure_solution('thlpu'), 3).values())


def test_invalid_solutions():
    from thlpu.prep import figure_instance, figure_solution
    from thlpu.solve import Solution, evaluate_solution
    from thlpu.errors import SolutionError
    instance = figure_instance('thlpu')
    good = figure_solution('thlpu')
    evaluate_solution(instance, good)
    bad = [
        Solution(good.hubs[:4], good.tree_edges[:3], good.alloc, good.upgrades[:1]),
        Solution(good.hubs, good.tree_edges, good.alloc, good.upgrades[:1]),
        Solution(good.hubs, good.tree_edges, good.alloc, (good.upgrades[0], 3)),
        Solution(good.hubs, good.tree_edges[:3] + ((0, 2),), good.alloc, good.upgrades),
        Solution(good.hubs, good.tree_edges, (4,) + good.alloc[1:], good.upgrades),
        Solution(good.hubs, good.tree_edges, good.alloc[:9], good.upgrades),
    ]
    for solution in bad:
        with pytest.raises(SolutionError):
            evaluate_solution(instance, solution)


def test_solution_file(tmp_path):
    from thlpu.prep import figure_instance, figure_solution
    from thlpu.solve import evaluate_solution, write_solution, read_solution, SolveResult
    from thlpu.utils import open_json
    instance = figure_instance('thlpu')
    solution = figure_solution('thlpu')
    objective = evaluate_solution(instance, solution)
    path = str(tmp_path / 'solution.json')
    write_solution(solution, path, objective=objective, result=SolveResult('optimal', objective, objective))
    other, value = read_solution(path)
    assert other == solution and value == objective
    dic_solution = open_json(path)
    assert dic_solution['hubs'] == [1, 2, 3, 7, 9]
    assert dic_solution['alloc']['6'] == 2
    assert dic_solution['result']['gap'] == 0


def test_result_gap():
    from thlpu.solve import SolveResult
    assert SolveResult('optimal', 100., 90.).gap() == pytest.approx(0.1)
    assert SolveResult('feasible-time-limit', 100., None, limit_hit=True).gap() is None
    assert SolveResult('error', limit_hit=True).gap() is None
    assert not SolveResult('infeasible').has_incumbent
    with pytest.raises(AssertionError):
        SolveResult('solved')


def test_time_limit():
    """A tiny time limit never yields a claimed optimum"""
    pytest.importorskip("highspy")
    from thlpu.prep import example1, derive
    from thlpu.network import build_model
    from thlpu.solve import solve
    instance = example1()
    model, _ = build_model(instance, derive(instance), 'disagg')
    result, point = solve(model, time_limit_s=0.001)
    assert result.status in ('feasible-time-limit', 'error')
    assert result.limit_hit
    assert (point is None) == (result.status == 'error')


@pytest.mark.slow
def test_worked_example_disaggregated():
    pytest.importorskip("highspy")
    from thlpu.prep import figure_instance, figure_solution, derive
    from thlpu.network import build_model, decode
    from thlpu.solve import solve, evaluate_solution
    instance = figure_instance('thlpu')
    model, variables = build_model(instance, derive(instance), 'disagg')
    result, point = solve(model, time_limit_s=600)
    assert result.status == 'optimal'
    expected = evaluate_solution(instance, figure_solution('thlpu'))
    assert result.objective == pytest.approx(expected, rel=1e-6)
    assert evaluate_solution(instance, decode(point, variables, instance)) == pytest.approx(expected, rel=1e-6)
