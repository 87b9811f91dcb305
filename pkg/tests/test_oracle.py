"""Exhaustive oracle: tree enumeration, budget, agreement with both MILP formulations"""

import os
import sys
import math

import pytest

# Python does not consider the current directory to be a package
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

SMALL_CASES = [(n, p, q) for n in (6, 7) for p, q in ((3, 1), (3, 2), (4, 1), (4, 2))]


def test_prufer_trees():
    from thlpu.utils import prufer_trees, is_spanning_tree
    for labels, count in (((2, 5), 1), ((1, 4, 6), 3), ((0, 3, 5, 9), 16), (tuple(range(5)), 125)):
        trees = list(prufer_trees(labels))
        assert len(trees) == len(set(trees)) == count
        assert all(is_spanning_tree(labels, tree) for tree in trees)


def test_tree_helpers():
    from thlpu.utils import tree_paths, oriented_tree, is_spanning_tree
    edges = [(0, 6), (6, 8), (1, 8), (2, 6)]
    nodes = (0, 1, 2, 6, 8)
    assert tree_paths(nodes, edges)[1, 0] == [(1, 8), (6, 8), (0, 6)]
    assert dict(oriented_tree(nodes, edges, 1)) == {(1, 8): {0, 2, 6, 8}, (8, 6): {0, 2, 6}, (6, 0): {0},
                                                     (6, 2): {2}}
    assert not is_spanning_tree(nodes, edges[:3])
    assert not is_spanning_tree(nodes, edges + [(0, 2)])


def test_enumeration_size():
    from thlpu.solve import enumeration_size
    assert enumeration_size(6, 2, 1) == math.comb(6, 2) * 2 * 2 ** 4
    assert enumeration_size(10, 3, 1) == 120 * 3 * 3 * 3 ** 7


def test_budget():
    from thlpu.prep import example1
    from thlpu.solve import oracle_optimum
    from thlpu.errors import BudgetError
    with pytest.raises(BudgetError):
        oracle_optimum(example1(), max_evaluations=1e6)


def test_oracle_is_a_solution():
    from thlpu.prep import example1
    from thlpu.solve import oracle_optimum, evaluate_solution
    instance = example1(n=6, p=2, q=1)
    solution, objective = oracle_optimum(instance)
    solution.validate(instance)
    assert len(solution.tree_edges) == 1
    assert objective == evaluate_solution(instance, solution)
    assert oracle_optimum(instance) == (solution, objective)


def test_workers_agree():
    from thlpu.prep import example1
    from thlpu.solve import oracle_optimum
    instance = example1(n=7, p=3, q=1)
    assert oracle_optimum(instance, workers=2) == oracle_optimum(instance)


def test_more_upgrades_never_hurt():
    from thlpu.prep import example1
    from thlpu.solve import oracle_optimum
    instance = example1(n=7, p=4, q=1)
    objectives = [oracle_optimum(instance.with_params(q=q))[1] for q in (1, 2, 3)]
    assert objectives[0] >= objectives[1] - 1e-9 and objectives[1] >= objectives[2] - 1e-9


def test_sparse_graph():
    """Allocations and tree edges restricted to the edge set"""
    from thlpu.prep import Instance, example1
    from thlpu.solve import oracle_optimum
    edges = [(k, m) for k in range(6) for m in range(k + 1, 6) if m - k <= 2]
    dense = example1(n=6, p=3, q=1)
    instance = Instance(dense.w, dense.d, dense.c, dense.c_prime, dense.c_dprime, 3, 1, edges=edges)
    solution, _ = oracle_optimum(instance)
    assert all(instance.has_edge(k, m) for k, m in solution.tree_edges)
    assert all(instance.can_allocate(i, k) for i, k in enumerate(solution.alloc))


def tst_agreement(instance):
    from thlpu.prep import derive
    from thlpu.network import build_model
    from thlpu.solve import oracle_optimum, solve
    _, objective = oracle_optimum(instance)
    derived = derive(instance)
    for formulation in ('agg', 'disagg'):
        model, _ = build_model(instance, derived, formulation)
        result, _ = solve(model, time_limit_s=600)
        assert result.status == 'optimal'
        assert result.objective == pytest.approx(objective, rel=1e-6)


@pytest.mark.parametrize('n, p, q', SMALL_CASES)
def test_oracle_matches_milp(n, p, q):
    pytest.importorskip("highspy")
    from thlpu.prep import example1
    tst_agreement(example1(n=n, p=p, q=q))


@pytest.mark.slow
@pytest.mark.parametrize('n, p, q', [(8, 3, 1), (8, 3, 2), (8, 4, 1), (8, 4, 2), (10, 3, 1), (10, 3, 2)])
def test_oracle_matches_milp_large(n, p, q):
    pytest.importorskip("highspy")
    from thlpu.prep import example1
    tst_agreement(example1(n=n, p=p, q=q))


def test_sparse_oracle_matches_milp():
    pytest.importorskip("highspy")
    from thlpu.prep import Instance, example1
    edges = [(k, m) for k in range(7) for m in range(k + 1, 7) if m - k <= 3]
    dense = example1(n=7, p=3, q=1)
    tst_agreement(Instance(dense.w, dense.d, dense.c, dense.c_prime, dense.c_dprime, 3, 1, edges=edges))
