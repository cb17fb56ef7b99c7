import itertools

import numpy as np
import pytest

from rbp.brute import SizeLimitError, solve_exact, solve_exact_capacity, solve_exact_trace
from rbp.lowerbound import generate
from rbp.random_instances import random_graph_instance, random_tree_instance
from rbp.server import inorder_cost, validate_trace

from conftest import line, star


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_star_leaves(n):
    inst = star(4, list(range(1, n + 1)), k=4)
    cost, _ = solve_exact(inst)
    assert cost == 2 * n - 1


def test_single_request():
    cost, trace = solve_exact(line(3, [2], 1, lengths=[1.5, 2.0]))
    assert cost == 3.5
    assert [e[0] for e in trace.events] == ["R", "M", "M", "S"]


def _best_walk(inst):
    targets = set(inst.requests)
    best = np.inf
    for order in itertools.permutations(targets):
        pos, total = inst.start_vertex, 0.0
        for v in order:
            total += inst.distance(pos, v)
            pos = v
        best = min(best, total)
    return best


def test_unbounded_capacity_is_shortest_covering_walk():
    rng = np.random.default_rng(4)
    for _ in range(20):
        inst = random_tree_instance(rng, 6, 6, 1)
        assert solve_exact_capacity(inst, inst.n) == pytest.approx(_best_walk(inst))


def test_capacity_one_is_forced_and_monotone():
    rng = np.random.default_rng(8)
    for _ in range(30):
        inst = random_tree_instance(rng, int(rng.integers(2, 8)), int(rng.integers(1, 9)), 1)
        costs = [solve_exact_capacity(inst, c) for c in range(1, 5)]
        assert costs[0] == pytest.approx(inorder_cost(inst))
        assert all(a >= b - 1e-9 for a, b in zip(costs, costs[1:]))


def test_traces_validate_at_their_capacity():
    rng = np.random.default_rng(9)
    for _ in range(30):
        maker = random_tree_instance if rng.random() < 0.6 else random_graph_instance
        inst = maker(rng, int(rng.integers(2, 8)), int(rng.integers(1, 10)), int(rng.integers(1, 4)))
        cap = int(rng.integers(1, 4))
        cost, trace = solve_exact_trace(inst, cap)
        verdict = validate_trace(inst, trace, cap)
        assert verdict, verdict.reason
        assert verdict.distance == pytest.approx(cost)


def test_line4_instance_capacities():
    inst = generate(2).instance
    assert solve_exact_capacity(inst, 3) == 3
    assert solve_exact_capacity(inst, 2) == 7
    assert solve_exact_capacity(inst, 1) == inorder_cost(inst) == 11


def test_size_limit_refusal():
    inst = line(2, [1] * 15, 1)
    with pytest.raises(SizeLimitError):
        solve_exact(inst)
    assert solve_exact(inst, limit=15)[0] == 1
