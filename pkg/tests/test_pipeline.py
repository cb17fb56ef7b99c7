import numpy as np
import pytest

from rbp.brute import solve_exact
from rbp.instance import RbpInstance
from rbp.pipeline import StageError, solve_general, solve_tree
from rbp.random_instances import random_tree_instance

from conftest import line


def test_zero_cost_instance():
    inst = line(4, [0, 0, 0, 3, 3, 3], 1)
    sol = solve_tree(inst)
    assert sol.ok
    assert sol.cover_length == 0 and sol.lp1_objective == pytest.approx(0, abs=1e-9)
    assert sol.distance == sol.terminal_path_length == 3
    assert sol.distance <= 9 * solve_exact(sol.instance)[0]


def test_line4_instance(line4_instance):
    sol = solve_tree(line4_instance)
    assert sol.ok
    assert sol.instance.n == 15
    assert sol.terminals.vertices == (1, 2, 3)
    assert sol.peak <= 9


def test_random_small_tree_against_oracle():
    rng = np.random.default_rng(77)
    for _ in range(20):
        inst = random_tree_instance(rng, 8, 6, 1)
        sol = solve_tree(inst)
        opt, _ = solve_exact(sol.instance)
        assert sol.ok
        assert sol.distance <= 9 * opt + 1e-9
        assert sol.peak <= 5
        assert sol.lp1_objective <= opt + 1e-7


def test_real_valued_lengths():
    rng = np.random.default_rng(78)
    for _ in range(20):
        inst = random_tree_instance(rng, 12, 20, int(rng.integers(1, 4)), integer_lengths=False)
        sol = solve_tree(inst)
        assert sol.ok, {c: v for c, v in sol.checks.items() if not v}


def test_general_instance_needs_embedding():
    inst = RbpInstance(3, ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)), (1, 2, 0), 1, 0, is_tree=False)
    with pytest.raises(StageError) as info:
        solve_tree(inst)
    assert info.value.stage == "input"
    sol = solve_general(inst, seed=1)
    assert sol.ok and sol.original.n == 3


def test_stage_error_names_stage():
    err = StageError("lp1", ValueError("boom"))
    assert str(err) == "[lp1] ValueError: boom" and err.stage == "lp1"
