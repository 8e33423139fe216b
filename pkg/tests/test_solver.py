from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paraselect.ilp_model import ModelConfig, assemble_model
from paraselect.solver import (
    OracleLimitError,
    Status,
    branching_order,
    check_feasibility,
    enumerate_feasible_bruteforce,
    solve_branch_and_bound,
    solve_bruteforce,
)
from paraselect.synthetic import random_model
from paraselect.text_metrics import MetricsSummary

from conftest import P11, P21, P31, P32


@pytest.mark.parametrize(
    "chosen,ok",
    [([P32], True), ([P11, P21, P32], True), ([], False), ([P31, P32], False), ([P21, P32], True)],
)
def test_check_feasibility(golden_model, chosen, ok):
    assert check_feasibility(golden_model, chosen) is ok


def test_check_feasibility_unknown_variable(golden_model):
    with pytest.raises(KeyError):
        check_feasibility(golden_model, [(9, 9)])


def test_golden_feasible_sets(golden_model):
    assert set(enumerate_feasible_bruteforce(golden_model)) == {(P32,), (P21, P32), (P11, P21, P32)}


def test_bruteforce_agrees_with_direct_check(golden_model):
    import itertools

    direct = []
    for r in range(5):
        for combo in itertools.combinations(golden_model.variables, r):
            if check_feasibility(golden_model, combo):
                direct.append(combo)
    assert sorted(direct) == enumerate_feasible_bruteforce(golden_model)


def test_only_adders_with_k1_zero():
    base = MetricsSummary(W=20, S=2, F=10)
    deltas = {(1, 1): (1, 2, 0), (2, 1): (0, 3, 1)}
    m = assemble_model(base, deltas, {k: 1 for k in deltas}, ModelConfig(0, 1000, 0))
    assert enumerate_feasible_bruteforce(m) == [()]
    sol = solve_branch_and_bound(m)
    assert sol.status is Status.OPTIMAL and sol.assignment == () and sol.z == 0


def test_empty_model():
    m = assemble_model(MetricsSummary(10, 1, 5), {}, {}, ModelConfig(0, 100, 0))
    assert enumerate_feasible_bruteforce(m) == [()]
    assert solve_branch_and_bound(m).assignment == ()


def test_golden_optimum(golden_model):
    sol = solve_branch_and_bound(golden_model)
    assert sol.status is Status.OPTIMAL
    assert sol.selected == {P32}
    assert sol.z == golden_model.objective[P32]
    assert check_feasibility(golden_model, sol.assignment)


def test_golden_infeasible_below_min_avg(golden_model):
    m = golden_model.with_bound("k2", 5)
    assert solve_branch_and_bound(m).status is Status.INFEASIBLE
    assert enumerate_feasible_bruteforce(m) == []


def test_branching_order(golden_model):
    assert branching_order(golden_model) == [P21, P31, P32, P11]


def test_oracle_limit(rng):
    m = random_model(rng, 6)
    with pytest.raises(OracleLimitError):
        enumerate_feasible_bruteforce(m, limit=5)


def _same(a, b):
    return (a.status, a.z, a.assignment) == (b.status, b.z, b.assignment)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 12), st.booleans(), st.booleans())
def test_oracle_equivalence(seed, n, integer_costs, exclusive):
    rng = np.random.default_rng(seed)
    m = random_model(rng, n, integer_costs=integer_costs)
    if not exclusive:
        c = m.config
        m = assemble_model(m.base_metrics, m.deltas, m.objective, ModelConfig(c.k1, c.k2, c.k3, False))
    bb = solve_branch_and_bound(m)
    assert _same(bb, solve_bruteforce(m))
    assert _same(bb, solve_branch_and_bound(m, warm_start=False))
    assert bb.stats.nodes_explored <= bb.stats.full_space
    if bb.optimal:
        assert check_feasibility(m, bb.assignment)
        assert bb.z == m.z(bb.assignment)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.fractions(min_value=Fraction(1, 20), max_value=20))
def test_cost_scaling_keeps_argmin(seed, factor):
    m = random_model(np.random.default_rng(seed), 10)
    scaled = m.with_costs({k: c * factor for k, c in m.objective.items()})
    a, b = solve_branch_and_bound(m), solve_branch_and_bound(scaled)
    assert a.assignment == b.assignment and a.status == b.status
    if a.optimal:
        assert b.z == a.z * factor


@pytest.mark.parametrize("threads", [2, 3, 8])
def test_threads_do_not_change_answer(rng, threads):
    for _ in range(15):
        m = random_model(rng, int(rng.integers(0, 16)))
        assert _same(solve_branch_and_bound(m), solve_branch_and_bound(m, threads=threads))


def test_stats_invariant(rng):
    m = random_model(rng, 19, k1=-3)
    sol = solve_branch_and_bound(m)
    assert sol.stats.full_space == 2**19
    assert sol.stats.nodes_explored < 2**19
