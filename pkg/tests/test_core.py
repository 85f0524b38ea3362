from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gossipclock import ProbabilityAssignment, build_operator, generate, spectrum
from gossipclock.core import (
    averaging_matrix,
    check_convergence_conditions,
    edge_weights,
    power_lambda2_classical,
    validate_assignment,
)
from gossipclock.errors import InvalidAssignmentError


def test_uniform_complete_four():
    topo = generate("complete:n=4")
    op = build_operator(topo, ProbabilityAssignment.uniform(topo))
    assert spectrum(op).lambda2 == pytest.approx(2 / 3, abs=1e-12)
    assert check_convergence_conditions(op).passed


def test_edge_activity_sums_to_half():
    topo = generate("symstar:n=3,k=2")
    q = edge_weights(topo, ProbabilityAssignment.uniform(topo))
    assert q.sum() == pytest.approx(0.5)


def test_operator_is_expected_average():
    topo = generate("path:n=3")
    a = ProbabilityAssignment.uniform(topo)
    expected = np.zeros((3, 3))
    for i in range(3):
        for j in range(3):
            if a.transition[i, j] > 0:
                expected += a.clock[i] * a.transition[i, j] * averaging_matrix(i, j, 3)
    assert np.allclose(build_operator(topo, a).matrix, expected)


def test_power_iteration_agrees():
    topo = generate("ccs:n=3,k=2")
    op = build_operator(topo, ProbabilityAssignment.uniform(topo))
    assert power_lambda2_classical(op) == pytest.approx(spectrum(op).lambda2, abs=1e-8)


def test_rejects_non_edge_probability():
    topo = generate("path:n=3")
    trans = np.array([[0, 0.5, 0.5], [0.5, 0, 0.5], [0, 1, 0]])
    with pytest.raises(InvalidAssignmentError):
        validate_assignment(topo, ProbabilityAssignment(np.full(3, 1 / 3), trans))


def test_rejects_bad_clock():
    topo = generate("path:n=3")
    a = ProbabilityAssignment.uniform(topo, clock=np.array([0.5, 0.5, 0.5]))
    with pytest.raises(InvalidAssignmentError):
        validate_assignment(topo, a)


def test_assignment_json_round_trip():
    topo = generate("wheel:n=5")
    a = ProbabilityAssignment.uniform(topo)
    b = ProbabilityAssignment.from_json(a.to_json())
    assert np.array_equal(a.clock, b.clock)
    assert np.array_equal(a.transition, b.transition)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_assignment_spectrum(seed):
    """Random valid assignments: symmetric, doubly stochastic, lambda2 < 1 when connected."""
    rng = np.random.default_rng(seed)
    topo = generate("ccs:n=3,k=2")
    adj = topo.adjacency()
    raw = rng.random(adj.shape) * adj + 1e-3 * adj
    trans = raw / raw.sum(axis=1, keepdims=True)
    clock = rng.dirichlet(np.ones(topo.n_vertices)) * 0.99 + 0.01 / topo.n_vertices
    op = build_operator(topo, ProbabilityAssignment(clock, trans))
    w = op.matrix
    assert np.allclose(w, w.T)
    assert np.allclose(w.sum(axis=1), 1.0)
    assert spectrum(op).lambda2 < 1.0
