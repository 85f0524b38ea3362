from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gossipclock import ProbabilityAssignment, generate, optimize
from gossipclock.oracle import OrbitParameterization, evaluate, exhaustive_grid, local_search


@pytest.mark.parametrize(
    "desc, mode, dof",
    [("cycle:n=4", "uniform", 0), ("complete:n=4", "uniform", 0), ("wheel:n=6", "uniform", 1), ("symstar:n=3,k=3", "uniform", 2)],
)
def test_degrees_of_freedom(desc, mode, dof):
    assert OrbitParameterization(generate(desc), mode).degrees_of_freedom == dof


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["ccs:n=3,k=2", "path:n=5", "wheel:n=6"]), st.sampled_from(["uniform", "nonuniform"]))
def test_projection_idempotent(seed, desc, mode):
    param = OrbitParameterization(generate(desc), mode)
    theta = np.random.default_rng(seed).normal(size=param.size)
    once = param.project(theta)
    assert param.is_feasible(once)
    assert np.allclose(param.project(once), once, atol=1e-14)


def test_expand_inverts_from_assignment():
    topo = generate("symstar:n=3,k=2")
    param = OrbitParameterization(topo, "nonuniform")
    res = optimize(topo, "nonuniform")
    theta = param.from_assignment(res.assignment)
    assert param.lambda2(theta) == pytest.approx(res.lambda2, abs=1e-12)


def test_local_search_trace_nonincreasing():
    topo = generate("ccs:n=3,k=2")
    res = local_search(topo, "uniform", ProbabilityAssignment.uniform(topo), budget=5000)
    trace = res.diagnostics["trace"]
    assert all(b <= a + 1e-15 for a, b in zip(trace, trace[1:]))
    assert res.mode == "numeric"
    assert res.lambda2 <= evaluate(topo, ProbabilityAssignment.uniform(topo)) + 1e-15


def test_local_search_cannot_beat_closed_form():
    topo = generate("symstar:n=4,k=3")
    res = optimize(topo)
    assert res.lambda2 - local_search(topo, "uniform", res.assignment, budget=5000).lambda2 < 1e-9


def test_custom_graph_goes_numeric():
    from gossipclock.topology import Topology

    topo = Topology.from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
    assert optimize(topo).mode == "numeric"


def test_grid_on_cycle():
    res = exhaustive_grid(generate("cycle:n=4"), "uniform", 1e-3)
    assert res.lambda2 == pytest.approx(0.75, abs=1e-12)
