from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gossipclock import ProbabilityAssignment, generate, optimize
from gossipclock.errors import InvalidParameterError
from gossipclock.simulator import (
    SimConfig,
    estimate_averaging_time,
    estimate_decay_rate,
    next_event,
    run,
    trial_rng,
)


def test_next_event_frequencies():
    rng = trial_rng(3, 0)
    rates = np.array([2.0, 1.0, 1.0])
    counts = np.bincount([next_event(rng, rates)[1] for _ in range(20000)], minlength=3) / 20000
    assert counts == pytest.approx([0.5, 0.25, 0.25], abs=0.015)


def test_zero_rates_rejected():
    with pytest.raises(InvalidParameterError):
        next_event(trial_rng(0, 0), np.zeros(3))


def test_trace_is_deterministic(tmp_path):
    topo = generate("cycle:n=5")
    a = ProbabilityAssignment.uniform(topo)
    cfg = SimConfig(11, 500, [1.0, 0, 0, 0, 0])
    first = run(topo, a, cfg).to_csv(tmp_path / "a.csv")
    second = run(topo, a, cfg).to_csv(tmp_path / "b.csv")
    assert first == second
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert first.startswith("tick,time,initiator,partner,error\n")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["path:n=5", "ccs:n=3,k=2", "wheel:n=5"]))
def test_sum_is_conserved(seed, desc):
    topo = generate(desc)
    x0 = np.random.default_rng(seed).normal(size=topo.n_vertices)
    trace = run(topo, ProbabilityAssignment.uniform(topo), SimConfig(seed, 300, x0.tolist()))
    assert abs(trace.final_state.sum() - x0.sum()) <= 1e-12 * max(1.0, np.abs(x0).sum())
    assert np.all(np.diff(trace.times) > 0)
    assert np.all(np.diff(trace.error_curve) <= 1e-12)


@pytest.mark.parametrize("desc", ["complete:n=4", "cycle:n=4", "path:n=4"])
def test_decay_rate_is_spectrally_consistent(desc):
    topo = generate(desc)
    res = optimize(topo)
    rate = estimate_decay_rate(topo, res.assignment, trials=200, ticks=2000, seed=7)
    assert 0.9 * res.lambda2**2 <= rate < 1.0


def test_decay_rate_needs_enough_trials():
    topo = generate("path:n=3")
    with pytest.raises(InvalidParameterError):
        estimate_decay_rate(topo, ProbabilityAssignment.uniform(topo), trials=10)


def test_averaging_time_monotone_and_ordered():
    complete, cycle = generate("complete:n=4"), generate("cycle:n=4")
    eps = [0.01, 0.02, 0.1, 0.5]
    t_complete = [estimate_averaging_time(complete, optimize(complete).assignment, e, seed=1) for e in eps]
    t_cycle = [estimate_averaging_time(cycle, optimize(cycle).assignment, e, seed=1) for e in eps]
    assert t_complete == sorted(t_complete, reverse=True)
    assert t_cycle == sorted(t_cycle, reverse=True)
    assert t_complete[0] < t_cycle[0]


def test_single_edge_averages_in_one_tick():
    topo = generate("complete:n=2")
    assert estimate_averaging_time(topo, ProbabilityAssignment.uniform(topo), 0.5) == 1
