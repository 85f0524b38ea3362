from __future__ import annotations

from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gossipclock import build_operator, generate, optimize, spectrum
from gossipclock.analytic import (
    balance_residual,
    detailed_balance_from_weights,
    solve_ccs2_nonuniform,
    solve_ccs_nonuniform,
    solve_ccs_uniform,
    solve_complete_uniform,
    solve_cycle_uniform,
    solve_lollipop_nonuniform,
    solve_palm_nonuniform,
    solve_path_uniform,
    solve_symstar_nonuniform,
    solve_symstar_uniform,
    solve_two_coupled_uniform,
    solve_wheel,
)
from gossipclock.core import laplacian_lambda2, weighted_laplacian
from gossipclock.errors import InvalidAssignmentError


def _certified(res, tol=1e-9):
    eig = spectrum(build_operator(res.topology, res.assignment)).lambda2
    assert abs(eig - res.lambda2) <= tol
    return res.lambda2


@pytest.mark.parametrize(
    "solver, args, expected",
    [
        (solve_complete_uniform, (4,), 2 / 3),
        (solve_cycle_uniform, (4,), 3 / 4),
        (solve_path_uniform, (4,), 0.9),
        (solve_path_uniform, (2,), 0.0),
        (solve_symstar_uniform, (3, 1), 5 / 6),
    ],
)
def test_known_values(solver, args, expected):
    assert _certified(solver(*args)) == pytest.approx(expected, abs=1e-9)


def test_four_vertex_paw():
    res = solve_lollipop_nonuniform(2, 1)
    r3 = sqrt(3)
    assert _certified(res) == pytest.approx((3 + r3) / (4 + r3), abs=1e-9)


@pytest.mark.parametrize(
    "res",
    [
        solve_symstar_nonuniform(5, 2),
        solve_symstar_uniform(4, 6),
        solve_ccs_uniform(5, 5),
        solve_ccs_nonuniform(3, 1),
        solve_ccs2_nonuniform(3, 2, 1),
        solve_palm_nonuniform(4, 2),
        solve_two_coupled_uniform(2, 3, 2),
        solve_wheel(5, "uniform"),
        solve_wheel(8, "nonuniform"),
    ],
    ids=lambda r: str(r.topology.descriptor()),
)
def test_certificates(res):
    _certified(res)


def test_ccs_five_five_uses_two_interior_hops():
    res = solve_ccs_uniform(5, 5)
    assert res.m == 2
    assert res.lambda2 == pytest.approx(0.9979171, abs=1e-6)


def test_wheel_large_n_is_spokes_only():
    for n in (7, 8, 10):
        for mode in ("uniform", "nonuniform"):
            assert solve_wheel(n, mode).lambda2 == pytest.approx((2 * n - 1) / (2 * n), abs=1e-12)


def test_nonuniform_never_worse():
    for n in range(3, 7):
        for k in range(2, 6):
            assert solve_symstar_nonuniform(n, k).lambda2 <= solve_symstar_uniform(n, k).lambda2 + 1e-12


def test_optimize_relabels_paths():
    for n in (4, 5, 6, 7):
        res = optimize(generate(f"path:n={n}"), "nonuniform")
        assert res.topology.generator == "path"
        _certified(res)


def test_optimize_prism():
    res = optimize(generate("complete:n=2*complete:n=3"))
    assert res.lambda2 == pytest.approx(6 / 7, abs=1e-9)


def test_balance_rejects_wrong_total():
    topo = generate("path:n=3")
    with pytest.raises(InvalidAssignmentError):
        detailed_balance_from_weights(topo, [0.3, 0.3])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["path:n=5", "star:n=5", "ccs:n=3,k=2"]))
def test_detailed_balance_property(seed, desc):
    topo = generate(desc)
    w = np.random.default_rng(seed).random(topo.n_edges)
    w = 0.5 * w / w.sum()
    a = detailed_balance_from_weights(topo, w)
    assert balance_residual(topo, a) <= 1e-12
    lam = spectrum(build_operator(topo, a)).lambda2
    assert lam == pytest.approx(1 - laplacian_lambda2(weighted_laplacian(topo, w)), abs=1e-10)
