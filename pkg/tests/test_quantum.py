from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gossipclock import ProbabilityAssignment, generate, optimize
from gossipclock.errors import SizeGuardError
from gossipclock.quantum import (
    build_quantum_operator,
    expand_density,
    gellmann_basis,
    hilbert_swap,
    induced_components,
    quantum_lambda2,
    random_density,
    reconstruct_density,
    swap_coefficients,
    verify_spectral_collapse,
)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_gellmann_orthogonality(d):
    basis = gellmann_basis(d)
    gram = np.einsum("aij,bji->ab", basis.matrices, basis.matrices)
    assert np.allclose(gram, 2 * np.eye(d * d))


@pytest.mark.parametrize("d, n", [(2, 2), (3, 2), (2, 3)])
def test_expansion_round_trip(d, n):
    rho = random_density(d, n, np.random.default_rng(1))
    state = expand_density(rho, d, n)
    assert state.coeffs.ravel()[0] == pytest.approx(1.0)
    assert np.allclose(reconstruct_density(state), rho, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (3, 2)]))
def test_swap_is_involution_and_matches_hilbert(seed, dn):
    d, n = dn
    rho = random_density(d, n, np.random.default_rng(seed))
    state = expand_density(rho, d, n)
    j, k = 0, n - 1
    twice = swap_coefficients(swap_coefficients(state, j, k), j, k)
    assert np.allclose(twice.coeffs, state.coeffs)
    direct = expand_density(hilbert_swap(rho, d, n, j, k), d, n)
    assert np.allclose(swap_coefficients(state, j, k).coeffs, direct.coeffs, atol=1e-10)


def test_components_partition_the_space():
    comps = induced_components(3, 3)
    covered = sorted(i for c in comps for i in c.indices)
    assert covered == list(range(9**3))


@pytest.mark.parametrize("desc", ["path:n=3", "complete:n=3"])
@pytest.mark.parametrize("d", [2, 3])
def test_collapse_at_optimum(desc, d):
    topo = generate(desc)
    report = verify_spectral_collapse(topo, optimize(topo, "nonuniform").assignment, d)
    assert report.passed, report.violations


def test_quantum_operator_is_symmetric_and_stochastic():
    topo = generate("path:n=3")
    op = build_quantum_operator(topo, ProbabilityAssignment.uniform(topo), 2)
    dense = op.to_dense()
    assert np.allclose(dense, dense.T)
    assert np.allclose(dense.sum(axis=1), 1.0)
    assert quantum_lambda2(op, "power") == pytest.approx(quantum_lambda2(op, "dense"), abs=1e-7)


def test_size_guard():
    with pytest.raises(SizeGuardError):
        build_quantum_operator(generate("star:n=4"), ProbabilityAssignment.uniform(generate("star:n=4")), 4)
