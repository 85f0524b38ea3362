"""Quantum gossip on qudits and its reduction to the classical operator.

A state of ``N`` qudits of dimension ``d`` is expanded in tensor products
of generalized Gell-Mann matrices.  Swapping qudits ``j`` and ``k`` then
just permutes positions ``j`` and ``k`` of the coefficient tuple
``(mu_1, ..., mu_N)``, so the expected quantum update is a permutation
average on a real vector of length ``d^(2N)``.

Coefficient convention: with ``lt_0 = I`` and ``lt_a = lambda_a`` for
``a >= 1``,

    rho = d^(-N) * sum_mu rho_mu * (lt_mu1 x ... x lt_muN),

so the all-zero coefficient is exactly 1 for a unit-trace ``rho``.  At
``d = 2`` this is the usual Bloch (Pauli) expansion.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.sparse as sp

from gossipclock.core import (
    ProbabilityAssignment,
    build_operator,
    edge_weights,
    power_lambda2,
    spectrum,
    validate_assignment,
)
from gossipclock.errors import InvalidParameterError, SizeGuardError
from gossipclock.topology import Topology

__all__ = [
    "MAX_QUANTUM_DIM",
    "DENSE_CHECK_DIM",
    "GellMannBasis",
    "CoefficientState",
    "QuantumGossipOperator",
    "InducedComponent",
    "CollapseReport",
    "gellmann_basis",
    "expand_density",
    "reconstruct_density",
    "swap_coefficients",
    "hilbert_swap",
    "random_density",
    "build_quantum_operator",
    "induced_components",
    "quantum_lambda2",
    "verify_spectral_collapse",
]

#: Largest coefficient-space dimension ``d^(2N)`` accepted.
MAX_QUANTUM_DIM = 10_000
#: Up to this dimension lambda_2 is also computed with a dense eigensolver.
DENSE_CHECK_DIM = 4096


@dataclass(frozen=True)
class GellMannBasis:
    """Hermitian, trace-orthogonal basis with ``tr(l_a l_b) = 2 delta_ab``.

    ``matrices[0]`` is ``sqrt(2/d) I``; then come the symmetric generators,
    the antisymmetric ones and the diagonal ones.
    """

    d: int
    matrices: np.ndarray  # shape (d*d, d, d), complex

    @property
    def size(self) -> int:
        return self.matrices.shape[0]

    def kinds(self) -> list[str]:
        d = self.d
        pairs = d * (d - 1) // 2
        return ["identity"] + ["symmetric"] * pairs + ["antisymmetric"] * pairs + ["diagonal"] * (d - 1)

    def expansion_matrices(self) -> np.ndarray:
        """Basis with the first element replaced by the plain identity."""
        out = self.matrices.copy()
        out[0] = np.eye(self.d)
        return out


def gellmann_basis(d: int) -> GellMannBasis:
    """Generalized Gell-Mann matrices for local dimension ``d``.

    Raises:
        InvalidParameterError: ``d < 2``.
    """
    if d < 2:
        raise InvalidParameterError(f"local dimension must be at least 2, got {d}")
    mats = [np.sqrt(2.0 / d) * np.eye(d, dtype=complex)]
    pairs = list(itertools.combinations(range(d), 2))
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1.0
        mats.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        mats.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag).astype(complex))
    arr = np.array(mats)
    arr.setflags(write=False)
    return GellMannBasis(d, arr)


@dataclass(frozen=True)
class CoefficientState:
    """Real coefficients ``rho_mu`` over tuples in ``{0..d^2-1}^N`` (row-major)."""

    d: int
    n: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=float).copy()
        if c.shape != ((self.d * self.d) ** self.n,):
            raise InvalidParameterError(f"expected {(self.d * self.d) ** self.n} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def tensor(self) -> np.ndarray:
        return self.coeffs.reshape((self.d * self.d,) * self.n)

    def at(self, mu: tuple[int, ...]) -> float:
        return float(self.tensor()[mu])


def _check_qudit_count(n: int) -> None:
    if n < 1:
        raise InvalidParameterError(f"need at least one qudit, got {n}")


def _site_scale(d: int) -> np.ndarray:
    # tr(lt_a lt_a): d for the plain identity, 2 for the generators.
    scale = np.full(d * d, 2.0)
    scale[0] = float(d)
    return scale


def expand_density(rho: np.ndarray, d: int, n: int) -> CoefficientState:
    """Expand an ``N``-qudit density matrix into real coefficients."""
    _check_qudit_count(n)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d**n, d**n):
        raise InvalidParameterError(f"density matrix must be {d**n}x{d**n}")
    lt = gellmann_basis(d).expansion_matrices()
    # tr(rho (x) lt_mu) = sum_{a,b} rho[a, b] prod_i lt_{mu_i}[b_i, a_i]
    a_axes, b_axes, mu_axes = list(range(n)), list(range(n, 2 * n)), list(range(2 * n, 3 * n))
    operands: list[Any] = [rho.reshape((d,) * (2 * n)), a_axes + b_axes]
    for i in range(n):
        operands += [lt, [mu_axes[i], b_axes[i], a_axes[i]]]
    t = np.einsum(*operands, mu_axes, optimize=True)
    scale = _site_scale(d)
    denom = np.ones(1)
    for _ in range(n):
        denom = np.multiply.outer(denom, scale).reshape(-1)
    return CoefficientState(d, n, np.real(t).reshape(-1) * d**n / denom)


def reconstruct_density(state: CoefficientState) -> np.ndarray:
    """Inverse of :func:`expand_density`."""
    d, n = state.d, state.n
    lt = gellmann_basis(d).expansion_matrices()
    rho = np.zeros((d**n, d**n), dtype=complex)
    tensor = state.tensor()
    for mu in itertools.product(range(d * d), repeat=n):
        c = tensor[mu]
        if c == 0.0:
            continue
        op = np.ones((1, 1), dtype=complex)
        for m in mu:
            op = np.kron(op, lt[m])
        rho += c * op
    return rho / d**n


def swap_coefficients(state: CoefficientState, j: int, k: int) -> CoefficientState:
    """Exchange tuple positions ``j`` and ``k``."""
    if not (0 <= j < state.n and 0 <= k < state.n) or j == k:
        raise InvalidParameterError(f"need distinct positions in [0, {state.n}), got {j}, {k}")
    return CoefficientState(state.d, state.n, np.swapaxes(state.tensor(), j, k).reshape(-1))


def hilbert_swap(rho: np.ndarray, d: int, n: int, j: int, k: int) -> np.ndarray:
    """``U rho U^dagger`` for the unitary swapping qudits ``j`` and ``k``."""
    if not (0 <= j < n and 0 <= k < n) or j == k:
        raise InvalidParameterError(f"need distinct qudits in [0, {n}), got {j}, {k}")
    t = np.asarray(rho).reshape((d,) * (2 * n))
    t = np.swapaxes(np.swapaxes(t, j, k), n + j, n + k)
    return t.reshape(d**n, d**n)


def random_density(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Random full-rank state ``A A^dagger / tr`` from a complex Gaussian ``A``."""
    dim = d**n
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


# ---------------------------------------------------------------- operator


def _dimension(d: int, n: int) -> int:
    return (d * d) ** n


def _tuple_permutation(d: int, n: int, j: int, k: int) -> np.ndarray:
    idx = np.arange(_dimension(d, n)).reshape((d * d,) * n)
    return np.swapaxes(idx, j, k).reshape(-1)


@dataclass(frozen=True)
class QuantumGossipOperator:
    """Sparse expected quantum update on the coefficient space."""

    matrix: sp.csr_matrix
    d: int
    n: int
    topology: Topology

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


def build_quantum_operator(topology: Topology, assignment: ProbabilityAssignment, d: int) -> QuantumGossipOperator:
    """``sum_e 2 q_e (I + Pi_e) / 2`` where ``Pi_e`` swaps two tuple positions.

    Raises:
        SizeGuardError: ``d^(2N)`` exceeds :data:`MAX_QUANTUM_DIM`.
    """
    if d < 2:
        raise InvalidParameterError(f"local dimension must be at least 2, got {d}")
    n = topology.n_vertices
    dim = _dimension(d, n)
    if dim > MAX_QUANTUM_DIM:
        raise SizeGuardError(f"coefficient space has {dim} dimensions, limit is {MAX_QUANTUM_DIM}")
    validate_assignment(topology, assignment)
    q = edge_weights(topology, assignment)
    rows = [np.arange(dim)]
    cols = [np.arange(dim)]
    vals = [np.full(dim, q.sum())]
    for (i, j), w in zip(topology.edges, q):
        if w == 0.0:
            continue
        rows.append(np.arange(dim))
        cols.append(_tuple_permutation(d, n, i, j))
        vals.append(np.full(dim, w))
    matrix = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
    ).tocsr()
    matrix.sum_duplicates()
    return QuantumGossipOperator(matrix, d, n, topology)


@dataclass(frozen=True)
class InducedComponent:
    """Tuples sharing one multiset of values; closed under every swap."""

    partition: tuple[int, ...]
    values: tuple[int, ...]  # sorted multiset
    indices: tuple[int, ...]


def induced_components(d: int, n: int) -> list[InducedComponent]:
    """Split the tuple space into swap-closed components.

    Components are sorted by partition (descending) and then by multiset.
    """
    _check_qudit_count(n)
    dim = _dimension(d, n)
    if dim > MAX_QUANTUM_DIM:
        raise SizeGuardError(f"coefficient space has {dim} dimensions, limit is {MAX_QUANTUM_DIM}")
    groups: dict[tuple[int, ...], list[int]] = {}
    for idx, mu in enumerate(itertools.product(range(d * d), repeat=n)):
        groups.setdefault(tuple(sorted(mu)), []).append(idx)
    comps = [
        InducedComponent(tuple(sorted(Counter(key).values(), reverse=True)), key, tuple(members))
        for key, members in groups.items()
    ]
    comps.sort(key=lambda c: (tuple(-p for p in c.partition), c.values))
    return comps


def _indicator_basis(components: list[InducedComponent], dim: int) -> np.ndarray:
    basis = np.zeros((len(components), dim))
    for r, comp in enumerate(components):
        basis[r, list(comp.indices)] = 1.0 / np.sqrt(len(comp.indices))
    return basis


def quantum_lambda2(op: QuantumGossipOperator, method: str = "auto", seed: int = 0) -> float:
    """Largest eigenvalue below the eigenvalue-1 space of component indicators.

    Args:
        op: Quantum operator.
        method: ``"dense"``, ``"power"`` or ``"auto"`` (dense when the
            dimension is at most :data:`DENSE_CHECK_DIM`).
        seed: Start vector seed for power iteration.
    """
    comps = induced_components(op.d, op.n)
    basis = _indicator_basis(comps, op.dimension)
    if method == "auto":
        method = "dense" if op.dimension <= DENSE_CHECK_DIM else "power"
    if method == "dense":
        proj = np.eye(op.dimension) - basis.T @ basis
        m = proj @ op.to_dense() @ proj
        return float(np.linalg.eigvalsh((m + m.T) / 2.0)[-1])
    if method == "power":

        def deflate(x: np.ndarray) -> np.ndarray:
            return x - basis.T @ (basis @ x)

        return power_lambda2(op.matrix.dot, op.dimension, deflate, seed=seed)
    raise InvalidParameterError(f"unknown method {method!r}")


@dataclass(frozen=True)
class CollapseReport:
    """Outcome of :func:`verify_spectral_collapse`.

    ``per_partition`` maps each partition to the largest second eigenvalue
    over its components (``None`` when every component is a single tuple).
    """

    lambda2_quantum: float
    lambda2_classical: float
    per_partition: list[tuple[tuple[int, ...], float | None]]
    tolerance: float
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda2_quantum": self.lambda2_quantum,
            "lambda2_classical": self.lambda2_classical,
            "per_partition": [{"partition": list(p), "lambda2": v} for p, v in self.per_partition],
            "tolerance": self.tolerance,
            "violations": list(self.violations),
            "passed": self.passed,
        }


def verify_spectral_collapse(
    topology: Topology, assignment: ProbabilityAssignment, d: int, tol: float = 1e-9
) -> CollapseReport:
    """Compare quantum and classical second eigenvalues.

    Checks that lambda_2 of the quantum operator equals the classical one
    and that every component with more than one tuple has the same second
    eigenvalue.  Violations are collected in the report, not raised.
    """
    op = build_quantum_operator(topology, assignment, d)
    classical = spectrum(build_operator(topology, assignment)).lambda2
    quantum = quantum_lambda2(op)
    violations: list[str] = []
    if abs(quantum - classical) > tol:
        violations.append(f"quantum lambda2 {quantum:.15g} differs from classical {classical:.15g}")
    if op.dimension <= DENSE_CHECK_DIM and op.dimension > 1:
        power = quantum_lambda2(op, "power")
        if abs(power - quantum) > 1e-7:
            violations.append(f"power iteration {power:.15g} disagrees with dense {quantum:.15g}")
    dense = op.matrix
    best: dict[tuple[int, ...], float | None] = {}
    for comp in induced_components(d, topology.n_vertices):
        best.setdefault(comp.partition, None)
        if len(comp.indices) < 2:
            continue
        idx = np.array(comp.indices)
        block = dense[idx][:, idx].toarray()
        value = float(np.linalg.eigvalsh((block + block.T) / 2.0)[-2])
        if abs(value - classical) > tol:
            violations.append(f"component {comp.values} ({comp.partition}) has lambda2 {value:.15g}")
        prev = best[comp.partition]
        best[comp.partition] = value if prev is None else max(prev, value)
    return CollapseReport(quantum, classical, sorted(best.items(), key=lambda kv: tuple(-p for p in kv[0])), tol, violations)
