"""Probability assignments, the expected gossip operator and its spectrum.

A tick of the merged Poisson clock belongs to vertex ``i`` with probability
``clock[i]``; that vertex then averages with neighbour ``j`` with probability
``transition[i, j]``.  The expected one-tick update is

    W_bar = I - L(q),    q_ij = (P_i P_ij + P_j P_ji) / 2,

where ``L(q)`` is the weighted Laplacian.  Its second-largest eigenvalue
governs the asymptotic convergence rate.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from gossipclock.errors import InvalidAssignmentError, InvalidParameterError
from gossipclock.topology import Topology

__all__ = [
    "STOCHASTIC_TOL",
    "SPECTRAL_TOL",
    "ProbabilityAssignment",
    "GossipOperator",
    "Spectrum",
    "ConvergenceReport",
    "averaging_matrix",
    "edge_weights",
    "weighted_laplacian",
    "build_operator",
    "spectrum",
    "laplacian_lambda2",
    "power_lambda2",
    "power_lambda2_classical",
    "check_convergence_conditions",
    "validate_assignment",
]

#: Tolerance for clock sums and transition row sums.
STOCHASTIC_TOL = 1e-12
#: Tolerance for spectral identities (eigenvalue 1, spectrum range, ...).
SPECTRAL_TOL = 1e-10


@dataclass(frozen=True)
class ProbabilityAssignment:
    """Clock distribution plus row-stochastic neighbour-selection matrix.

    Attributes:
        clock: Length-N vector of per-tick ownership probabilities.
        transition: Dense N x N matrix, zero off the edge set.
    """

    clock: np.ndarray
    transition: np.ndarray

    def __post_init__(self) -> None:
        clock = np.array(self.clock, dtype=float)
        trans = np.array(self.transition, dtype=float)
        if clock.ndim != 1 or trans.shape != (clock.size, clock.size):
            raise InvalidAssignmentError(
                f"shape mismatch: clock {clock.shape}, transition {trans.shape}"
            )
        clock.setflags(write=False)
        trans.setflags(write=False)
        object.__setattr__(self, "clock", clock)
        object.__setattr__(self, "transition", trans)

    @property
    def n(self) -> int:
        return int(self.clock.size)

    # -- constructors -------------------------------------------------

    @classmethod
    def from_entries(
        cls,
        topology: Topology,
        clock: np.ndarray | list[float],
        entries: Mapping[tuple[int, int], float],
    ) -> ProbabilityAssignment:
        """Build from ``{(i, j): P_ij}``; unspecified directed edges get 0."""
        n = topology.n_vertices
        trans = np.zeros((n, n))
        for (i, j), p in entries.items():
            if not topology.has_edge(i, j):
                raise InvalidAssignmentError(f"({i}, {j}) is not an edge")
            trans[i, j] = p
        return cls(np.asarray(clock, dtype=float), trans)

    @classmethod
    def uniform(cls, topology: Topology, clock: np.ndarray | None = None) -> ProbabilityAssignment:
        """Uniform rows over neighbours; uniform clocks unless ``clock`` is given."""
        n = topology.n_vertices
        adj = topology.adjacency()
        deg = adj.sum(axis=1, keepdims=True)
        trans = np.divide(adj, deg, out=np.zeros_like(adj), where=deg > 0)
        if clock is None:
            clock = np.full(n, 1.0 / n)
        return cls(np.asarray(clock, dtype=float), trans)

    # -- serialization ------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        rows, cols = np.nonzero(self.transition)
        return {
            "clock": [float(x) for x in self.clock],
            "transition": {f"{i}-{j}": float(self.transition[i, j]) for i, j in zip(rows, cols)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ProbabilityAssignment:
        clock = np.asarray(data["clock"], dtype=float)
        trans = np.zeros((clock.size, clock.size))
        for key, p in data.get("transition", {}).items():
            i, j = (int(t) for t in key.split("-"))
            trans[i, j] = float(p)
        return cls(clock, trans)

    @classmethod
    def from_json(cls, text: str) -> ProbabilityAssignment:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class GossipOperator:
    """Expected gossip operator ``W_bar`` with its symmetric edge activities.

    Attributes:
        matrix: Dense symmetric N x N matrix ``I - L(q)``.
        q: Edge activity per edge of ``topology.edges`` (same order).
        topology: The underlying graph.
    """

    matrix: np.ndarray
    q: np.ndarray
    topology: Topology = field(repr=False)

    def q_map(self) -> dict[tuple[int, int], float]:
        return {e: float(w) for e, w in zip(self.topology.edges, self.q)}


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted in descending order."""

    eigenvalues: np.ndarray

    @property
    def lambda2(self) -> float:
        return float(self.eigenvalues[1]) if self.eigenvalues.size > 1 else 0.0

    @property
    def gap(self) -> float:
        return 1.0 - self.lambda2

    def to_dict(self) -> dict[str, Any]:
        return {"eigenvalues": [float(x) for x in self.eigenvalues], "lambda2": self.lambda2}


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of the necessary convergence conditions.

    ``right_residual`` measures ``max |W 1 - 1|``, ``left_residual`` measures
    ``max |1^T W - 1^T|`` and ``radius`` is the spectral radius of
    ``W - 11^T/N``.
    """

    right_residual: float
    left_residual: float
    radius: float
    tolerance: float = SPECTRAL_TOL

    @property
    def right_ok(self) -> bool:
        return self.right_residual <= self.tolerance

    @property
    def left_ok(self) -> bool:
        return self.left_residual <= self.tolerance

    @property
    def radius_ok(self) -> bool:
        return self.radius < 1.0 - self.tolerance

    @property
    def passed(self) -> bool:
        return self.right_ok and self.left_ok and self.radius_ok

    def to_dict(self) -> dict[str, Any]:
        return {
            "right_eigenvector": {"residual": self.right_residual, "ok": self.right_ok},
            "left_eigenvector": {"residual": self.left_residual, "ok": self.left_ok},
            "spectral_radius": {"value": self.radius, "ok": self.radius_ok},
            "passed": self.passed,
        }


def averaging_matrix(i: int, j: int, n: int) -> np.ndarray:
    """Matrix that replaces entries ``i`` and ``j`` of a vector by their mean.

    Raises:
        InvalidParameterError: if ``i == j`` or an index is out of range.
    """
    if not (0 <= i < n and 0 <= j < n):
        raise InvalidParameterError(f"indices ({i}, {j}) out of range for n={n}")
    if i == j:
        raise InvalidParameterError("averaging needs two distinct agents")
    d = np.zeros(n)
    d[i], d[j] = 1.0, -1.0
    return np.eye(n) - np.outer(d, d) / 2.0


def validate_assignment(topology: Topology, assignment: ProbabilityAssignment) -> None:
    """Raise :class:`InvalidAssignmentError` unless the assignment is valid.

    Valid means nonnegative clocks summing to one, transitions supported on
    the edges, in ``[0, 1]``, and rows summing to one for every vertex that
    has at least one neighbour.
    """
    n = topology.n_vertices
    if assignment.n != n:
        raise InvalidAssignmentError(f"assignment has {assignment.n} vertices, topology has {n}")
    clock, trans = assignment.clock, assignment.transition
    if not (np.all(np.isfinite(clock)) and np.all(np.isfinite(trans))):
        raise InvalidAssignmentError("non-finite probability")
    if np.any(clock < -STOCHASTIC_TOL):
        raise InvalidAssignmentError("negative clock probability")
    if abs(clock.sum() - 1.0) > STOCHASTIC_TOL:
        raise InvalidAssignmentError(f"clock sums to {clock.sum():.15g}, expected 1")
    adj = topology.adjacency() > 0
    if np.any(trans[~adj] != 0.0):
        raise InvalidAssignmentError("transition probability on a non-edge")
    if np.any(trans < -STOCHASTIC_TOL) or np.any(trans > 1.0 + STOCHASTIC_TOL):
        raise InvalidAssignmentError("transition probability outside [0, 1]")
    rows = trans.sum(axis=1)
    has_nbr = adj.any(axis=1)
    bad = np.abs(rows - 1.0) > STOCHASTIC_TOL
    if np.any(bad & has_nbr):
        v = int(np.flatnonzero(bad & has_nbr)[0])
        raise InvalidAssignmentError(f"row {v} sums to {rows[v]:.15g}, expected 1")
    if np.any(clock[~has_nbr] > STOCHASTIC_TOL):
        raise InvalidAssignmentError("isolated vertex with positive clock probability")


def edge_weights(topology: Topology, assignment: ProbabilityAssignment) -> np.ndarray:
    """Return ``q_ij = (P_i P_ij + P_j P_ji) / 2`` for each edge in order."""
    p, t = assignment.clock, assignment.transition
    return np.array([(p[i] * t[i, j] + p[j] * t[j, i]) / 2.0 for i, j in topology.edges])


def weighted_laplacian(topology: Topology, q: np.ndarray) -> np.ndarray:
    """Laplacian ``sum_e q_e (e_i - e_j)(e_i - e_j)^T``."""
    n = topology.n_vertices
    lap = np.zeros((n, n))
    for (i, j), w in zip(topology.edges, q):
        lap[i, i] += w
        lap[j, j] += w
        lap[i, j] -= w
        lap[j, i] -= w
    return lap


def build_operator(topology: Topology, assignment: ProbabilityAssignment) -> GossipOperator:
    """Assemble ``W_bar = I - L(q)`` after validating the assignment."""
    validate_assignment(topology, assignment)
    q = edge_weights(topology, assignment)
    matrix = np.eye(topology.n_vertices) - weighted_laplacian(topology, q)
    q.setflags(write=False)
    matrix.setflags(write=False)
    return GossipOperator(matrix=matrix, q=q, topology=topology)


def _as_matrix(op: GossipOperator | np.ndarray) -> np.ndarray:
    return op.matrix if isinstance(op, GossipOperator) else np.asarray(op, dtype=float)


def spectrum(op: GossipOperator | np.ndarray) -> Spectrum:
    """Full spectrum via LAPACK's symmetric (tridiagonal-reduction) solver.

    Raises:
        InvalidParameterError: if the matrix is asymmetric beyond 1e-9.
    """
    m = _as_matrix(op)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidParameterError("operator must be square")
    if m.size and np.max(np.abs(m - m.T)) > 1e-9:
        raise InvalidParameterError("operator is not symmetric")
    vals = np.linalg.eigvalsh(m)[::-1].copy()
    vals.setflags(write=False)
    return Spectrum(vals)


def laplacian_lambda2(lap: np.ndarray) -> float:
    """Second-smallest eigenvalue of a Laplacian (algebraic connectivity)."""
    vals = np.linalg.eigvalsh(lap)
    return float(vals[1]) if vals.size > 1 else 0.0


def power_lambda2(
    matvec: Callable[[np.ndarray], np.ndarray],
    dim: int,
    deflate: Callable[[np.ndarray], np.ndarray],
    *,
    seed: int = 0,
    tol: float = 1e-13,
    max_iter: int = 200_000,
) -> float:
    """Largest eigenvalue of a PSD operator restricted to a deflated subspace.

    ``deflate`` must project onto the orthogonal complement of the known
    eigenvalue-1 eigenspace.  For a doubly stochastic symmetric operator with
    spectrum in ``[0, 1]`` this returns lambda_2.  Convergence is declared
    when successive Rayleigh quotients differ by less than ``tol``.
    """
    rng = np.random.default_rng(seed)
    x = deflate(rng.standard_normal(dim))
    norm = np.linalg.norm(x)
    if norm == 0.0:
        return 0.0
    x /= norm
    prev = np.inf
    for _ in range(max_iter):
        y = deflate(matvec(x))
        rq = float(x @ y)
        norm = np.linalg.norm(y)
        if norm < 1e-300:
            return 0.0
        x = y / norm
        if abs(rq - prev) < tol:
            return rq
        prev = rq
    return prev


def _deflate_constant(x: np.ndarray) -> np.ndarray:
    return x - x.mean()


def power_lambda2_classical(op: GossipOperator | np.ndarray, **kwargs: Any) -> float:
    """Power iteration on ``W_bar - 11^T/N``; independent check of :func:`spectrum`."""
    m = _as_matrix(op)
    return power_lambda2(lambda v: m @ v, m.shape[0], _deflate_constant, **kwargs)


def check_convergence_conditions(op: GossipOperator | np.ndarray) -> ConvergenceReport:
    """Evaluate the three necessary conditions for consensus.

    Never raises for a square matrix: failures are reported in the result.
    """
    m = _as_matrix(op)
    n = m.shape[0]
    ones = np.ones(n)
    right = float(np.max(np.abs(m @ ones - ones))) if n else 0.0
    left = float(np.max(np.abs(ones @ m - ones))) if n else 0.0
    shifted = m - np.outer(ones, ones) / n
    radius = float(np.max(np.abs(np.linalg.eigvals(shifted)))) if n else 0.0
    return ConvergenceReport(right_residual=right, left_residual=left, radius=radius)

