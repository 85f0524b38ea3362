"""Gossip probabilities from symmetric edge weights via detailed balance."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import numpy as np

from gossipclock.core import STOCHASTIC_TOL, ProbabilityAssignment
from gossipclock.errors import InvalidAssignmentError
from gossipclock.topology import Topology

__all__ = ["detailed_balance_from_weights", "balance_residual"]


def _weights_vector(topology: Topology, weights: Mapping[tuple[int, int], float] | Sequence[float] | np.ndarray) -> np.ndarray:
    if isinstance(weights, Mapping):
        w = np.zeros(topology.n_edges)
        index = topology.edge_index()
        for (i, j), val in weights.items():
            key = (min(i, j), max(i, j))
            if key not in index:
                raise InvalidAssignmentError(f"weight on non-edge ({i}, {j})")
            w[index[key]] = val
        return w
    w = np.asarray(weights, dtype=float)
    if w.shape != (topology.n_edges,):
        raise InvalidAssignmentError(f"expected {topology.n_edges} weights, got shape {w.shape}")
    return w


def detailed_balance_from_weights(
    topology: Topology,
    weights: Mapping[tuple[int, int], float] | Sequence[float] | np.ndarray,
) -> ProbabilityAssignment:
    """Turn edge weights summing to 1/2 into clocks and transitions.

    ``P_i = sum_j w_ij`` and ``P_ij = w_ij / P_i``, so the resulting edge
    activities equal the weights and ``P_i P_ij = P_j P_ji``.  A vertex whose
    incident weights are all zero gets ``P_i = 0``; its (unused) row is set to
    a uniform choice over its neighbours so the matrix stays row-stochastic.

    Args:
        topology: Graph carrying the weights.
        weights: Either a mapping keyed by edge or a vector in
            ``topology.edges`` order.

    Raises:
        InvalidAssignmentError: negative weights or a total other than 1/2.
    """
    w = _weights_vector(topology, weights)
    if np.any(w < 0):
        raise InvalidAssignmentError("edge weights must be nonnegative")
    if abs(w.sum() - 0.5) > STOCHASTIC_TOL:
        raise InvalidAssignmentError(f"edge weights must total 1/2, got {w.sum():.15g}")
    n = topology.n_vertices
    wmat = np.zeros((n, n))
    for (i, j), val in zip(topology.edges, w):
        wmat[i, j] = wmat[j, i] = val
    clock = wmat.sum(axis=1)
    trans = np.zeros((n, n))
    adj = topology.adjacency()
    for i in range(n):
        if clock[i] > 0:
            trans[i] = wmat[i] / clock[i]
        elif adj[i].any():
            trans[i] = adj[i] / adj[i].sum()
    return ProbabilityAssignment(clock, trans)


def balance_residual(topology: Topology, assignment: ProbabilityAssignment) -> float:
    """``max |P_i P_ij - P_j P_ji|`` over the edges."""
    p, t = assignment.clock, assignment.transition
    return max((abs(p[i] * t[i, j] - p[j] * t[j, i]) for i, j in topology.edges), default=0.0)
