"""Closed forms when clock probabilities are optimized as well.

In every family handled here the optimal transitions are "all inward":
each vertex of a tail always averages with its neighbour one step closer
to the center.  The operator then becomes a weighted path (or star of paths)
whose edge activities equal half the clock probability of the outer
endpoint, and the clocks are chosen to equalize the relevant modes.
"""

from __future__ import annotations

from math import sqrt

import numpy as np

from gossipclock.analytic.result import OptimizationResult, certify
from gossipclock.core import ProbabilityAssignment
from gossipclock.errors import InvalidParameterError
from gossipclock.topology import Topology, generate

__all__ = [
    "solve_symstar_nonuniform",
    "solve_ccs_nonuniform",
    "solve_ccs2_nonuniform",
    "solve_palm_nonuniform",
    "solve_lollipop_nonuniform",
]

MODE = "nonuniform-clock"


def solve_symstar_nonuniform(n: int, k: int, p0: float = 0.0) -> OptimizationResult:
    """Symmetric star with optimized clocks.

    ``p0`` is the center's clock probability.  Any value in ``[0, 3/(2k+1))``
    is optimal; the first-ring vertices give up ``p0/n`` each, so the clock
    vector still sums to one.
    """
    if n < 2 or k < 1:
        raise InvalidParameterError(f"symmetric star needs n >= 2 and k >= 1, got n={n}, k={k}")
    if not 0.0 <= p0 < 3.0 / (2 * k + 1):
        raise InvalidParameterError(f"p0 must lie in [0, 3/(2k+1)), got {p0}")
    topo = generate({"generator": "symstar", "params": {"n": n, "k": k}})
    denom = n * k * (k + 1) * (2 * k + 1)
    clock = np.zeros(topo.n_vertices)
    clock[0] = p0
    entries: dict[tuple[int, int], float] = {}
    for b in range(n):
        first = 1 + b * k
        entries[(0, first)] = 1.0 / n
        for j in range(1, k + 1):
            v = first + j - 1
            clock[v] = 3.0 * (k + j) * (k - j + 1) / denom
            entries[(v, 0 if j == 1 else v - 1)] = 1.0
        clock[first] -= p0 / n
    assignment = ProbabilityAssignment.from_entries(topo, clock, entries)
    return certify(topo, assignment, 1.0 - 3.0 / denom, MODE, {"m": None, "x_star": None, "branch": "symstar", "p0": p0})


def _core_inward(topo: Topology, n: int, per: int, clock: np.ndarray, tails: list[tuple[int, int]]) -> ProbabilityAssignment:
    """Clique cores pick each other uniformly; tail vertices always move inward.

    ``tails`` lists ``(offset, length)`` of the tails inside each block of
    ``per`` vertices (the core is at offset 0).
    """
    entries: dict[tuple[int, int], float] = {}
    for b in range(n):
        core = b * per
        for c in range(n):
            if c != b:
                entries[(core, c * per)] = 1.0 / (n - 1)
        for offset, length in tails:
            prev = core
            for j in range(1, length + 1):
                v = core + offset + j
                entries[(v, prev)] = 1.0
                prev = v
    return ProbabilityAssignment.from_entries(topo, clock, entries)


def solve_ccs_nonuniform(n: int, k: int) -> OptimizationResult:
    """CCS star whose branches have ``k`` tail vertices beyond the core.

    The graph is ``ccs(n, k + 1)`` in generator terms (``n (k + 1)``
    vertices).
    """
    if n < 2 or k < 1:
        raise InvalidParameterError(f"CCS star needs n >= 2 and k >= 1, got n={n}, k={k}")
    topo = generate({"generator": "ccs", "params": {"n": n, "k": k + 1}})
    r = sqrt(2.0 * n * (n - 1))
    p_core = 3 * (2 * n - 2 + k * r) / (2 * n * (3 * n - 3 + 3 * k * r + 2 * n * k * k + n * k))
    denom = 3 * n * (k + 1) * (n - 1 + k * r) + n * n * k * (k + 1) * (2 * k + 1)
    clock = np.zeros(topo.n_vertices)
    for b in range(n):
        core = b * (k + 1)
        clock[core] = p_core
        for j in range(1, k + 1):
            clock[core + j] = 3 * (r * (k - j + 1) + n * (k - j + 1) * (k + j)) / denom
    assignment = _core_inward(topo, n, k + 1, clock, [(0, k)])
    value = 1 - 3 / (3 * (n - 1) * (k + 1) + 3 * r * k * (k + 1) + n * k * (k + 1) * (2 * k + 1))
    return certify(topo, assignment, value, MODE, {"m": None, "x_star": None, "branch": "ccs"})


def solve_ccs2_nonuniform(n: int, k1: int, k2: int) -> OptimizationResult:
    """CCS star where every core carries two tails of ``k1`` and ``k2`` vertices."""
    if n < 2 or k1 < 1 or k2 < 0:
        raise InvalidParameterError(f"need n >= 2, k1 >= 1, k2 >= 0; got n={n}, k1={k1}, k2={k2}")
    topo = generate({"generator": "ccs2", "params": {"n": n, "k1": k1, "k2": k2}})
    r = sqrt(2.0 * n * (n - 1))
    d1 = k1 * (k1 + 1) + k2 * (k2 + 1)
    d2 = k1 * (k1 + 1) * (2 * k1 + 1) + k2 * (k2 + 1) * (2 * k2 + 1)
    value = 1 - 3 / (3 * (n - 1) * (k1 + k2 + 1) + 3 * r * d1 + n * d2)
    gap = 1 - value
    per = 1 + k1 + k2
    clock = np.zeros(topo.n_vertices)
    for b in range(n):
        core = b * per
        clock[core] = gap * (2 * (n - 1) * (k1 + k2 + 1) + r * d1) / (2 * n)
        for d in range(1, k1 + 1):
            j = -d
            clock[core + d] = gap * (r * (k1 + j + 1) + n * (k1 + j + 1) * (k1 - j)) / n
        for j in range(1, k2 + 1):
            clock[core + k1 + j] = gap * (r * (k2 - j + 1) + n * (k2 - j + 1) * (k2 + j)) / n
    assignment = _core_inward(topo, n, per, clock, [(0, k1), (k1, k2)])
    return certify(topo, assignment, value, MODE, {"m": None, "x_star": None, "branch": "ccs2", "D1": d1, "D2": d2})


def _palm_clock(n: int, k: int) -> tuple[np.ndarray, float, str]:
    clock = np.zeros(n + k + 1)
    if 2 * n > k * (k + 1):
        denom = 6 * n + k * (k + 1) * (2 * k + 1)
        clock[1 : n + 1] = 6.0 / denom
        for j in range(1, k + 1):
            clock[n + j] = 3.0 * (k - j + 1) * (k + j) / denom
        return clock, 1 - 3 / denom, "2n>k(k+1)"
    value = 1 - 6 * (n + k + 1) / ((k + 1) * (k + 2) * (6 * n + k * (k + 4 * n + 1)))
    gap = 1 - value
    clock[1 : n + 1] = gap * (k + 1) * (k + 2) / (n + k + 1)
    for j in range(1, k + 1):
        clock[n + j] = gap * (k - j + 1) * (n * (k + j + 2) + (k + 1) * j) / (n + k + 1)
    return clock, value, "2n<=k(k+1)"


def _inward_tail_entries(n: int, k: int) -> dict[tuple[int, int], float]:
    entries: dict[tuple[int, int], float] = {}
    prev = 0
    for j in range(1, k + 1):
        entries[(n + j, prev)] = 1.0
        prev = n + j
    return entries


def solve_palm_nonuniform(n: int, k: int) -> OptimizationResult:
    """Star with ``n`` leaves plus a tail of ``k`` vertices at the center.

    The center has clock probability zero, so its transition row is never
    used; it is filled with a uniform choice over the leaves to keep the
    assignment row-stochastic.
    """
    if n < 1 or k < 1:
        raise InvalidParameterError(f"palm needs n >= 1 and k >= 1, got n={n}, k={k}")
    topo = generate({"generator": "palm", "params": {"n": n, "k": k}})
    clock, value, branch = _palm_clock(n, k)
    entries = _inward_tail_entries(n, k)
    for leaf in range(1, n + 1):
        entries[(leaf, 0)] = 1.0
        entries[(0, leaf)] = 1.0 / n
    assignment = ProbabilityAssignment.from_entries(topo, clock, entries)
    return certify(topo, assignment, value, MODE, {"m": None, "x_star": None, "branch": branch})


def solve_lollipop_nonuniform(n: int, k: int) -> OptimizationResult:
    """Clique on ``n + 1`` vertices with a tail of ``k`` vertices at the bridging vertex.

    When ``k(k+1) > sqrt(2n(n+1))`` the clique-internal edges are unused at
    the optimum and the palm solution is embedded (clique edges get zero
    probability).
    """
    if n < 2 or k < 1:
        raise InvalidParameterError(f"lollipop needs n >= 2 and k >= 1, got n={n}, k={k}")
    topo = generate({"generator": "lollipop", "params": {"n": n, "k": k}})
    r = sqrt(2.0 * n * (n + 1))
    if k * (k + 1) > r:
        palm = solve_palm_nonuniform(n, k)
        # Palm and lollipop share the vertex numbering, so the palm
        # assignment embeds directly.
        assignment = ProbabilityAssignment(palm.assignment.clock, palm.assignment.transition)
        diag = {"m": None, "x_star": None, "branch": f"palm {palm.diagnostics['branch']}"}
        return certify(topo, assignment, palm.diagnostics["formula_lambda2"], MODE, diag)
    a = 6 * (n - 1) * (n + k + 1) + (k + 1) * (6 * k * r + (n + 1) * (6 + k * (k + 2)) + k * k * (3 * n + k + 2))
    value = 1 - 6 * (n + k + 1) / a
    gap = 1 - value
    clock = np.zeros(topo.n_vertices)
    clock[0] = gap * n * (k + 1) * (2 * (n + 1) + k * r) / ((n + k + 1) * (n + 1))
    clock[1 : n + 1] = (n - 1) * (gap - clock[0] / (2 * n)) / n
    for j in range(1, k + 1):
        clock[n + j] = gap * (k - j + 1) * (r + j * (k + n + 1) + n * k) / (n + k + 1)
    entries = _inward_tail_entries(n, k)
    for leaf in range(1, n + 1):
        entries[(0, leaf)] = 1.0 / n
        for other in range(1, n + 1):
            if other != leaf:
                entries[(leaf, other)] = 1.0 / (n - 1)
    assignment = ProbabilityAssignment.from_entries(topo, clock, entries)
    return certify(topo, assignment, value, MODE, {"m": None, "x_star": None, "branch": "A", "A": a})
