"""Families whose optimum follows from a linear program in the edge activities.

Complete graphs, cycles, wheels and Cartesian products of regular
edge-transitive graphs all have an eigenbasis that does not depend on the
(orbit-symmetric) edge weights, so the optimal second eigenvalue is the
value of a small max-min problem that can be solved by hand.
"""

from __future__ import annotations

from collections.abc import Sequence
from math import cos, pi

import numpy as np

from gossipclock.analytic.result import OptimizationResult, certify, normalize_mode
from gossipclock.core import ProbabilityAssignment, build_operator, spectrum
from gossipclock.errors import InvalidParameterError, UnsupportedAnalyticError
from gossipclock.topology import Topology, cartesian_product, generate

__all__ = [
    "solve_complete_uniform",
    "solve_cycle_uniform",
    "solve_wheel",
    "solve_cartesian_uniform",
    "wheel_printed_assignment",
]


def solve_complete_uniform(n: int) -> OptimizationResult:
    """Complete graph: every neighbour with probability ``1/(n-1)``."""
    if n < 2:
        raise InvalidParameterError(f"complete graph needs n >= 2, got {n}")
    topo = generate({"generator": "complete", "params": {"n": n}})
    assignment = ProbabilityAssignment.uniform(topo)
    return certify(topo, assignment, (n - 2) / (n - 1), "uniform-clock", {"m": None, "x_star": None, "branch": "complete"})


def solve_cycle_uniform(n: int) -> OptimizationResult:
    """Cycle: both neighbours with probability one half."""
    if n < 3:
        raise InvalidParameterError(f"cycle needs n >= 3, got {n}")
    topo = generate({"generator": "cycle", "params": {"n": n}})
    assignment = ProbabilityAssignment.uniform(topo)
    value = (n - (1.0 - cos(2.0 * pi / n))) / n
    return certify(topo, assignment, value, "uniform-clock", {"m": None, "x_star": None, "branch": "cycle"})


def _wheel_assignment(topo: Topology, clock: np.ndarray, p_out: float, p_rim: float) -> ProbabilityAssignment:
    n = topo.n_vertices - 1
    entries: dict[tuple[int, int], float] = {}
    for i in range(1, n + 1):
        nxt = i % n + 1
        entries[(0, i)] = 1.0 / n
        entries[(i, 0)] = p_out
        entries[(i, nxt)] = p_rim
        entries[(nxt, i)] = p_rim
    return ProbabilityAssignment.from_entries(topo, clock, entries)


def wheel_printed_assignment(n: int, mode: str) -> tuple[ProbabilityAssignment, float]:
    """Assignment and value exactly as printed for wheels with ``n >= 6`` rim vertices.

    Rim vertices never pick the center (``P_10 = 0``) and pick each rim
    neighbour with probability 1/2.  Returned for comparison only; see
    :func:`solve_wheel` for the optimum.
    """
    topo = generate({"generator": "wheel", "params": {"n": n}})
    c = 1.0 - cos(2.0 * pi / n)
    if normalize_mode(mode) == "uniform-clock":
        clock = np.full(n + 1, 1.0 / (n + 1))
        value = (2 * n - 1) / (2 * n)
    else:
        clock = np.array([2 * c / (n + 2 * c)] + [1.0 / (n + 2 * c)] * n)
        value = (n * n + (n - 1) * c) / (n * n + 2 * n * c)
    return _wheel_assignment(topo, clock, 0.0, 0.5), value


def solve_wheel(n: int, mode: str = "uniform") -> OptimizationResult:
    """Wheel with ``n`` rim vertices.

    With rotation-symmetric weights the spoke activity ``a`` and rim
    activity ``b`` satisfy ``a + b = 1/(2n)`` and the relevant Laplacian
    eigenvalues are ``(n+1) a`` (center mode) and ``a + 2(1 - cos(2 pi/n)) b``
    (slowest rim mode).  For ``n <= 6`` the optimum balances the two; for
    larger ``n`` the rim mode improves as weight moves to the spokes, so the
    optimum puts all rim traffic on the spokes and the wheel behaves like a
    star with value ``(2n-1)/(2n)``.  The same optimum is reachable with
    uniform clocks, so both modes return it.

    For ``n >= 6`` the diagnostics also carry the printed assignment's
    eigenvalue and the printed formula value, so the discrepancy is visible.
    """
    if n < 3:
        raise InvalidParameterError(f"wheel needs n >= 3 rim vertices, got {n}")
    mode = normalize_mode(mode)
    topo = generate({"generator": "wheel", "params": {"n": n}})
    c = 1.0 - cos(2.0 * pi / n)
    uniform = np.full(n + 1, 1.0 / (n + 1))
    diag: dict = {"m": None, "x_star": None}
    if n < 6:
        p_out = (1.0 - 2.0 * cos(2.0 * pi / n)) / (n + 2 * c)
        p_rim = (n + 1) / (2.0 * (n + 2 * c))
        value = (n * n + (n - 1) * c) / (n * n + 2 * n * c)
        diag["branch"] = "n<6"
        return certify(topo, _wheel_assignment(topo, uniform, p_out, p_rim), value, mode, diag)

    printed, printed_value = wheel_printed_assignment(n, mode)
    diag["printed_formula_lambda2"] = printed_value
    diag["printed_assignment_lambda2"] = spectrum(build_operator(topo, printed)).lambda2
    if n == 6:
        diag["branch"] = "n>=6"
        return certify(topo, printed, printed_value, mode, diag)
    diag["branch"] = "n>=6 spokes-only"
    diag["printed_probabilities_replaced"] = True
    best = _wheel_assignment(topo, uniform, 1.0, 0.0)
    # Compare against the printed formula so a disagreement is flagged.
    return certify(topo, best, printed_value, mode, diag)


def solve_cartesian_uniform(factors: Sequence[Topology]) -> OptimizationResult:
    """Cartesian product of regular, edge-transitive factors.

    Each factor contributes ``E_j / (N_j lambda_j)`` where ``lambda_j`` is the
    algebraic connectivity of its unweighted Laplacian.  With
    ``S = sum_j E_j / (N_j lambda_j)`` the optimal second eigenvalue is
    ``1 - 1 / (2 N S)`` and an edge in direction ``j`` is chosen with
    probability ``1 / (2 lambda_j S)``.

    Raises:
        InvalidParameterError: empty factor list.
        UnsupportedAnalyticError: a factor is not regular.
    """
    if not factors:
        raise InvalidParameterError("need at least one factor")
    diag: dict = {"m": None, "x_star": None, "branch": "cartesian"}
    lams, total = [], 0.0
    for f in factors:
        if not f.is_regular():
            raise UnsupportedAnalyticError("cartesian closed form needs regular factors")
        if len(set(f.edge_orbit)) > 1:
            diag.setdefault("unverified_edge_transitivity", []).append(f.descriptor())
        lam = float(np.linalg.eigvalsh(f.laplacian())[1])
        lams.append(lam)
        total += f.n_edges / (f.n_vertices * lam)
    topo = cartesian_product(factors) if len(factors) > 1 else _single(factors[0])
    n = topo.n_vertices
    probs = [1.0 / (2.0 * lam * total) for lam in lams]
    diag["direction_probabilities"] = probs
    trans = np.zeros((n, n))
    for (i, j), label in zip(topo.edges, topo.edge_orbit):
        trans[i, j] = trans[j, i] = probs[int(label[1:])]
    sizes = sorted(f.n_vertices for f in factors)
    if len(factors) == 2 and all(f.generator == "complete" for f in factors) and sizes == [2, 3]:
        diag["printed_text_lambda2"] = 5.0 / 14.0
    assignment = ProbabilityAssignment(np.full(n, 1.0 / n), trans)
    return certify(topo, assignment, 1.0 - 1.0 / (2.0 * n * total), "uniform-clock", diag)


def _single(f: Topology) -> Topology:
    # A one-factor product is the factor itself, with edges labelled as direction 0.
    return Topology(f.n_vertices, f.edges, f.generator, f.params, f.vertex_orbit, ("f0",) * f.n_edges)
