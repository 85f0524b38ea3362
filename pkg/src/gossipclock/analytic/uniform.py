"""Uniform-clock closed forms derived from the semidefinite program.

For the symmetric star, the path and the complete-cored symmetric (CCS)
star, the optimum has the following shape.  Far from the center every
vertex pushes inward with probability one.  The ``m`` edges nearest the
center carry interior probabilities.  Those probabilities, and the optimal
second eigenvalue ``s = 1 + X/(2N)``, are explicit functions of the largest
negative root ``X`` of a "final polynomial".  The boundary index ``m`` is
found by increasing it until some probability leaves ``[0, 1]``.

The two coupled complete graphs have a direct closed form.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from math import sqrt

import numpy as np
from numpy.polynomial import polynomial as P

from gossipclock.analytic.result import OptimizationResult, certify
from gossipclock.core import ProbabilityAssignment
from gossipclock.errors import InvalidParameterError, UnsupportedAnalyticError
from gossipclock.polynomials import f_coefficients, solve_final_polynomial
from gossipclock.topology import Topology, generate

__all__ = [
    "FEASIBILITY_TOL",
    "MCandidate",
    "m_search",
    "symstar_final_polynomial",
    "symstar_inward_probabilities",
    "ccs_final_polynomial",
    "ccs_probabilities",
    "path_final_polynomial",
    "path_inward_probabilities",
    "solve_symstar_uniform",
    "solve_ccs_uniform",
    "solve_path_uniform",
    "solve_two_coupled_uniform",
]

#: A probability counts as feasible inside ``[-tol, 1 + tol]`` (then clamped).
FEASIBILITY_TOL = 1e-9


def _f(order: int) -> np.ndarray:
    return f_coefficients(order, "ccs")


@dataclass(frozen=True)
class MCandidate:
    """One step of the boundary-index search.

    Attributes:
        m: Number of interior edges tried.
        x_star: Largest negative root of the final polynomial.
        s: Candidate second eigenvalue.
        probabilities: Interior probabilities implied by ``x_star``.
        feasible: Whether all probabilities and ``s`` lie in ``[0, 1]``.
        roots: All negative roots found.
    """

    m: int
    x_star: float
    s: float
    probabilities: tuple[float, ...]
    feasible: bool
    roots: tuple[float, ...]


def _in_unit(v: float) -> bool:
    return -FEASIBILITY_TOL <= v <= 1.0 + FEASIBILITY_TOL


def m_search(
    n_vertices: int,
    m_max: int,
    polynomial: Callable[[int], np.ndarray],
    probabilities: Callable[[int, float], list[float]],
) -> tuple[MCandidate, list[MCandidate]]:
    """Try ``m = 0, 1, ...`` and keep the last feasible candidate.

    The search stops at the first infeasible ``m`` or after ``m_max``.
    Returns the accepted candidate and the full trace (which includes the
    first rejected candidate when there is one).
    """
    trace: list[MCandidate] = []
    accepted: MCandidate | None = None
    for m in range(m_max + 1):
        sol = solve_final_polynomial(polynomial(m), n_vertices)
        probs = probabilities(m, sol.x_star)
        ok = _in_unit(sol.s) and all(_in_unit(p) for p in probs)
        cand = MCandidate(m, sol.x_star, sol.s, tuple(probs), ok, sol.roots)
        trace.append(cand)
        if not ok:
            break
        accepted = cand
    if accepted is None:  # m = 0 is always feasible for the supported families
        raise InvalidParameterError("no feasible boundary index")
    return accepted, trace


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, p))


def _search_diagnostics(accepted: MCandidate, trace: list[MCandidate], m_max: int) -> dict:
    nxt = trace[-1] if trace[-1].m == accepted.m + 1 else None
    return {
        "m": accepted.m,
        "x_star": accepted.x_star,
        "roots": list(accepted.roots),
        "root_sign": "negative" if accepted.x_star < 0 else "nonnegative",
        "next_m_infeasible": nxt is not None and not nxt.feasible,
        "m_capped": accepted.m == m_max,
        "m_trace": [
            {"m": c.m, "x_star": c.x_star, "s": c.s, "feasible": c.feasible} for c in trace
        ],
    }


# ---------------------------------------------------------------------------
# symmetric star
# ---------------------------------------------------------------------------


def symstar_final_polynomial(n: int, k: int, m: int) -> np.ndarray:
    """Final polynomial of the symmetric star for boundary index ``m``."""
    lin = np.array([6.0 * (1 + n * (m + 1) * (m + 2)), n * (m + 1) * (2 * m * m + 7 * m + 6)])
    return P.polysub(P.polymul(lin, _f(k - m - 1)), 6.0 * n * (m + 1) ** 2 * _f(k - m - 2))


def symstar_inward_probabilities(n: int, m: int, x: float) -> list[float]:
    """Inward probabilities ``P_{j, j-1}`` for distances ``j = 1..m``."""
    if m == 0:
        return []
    a1 = 1.0 - m / (n * (m + 1)) - m * (m + 2) * x / 6.0
    out = [a1]
    for i in range(1, m):
        out.append(i * (1.0 / n - 1.0) + (i + 1) * a1 + i * (i + 1) * (i + 2) * x / 6.0)
    return out


def _symstar_assignment(topo: Topology, n: int, k: int, inward: list[float]) -> ProbabilityAssignment:
    entries: dict[tuple[int, int], float] = {}
    for b in range(n):
        first = 1 + b * k
        entries[(0, first)] = 1.0 / n
        for j in range(1, k + 1):
            v = first + j - 1
            a = _clamp(inward[j - 1]) if j <= len(inward) else 1.0
            parent = 0 if j == 1 else v - 1
            entries[(v, parent)] = a
            if j < k:
                entries[(v, v + 1)] = 1.0 - a
    return ProbabilityAssignment.from_entries(topo, np.full(topo.n_vertices, 1.0 / topo.n_vertices), entries)


def solve_symstar_uniform(n: int, k: int) -> OptimizationResult:
    """Symmetric star with ``n`` branches of length ``k`` under uniform clocks."""
    if n < 2 or k < 1:
        raise InvalidParameterError(f"symmetric star needs n >= 2 and k >= 1, got n={n}, k={k}")
    topo = generate({"generator": "symstar", "params": {"n": n, "k": k}})
    accepted, trace = m_search(
        topo.n_vertices,
        k - 1,
        lambda m: symstar_final_polynomial(n, k, m),
        lambda m, x: symstar_inward_probabilities(n, m, x),
    )
    assignment = _symstar_assignment(topo, n, k, list(accepted.probabilities))
    diag = _search_diagnostics(accepted, trace, k - 1)
    diag["branch"] = "symstar"
    return certify(topo, assignment, accepted.s, "uniform-clock", diag)


# ---------------------------------------------------------------------------
# complete-cored symmetric star
# ---------------------------------------------------------------------------


def ccs_final_polynomial(n: int, k: int, m: int) -> np.ndarray:
    """Final polynomial of the CCS star for boundary index ``m``."""
    g = sqrt(2.0 * n / (n - 1))
    c0 = 12 * n * g * m * m + (6 * (n - 1) * g * g + 12 * n * g + 12 * n) * m + 18 * n * g - 6 * g
    c1 = (
        4 * n * g * m**3
        + (3 * n * (g + 1) ** 2 + 3 * n - 3 * g * g) * m * m
        + (3 * (n - 1) * g * g + (8 * n - 6) * g + 6 * n) * m
        + 6 * g * (n - 1)
    )
    rhs = 6.0 * (1 + g * m) * (2 * n * m + g * (n - 1))
    return P.polysub(P.polymul([c0, c1], _f(k - m - 1)), rhs * _f(k - m - 2))


def ccs_probabilities(n: int, m: int, x: float) -> list[float]:
    """Return ``[P_11, P_12, P_32, ..., P_{m,m-1}]`` for boundary index ``m``.

    ``P_11`` is the probability of picking each other core vertex,
    ``P_12`` the core's outward probability, and ``P_{i+1,i}`` the inward
    probability at position ``i + 1`` of a branch.
    """
    g = sqrt(2.0 * n / (n - 1))
    if m == 0:
        return [1.0 / (n - 1), 0.0]
    p11 = g * (m + 1) / (2 * n * m + g * (n - 1)) - (
        (3 * (m + 1) * m + g * m * (m - 1) * (m + 1)) / (12 * n * m + 6 * g * (n - 1))
    ) * x
    out = [p11, 1.0 - (n - 1) * p11]
    for i in range(1, m):
        out.append(-i + (2 * n * i / g + n - 1) * p11 + (i * (i + 1) / (2 * g) + i * (i + 1) * (i - 1) / 6.0) * x)
    return out


def _ccs_assignment(topo: Topology, n: int, k: int, probs: list[float]) -> ProbabilityAssignment:
    p11 = _clamp(probs[0])
    p12 = 1.0 - (n - 1) * p11 if k > 1 else 0.0
    inward = [_clamp(p) for p in probs[2:]]  # positions 2..m
    entries: dict[tuple[int, int], float] = {}
    for b in range(n):
        core = b * k
        for c in range(n):
            if c != b:
                entries[(core, c * k)] = p11 if k > 1 else 1.0 / (n - 1)
        if k > 1:
            entries[(core, core + 1)] = p12
        for j in range(2, k + 1):
            v = core + j - 1
            a = inward[j - 2] if j - 2 < len(inward) else 1.0
            entries[(v, v - 1)] = a
            if j < k:
                entries[(v, v + 1)] = 1.0 - a
    return ProbabilityAssignment.from_entries(topo, np.full(topo.n_vertices, 1.0 / topo.n_vertices), entries)


def solve_ccs_uniform(n: int, k: int) -> OptimizationResult:
    """CCS star: ``n`` branches of ``k`` vertices whose first vertices form a clique."""
    if n < 2 or k < 1:
        raise InvalidParameterError(f"CCS star needs n >= 2 and k >= 1, got n={n}, k={k}")
    topo = generate({"generator": "ccs", "params": {"n": n, "k": k}})
    accepted, trace = m_search(
        topo.n_vertices,
        k - 1,
        lambda m: ccs_final_polynomial(n, k, m),
        lambda m, x: ccs_probabilities(n, m, x),
    )
    assignment = _ccs_assignment(topo, n, k, list(accepted.probabilities))
    diag = _search_diagnostics(accepted, trace, k - 1)
    diag["branch"] = "ccs"
    diag["gamma"] = sqrt(2.0 * n / (n - 1))
    return certify(topo, assignment, accepted.s, "uniform-clock", diag)


# ---------------------------------------------------------------------------
# path
# ---------------------------------------------------------------------------


def path_final_polynomial(n_vertices: int, m: int) -> np.ndarray:
    """Final polynomial of the path with ``n_vertices`` for boundary index ``m``.

    Uses the path-convention F polynomials, ``F^path_i = F^ccs_{i-1}``.
    """
    k = n_vertices // 2
    if n_vertices % 2 == 0:
        lin = np.array([12.0 * m * m + 24 * m + 15, 4.0 * m**3 + 12 * m * m + 11 * m + 3])
        tail = 3.0 * (2 * m + 1) ** 2
    else:
        lin = np.array([6.0 * m * m + 18 * m + 15, 2.0 * m**3 + 9 * m * m + 13 * m + 6])
        tail = 6.0 * (m + 1) ** 2
    return P.polysub(P.polymul(lin, _f(k - m - 1)), tail * _f(k - m - 2))


def path_inward_probabilities(n_vertices: int, m: int, x: float) -> list[float]:
    """Inward probabilities of the ``m`` interior vertices, nearest the center first.

    For an even path the first entry is the probability of crossing the
    central edge.  For an odd path it is the probability of moving onto the
    center vertex.
    """
    if m == 0:
        return []
    if n_vertices % 2 == 0:
        center = (12 * (m + 1) - (6 * m * m + (m - 1) * m * (2 * m - 1)) * x) / (12 * (2 * m + 1))
        return [center] + [
            (2 * i + 1) * center - i + i * (i + 1) * (2 * i + 1) * x / 12.0 for i in range(1, m)
        ]
    first = (3 * (m + 2) - m * (m + 1) * (m + 2) * x) / (6 * (m + 1))
    return [first] + [i * first - (i - 1) / 2.0 + (i - 1) * i * (i + 1) * x / 6.0 for i in range(2, m + 1)]


def _path_assignment(topo: Topology, inward: list[float]) -> ProbabilityAssignment:
    n = topo.n_vertices
    k = n // 2
    entries: dict[tuple[int, int], float] = {}
    # Left half: vertex k-1-d is at distance d from the middle; inward is +1.
    for d in range(k):
        v = k - 1 - d
        a = _clamp(inward[d]) if d < len(inward) else 1.0
        if n % 2 == 0 and d == 0:
            mirror = n - 1 - v
            entries[(v, mirror)] = a
            entries[(mirror, v)] = a
            if v > 0:
                entries[(v, v - 1)] = 1.0 - a
                entries[(mirror, mirror + 1)] = 1.0 - a
            continue
        mirror = n - 1 - v
        entries[(v, v + 1)] = a
        entries[(mirror, mirror - 1)] = a
        if v > 0:
            entries[(v, v - 1)] = 1.0 - a
            entries[(mirror, mirror + 1)] = 1.0 - a
    if n % 2 == 1:
        entries[(k, k - 1)] = entries[(k, k + 1)] = 0.5
    return ProbabilityAssignment.from_entries(topo, np.full(n, 1.0 / n), entries)


def solve_path_uniform(n_vertices: int) -> OptimizationResult:
    """Path with ``n_vertices`` vertices under uniform clocks."""
    if n_vertices < 2:
        raise InvalidParameterError(f"path needs at least 2 vertices, got {n_vertices}")
    topo = generate({"generator": "path", "params": {"n": n_vertices}})
    k = n_vertices // 2
    accepted, trace = m_search(
        n_vertices,
        k - 1,
        lambda m: path_final_polynomial(n_vertices, m),
        lambda m, x: path_inward_probabilities(n_vertices, m, x),
    )
    assignment = _path_assignment(topo, list(accepted.probabilities))
    diag = _search_diagnostics(accepted, trace, k - 1)
    diag["branch"] = "even" if n_vertices % 2 == 0 else "odd"
    return certify(topo, assignment, accepted.s, "uniform-clock", diag)


# ---------------------------------------------------------------------------
# two coupled complete graphs
# ---------------------------------------------------------------------------


def solve_two_coupled_uniform(n1: int, n2: int, n3: int) -> OptimizationResult:
    """Two cliques ``A+B`` and ``B+C`` sharing group ``B``, symmetric case ``n1 == n3``.

    Raises:
        UnsupportedAnalyticError: when ``n1 != n3``.
    """
    if min(n1, n2, n3) < 1:
        raise InvalidParameterError("group sizes must be >= 1")
    if n1 != n3:
        raise UnsupportedAnalyticError("closed form only for the symmetric case n1 == n3")
    topo = generate({"generator": "two-coupled", "params": {"n1": n1, "n2": n2, "n3": n3}})
    if n2 > 2 * n1:
        base = 4 * n1 * n2 + (n2 - 1) * (n2 - 2 * n1)
        den = n2 * base
        p_out = (2 * n2 * n2 - (n2 - 1) * (n2 - 2 * n1)) / den
        p_shared = (2 * n1 + n2) * (n2 - 2 * n1) / den
        value = (base - n2) / base
        branch = "n2>2n1"
    else:
        p_out, p_shared = 1.0 / (2 * n1), 0.0
        value = (4 * n1 - 1) / (4 * n1)
        branch = "n2<=2n1"
    outer = list(range(n1)) + list(range(n1 + n2, n1 + n2 + n3))
    shared = list(range(n1, n1 + n2))
    entries: dict[tuple[int, int], float] = {}
    for a in outer:
        for b in shared:
            entries[(a, b)] = 1.0 / n2
            entries[(b, a)] = p_out
    for b in shared:
        for c in shared:
            if b != c:
                entries[(b, c)] = p_shared
    assignment = ProbabilityAssignment.from_entries(topo, np.full(topo.n_vertices, 1.0 / topo.n_vertices), entries)
    return certify(topo, assignment, value, "uniform-clock", {"m": None, "x_star": None, "branch": branch})
