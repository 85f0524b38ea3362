"""Pick the right optimizer for a topology.

Known families go to their closed form, possibly after relabelling from an
isomorphic family (an odd path is a two-branch symmetric star, an even
path is a two-branch CCS star).  Everything else, including custom graphs,
falls back to the numeric oracle.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from gossipclock.analytic import (
    OptimizationResult,
    certify,
    normalize_mode,
    solve_cartesian_uniform,
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
from gossipclock.core import ProbabilityAssignment
from gossipclock.errors import UnsupportedAnalyticError
from gossipclock.oracle import local_search
from gossipclock.topology import Topology, generate

__all__ = ["optimize", "relabel_result", "DEFAULT_ORACLE_BUDGET"]

DEFAULT_ORACLE_BUDGET = 50_000


def relabel_result(result: OptimizationResult, target: Topology, mapping: list[int]) -> OptimizationResult:
    """Move a result onto an isomorphic topology.

    ``mapping[v]`` is the target vertex for source vertex ``v``.

    Raises:
        ValueError: the mapping does not carry the source edges onto the
            target edges.
    """
    src = result.topology
    mapped = sorted(tuple(sorted((mapping[i], mapping[j]))) for i, j in src.edges)
    if src.n_vertices != target.n_vertices or mapped != sorted(target.edges):
        raise ValueError("mapping is not an isomorphism onto the target topology")
    n = target.n_vertices
    perm = np.empty(n, dtype=int)
    perm[np.asarray(mapping)] = np.arange(n)  # perm[target] = source
    a = result.assignment
    assignment = ProbabilityAssignment(a.clock[perm], a.transition[np.ix_(perm, perm)])
    diag = dict(result.diagnostics)
    if src.generator != target.generator or src.params != target.params:
        diag["solved_as"] = src.descriptor()
    return certify(target, assignment, result.lambda2, result.mode, diag)


def _odd_path_from_symstar(k: int) -> list[int]:
    mapping = [k]
    mapping += [k - j for j in range(1, k + 1)]
    mapping += [k + j for j in range(1, k + 1)]
    return mapping


def _even_path_from_ccs(k: int) -> list[int]:
    # ccs(2, k + 1): block b holds b(k+1) + d at distance d from its core.
    return [k - d for d in range(k + 1)] + [k + 1 + d for d in range(k + 1)]


def _identity(n: int) -> list[int]:
    return list(range(n))


def _analytic(topology: Topology, mode: str) -> OptimizationResult | None:
    g, p = topology.generator, topology.params
    uniform = mode == "uniform-clock"
    n_vertices = topology.n_vertices

    def via(result: OptimizationResult, mapping: list[int] | None = None) -> OptimizationResult:
        return relabel_result(result, topology, mapping or _identity(n_vertices))

    if g == "complete":
        res = solve_complete_uniform(p["n"])
    elif g == "cycle":
        res = solve_cycle_uniform(p["n"])
    elif g == "cartesian":
        try:
            res = solve_cartesian_uniform([generate(f) for f in p["factors"]])
        except UnsupportedAnalyticError:
            return None
    elif g == "wheel":
        return solve_wheel(p["n"], mode)
    elif g == "star":
        if n_vertices == 2:
            return via(solve_path_uniform(2))
        return via(solve_symstar_uniform(n_vertices - 1, 1) if uniform else solve_symstar_nonuniform(n_vertices - 1, 1))
    elif g == "symstar":
        if p["n"] == 1:
            return _path(topology, p["k"] + 1, uniform, via)
        return solve_symstar_uniform(p["n"], p["k"]) if uniform else solve_symstar_nonuniform(p["n"], p["k"])
    elif g == "path":
        return _path(topology, p["n"], uniform, via)
    elif g == "ccs":
        if uniform:
            return solve_ccs_uniform(p["n"], p["k"])
        if p["k"] == 1:
            res = solve_complete_uniform(p["n"])
        else:
            return solve_ccs_nonuniform(p["n"], p["k"] - 1)
    elif g == "two-coupled" and uniform:
        try:
            return solve_two_coupled_uniform(p["n1"], p["n2"], p["n3"])
        except UnsupportedAnalyticError:
            return None
    elif g == "ccs2" and not uniform:
        return solve_ccs2_nonuniform(p["n"], p["k1"], p["k2"])
    elif g == "palm" and not uniform:
        return solve_palm_nonuniform(p["n"], p["k"])
    elif g == "lollipop" and not uniform and p["n"] >= 2:
        return solve_lollipop_nonuniform(p["n"], p["k"])
    else:
        return None
    res = via(res)
    if uniform:
        return res
    # Edge-transitive families (and products of them): the best weights are
    # already reachable with uniform clocks.
    diag = dict(res.diagnostics, branch="uniform-is-optimal", uniform_branch=res.diagnostics.get("branch"))
    return certify(res.topology, res.assignment, res.lambda2, "nonuniform-clock", diag)


def _path(
    topology: Topology, n: int, uniform: bool, via: Callable[[OptimizationResult, list[int] | None], OptimizationResult]
) -> OptimizationResult:
    if uniform or n == 2:
        return via(solve_path_uniform(n), None)
    k = n // 2
    if n % 2:
        return via(solve_symstar_nonuniform(2, k), _odd_path_from_symstar(k))
    return via(solve_ccs_nonuniform(2, k - 1), _even_path_from_ccs(k - 1))


def optimize(topology: Topology, mode: str = "uniform", *, oracle_budget: int = DEFAULT_ORACLE_BUDGET) -> OptimizationResult:
    """Optimal probabilities for ``topology`` under the given clock mode.

    Closed forms are used when the family is recognised; the result then has
    mode ``uniform-clock`` or ``nonuniform-clock``.  Otherwise a numeric
    local search seeded at uniform neighbour choice runs and the result has
    mode ``numeric``.

    Raises:
        SolverFailureError: a closed form could not locate its root.
    """
    mode = normalize_mode(mode)
    try:
        result = _analytic(topology, mode)
    except (KeyError, UnsupportedAnalyticError):
        result = None
    if result is not None:
        return result
    seed = ProbabilityAssignment.uniform(topology)
    return local_search(topology, mode, seed, oracle_budget)
