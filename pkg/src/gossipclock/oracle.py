"""Independent numeric optimizer used to cross-check the closed forms.

The search space is reduced with the topology's orbit labels.  Every
directed edge ``i -> j`` belongs to the class ``(orbit(i), orbit(edge))``;
all edges in a class share one transition probability, and (in the
non-uniform mode) all vertices in an orbit share one clock probability.
A *constraint group* is a set of classes that must satisfy one
normalization: the transition row of a vertex orbit, or the clock vector.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from gossipclock.analytic.result import OptimizationResult, normalize_mode
from gossipclock.core import ProbabilityAssignment, build_operator, spectrum, validate_assignment
from gossipclock.errors import InvalidParameterError
from gossipclock.topology import Topology

__all__ = ["OrbitParameterization", "evaluate", "local_search", "exhaustive_grid", "MAX_GRID_POINTS"]

#: Upper bound on the number of grid points :func:`exhaustive_grid` will visit.
MAX_GRID_POINTS = 2_000_000


def evaluate(topology: Topology, assignment: ProbabilityAssignment) -> float:
    """Second-largest eigenvalue of the expected operator."""
    return spectrum(build_operator(topology, assignment)).lambda2


@dataclass(frozen=True)
class _Group:
    kind: str  # "transition" or "clock"
    label: str
    members: tuple[int, ...]  # indices into the parameter vector
    counts: tuple[int, ...]  # multiplicity of each member in the constraint


class OrbitParameterization:
    """Orbit-reduced parameter vector for one topology and clock mode.

    Attributes:
        free_vars: ``(label, kind)`` for every entry of the parameter vector.
        groups: Normalization groups over those entries.
    """

    def __init__(self, topology: Topology, mode: str = "uniform") -> None:
        self.topology = topology
        self.mode = normalize_mode(mode)
        n = topology.n_vertices
        vorb, eidx = topology.vertex_orbit, topology.edge_index()
        class_of: dict[tuple[str, str], int] = {}
        free_vars: list[tuple[str, str]] = []
        arcs: list[tuple[int, int, int]] = []  # (source, target, class)
        for i in range(n):
            for j in topology.neighbors(i):
                key = (vorb[i], topology.edge_orbit[eidx[(min(i, j), max(i, j))]])
                if key not in class_of:
                    class_of[key] = len(free_vars)
                    free_vars.append((f"{key[0]}->{key[1]}", "transition"))
                arcs.append((i, j, class_of[key]))
        groups: list[_Group] = []
        for orbit in dict.fromkeys(vorb):
            verts = [v for v in range(n) if vorb[v] == orbit]
            profiles = set()
            for v in verts:
                cnt: dict[int, int] = {}
                for s, _, c in arcs:
                    if s == v:
                        cnt[c] = cnt.get(c, 0) + 1
                profiles.add(tuple(sorted(cnt.items())))
            if len(profiles) != 1:
                raise InvalidParameterError(f"vertex orbit {orbit!r} is not consistent with the edge orbits")
            profile = profiles.pop()
            if profile:
                groups.append(_Group("transition", orbit, tuple(c for c, _ in profile), tuple(k for _, k in profile)))
        self.n_transition = len(free_vars)
        self.clock_orbits: list[str] = []
        vertex_clock = np.zeros(n, dtype=int)
        if self.mode == "nonuniform-clock":
            members, counts = [], []
            for orbit in dict.fromkeys(vorb):
                idx = len(free_vars)
                free_vars.append((orbit, "clock"))
                self.clock_orbits.append(orbit)
                size = sum(1 for v in vorb if v == orbit)
                members.append(idx)
                counts.append(size)
                for v in range(n):
                    if vorb[v] == orbit:
                        vertex_clock[v] = idx
            groups.append(_Group("clock", "clock", tuple(members), tuple(counts)))
        self.free_vars = tuple(free_vars)
        self.groups = tuple(groups)
        self._arcs = np.array(arcs, dtype=int).reshape(-1, 3)
        self._vertex_clock = vertex_clock
        # Laplacian as a linear map of the edge activities: L = q @ basis.
        basis = np.zeros((topology.n_edges, n * n))
        for e, (i, j) in enumerate(topology.edges):
            for a, b, sign in ((i, i, 1.0), (j, j, 1.0), (i, j, -1.0), (j, i, -1.0)):
                basis[e, a * n + b] += sign
        self._lap_basis = basis
        self._arc_edge = np.array([eidx[(min(s, t), max(s, t))] for s, t, _ in arcs], dtype=int)

    # -- vector <-> assignment ----------------------------------------

    @property
    def size(self) -> int:
        return len(self.free_vars)

    @property
    def degrees_of_freedom(self) -> int:
        return sum(len(g.members) - 1 for g in self.groups)

    def project(self, theta: np.ndarray) -> np.ndarray:
        """Clamp to ``[0, 1]`` and renormalize each constraint group."""
        out = np.clip(np.asarray(theta, dtype=float), 0.0, 1.0)
        for g in self.groups:
            members = list(g.members)
            counts = np.array(g.counts, dtype=float)
            total = float(counts @ out[members])
            if total <= 0.0:
                out[members] = 1.0 / counts.sum()
            else:
                out[members] = out[members] / total
        return out

    def is_feasible(self, theta: np.ndarray, tol: float = 1e-12) -> bool:
        theta = np.asarray(theta, dtype=float)
        if np.any(theta < -tol) or np.any(theta > 1 + tol):
            return False
        return all(abs(np.dot(g.counts, theta[list(g.members)]) - 1.0) <= tol for g in self.groups)

    def _clock_of(self, theta: np.ndarray) -> np.ndarray:
        n = self.topology.n_vertices
        if self.mode == "uniform-clock":
            return np.full(n, 1.0 / n)
        return theta[self._vertex_clock]

    def expand(self, theta: np.ndarray) -> ProbabilityAssignment:
        """Assignment for a (projected) parameter vector."""
        theta = self.project(theta)
        n = self.topology.n_vertices
        trans = np.zeros((n, n))
        for s, t, c in self._arcs:
            trans[s, t] = theta[c]
        return ProbabilityAssignment(self._clock_of(theta), trans)

    def from_assignment(self, assignment: ProbabilityAssignment) -> np.ndarray:
        """Orbit-averaged parameter vector of an assignment."""
        theta = np.zeros(self.size)
        hits = np.zeros(self.size)
        for s, t, c in self._arcs:
            theta[c] += assignment.transition[s, t]
            hits[c] += 1
        if self.mode == "nonuniform-clock":
            for v, idx in enumerate(self._vertex_clock):
                theta[idx] += assignment.clock[v]
                hits[idx] += 1
        return self.project(theta / np.maximum(hits, 1))

    # -- evaluation ---------------------------------------------------

    def lambda2_batch(self, thetas: np.ndarray) -> np.ndarray:
        """Second eigenvalue for a batch of already-feasible vectors."""
        thetas = np.atleast_2d(thetas)
        n = self.topology.n_vertices
        arcs = self._arcs
        if self.mode == "uniform-clock":
            clock = np.full((thetas.shape[0], n), 1.0 / n)
        else:
            clock = thetas[:, self._vertex_clock]
        flow = clock[:, arcs[:, 0]] * thetas[:, arcs[:, 2]] / 2.0
        q = np.zeros((thetas.shape[0], self.topology.n_edges))
        np.add.at(q.T, self._arc_edge, flow.T)
        lap = (q @ self._lap_basis).reshape(-1, n, n)
        w = np.eye(n)[None, :, :] - lap
        vals = np.linalg.eigvalsh(w)
        return vals[:, -2] if n > 1 else np.zeros(thetas.shape[0])

    def lambda2(self, theta: np.ndarray) -> float:
        return float(self.lambda2_batch(self.project(theta)[None, :])[0])

    # -- grid enumeration ---------------------------------------------

    def _group_points(self, g: _Group, resolution: float) -> list[tuple[float, ...]]:
        steps = int(round(1.0 / resolution))
        grid = np.linspace(0.0, 1.0, steps + 1)
        counts = g.counts
        if len(counts) == 1:
            return [(1.0 / counts[0],)]
        pts = []
        for head in itertools.product(grid, repeat=len(counts) - 1):
            rest = 1.0 - float(np.dot(counts[:-1], head))
            last = rest / counts[-1]
            if -1e-12 <= last <= 1.0 + 1e-12:
                pts.append(tuple(head) + (min(max(last, 0.0), 1.0),))
        return pts

    def grid(self, resolution: float) -> Iterator[np.ndarray]:
        per_group = [self._group_points(g, resolution) for g in self.groups]
        total = int(np.prod([len(p) for p in per_group])) if per_group else 1
        if total > MAX_GRID_POINTS:
            raise InvalidParameterError(f"grid has {total} points, limit is {MAX_GRID_POINTS}")
        for combo in itertools.product(*per_group):
            theta = np.zeros(self.size)
            for g, vals in zip(self.groups, combo):
                theta[list(g.members)] = vals
            yield theta


def _moves(param: OrbitParameterization) -> list[tuple[int, int | None]]:
    """Deterministic move list: single coordinates, then in-group transfers."""
    moves: list[tuple[int, int | None]] = []
    for g in param.groups:
        if len(g.members) < 2:
            continue
        moves.extend((c, None) for c in g.members)
        moves.extend((a, b) for a, b in itertools.permutations(g.members, 2))
    return moves


def local_search(
    topology: Topology,
    mode: str,
    seed_assignment: ProbabilityAssignment,
    budget: int = 50_000,
    *,
    step_start: float = 0.1,
    step_min: float = 1e-6,
    shrink: float = 0.5,
) -> OptimizationResult:
    """Projected coordinate descent on the orbit-reduced parameters.

    Moves are tried in a fixed order: increase or decrease one parameter
    (then renormalize its group), or transfer mass between two parameters
    of the same group.  A move is accepted when it lowers lambda_2; the step
    shrinks when a full sweep yields no improvement.

    Returns the best point found, which is never worse than the seed.  The
    diagnostics hold the best-so-far trace and the evaluation count.

    Raises:
        InvalidAssignmentError: the seed is not a valid assignment.
    """
    validate_assignment(topology, seed_assignment)
    param = OrbitParameterization(topology, mode)
    seed_value = evaluate(topology, seed_assignment)
    best_assignment, best_value = seed_assignment, seed_value
    trace = [seed_value]
    evals = 1
    theta = param.from_assignment(seed_assignment)
    if budget > 1:
        value = param.lambda2(theta)
        evals += 1
        moves = _moves(param)
        step = step_start
        while step >= step_min and evals < budget and moves:
            improved = False
            for a, b in moves:
                for sign in (1.0, -1.0):
                    if evals >= budget:
                        break
                    cand = theta.copy()
                    if b is None:
                        cand[a] += sign * step
                    else:
                        cand[a] += sign * step
                        cand[b] -= sign * step
                    cand = param.project(cand)
                    cand_value = float(param.lambda2_batch(cand[None, :])[0])
                    evals += 1
                    if cand_value < value - 1e-15:
                        theta, value, improved = cand, cand_value, True
                        trace.append(min(value, seed_value))
            if not improved:
                step *= shrink
        if value < best_value:
            best_assignment, best_value = param.expand(theta), value
    best_value = evaluate(topology, best_assignment)
    diag = {
        "solver": "local_search",
        "clock_mode": param.mode,
        "evaluations": evals,
        "seed_lambda2": seed_value,
        "improvement": seed_value - best_value,
        "trace": trace,
        "m": None,
        "x_star": None,
        "branch": "numeric",
    }
    return OptimizationResult(topology, best_assignment, best_value, "numeric", diag)


def exhaustive_grid(topology: Topology, mode: str, resolution: float, batch: int = 4096) -> OptimizationResult:
    """Brute-force scan over the orbit-reduced feasible polytope.

    Each constraint group with ``r`` members contributes ``r - 1`` free
    grid coordinates; the last member absorbs the remainder.  Ties keep the
    lexicographically first grid point.

    Raises:
        InvalidParameterError: more than three free parameters, or a grid
            larger than :data:`MAX_GRID_POINTS`.
    """
    param = OrbitParameterization(topology, mode)
    if param.degrees_of_freedom > 3:
        raise InvalidParameterError(f"{param.degrees_of_freedom} free parameters; the grid oracle handles at most 3")
    if not 0 < resolution <= 1:
        raise InvalidParameterError("resolution must lie in (0, 1]")
    best_theta, best_value, count = None, np.inf, 0
    chunk: list[np.ndarray] = []

    def flush() -> None:
        nonlocal best_theta, best_value
        vals = param.lambda2_batch(np.array(chunk))
        k = int(np.argmin(vals))
        if vals[k] < best_value:
            best_value, best_theta = float(vals[k]), chunk[k]
        chunk.clear()

    for theta in param.grid(resolution):
        chunk.append(theta)
        count += 1
        if len(chunk) >= batch:
            flush()
    if chunk:
        flush()
    assert best_theta is not None
    assignment = param.expand(best_theta)
    diag = {
        "solver": "exhaustive_grid",
        "clock_mode": param.mode,
        "resolution": resolution,
        "grid_points": count,
        "free_parameters": param.degrees_of_freedom,
        "parameters": {label: float(v) for (label, _), v in zip(param.free_vars, best_theta)},
        "m": None,
        "x_star": None,
        "branch": "numeric",
    }
    return OptimizationResult(topology, assignment, evaluate(topology, assignment), "numeric", diag)
