"""Event-driven simulation of randomized gossip under Poisson clocks.

Random numbers come from numpy's PCG64 generator.  Trial ``t`` of a run
with seed ``s`` uses ``PCG64(SeedSequence([s, t]))``, so trials are
independent, reproducible and can be computed in any order.  Within a
trial the draws happen in a fixed order: all waiting times, then all
initiator uniforms, then all partner uniforms.

Every vertex ``i`` carries a Poisson clock of rate ``lambda_i``.  By
default the rates are ``N * P_i``, so the merged clock has rate ``N`` and
uniform clocks give every vertex rate one.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from scipy.special import logsumexp

from gossipclock.core import ProbabilityAssignment, validate_assignment
from gossipclock.errors import InvalidParameterError, SolverFailureError
from gossipclock.topology import Topology

__all__ = [
    "SimConfig",
    "SimulationTrace",
    "trial_rng",
    "rates_from_clock",
    "next_event",
    "run",
    "decay_curve",
    "estimate_decay_rate",
    "estimate_averaging_time",
]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent PCG64 stream for one ``(seed, trial)`` pair."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(trial)])))


def rates_from_clock(clock: np.ndarray, total_rate: float | None = None) -> np.ndarray:
    """Per-vertex rates ``Lambda * P_i``; ``Lambda`` defaults to ``N``."""
    clock = np.asarray(clock, dtype=float)
    total = float(clock.size) if total_rate is None else float(total_rate)
    return clock * total


def _check_rates(rates: np.ndarray) -> np.ndarray:
    rates = np.asarray(rates, dtype=float)
    if rates.ndim != 1 or np.any(rates < 0) or not np.all(np.isfinite(rates)):
        raise InvalidParameterError("rates must be a finite nonnegative vector")
    if rates.sum() <= 0:
        raise InvalidParameterError("at least one rate must be positive")
    return rates


def _cumulative(weights: np.ndarray) -> np.ndarray:
    """Row-wise cumulative distribution whose last reachable entry is exactly 1.

    With ``searchsorted(..., side="right")`` on ``u`` in ``[0, 1)`` this never
    returns an index with zero weight.
    """
    w = np.atleast_2d(np.asarray(weights, dtype=float))
    cum = np.cumsum(w, axis=1)
    totals = cum[:, -1:]
    cum = np.divide(cum, totals, out=np.ones_like(cum), where=totals > 0)
    for r in range(w.shape[0]):
        positive = np.flatnonzero(w[r] > 0)
        if positive.size:
            cum[r, positive[-1] :] = 1.0
    return cum


def next_event(rng: np.random.Generator, rates: np.ndarray) -> tuple[float, int]:
    """Waiting time of the merged clock and the vertex whose clock fired.

    Raises:
        InvalidParameterError: negative rates or all rates zero.
    """
    rates = _check_rates(rates)
    total = rates.sum()
    wait = float(rng.exponential(1.0 / total))
    vertex = int(np.searchsorted(_cumulative(rates)[0], rng.random(), side="right"))
    return wait, vertex


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    Attributes:
        seed: Base seed (any nonnegative integer, 64 bits is plenty).
        max_ticks: Number of gossip exchanges to simulate.
        initial_state: Starting values ``x(0)``.
        rates: Per-vertex Poisson rates; ``None`` derives them from the
            assignment's clock with total rate ``N``.
        record_states: Keep a copy of the state after every tick.
    """

    seed: int
    max_ticks: int
    initial_state: np.ndarray
    rates: np.ndarray | None = None
    record_states: bool = False

    def __post_init__(self) -> None:
        if self.max_ticks < 0:
            raise InvalidParameterError("max_ticks must be nonnegative")
        if self.seed < 0:
            raise InvalidParameterError("seed must be nonnegative")
        x0 = np.array(self.initial_state, dtype=float)
        x0.setflags(write=False)
        object.__setattr__(self, "initial_state", x0)
        if self.rates is not None:
            r = _check_rates(self.rates).copy()
            r.setflags(write=False)
            object.__setattr__(self, "rates", r)

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "max_ticks": self.max_ticks,
            "initial_state": self.initial_state.tolist(),
            "rates": None if self.rates is None else self.rates.tolist(),
            "record_states": self.record_states,
        }


@dataclass(frozen=True)
class SimulationTrace:
    """Events and error curve of one simulated run.

    ``error_curve[k]`` is ``||x(k) - x_ave 1|| / ||x(0)||`` for ``k = 0..K``.
    """

    times: np.ndarray
    initiators: np.ndarray
    partners: np.ndarray
    error_curve: np.ndarray
    final_state: np.ndarray
    states: np.ndarray | None = field(default=None)

    @property
    def n_ticks(self) -> int:
        return int(self.times.size)

    @property
    def events(self) -> list[tuple[float, int, int]]:
        return [(float(t), int(i), int(j)) for t, i, j in zip(self.times, self.initiators, self.partners)]

    def to_csv(self, target: str | Path | io.TextIOBase | None = None) -> str:
        """CSV with columns ``tick,time,initiator,partner,error``; returns the text."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["tick", "time", "initiator", "partner", "error"])
        for k in range(self.n_ticks):
            writer.writerow(
                [k + 1, repr(float(self.times[k])), int(self.initiators[k]), int(self.partners[k]), repr(float(self.error_curve[k + 1]))]
            )
        text = buf.getvalue()
        if isinstance(target, (str, Path)):
            Path(target).write_text(text, encoding="utf-8", newline="\n")
        elif target is not None:
            target.write(text)
        return text


def _draw_events(
    rng: np.random.Generator, count: int, clock_cum: np.ndarray, row_cum: np.ndarray, total_rate: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    waits = rng.exponential(1.0 / total_rate, size=count)
    u_init = rng.random(count)
    u_part = rng.random(count)
    initiators = np.searchsorted(clock_cum, u_init, side="right")
    rows = row_cum[initiators]
    partners = (rows <= u_part[:, None]).sum(axis=1)
    return waits, initiators, partners


def _prepare(topology: Topology, assignment: ProbabilityAssignment, rates: np.ndarray | None) -> tuple[np.ndarray, np.ndarray, float]:
    validate_assignment(topology, assignment)
    rates = rates_from_clock(assignment.clock) if rates is None else _check_rates(rates)
    if rates.size != topology.n_vertices:
        raise InvalidParameterError(f"expected {topology.n_vertices} rates, got {rates.size}")
    if np.any((rates > 0) & (topology.degrees() == 0)):
        raise InvalidParameterError("an isolated vertex has a positive rate")
    return _cumulative(rates)[0], _cumulative(assignment.transition), float(rates.sum())


def run(topology: Topology, assignment: ProbabilityAssignment, config: SimConfig, trial: int = 0) -> SimulationTrace:
    """Simulate ``config.max_ticks`` exchanges for one trial.

    At each tick the initiator is drawn from the clock rates and the
    partner from the initiator's transition row; both then hold their mean.
    """
    x = np.array(config.initial_state, dtype=float)
    if x.shape != (topology.n_vertices,):
        raise InvalidParameterError(f"initial state must have length {topology.n_vertices}")
    clock_cum, row_cum, total = _prepare(topology, assignment, config.rates)
    rng = trial_rng(config.seed, trial)
    waits, initiators, partners = _draw_events(rng, config.max_ticks, clock_cum, row_cum, total)
    x_ave = x.mean()
    norm0 = np.linalg.norm(x)
    scale = norm0 if norm0 > 0 else 1.0
    errors = np.empty(config.max_ticks + 1)
    errors[0] = np.linalg.norm(x - x_ave) / scale
    states = np.empty((config.max_ticks, x.size)) if config.record_states else None
    for k, (i, j) in enumerate(zip(initiators, partners)):
        m = (x[i] + x[j]) / 2.0
        x[i] = m
        x[j] = m
        errors[k + 1] = np.linalg.norm(x - x_ave) / scale
        if states is not None:
            states[k] = x
    return SimulationTrace(np.cumsum(waits), initiators, partners, errors, x, states)


def _batched_events(
    topology: Topology, assignment: ProbabilityAssignment, trials: int, ticks: int, seed: int, offset: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    clock_cum, row_cum, total = _prepare(topology, assignment, None)
    inits = np.empty((trials, ticks), dtype=np.intp)
    parts = np.empty((trials, ticks), dtype=np.intp)
    for t in range(trials):
        _, inits[t], parts[t] = _draw_events(trial_rng(seed, offset + t), ticks, clock_cum, row_cum, total)
    return inits, parts


def _decay_curve(
    topology: Topology, assignment: ProbabilityAssignment, trials: int, ticks: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    n = topology.n_vertices
    inits, parts = _batched_events(topology, assignment, trials, ticks, seed)
    start_rng = trial_rng(seed, trials)  # one extra stream for the starts
    x = start_rng.standard_normal((trials, n))
    x -= x.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(x, axis=1)
    if np.any(norms == 0):
        raise InvalidParameterError("degenerate start")
    x /= norms[:, None]
    log_scale = np.zeros(trials)
    rows = np.arange(trials)
    curve = np.empty(ticks + 1)
    alive = np.empty(ticks + 1, dtype=np.int64)
    curve[0], alive[0] = 0.0, trials
    for k in range(ticks):
        i, j = inits[:, k], parts[:, k]
        m = (x[rows, i] + x[rows, j]) / 2.0
        x[rows, i] = m
        x[rows, j] = m
        x -= x.mean(axis=1, keepdims=True)
        nrm = np.linalg.norm(x, axis=1)
        with np.errstate(divide="ignore"):
            log_err = np.log(nrm) + log_scale
        # Rescale by 2^-e so values stay near unit size (exact in binary).
        _, e = np.frexp(np.where(nrm > 0, nrm, 1.0))
        x = np.ldexp(x, -e[:, None])
        log_scale += e * np.log(2.0)
        curve[k + 1] = logsumexp(2.0 * log_err) - np.log(trials)
        alive[k + 1] = int(np.count_nonzero(nrm))
    return curve, alive


def decay_curve(
    topology: Topology, assignment: ProbabilityAssignment, trials: int, ticks: int, seed: int
) -> np.ndarray:
    """``log E||x(k) - x_ave||^2`` for ``k = 0..ticks`` from random zero-mean unit starts.

    The state is recentred and rescaled by a power of two after every tick
    (the log of the scale is tracked separately).  Averaging commutes with
    both operations, so this changes nothing mathematically but keeps the
    values far from underflow and removes rounding drift in the mean.
    Entries are ``-inf`` once every trial has reached exact consensus.
    """
    return _decay_curve(topology, assignment, trials, ticks, seed)[0]


def estimate_decay_rate(
    topology: Topology,
    assignment: ProbabilityAssignment,
    trials: int = 200,
    ticks: int = 2000,
    seed: int = 0,
) -> float:
    """Per-tick decay factor of the mean squared error.

    Fits a least-squares line to :func:`decay_curve` over ticks
    ``[H/4, 3H/4]`` and returns ``exp(slope)``.  ``H`` is ``ticks``, or
    the last tick at which at least a tenth of the trials are still away
    from exact consensus.  Exact consensus in finite time happens on some
    graphs, for example two disjoint pair averages followed by a cross pair
    on four vertices; once nearly every trial is there the sample mean rests
    on too few trials.  The exact factor lies between ``lambda_2**2``
    and ``lambda_2``.

    Raises:
        InvalidParameterError: fewer than 100 trials or ticks, or a horizon
            too short to fit.
    """
    if trials < 100 or ticks < 100:
        raise InvalidParameterError("need at least 100 trials and 100 ticks")
    curve, alive = _decay_curve(topology, assignment, trials, ticks, seed)
    horizon = int(np.flatnonzero(alive >= trials / 10)[-1])
    k = np.arange(horizon // 4, 3 * horizon // 4 + 1)
    if k.size < 10:
        raise InvalidParameterError("trials reach exact consensus too quickly to fit a decay rate")
    slope = np.polyfit(k.astype(float), curve[k], 1)[0]
    return float(np.exp(slope))


def estimate_averaging_time(
    topology: Topology,
    assignment: ProbabilityAssignment,
    epsilon: float,
    trials: int = 200,
    seed: int = 0,
    max_ticks: int = 1_000_000,
    chunk: int = 1024,
) -> int:
    """Empirical epsilon-averaging time.

    For every start ``e_i - 1/N`` the answer is the smallest ``k`` at which
    at most a fraction ``epsilon`` of the trials still has relative error
    ``>= epsilon``; the result is the maximum over starts.  All starts share
    the same event streams, which are also independent of ``epsilon``, so
    the estimate is monotone in ``epsilon``.

    Raises:
        InvalidParameterError: ``epsilon`` outside ``(0, 1)``.
        SolverFailureError: not reached within ``max_ticks``.
    """
    if not 0 < epsilon < 1:
        raise InvalidParameterError("epsilon must lie in (0, 1)")
    n = topology.n_vertices
    clock_cum, row_cum, total = _prepare(topology, assignment, None)
    rngs = [trial_rng(seed, t) for t in range(trials)]
    # Column s of x[t] is the state of trial t started from e_s - 1/N.
    x = np.broadcast_to(np.eye(n) - 1.0 / n, (trials, n, n)).copy()
    norm0 = np.sqrt(1.0 - 1.0 / n)
    hit = np.full((trials, n), -1, dtype=np.int64)
    rows = np.arange(trials)
    allowed = int(np.floor(epsilon * trials + 1e-9))
    k = 0
    while k < max_ticks:
        steps = min(chunk, max_ticks - k)
        ev = [_draw_events(r, steps, clock_cum, row_cum, total) for r in rngs]
        inits = np.stack([e[1] for e in ev])
        parts = np.stack([e[2] for e in ev])
        for s in range(steps):
            i, j = inits[:, s], parts[:, s]
            m = (x[rows, i, :] + x[rows, j, :]) / 2.0
            x[rows, i, :] = m
            x[rows, j, :] = m
            k += 1
            err = np.linalg.norm(x, axis=1) / norm0
            newly = (hit < 0) & (err < epsilon)
            hit[newly] = k
        pending = (hit < 0).sum(axis=0)
        if np.all(pending <= allowed):
            break
    else:
        raise SolverFailureError(f"epsilon-averaging not reached within {max_ticks} ticks")
    times = np.where(hit < 0, np.iinfo(np.int64).max, hit)
    # Smallest k with #{trials still above epsilon at k} <= allowed, per start.
    per_start = np.sort(times, axis=0)[trials - allowed - 1] if allowed < trials else np.zeros(n, dtype=np.int64)
    return int(per_start.max())
