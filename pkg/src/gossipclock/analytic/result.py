"""Optimization result type and the spectral re-verification step."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from gossipclock.core import ProbabilityAssignment, build_operator, spectrum
from gossipclock.topology import Topology

__all__ = ["Mode", "OptimizationResult", "certify", "FORMULA_TOL", "normalize_mode"]

Mode = Literal["uniform-clock", "nonuniform-clock", "numeric"]

#: Allowed gap between a closed-form value and the eigensolver.
FORMULA_TOL = 1e-9


def normalize_mode(mode: str) -> str:
    """Accept ``uniform``/``nonuniform`` shorthands."""
    table = {
        "uniform": "uniform-clock",
        "uniform-clock": "uniform-clock",
        "nonuniform": "nonuniform-clock",
        "non-uniform": "nonuniform-clock",
        "nonuniform-clock": "nonuniform-clock",
    }
    try:
        return table[mode]
    except KeyError:
        raise ValueError(f"unknown clock mode {mode!r}") from None


@dataclass(frozen=True)
class OptimizationResult:
    """Optimal (or best found) assignment and its second eigenvalue.

    Attributes:
        topology: Graph the assignment lives on.
        assignment: Clock and transition probabilities.
        lambda2: Second-largest eigenvalue of the expected operator.
        mode: ``uniform-clock``, ``nonuniform-clock`` or ``numeric``.
        diagnostics: Solver details such as ``m``, ``x_star`` and ``branch``.
    """

    topology: Topology
    assignment: ProbabilityAssignment
    lambda2: float
    mode: str
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def m(self) -> int | None:
        return self.diagnostics.get("m")

    @property
    def s(self) -> float:
        return self.lambda2

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda2": self.lambda2,
            "mode": self.mode,
            "diagnostics": _jsonable(self.diagnostics),
            "assignment": self.assignment.to_dict(),
            "topology": self.topology.descriptor(),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def certify(
    topology: Topology,
    assignment: ProbabilityAssignment,
    formula_lambda2: float | None,
    mode: str,
    diagnostics: dict[str, Any] | None = None,
) -> OptimizationResult:
    """Rebuild the operator, compare with the closed form and package the result.

    The eigensolver value is authoritative.  When it differs from
    ``formula_lambda2`` by more than :data:`FORMULA_TOL` the diagnostics get
    ``formula_mismatch = True`` and both values are kept.
    """
    diag = dict(diagnostics or {})
    eig = spectrum(build_operator(topology, assignment)).lambda2
    diag["eigensolver_lambda2"] = eig
    if formula_lambda2 is None:
        return OptimizationResult(topology, assignment, eig, mode, diag)
    diag["formula_lambda2"] = float(formula_lambda2)
    mismatch = abs(eig - formula_lambda2) > FORMULA_TOL
    diag["formula_mismatch"] = mismatch
    value = eig if mismatch else float(formula_lambda2)
    return OptimizationResult(topology, assignment, value, mode, diag)
