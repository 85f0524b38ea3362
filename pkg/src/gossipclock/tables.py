"""Reference tables from the literature, embedded as data, and their regeneration.

Table I lists optimal probabilities for every connected graph on four
vertices.  Tables II and III give the boundary index ``m`` and the optimal
second eigenvalue ``s`` for symmetric stars; Tables IV and V do the same
for CCS stars.  The published values are stored verbatim; nothing here is
recomputed from formulas.

Cells known to disagree with an independent brute-force optimum are listed
in :data:`DOCUMENTED_DISCREPANCIES` together with the reason.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Any

import numpy as np

from gossipclock.analytic import solve_cartesian_uniform, solve_ccs_uniform, solve_symstar_uniform, solve_wheel
from gossipclock.core import ProbabilityAssignment, build_operator, spectrum
from gossipclock.topology import Topology, generate

__all__ = [
    "N_VALUES",
    "K_VALUES",
    "TABLE_II",
    "TABLE_III",
    "TABLE_IV",
    "TABLE_V",
    "TableOneCase",
    "table_one_cases",
    "DOCUMENTED_DISCREPANCIES",
    "CellCheck",
    "TableReport",
    "verify_tables",
    "TABLE_TOL",
]

N_VALUES = (3, 4, 5, 6, 7, 8)
K_VALUES = (2, 3, 4, 5, 6, 7, 8, 9, 10)
#: Tolerance for the six-decimal tables.
TABLE_TOL = 1e-5

# Rows are k = 2..10, columns n = 3..8.
TABLE_II: dict[int, tuple[int, ...]] = {
    2: (0, 0, 0, 0, 0, 0),
    3: (1, 1, 0, 0, 0, 0),
    4: (1, 1, 1, 1, 1, 0),
    5: (1, 1, 1, 1, 1, 1),
    6: (2, 1, 1, 1, 1, 1),
    7: (2, 2, 1, 1, 1, 1),
    8: (2, 2, 2, 1, 1, 1),
    9: (2, 2, 2, 2, 2, 1),
    10: (3, 2, 2, 2, 2, 2),
}
TABLE_III: dict[int, tuple[float, ...]] = {
    2: (0.971428, 0.97863247, 0.98295454, 0.98582995, 0.987878, 0.9894117),
    3: (0.988548, 0.99146614, 0.99320128, 0.9942928, 0.995122, 0.995741),
    4: (0.994781, 0.996114, 0.996906, 0.997430, 0.9978028, 0.9980817),
    5: (0.997205, 0.997917, 0.998341, 0.998622, 0.998822, 0.998971),
    6: (0.998334, 0.998758, 0.999011, 0.999178, 0.999297, 0.999386),
    7: (0.998929, 0.999201, 0.999363, 0.999471, 0.999547, 0.99960),
    8: (0.999272, 0.999456, 0.999567, 0.999640, 0.999692, 0.999731),
    9: (0.999482, 0.999614, 0.999692, 0.999744, 0.999780, 0.999808),
    10: (0.999619, 0.999715, 0.999773, 0.999811, 0.999838, 0.999859),
}
TABLE_IV: dict[int, tuple[int, ...]] = {
    2: (0, 0, 0, 0, 0, 0),
    3: (1, 1, 1, 1, 1, 1),
    4: (1, 1, 1, 1, 1, 1),
    5: (2, 2, 2, 2, 2, 2),
    6: (2, 2, 2, 2, 2, 2),
    7: (2, 2, 2, 2, 2, 2),
    8: (3, 2, 2, 2, 2, 2),
    9: (3, 3, 3, 3, 3, 3),
    10: (3, 3, 3, 3, 3, 3),
}
TABLE_V: dict[int, tuple[float, ...]] = {
    2: (0.95, 0.964285, 0.972222, 0.977272, 0.980769, 0.983333),
    3: (0.982725, 0.987533, 0.990242, 0.991983, 0.993196, 0.994090),
    4: (0.992852, 0.994793, 0.995903, 0.996623, 0.997127, 0.997500),
    5: (0.996396, 0.997360, 0.997917, 0.998279, 0.998534, 0.998723),
    6: (0.997937, 0.998483, 0.998801, 0.999008, 0.999154, 0.999263),
    7: (0.998712, 0.999051, 0.999248, 0.999377, 0.999469, 0.999536),
    8: (0.999143, 0.999367, 0.999498, 0.999584, 0.999645, 0.999690),
    9: (0.999401, 0.999557, 0.999648, 0.999708, 0.999751, 0.999783),
    10: (0.999566, 0.999678, 0.999744, 0.999788, 0.999819, 0.999842),
}

_SYMSTAR_K2 = (
    "the printed value is larger than the optimum; a brute-force grid over the single free "
    "parameter reproduces the computed value to 1e-9"
)
_SYMSTAR_K3 = (
    "the printed value is smaller than the global optimum found by a grid scan and by "
    "random-restart local search, so no feasible assignment reaches it"
)
_CCS_K2 = (
    "the optimum has m=1 (interior core probability); a brute-force grid over the single "
    "free parameter confirms the computed value"
)

#: ``(table, k, n) -> reason`` for cells that legitimately disagree.
DOCUMENTED_DISCREPANCIES: dict[tuple[str, int, int], str] = {}
for _n in N_VALUES:
    DOCUMENTED_DISCREPANCIES[("III", 2, _n)] = _SYMSTAR_K2
    DOCUMENTED_DISCREPANCIES[("IV", 2, _n)] = _CCS_K2
    DOCUMENTED_DISCREPANCIES[("V", 2, _n)] = _CCS_K2
for _n in (6, 7, 8):
    DOCUMENTED_DISCREPANCIES[("III", 3, _n)] = _SYMSTAR_K3


# ---------------------------------------------------------------- Table I


@dataclass(frozen=True)
class TableOneCase:
    """One four-vertex graph with its published probabilities.

    ``expected`` is the published optimum; ``exact`` its closed form as text.
    """

    name: str
    topology: Topology
    assignment: ProbabilityAssignment
    expected: float
    exact: str
    note: str = ""


def _case(name: str, edges: list[tuple[int, int]], trans: dict[tuple[int, int], float], expected: float, exact: str, note: str = "") -> TableOneCase:
    topo = Topology.from_edges(4, edges)
    assignment = ProbabilityAssignment.from_entries(topo, np.full(4, 0.25), trans)
    return TableOneCase(name, topo, assignment, expected, exact, note)


def _frac(text: str) -> float:
    return float(Fraction(text))


def table_one_cases() -> list[TableOneCase]:
    """The six four-vertex cases, with vertices renumbered ``0..3``."""
    r3 = sqrt(3.0)
    cases = []
    # Path -2, -1, 1, 2 -> 0, 1, 2, 3.
    cases.append(
        _case(
            "path",
            [(0, 1), (1, 2), (2, 3)],
            {(0, 1): 1.0, (3, 2): 1.0, (1, 0): 0.2, (2, 3): 0.2, (1, 2): 0.8, (2, 1): 0.8},
            _frac("9/10"),
            "9/10",
        )
    )
    cases.append(
        _case(
            "star",
            [(0, 1), (0, 2), (0, 3)],
            {(1, 0): 1.0, (2, 0): 1.0, (3, 0): 1.0, (0, 1): 1 / 3, (0, 2): 1 / 3, (0, 3): 1 / 3},
            _frac("5/6"),
            "5/6",
        )
    )
    # Triangle {-2, -1, 0} plus the pendant 1; renumbered -2 -> 0, -1 -> 1, 0 -> 2, 1 -> 3.
    p_tail = (5 + 2 * r3) / 13
    p_clique = (4 - r3) / 13
    p_in = (24 + 7 * r3) / 39
    p_side = (15 - 7 * r3) / 39
    cases.append(
        _case(
            "lollipop",
            [(0, 1), (0, 2), (1, 2), (2, 3)],
            {
                (2, 3): p_tail,
                (3, 2): 1.0,
                (2, 0): p_clique,
                (2, 1): p_clique,
                (0, 2): p_in,
                (1, 2): p_in,
                (0, 1): p_side,
                (1, 0): p_side,
            },
            (3 + r3) / (4 + r3),
            "(3+sqrt(3))/(4+sqrt(3))",
            "this four-vertex graph (triangle plus pendant) is usually called the paw",
        )
    )
    cycle = {(i, (i + 1) % 4): 0.5 for i in range(4)} | {((i + 1) % 4, i): 0.5 for i in range(4)}
    cases.append(_case("cycle", [(0, 1), (1, 2), (2, 3), (0, 3)], cycle, _frac("3/4"), "3/4"))
    # Vertices 1..4 -> 0..3; the chord 2-4 becomes 1-3.
    diamond = dict(cycle)
    diamond[(1, 3)] = 0.0
    diamond[(3, 1)] = 0.0
    cases.append(
        _case(
            "paw",
            [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)],
            diamond,
            _frac("3/4"),
            "3/4",
            "the listed edges form the diamond (four-cycle plus one chord); the printed rows give "
            "the chord endpoints total probability 3/2, so the chord is set to 0, which leaves the "
            "cycle assignment",
        )
    )
    complete = {(i, j): 1 / 3 for i in range(4) for j in range(4) if i != j}
    cases.append(_case("complete", [(i, j) for i in range(4) for j in range(i + 1, 4)], complete, _frac("2/3"), "2/3"))
    return cases


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class CellCheck:
    """One compared value."""

    table: str
    key: str
    expected: float
    computed: float
    passed: bool
    documented: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "table": self.table,
            "key": self.key,
            "expected": self.expected,
            "computed": self.computed,
            "passed": self.passed,
            "documented": self.documented,
        }


@dataclass(frozen=True)
class TableReport:
    """All cell comparisons plus notes on text-level discrepancies."""

    cells: list[CellCheck]
    notes: list[dict[str, Any]] = field(default_factory=list)

    @property
    def failures(self) -> list[CellCheck]:
        return [c for c in self.cells if not c.passed]

    @property
    def undocumented(self) -> list[CellCheck]:
        return [c for c in self.failures if c.documented is None]

    @property
    def ok(self) -> bool:
        return not self.undocumented

    def summary(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for c in self.cells:
            s = out.setdefault(c.table, {"total": 0, "passed": 0, "documented": 0, "undocumented": 0})
            s["total"] += 1
            if c.passed:
                s["passed"] += 1
            elif c.documented:
                s["documented"] += 1
            else:
                s["undocumented"] += 1
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "summary": self.summary(),
            "cells": [c.to_dict() for c in self.cells],
            "notes": self.notes,
        }


def _grid_checks(table_m: str, table_s: str, solver, m_ref, s_ref) -> list[CellCheck]:
    cells = []
    for k in K_VALUES:
        for col, n in enumerate(N_VALUES):
            res = solver(n, k)
            key = f"k={k},n={n}"
            em, es = m_ref[k][col], s_ref[k][col]
            cells.append(
                CellCheck(table_m, key, float(em), float(res.m), res.m == em, DOCUMENTED_DISCREPANCIES.get((table_m, k, n)))
            )
            cells.append(
                CellCheck(
                    table_s, key, es, res.lambda2, abs(res.lambda2 - es) <= TABLE_TOL, DOCUMENTED_DISCREPANCIES.get((table_s, k, n))
                )
            )
    return cells


def verify_tables() -> TableReport:
    """Regenerate Tables I to V and compare against the embedded values."""
    cells = []
    for case in table_one_cases():
        value = spectrum(build_operator(case.topology, case.assignment)).lambda2
        cells.append(CellCheck("I", case.name, case.expected, value, abs(value - case.expected) <= 1e-9, None))
    cells += _grid_checks("II", "III", solve_symstar_uniform, TABLE_II, TABLE_III)
    cells += _grid_checks("IV", "V", solve_ccs_uniform, TABLE_IV, TABLE_V)
    notes = []
    prism = solve_cartesian_uniform([generate("complete:n=2"), generate("complete:n=3")])
    notes.append(
        {
            "item": "prism",
            "computed_lambda2": prism.lambda2,
            "printed_text_lambda2": prism.diagnostics.get("printed_text_lambda2"),
            "direction_probabilities": prism.diagnostics["direction_probabilities"],
            "flag": "the text value disagrees with its own closed form; the eigensolver value is reported",
        }
    )
    for n in (6, 7, 8):
        for mode in ("uniform", "nonuniform"):
            w = solve_wheel(n, mode)
            notes.append(
                {
                    "item": f"wheel n={n} {mode}",
                    "computed_lambda2": w.lambda2,
                    "printed_formula_lambda2": w.diagnostics.get("printed_formula_lambda2"),
                    "printed_assignment_lambda2": w.diagnostics.get("printed_assignment_lambda2"),
                    "formula_mismatch": w.diagnostics.get("formula_mismatch"),
                }
            )
    return TableReport(cells, notes)
