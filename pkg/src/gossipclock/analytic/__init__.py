"""Closed-form optimal gossip probabilities for the supported topology families."""

from __future__ import annotations

from gossipclock.analytic.balance import balance_residual, detailed_balance_from_weights
from gossipclock.analytic.lp import (
    solve_cartesian_uniform,
    solve_complete_uniform,
    solve_cycle_uniform,
    solve_wheel,
    wheel_printed_assignment,
)
from gossipclock.analytic.nonuniform import (
    solve_ccs2_nonuniform,
    solve_ccs_nonuniform,
    solve_lollipop_nonuniform,
    solve_palm_nonuniform,
    solve_symstar_nonuniform,
)
from gossipclock.analytic.result import FORMULA_TOL, OptimizationResult, certify, normalize_mode
from gossipclock.analytic.uniform import (
    solve_ccs_uniform,
    solve_path_uniform,
    solve_symstar_uniform,
    solve_two_coupled_uniform,
)

__all__ = [
    "FORMULA_TOL",
    "OptimizationResult",
    "balance_residual",
    "certify",
    "detailed_balance_from_weights",
    "normalize_mode",
    "solve_cartesian_uniform",
    "solve_ccs2_nonuniform",
    "solve_ccs_nonuniform",
    "solve_ccs_uniform",
    "solve_complete_uniform",
    "solve_cycle_uniform",
    "solve_lollipop_nonuniform",
    "solve_palm_nonuniform",
    "solve_path_uniform",
    "solve_symstar_nonuniform",
    "solve_symstar_uniform",
    "solve_two_coupled_uniform",
    "solve_wheel",
    "wheel_printed_assignment",
]
