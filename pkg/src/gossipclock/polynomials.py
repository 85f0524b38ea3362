"""F-polynomial recursions and root extraction for the final polynomials.

Polynomials are numpy coefficient vectors in ascending order of powers of
``X``, matching :mod:`numpy.polynomial.polynomial`.

Two index conventions are in use for the same three-term recursion
``F_{i+1} = (X + 2) F_i - F_{i-1}``:

* path convention: ``F_1 = 1``, ``F_2 = X + 1`` (degree of ``F_i`` is ``i - 1``);
* ccs convention: ``F_0 = 1``, ``F_1 = X + 1`` (degree of ``F_i`` is ``i``).

They are related by ``F^path_i = F^ccs_{i-1}``.  Running the recursion one
step backwards gives ``F^ccs_{-1} = 1``, which the star and CCS star
solvers need when every edge of a branch is interior.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.polynomial import polynomial as P

from gossipclock.errors import InvalidParameterError, SolverFailureError

__all__ = [
    "Convention",
    "PolySolveResult",
    "f_coefficients",
    "f_recursion",
    "largest_negative_root",
    "real_roots_in",
    "solve_final_polynomial",
]

Convention = Literal["path", "ccs"]

SCAN_LOWER = -4.0
SCAN_STEP = 1e-3
ROOT_RESIDUAL = 1e-12


def _ccs_index(order: int, convention: Convention) -> int:
    if convention == "path":
        if order < 1:
            raise InvalidParameterError(f"path convention needs order >= 1, got {order}")
        return order - 1
    if convention == "ccs":
        if order < -1:
            raise InvalidParameterError(f"ccs convention needs order >= -1, got {order}")
        return order
    raise InvalidParameterError(f"unknown convention {convention!r}")


def f_coefficients(order: int, convention: Convention = "path") -> np.ndarray:
    """Expanded coefficients of ``F_order``."""
    idx = _ccs_index(order, convention)
    prev, cur = np.array([1.0]), np.array([1.0])  # F_{-1}, F_0
    for _ in range(idx):
        prev, cur = cur, P.polysub(P.polymul([2.0, 1.0], cur), prev)
    return cur


def f_recursion(order: int, x: float | np.ndarray, convention: Convention = "path") -> float | np.ndarray:
    """Evaluate ``F_order(x)`` directly by the three-term recursion.

    Raises:
        InvalidParameterError: order 0 (or negative) under the path convention.
    """
    idx = _ccs_index(order, convention)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    cur = np.ones_like(x)
    for _ in range(idx):
        prev, cur = cur, (x + 2.0) * cur - prev
    return cur if cur.ndim else float(cur)


def _sign(v: float) -> int:
    return int(v > 0) - int(v < 0)


def _bisect(coeffs: np.ndarray, lo: float, hi: float) -> float:
    flo = P.polyval(lo, coeffs)
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = P.polyval(mid, coeffs)
        if fm == 0.0:
            return mid
        if _sign(fm) == _sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    flo, fhi = abs(P.polyval(lo, coeffs)), abs(P.polyval(hi, coeffs))
    return lo if flo <= fhi else hi


def _scan(coeffs: np.ndarray, lo: float, hi: float, step: float, depth: int, out: list[float]) -> None:
    count = max(1, int(round((hi - lo) / step)))
    xs = np.linspace(lo, hi, count + 1)
    vals = P.polyval(xs, coeffs)
    deriv = P.polyder(coeffs)
    dvals = P.polyval(xs, deriv) if deriv.size else np.zeros_like(xs)
    for a in range(count):
        xa, xb, fa, fb = xs[a], xs[a + 1], vals[a], vals[a + 1]
        if fa == 0.0:
            out.append(float(xa))
            continue
        if fb == 0.0:
            continue  # picked up as the left end of the next cell (or the endpoint below)
        if _sign(fa) != _sign(fb):
            out.append(_bisect(coeffs, xa, xb))
        elif depth > 0 and _sign(dvals[a]) != _sign(dvals[a + 1]):
            # A turning point inside the cell may hide two close roots.
            _scan(coeffs, xa, xb, (xb - xa) / 50.0, depth - 1, out)
    if vals[-1] == 0.0:
        out.append(float(xs[-1]))


def real_roots_in(coeffs: np.ndarray, lo: float = SCAN_LOWER, hi: float = 0.0, step: float = SCAN_STEP) -> list[float]:
    """All real roots in ``[lo, hi)`` found by sign-bracketing scan plus bisection."""
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if coeffs.size < 2:
        raise InvalidParameterError("polynomial must have degree >= 1")
    found: list[float] = []
    _scan(coeffs, lo, hi, step, depth=3, out=found)
    roots = sorted({r for r in found if r < hi})
    return roots


def largest_negative_root(coeffs: np.ndarray, lower: float = SCAN_LOWER) -> float:
    """Real root closest to zero from below, searched on ``[lower, 0)``.

    Raises:
        InvalidParameterError: zero or constant polynomial.
        SolverFailureError: no root is bracketed in the scan interval.
    """
    roots = real_roots_in(coeffs, lower, 0.0)
    if not roots:
        raise SolverFailureError(f"no sign change of the polynomial on [{lower}, 0)")
    return roots[-1]


@dataclass(frozen=True)
class PolySolveResult:
    """Root extraction result for a final polynomial.

    Attributes:
        coefficients: Ascending coefficients in ``X``.
        roots: Real roots found in the scan interval.
        x_star: The selected (largest) negative root.
        s: Optimal second eigenvalue ``X / (2N) + 1``.
        residual: ``|p(x_star)|`` relative to the largest coefficient.
    """

    coefficients: np.ndarray
    roots: tuple[float, ...]
    x_star: float
    s: float
    residual: float


def solve_final_polynomial(coeffs: np.ndarray, n_vertices: int) -> PolySolveResult:
    """Locate the distinguished root and convert it to ``s``."""
    coeffs = np.asarray(coeffs, dtype=float)
    roots = real_roots_in(coeffs)
    if not roots:
        raise SolverFailureError("final polynomial has no negative root in the scan interval")
    x_star = roots[-1]
    scale = float(np.max(np.abs(coeffs)))
    residual = abs(float(P.polyval(x_star, coeffs))) / scale
    return PolySolveResult(coeffs, tuple(roots), x_star, 1.0 + x_star / (2.0 * n_vertices), residual)
