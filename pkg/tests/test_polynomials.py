from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import polynomial as P

from gossipclock.errors import InvalidParameterError
from gossipclock.polynomials import (
    f_coefficients,
    f_recursion,
    largest_negative_root,
    real_roots_in,
    solve_final_polynomial,
)


def test_first_terms():
    assert np.allclose(f_coefficients(1), [1.0])
    assert np.allclose(f_coefficients(2), [1.0, 1.0])
    assert np.allclose(f_coefficients(3), [1.0, 3.0, 1.0])
    assert np.allclose(f_coefficients(-1, "ccs"), [1.0])


def test_conventions_are_shifted():
    for i in range(1, 8):
        assert np.allclose(f_coefficients(i, "path"), f_coefficients(i - 1, "ccs"))


def test_path_order_zero_rejected():
    with pytest.raises(InvalidParameterError):
        f_recursion(0, 0.3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 15), st.floats(-4.0, 1.0))
def test_recursion_matches_expansion(order, x):
    coeffs = f_coefficients(order)
    # Monomial evaluation cancels badly near the roots; bound its rounding error.
    scale = P.polyval(abs(x), np.abs(coeffs))
    assert abs(f_recursion(order, x) - P.polyval(x, coeffs)) <= 1e-13 * scale + 1e-12


def test_roots_are_negative():
    # F_3 = X^2 + 3X + 1 has roots (-3 +- sqrt 5)/2.
    roots = real_roots_in(f_coefficients(3))
    assert roots == pytest.approx([(-3 - 5**0.5) / 2, (-3 + 5**0.5) / 2], abs=1e-12)
    assert largest_negative_root(f_coefficients(3)) == pytest.approx((-3 + 5**0.5) / 2, abs=1e-12)


def test_final_polynomial_conversion():
    res = solve_final_polynomial(np.array([1.0, 2.0]), n_vertices=4)  # root -1/2
    assert res.x_star == pytest.approx(-0.5)
    assert res.s == pytest.approx(1 - 0.5 / 8)
    assert res.residual < 1e-12
