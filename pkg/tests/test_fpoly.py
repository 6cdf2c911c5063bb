import numpy as np
from hypothesis import assume, given, settings, strategies as st
from sympy import GF, Matrix, Poly, discriminant, factor_list, symbols

from frobclt.fpoly import factor_degrees, integer_det, is_square, poly_discriminant

x = symbols("x")
SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 101, 257]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_integer_det_matches_sympy(rows):
    assert integer_det(rows) == Matrix(rows).det()


def test_integer_det_pivoting():
    assert integer_det([[0, 1], [1, 0]]) == -1
    assert integer_det([[0, 0], [1, 2]]) == 0
    assert integer_det([]) == 1


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=6), st.integers(1, 3))
def test_poly_discriminant_matches_sympy(low, lead):
    coeffs = low + [lead]
    expected = discriminant(Poly(list(reversed(coeffs)), x), x)
    assert poly_discriminant(coeffs) == expected


def test_known_discriminants():
    assert poly_discriminant([-1, -1, 0, 1]) == -23
    assert poly_discriminant([-2, 0, 0, 1]) == -108
    assert poly_discriminant([1, 0, 1]) == -4


def _sympy_degrees(coeffs, p):
    _, facs = factor_list(Poly(list(reversed(coeffs)), x, modulus=p))
    return sorted((e, f.degree()) for f, e in facs)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=1, max_size=8), st.sampled_from(SMALL_PRIMES))
def test_factor_degrees_match_sympy(low, p):
    coeffs = low + [1]
    assert factor_degrees(coeffs, p) == _sympy_degrees(coeffs, p)


def test_inseparable_cases():
    # x^4 + x^2 + 1 = (x^2 + x + 1)^2 mod 2 ; x^6 + x^3 + 1 = (x - 1)^6 mod 3
    assert factor_degrees([1, 0, 1, 0, 1], 2) == [(2, 2)]
    assert factor_degrees([1, 0, 0, 1, 0, 0, 1], 3) == [(6, 1)]
    assert factor_degrees([0, 0, 0, 0, 1], 2) == [(4, 1)]


@given(st.integers(0, 10**12))
def test_is_square(n):
    r = int(np.sqrt(n))
    assert is_square(n) == any(k * k == n for k in (r - 1, r, r + 1))
