import cmath
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qutritbraid.cyclo import (
    CyclotomicNumber,
    FieldMismatchError,
    FieldTooSmallError,
    cyclotomic_field,
    cyclotomic_polynomial,
    exp_i_pi,
    parse,
    root_of_unity,
    sqrt_constant,
    sqrt_rational,
)

F72 = cyclotomic_field(72)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 8, 9, 12, 18, 24, 36, 72, 105])
def test_cyclotomic_polynomial_matches_sympy(n):
    x = sympy.symbols("x")
    want = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(n)) == [int(c) for c in want]


def test_field_72_shape():
    assert F72.phi == 24
    assert F72.modulus == tuple([1] + [0] * 11 + [-1] + [0] * 11 + [1])


def elements(field=F72, max_den=6):
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=max_den)
    return st.lists(coeff, min_size=field.phi, max_size=field.phi).map(
        lambda cs: CyclotomicNumber.from_coefficients(cs, field))


@settings(max_examples=40, deadline=None)
@given(elements(), elements(), elements())
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a - a == 0


@settings(max_examples=30, deadline=None)
@given(elements())
def test_inverse_and_conjugation(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
        return
    assert a * a.inverse() == 1
    assert a.conj().conj() == a
    assert (a * a.conj()).is_real()


@settings(max_examples=30, deadline=None)
@given(elements(), elements())
def test_conjugation_is_multiplicative(a, b):
    assert (a * b).conj() == a.conj() * b.conj()


@settings(max_examples=30, deadline=None)
@given(elements())
def test_float_embedding_is_a_homomorphism(a):
    z = root_of_unity(5)
    assert abs((a * z).to_complex() - a.to_complex() * cmath.exp(2j * math.pi * 5 / 72)) < 1e-9


@settings(max_examples=30, deadline=None)
@given(elements())
def test_serialize_round_trip(a):
    assert parse(a.serialize()) == a
    assert parse(a.pretty()) == a


def test_canonical_form_is_lowest_terms():
    x = CyclotomicNumber(F72, [2] + [4] * 23, 6)
    assert x.den == 3 and x.num[0] == 1


def test_roots_of_unity():
    z = root_of_unity(1)
    assert z ** 72 == 1 and z ** 36 == -1
    assert root_of_unity(1, 9) == z ** 8
    assert exp_i_pi(7, 9) == z ** 28
    assert exp_i_pi(-1, 12) == z ** 69


def test_odd_order_field_roots():
    f9 = cyclotomic_field(9)
    assert root_of_unity(1, 18, f9) ** 9 == -1
    with pytest.raises(FieldTooSmallError):
        root_of_unity(1, 4, f9)


@pytest.mark.parametrize("m", [2, 3, 6])
def test_square_root_constants(m):
    s = sqrt_constant(m)
    assert s * s == m
    assert s.is_real()
    assert abs(s.to_complex() - math.sqrt(m)) < 1e-12


@pytest.mark.parametrize("n", [9, 18, 36])
def test_sqrt2_missing_in_small_fields(n):
    # independent oracle: x^2 - 2 stays irreducible over Q(zeta_n)
    x = sympy.symbols("x")
    factors = sympy.factor_list(x ** 2 - 2, extension=sympy.exp(2 * sympy.pi * sympy.I / n))[1]
    assert len(factors) == 1
    with pytest.raises(FieldTooSmallError, match="field too small"):
        sqrt_constant(2, cyclotomic_field(n))


def test_sqrt2_present_in_q_zeta_8():
    x = sympy.symbols("x")
    factors = sympy.factor_list(x ** 2 - 2, extension=sympy.exp(2 * sympy.pi * sympy.I / 8))[1]
    assert len(factors) == 2
    s = sqrt_constant(2, cyclotomic_field(8))
    assert s * s == 2


def test_sqrt_rational():
    assert sqrt_rational(Fraction(1, 2)) ** 2 == Fraction(1, 2)
    assert sqrt_rational(Fraction(2, 3)) ** 2 == Fraction(2, 3)
    assert sqrt_rational(-3) ** 2 == -3
    assert sqrt_rational(12) == sqrt_constant(3) * 2
    with pytest.raises(FieldTooSmallError):
        sqrt_rational(5)


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        root_of_unity(1, 8, cyclotomic_field(8)) + root_of_unity(1)


def test_display_forms():
    assert exp_i_pi(7, 9).latex() == "e^{7i\\pi/9}"
    assert (-exp_i_pi(4, 9)).latex() == "-e^{4i\\pi/9}"
    assert (sqrt_constant(2) / 2 * exp_i_pi(7, 9)).pretty() == "1/2*sqrt(2)*zeta(72)^28"
    assert CyclotomicNumber.from_rational(Fraction(-3, 4)).pretty() == "-3/4"
    assert parse("1/2*sqrt(2)") == sqrt_rational(Fraction(1, 2))


def test_as_root_multiple():
    x = root_of_unity(10) * Fraction(3, 2)
    assert x.as_root_multiple() == (Fraction(3, 2), 10)
    assert (root_of_unity(1) + 1).as_root_multiple() is None
    assert root_of_unity(-3).root_index() == 69


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse("zeta")
    with pytest.raises(ValueError):
        parse("cyc(72)[1, 2]")
