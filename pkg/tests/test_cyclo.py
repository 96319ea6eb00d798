import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradalg.cyclo import (
    I,
    ONE,
    SQRT2,
    CycNum,
    hat_equal,
    parse_cyc,
    root_of_unity_order,
    sqrt_cyc,
    tilde_equal,
    zeta,
)

CONDUCTORS = (1, 2, 3, 4, 5, 6, 8, 9, 12, 15)


def numeric(n: int, coeffs: dict) -> complex:
    """Independent evaluation of sum c_k exp(2 pi i k / n)."""
    return sum(float(c) * cmath.exp(2j * cmath.pi * k / n) for k, c in coeffs.items()) + 0j


@st.composite
def raw_numbers(draw):
    n = draw(st.sampled_from(CONDUCTORS))
    keys = draw(st.lists(st.integers(0, n - 1), max_size=4))
    coeffs = {k: Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4))) for k in keys}
    return n, coeffs


def close(a: complex, b: complex) -> bool:
    return abs(a - b) < 1e-9


@given(raw_numbers())
def test_canonical_form_preserves_value(data):
    n, coeffs = data
    x = CycNum.from_powers(n, coeffs)
    assert close(complex(x), numeric(n, coeffs))


@given(raw_numbers(), raw_numbers())
def test_arithmetic_matches_numeric_evaluation(a, b):
    x, y = CycNum.from_powers(*a), CycNum.from_powers(*b)
    va, vb = numeric(*a), numeric(*b)
    assert close(complex(x + y), va + vb)
    assert close(complex(x * y), va * vb)
    assert close(complex(x - y), va - vb)


@given(raw_numbers(), raw_numbers())
def test_equality_is_value_equality(a, b):
    x, y = CycNum.from_powers(*a), CycNum.from_powers(*b)
    assert (x == y) == close(numeric(*a), numeric(*b))


@given(raw_numbers(), raw_numbers(), raw_numbers())
@settings(max_examples=60)
def test_field_axioms(a, b, c):
    x, y, z = (CycNum.from_powers(*t) for t in (a, b, c))
    assert x + y == y + x
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == CycNum(0)


@given(raw_numbers())
def test_inverse(a):
    x = CycNum.from_powers(*a)
    if x.is_zero():
        with pytest.raises(ZeroDivisionError):
            x.inv()
    else:
        assert x * x.inv() == ONE


@given(raw_numbers())
def test_text_round_trip(a):
    x = CycNum.from_powers(*a)
    assert parse_cyc(str(x)) == x
    assert str(parse_cyc(str(x))) == str(x)


def test_canonical_text_examples():
    assert str(I) == "z(4,1)"
    assert str(zeta(4, 2)) == "-1"
    assert str(zeta(3) + zeta(3, 2)) == "-1"
    assert parse_cyc("i") == I
    assert parse_cyc("1/2 + 3*z(8,1)") == Fraction(1, 2) + zeta(8) * 3


@pytest.mark.parametrize("bad", ["", "1 +", "2 z(4,1)", "3*", "z(4,1) z(4,1)"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        parse_cyc(bad)


def test_sqrt2():
    assert SQRT2 * SQRT2 == CycNum(2)


@pytest.mark.parametrize("x", [CycNum(2), CycNum(-3), CycNum(Fraction(5, 7)), I, zeta(3) * 5, zeta(5, 2) * -2])
def test_sqrt(x):
    r = sqrt_cyc(x)
    assert r * r == x


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8, 10, 12, 24])
def test_root_of_unity_order(n):
    for k in range(n):
        assert root_of_unity_order(zeta(n, k)) == n // math.gcd(n, k)
    assert root_of_unity_order(zeta(n) * 2) is None


def test_root_of_unity_order_rejects_non_roots():
    assert root_of_unity_order(ONE + I) is None
    assert root_of_unity_order(SQRT2) is None


values = st.sampled_from([ONE, CycNum(2), I, zeta(3), zeta(8) * 3, -ONE, zeta(12, 5)])


@given(values, values, values, st.integers(1, 6))
def test_class_relations_are_equivalences(a, b, c, l):
    for rel in (hat_equal, tilde_equal):
        assert rel(a, a, l)
        assert rel(a, b, l) == rel(b, a, l)
        if rel(a, b, l) and rel(b, c, l):
            assert rel(a, c, l)
    if hat_equal(a, b, l):
        assert tilde_equal(a, b, l)


def test_class_relations_examples():
    assert hat_equal(1, -1, 2)
    assert not hat_equal(1, -1, 1)
    assert tilde_equal(1, -1, 1)
    assert tilde_equal(1, I, 2)
    assert not hat_equal(1, I, 2)
