import cmath
from fractions import Fraction

import pytest
from hypothesis import given

from cubecoup.core.scalars import (
    ComplexRational,
    PhaseScalar,
    ScalarMode,
    abs_squared,
    as_real,
    coerce,
    format_scalar,
    is_exact,
    make_complex,
    parse_rational,
    phase_value,
    root_of_unity_multiple,
    scalar_eq,
)

from .conftest import rationals


def test_make_complex_collapses_real_values():
    value = make_complex(Fraction(1, 2), 0)
    assert isinstance(value, Fraction)
    assert value == Fraction(1, 2)


def test_complex_product_with_conjugate_is_real():
    z = ComplexRational(1, 1)
    assert z * z.conjugate() == Fraction(2)
    assert isinstance(z * z.conjugate(), Fraction)


def test_mixed_arithmetic_with_fractions():
    z = ComplexRational(1, 2)
    assert Fraction(1, 2) * z == ComplexRational(Fraction(1, 2), 1)
    assert 1 + z == ComplexRational(2, 2)
    assert z / z == 1


@pytest.mark.parametrize("text,expected", [
    ("3/4", Fraction(3, 4)),
    (" -1/2 ", Fraction(-1, 2)),
    (5, Fraction(5)),
    (Fraction(2, 3), Fraction(2, 3)),
])
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["abc", "1/0", True])
def test_parse_rational_rejects_garbage(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_phase_value_exact_on_quarter_turns():
    assert phase_value(Fraction(0)) == 1
    assert phase_value(Fraction(1, 2)) == -1
    assert phase_value(Fraction(1, 4)) == ComplexRational(0, 1)
    assert phase_value(Fraction(7, 4)) == ComplexRational(0, -1)
    assert isinstance(phase_value(Fraction(1, 3)), PhaseScalar)


def test_roots_of_unity_multiply_exactly():
    third = phase_value(Fraction(1, 3))
    assert third * phase_value(Fraction(2, 3)) == 1
    assert isinstance(third * third.conjugate(), Fraction)
    assert third.conjugate() == phase_value(Fraction(2, 3))
    assert cmath.isclose(complex(third), cmath.exp(2j * cmath.pi / 3))
    fifth = phase_value(Fraction(1, 5))
    assert fifth * fifth * fifth * fifth * fifth == 1
    assert abs_squared(fifth * Fraction(1, 2)) == Fraction(1, 4)


def test_root_of_unity_canonical_form():
    value = phase_value(Fraction(5, 8))
    assert (value.coeff, value.phase) == (Fraction(-1), Fraction(1, 8))
    eighth = phase_value(Fraction(1, 8))
    assert eighth + eighth == root_of_unity_multiple(2, Fraction(1, 8))
    assert eighth - eighth == 0
    assert eighth / eighth == 1
    assert root_of_unity_multiple(0, Fraction(1, 5)) == 0
    assert eighth != phase_value(Fraction(1, 5))
    assert eighth != Fraction(1)


def test_mixed_phases_fall_back_to_floats():
    total = phase_value(Fraction(1, 3)) + phase_value(Fraction(2, 3)) + 1
    assert not is_exact(total)
    assert scalar_eq(total, 0)
    assert format_scalar(phase_value(Fraction(1, 8)))[0] == pytest.approx(cmath.sqrt(2).real / 2)


def test_float_mode_compares_with_tolerance():
    assert scalar_eq(0.1 + 0.2, Fraction(3, 10))
    assert not scalar_eq(Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10 ** 12))
    assert coerce(Fraction(1, 4), ScalarMode.FLOAT) == 0.25
    assert not is_exact(coerce(Fraction(1, 4), ScalarMode.FLOAT))


def test_format_scalar():
    assert format_scalar(Fraction(1, 8)) == "1/8"
    assert format_scalar(3) == "3/1"
    assert format_scalar(ComplexRational(1, 2)) == ["1/1", "2/1"]
    assert format_scalar(True) is True


@given(rationals, rationals)
def test_abs_squared_is_exact_and_nonnegative(re, im):
    z = make_complex(re, im)
    value = abs_squared(z)
    assert isinstance(value, Fraction)
    assert value == re * re + im * im
    assert as_real(z * z.conjugate()) == value
