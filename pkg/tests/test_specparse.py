from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuglede.errors import EmptyExpansionError, ParseError
from fuglede.specparse import parse_spectrum


def test_integers_with_truncation():
    assert parse_spectrum("Z", truncate=3) == [-3, -2, -1, 0, 1, 2, 3]


def test_progression_with_step_and_offset():
    got = parse_spectrum("2Z+1/2", truncate=5)
    assert got == [Fraction(k) for k in ("-7/2", "-3/2", "1/2", "5/2", "9/2")]


def test_union_expression():
    got = parse_spectrum("2Z u 2Z+1/2", truncate=3)
    assert got == [
        -2,
        Fraction(-3, 2),
        0,
        Fraction(1, 2),
        2,
        Fraction(5, 2),
    ]


def test_inline_bound():
    assert parse_spectrum("Z |lambda|<=2") == [-2, -1, 0, 1, 2]
    assert parse_spectrum("Z |l|<=2") == [-2, -1, 0, 1, 2]
    assert parse_spectrum("Z |λ|<=2") == [-2, -1, 0, 1, 2]


def test_inline_bound_combines_with_truncate():
    assert parse_spectrum("Z |lambda|<=5", truncate=2) == [-2, -1, 0, 1, 2]
    assert parse_spectrum("Z |lambda|<=2", truncate=5) == [-2, -1, 0, 1, 2]


def test_explicit_list_needs_no_bound():
    got = parse_spectrum("{0, 1/2, 2, 5/2}")
    assert got == [0, Fraction(1, 2), 2, Fraction(5, 2)]
    assert parse_spectrum("{-1, 0.25}") == [-1, Fraction(1, 4)]


def test_negative_step_same_as_positive():
    assert parse_spectrum("-2Z+1", truncate=4) == parse_spectrum("2Z+1", truncate=4)


def test_offset_subtraction_and_decimals():
    assert parse_spectrum("Z-1/4", truncate=1) == [
        Fraction(-1, 4),
        Fraction(3, 4),
    ]
    assert parse_spectrum("0.5Z", truncate=1) == [
        -1,
        Fraction(-1, 2),
        0,
        Fraction(1, 2),
        1,
    ]


def test_union_deduplicates():
    assert parse_spectrum("Z u 2Z u {0}", truncate=2) == [-2, -1, 0, 1, 2]


def test_zero_step_progression():
    assert parse_spectrum("0Z+3") == [3]
    with pytest.raises(EmptyExpansionError):
        parse_spectrum("0Z+3", truncate=2)


def test_unbounded_progression_is_an_error():
    with pytest.raises(ParseError):
        parse_spectrum("Z")
    with pytest.raises(ParseError):
        parse_spectrum("2Z u {0}")  # one unbounded term poisons the union


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_spectrum("2Z + ?")
    assert err.value.position == 5
    with pytest.raises(ParseError):
        parse_spectrum("{1, }")
    with pytest.raises(ParseError):
        parse_spectrum("{1, 2")
    with pytest.raises(ParseError):
        parse_spectrum("Z |lambda|<= x", truncate=None)
    with pytest.raises(ParseError):
        parse_spectrum("")


def test_empty_expansion():
    with pytest.raises(EmptyExpansionError):
        parse_spectrum("{5, 6}", truncate=2)


@given(
    st.integers(1, 5),
    st.integers(-4, 4),
    st.integers(0, 12),
)
def test_progression_expansion_is_correct(a, b_num, K):
    b = Fraction(b_num, 2)
    text = f"{a}Z{'+' if b >= 0 else '-'}{abs(b)}"
    want = sorted(a * k + b for k in range(-100, 101) if abs(a * k + b) <= K)
    if not want:
        with pytest.raises(EmptyExpansionError):
            parse_spectrum(text, truncate=K)
    else:
        assert parse_spectrum(text, truncate=K) == want


def test_values_are_exact_fractions():
    got = parse_spectrum("2Z+1/2", truncate=100)
    assert all(isinstance(v, Fraction) for v in got)
    assert Fraction(197, 2) in got
