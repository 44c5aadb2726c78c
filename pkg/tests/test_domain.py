from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from fuglede.domain import (
    IntervalUnion,
    SampledFunction,
    endpoint_str,
    exp_inner,
    gram,
    indicator_coeff,
    make_domain,
)
from fuglede.errors import (
    DuplicateFrequencyError,
    EmptyDomainError,
    GridMismatchError,
    IndicatorRangeError,
    OverlapError,
)

UNIT = make_domain([(0, 1)])
UNION = make_domain([("0", "1/2"), ("1", "3/2")])


def _quad_inner(domain, lam, mu):
    """Adaptive-quadrature oracle for exp_inner."""
    nu = lam - mu
    total = 0.0 + 0.0j
    for a, b in zip(domain.alpha, domain.beta):
        re = quad(lambda x: np.cos(2 * np.pi * nu * x), a, b, limit=200)[0]
        im = quad(lambda x: np.sin(2 * np.pi * nu * x), a, b, limit=200)[0]
        total += re + 1j * im
    return total


def test_make_domain_sorts_and_keeps_exact_endpoints():
    d = make_domain([("1", "3/2"), ("0", "0.5")])
    assert d.lefts == (Fraction(0), Fraction(1))
    assert d.rights == (Fraction(1, 2), Fraction(3, 2))
    assert d.is_rational
    assert d.measure == Fraction(1)


def test_make_domain_float_endpoints_stay_floats():
    d = make_domain([(0.1, 0.7)])
    assert not d.is_rational
    assert d.measure == pytest.approx(0.6)


def test_make_domain_rejects_bad_input():
    with pytest.raises(EmptyDomainError):
        make_domain([])
    with pytest.raises(EmptyDomainError):
        make_domain([(0, 0)])
    with pytest.raises(EmptyDomainError):
        make_domain([(1, 0)])
    with pytest.raises(OverlapError):
        make_domain([(0, 1), (0.5, 2)])
    with pytest.raises(OverlapError):
        # touching intervals are rejected too
        make_domain([(0, 1), (1, 2)])


def test_domain_json_round_trip():
    for d in (UNIT, UNION, make_domain([("-1/3", "0.25")])):
        assert IntervalUnion.from_json(d.to_json()) == d
    assert UNION.to_json() == {"intervals": [["0", "0.5"], ["1", "1.5"]]}


def test_endpoint_str_exact_forms():
    assert endpoint_str(Fraction(1, 2)) == "0.5"
    assert endpoint_str(Fraction(3, 2)) == "1.5"
    assert endpoint_str(Fraction(-3, 20)) == "-0.15"
    assert endpoint_str(Fraction(7)) == "7"
    assert endpoint_str(Fraction(1, 3)) == "1/3"
    assert Fraction(endpoint_str(Fraction(1, 3))) == Fraction(1, 3)


@given(
    st.lists(
        st.tuples(st.integers(-50, 50), st.integers(1, 20)),
        min_size=1,
        max_size=4,
    )
)
def test_domain_order_of_input_does_not_matter(seeds):
    # build disjoint intervals deterministically from the seed data
    pairs = []
    left = Fraction(0)
    for offset, width in seeds:
        a = left + Fraction(abs(offset) + 1, 7)
        b = a + Fraction(width, 11)
        pairs.append((a, b))
        left = b
    d1 = make_domain(pairs)
    d2 = make_domain(list(reversed(pairs)))
    assert d1 == d2


def test_exp_inner_at_equal_frequencies_is_measure():
    assert exp_inner(UNIT, 3.7, 3.7) == pytest.approx(1.0)
    assert exp_inner(UNION, 0.0, 0.0) == pytest.approx(1.0)


def test_exp_inner_union_at_nu_one():
    # frozen closed-form value: 2i/pi for nu = 1 on the two-interval domain
    val = exp_inner(UNION, 1.0, 0.0)
    assert val == pytest.approx(2j / np.pi, abs=1e-14)
    assert abs(val) == pytest.approx(2 / np.pi)


@pytest.mark.parametrize("domain", [UNIT, UNION, make_domain([(-0.75, -0.1), (0.2, 1.3)])])
def test_exp_inner_matches_quadrature(domain):
    rng = np.random.default_rng(0)
    for _ in range(10):
        lam, mu = rng.uniform(-6, 6, size=2)
        assert exp_inner(domain, lam, mu) == pytest.approx(
            _quad_inner(domain, lam, mu), abs=1e-10
        )


def test_exp_inner_series_branch_is_continuous():
    # values just below and above the series threshold must agree closely
    for nu in (0.9e-8, 1.1e-8):
        assert exp_inner(UNION, nu, 0.0) == pytest.approx(
            _quad_inner(UNION, nu, 0.0), abs=1e-13
        )


def test_gram_is_hermitian_and_diag_is_measure():
    freqs = [0.0, 0.5, 2.0, 2.5]
    G = gram(UNION, freqs)
    np.testing.assert_allclose(G, G.conj().T, atol=1e-15)
    np.testing.assert_allclose(np.diag(G).real, 1.0, atol=1e-15)


def test_gram_union_fixture_is_diagonal():
    # the union domain with frequencies from 2Z u (2Z + 1/2) is orthogonal
    G = gram(UNION, [-2.0, -1.5, 0.0, 0.5, 2.0, 2.5])
    off = G - np.diag(np.diag(G))
    assert np.max(np.abs(off)) < 1e-14


def test_gram_rejects_duplicates():
    with pytest.raises(DuplicateFrequencyError):
        gram(UNIT, [0.0, 1.0, 1.0])


def test_indicator_coeff_matches_quadrature():
    rng = np.random.default_rng(1)
    for _ in range(8):
        a, b = np.sort(rng.uniform(0.0, 0.5, size=2))
        lam = rng.uniform(-5, 5)
        want_re = quad(lambda x: np.cos(2 * np.pi * lam * x), a, b, limit=200)[0]
        want_im = quad(lambda x: -np.sin(2 * np.pi * lam * x), a, b, limit=200)[0]
        got = indicator_coeff(UNION, a, b, lam)
        assert got == pytest.approx(want_re + 1j * want_im, abs=1e-12)


def test_indicator_coeff_zero_frequency_is_length():
    assert indicator_coeff(UNIT, 0.25, 0.75, 0.0) == pytest.approx(0.5)


def test_indicator_coeff_range_checks():
    with pytest.raises(IndicatorRangeError):
        indicator_coeff(UNION, 0.25, 1.25, 1.0)  # spans the gap
    with pytest.raises(IndicatorRangeError):
        indicator_coeff(UNIT, 0.5, 0.25, 1.0)  # reversed
    # endpoints exactly on the interval boundary are fine
    assert indicator_coeff(UNIT, 0.0, 1.0, 0.0) == pytest.approx(1.0)


def test_sampled_function_grid_and_norm():
    f = SampledFunction.from_exponential(UNION, 8, 2.0)
    assert f.grid.shape == (2, 8)
    assert f.grid[0, 0] == pytest.approx(0.5 / 16)
    assert f.grid[1, 0] == pytest.approx(1.0 + 0.5 / 16)
    # |e_lam| = 1, so the midpoint norm is exactly sqrt(measure)
    assert f.norm() == pytest.approx(1.0, abs=1e-14)


def test_sampled_function_inner_matches_closed_form():
    f = SampledFunction.from_exponential(UNION, 64, 2.0)
    g = SampledFunction.from_exponential(UNION, 64, 0.5)
    # these two are orthogonal, and the midpoint rule sees that exactly
    assert abs(f.inner(g)) < 1e-13
    assert f.inner(f) == pytest.approx(1.0, abs=1e-14)


def test_sampled_function_grid_mismatch():
    f = SampledFunction.from_exponential(UNION, 8, 2.0)
    g = SampledFunction.from_exponential(UNION, 16, 2.0)
    with pytest.raises(GridMismatchError):
        f.inner(g)
    h = SampledFunction.from_exponential(UNIT, 8, 2.0)
    with pytest.raises(GridMismatchError):
        f.inner(h)


def test_sampled_indicator_tags_form():
    f = SampledFunction.from_indicator(UNIT, 32, 0.0, 0.25)
    assert f.form == ("indicator", 0.0, 0.25)
    assert f.norm() == pytest.approx(0.5, abs=1e-12)


@given(st.integers(-40, 40), st.integers(-40, 40))
def test_integer_frequencies_orthogonal_on_unit_interval(j, k):
    val = exp_inner(UNIT, float(j), float(k))
    if j == k:
        assert val == pytest.approx(1.0)
    else:
        assert abs(val) < 1e-12
