import numpy as np
import pytest

from fuglede.errors import GridMismatchError, NotInSpectrumError
from fuglede.square2d import (
    SquareSample,
    eigen_check,
    evolve_h,
    evolve_v,
    flip,
    gram2d,
    membership,
    snap_time,
    spectrum_points,
)


def test_membership():
    assert membership(3, 4)
    assert membership(-2, 0)
    assert membership(2.5, 3)
    assert membership(-0.5, -1)
    assert not membership(3, 3)
    assert not membership(2.5, 2)
    assert not membership(0.3, 0)
    assert membership(3 + 1e-10, 4)
    assert not membership(3 + 1e-6, 4)


def test_flip():
    assert flip(0.25) == pytest.approx(0.75)
    assert flip(0.75) == pytest.approx(0.25)
    assert flip(0.0) == pytest.approx(0.5)


def test_spectrum_points_counts():
    pts = spectrum_points(2)
    assert len(pts) == 15 + 8
    assert (0.0, 0.0) in pts
    assert (1.0, 2.0) in pts
    assert (0.5, 1.0) in pts
    assert (-1.5, -1.0) in pts
    assert (1.0, 1.0) not in pts
    assert len(spectrum_points(4)) == 77
    for l1, l2 in pts:
        assert membership(l1, l2)


def test_square_sample_needs_even_grid():
    with pytest.raises(GridMismatchError):
        SquareSample(np.zeros((5, 5)))
    with pytest.raises(GridMismatchError):
        SquareSample(np.zeros((4, 6)))


def test_snap_time():
    cells, t_snap, err = snap_time(0.25, 64)
    assert cells == 16 and t_snap == 0.25 and err == 0.0
    cells, t_snap, err = snap_time(0.3, 64)
    assert cells == 19
    assert err == pytest.approx(abs(0.3 - 19 / 64))


def test_evolve_h_routes_single_point_with_flip():
    G = 64
    vals = np.zeros((G, G))
    vals[12, 10] = 1.0
    out = evolve_h(SquareSample(vals), 0.25)
    # row 60 wraps once: source row (60+16) % 64 = 12, column flipped by 32
    assert out.values[60, 42] == 1.0
    assert np.count_nonzero(out.values) == 1


def test_evolve_v_plain_wrap():
    G = 8
    vals = np.zeros((G, G))
    vals[3, 7] = 1.0
    out = evolve_v(SquareSample(vals), 2 / 8)
    assert out.values[3, 5] == 1.0
    assert np.count_nonzero(out.values) == 1


def test_eigen_check_members():
    rng = np.random.default_rng(2)
    G = 64
    for l1, l2 in [(0, 0), (3, -2), (-1, 4), (0.5, 1), (-2.5, 3), (3.5, -1)]:
        for _ in range(3):
            t1 = int(rng.integers(-2 * G, 2 * G)) / G
            t2 = int(rng.integers(-2 * G, 2 * G)) / G
            assert eigen_check(l1, l2, t1, t2, G) < 1e-12


def test_eigen_check_rejects_non_members():
    with pytest.raises(NotInSpectrumError):
        eigen_check(0.3, 0.0, 0.1, 0.1, 64)
    with pytest.raises(NotInSpectrumError):
        eigen_check(0.5, 2.0, 0.1, 0.1, 64)


def test_wrong_pair_is_not_an_eigenvector():
    # (1/2, 2) pairs a half-integer with an even vertical frequency; the
    # flip picked up on wrap then breaks the eigenvector relation
    G = 64
    f = SquareSample.from_exponential(0.5, 2.0, G)
    evolved = evolve_h(f, 0.5)
    phase = np.exp(2j * np.pi * 0.5 * 0.5)
    residual = np.max(np.abs(evolved.values - phase * f.values))
    assert residual > 1.9


def test_group_law_exact():
    G = 64
    rng = np.random.default_rng(3)
    vals = rng.normal(size=(G, G)) + 1j * rng.normal(size=(G, G))
    f = SquareSample(vals)
    s, t = 17 / 64, -40 / 64
    a = evolve_h(evolve_h(f, t), s)
    b = evolve_h(f, s + t)
    assert np.array_equal(a.values, b.values)
    av = evolve_v(evolve_v(f, t), s)
    bv = evolve_v(f, s + t)
    assert np.array_equal(av.values, bv.values)


def test_horizontal_and_vertical_commute_exactly():
    G = 32
    rng = np.random.default_rng(4)
    vals = rng.normal(size=(G, G)) + 1j * rng.normal(size=(G, G))
    f = SquareSample(vals)
    t1, t2 = 45 / 32, 7 / 32
    a = evolve_v(evolve_h(f, t1), t2)
    b = evolve_h(evolve_v(f, t2), t1)
    assert np.array_equal(a.values, b.values)


def test_gram2d_is_identity_on_spectrum():
    pts = spectrum_points(4)
    G = gram2d(pts, 64)
    np.testing.assert_allclose(np.diag(G).real, 1.0, atol=1e-13)
    off = G - np.diag(np.diag(G))
    assert np.max(np.abs(off)) < 1e-12


def test_gram2d_detects_non_orthogonal_pairs():
    # (1/2, 0) is outside the spectrum and overlaps the constant: the
    # inner product over the square is 2 i / pi
    G = gram2d([(0.0, 0.0), (0.5, 0.0)], 64)
    assert abs(G[0, 1]) == pytest.approx(2 / np.pi, abs=1e-3)
