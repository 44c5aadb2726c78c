"""Unit square with translation dynamics that flip the vertical coordinate.

The model spectrum is (Z x 2Z) u ((Z + 1/2) x (2Z + 1)).  Horizontal
translation wraps x1 modulo 1 and applies a half-turn flip
x2 -> x2 + 1/2 (mod 1) once per wrap; vertical translation is a plain wrap
in x2.  On a G x G grid with G even and times snapped to multiples of 1/G,
both motions are exact index permutations, so group-law and commutation
checks can demand exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, NotInSpectrumError

#: Distance to the lattice below which a frequency pair counts as a member.
MEMBERSHIP_TOL = 1e-9


def _near_int(x: float, tol: float) -> bool:
    return abs(x - round(x)) <= tol


def membership(l1: float, l2: float, tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether (l1, l2) lies in (Z x 2Z) u ((Z + 1/2) x (2Z + 1))."""
    if _near_int(l1, tol) and _near_int(l2 / 2.0, tol):
        return True
    return _near_int(l1 - 0.5, tol) and _near_int((l2 - 1.0) / 2.0, tol)


def flip(x2: float) -> float:
    """Half-turn of the vertical coordinate: x2 + 1/2 modulo 1."""
    return (x2 + 0.5) % 1.0


def spectrum_points(lmax: float) -> list:
    """All spectrum points with sup norm at most lmax, sorted."""
    out = []
    top = int(np.floor(lmax))
    for l1 in range(-top, top + 1):
        for l2 in range(-top, top + 1, 1):
            if l2 % 2 == 0:
                out.append((float(l1), float(l2)))
    half = [
        k + 0.5 for k in range(-top - 1, top + 1) if abs(k + 0.5) <= lmax
    ]
    for l1 in half:
        for l2 in range(-top, top + 1):
            if l2 % 2 != 0:
                out.append((float(l1), float(l2)))
    return sorted(out)


@dataclass(frozen=True, eq=False)
class SquareSample:
    """Samples on the grid (j1/G, j2/G): values[j1, j2] = f(j1/G, j2/G)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise GridMismatchError(f"square sample must be G x G, got {v.shape}")
        if v.shape[0] % 2 != 0 or v.shape[0] < 2:
            raise GridMismatchError(
                "G must be even so the half-turn flip is an exact index shift"
            )
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def G(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_exponential(cls, l1: float, l2: float, G: int) -> "SquareSample":
        x = np.arange(G) / G
        vals = np.exp(2j * np.pi * float(l1) * x)[:, None] * np.exp(
            2j * np.pi * float(l2) * x
        )[None, :]
        return cls(vals)


def snap_time(t: float, G: int):
    """Snap t to the grid 1/G: (cells, snapped t, |t - snapped|)."""
    cells = int(round(float(t) * G))
    t_snap = cells / G
    return cells, t_snap, abs(float(t) - t_snap)


def evolve_h(f: SquareSample, t1: float) -> SquareSample:
    """Horizontal translation with one flip per wrap, t1 snapped to the grid.

    out[j1, j2] = f at ((j1 + j)/G mod 1, flip^w (j2/G)) with j the snapped
    cell shift and w = (j1 + j) // G the wrap count.
    """
    G = f.G
    j, _, _ = snap_time(t1, G)
    shifted = np.arange(G) + j
    src1 = shifted % G
    wraps = shifted // G
    cols = (np.arange(G)[None, :] + (G // 2) * wraps[:, None]) % G
    return SquareSample(f.values[src1[:, None], cols])


def evolve_v(f: SquareSample, t2: float) -> SquareSample:
    """Vertical translation, a plain wrap of x2 with t2 snapped to the grid."""
    G = f.G
    j, _, _ = snap_time(t2, G)
    src2 = (np.arange(G) + j) % G
    return SquareSample(f.values[:, src2])


def gram2d(frequency_pairs, G: int) -> np.ndarray:
    """Discrete Gram of 2-D exponentials on the G x G grid, averaged."""
    pairs = list(frequency_pairs)
    x = np.arange(G) / G
    rows = np.empty((len(pairs), G * G), dtype=complex)
    for idx, (l1, l2) in enumerate(pairs):
        e = np.exp(2j * np.pi * float(l1) * x)[:, None] * np.exp(
            2j * np.pi * float(l2) * x
        )[None, :]
        rows[idx] = e.ravel()
    return (rows @ rows.conj().T) / (G * G)


def eigen_check(l1: float, l2: float, t1: float, t2: float, G: int) -> float:
    """Largest deviation of the evolved exponential from its phase multiple.

    Applies the horizontal then the vertical motion to e_(l1, l2) and
    compares with exp(2 pi i (l1 t1 + l2 t2)) times the original, with both
    times snapped to the grid.  Raises NotInSpectrumError for pairs outside
    the model spectrum.
    """
    if not membership(l1, l2):
        raise NotInSpectrumError(f"({l1}, {l2}) is not in the model spectrum")
    f = SquareSample.from_exponential(l1, l2, G)
    _, t1s, _ = snap_time(t1, G)
    _, t2s, _ = snap_time(t2, G)
    evolved = evolve_v(evolve_h(f, t1), t2)
    phase = np.exp(2j * np.pi * (float(l1) * t1s + float(l2) * t2s))
    return float(np.max(np.abs(evolved.values - phase * f.values)))
