"""Unitary boundary matrices and the spectra they induce on interval unions.

A unitary n x n matrix B couples the left endpoints of an n-interval domain
to the right endpoints.  A real frequency lam belongs to the spectrum exactly
when I - E(lam * beta)^(-1) B E(lam * alpha) is singular, where E(z) is the
diagonal phase matrix diag(exp(2 pi i z_k)).  The search below locates those
singular points inside a window by scanning the smallest singular value and
refining each local minimum with golden-section steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import IntervalUnion
from .errors import (
    ConsistencyError,
    DimensionMismatchError,
    DuplicateFrequencyError,
    NonUnitaryError,
    SpanError,
    StepError,
    TooFewPointsError,
    WindowError,
)

#: Frobenius tolerance for accepting a matrix as unitary.
UNITARITY_TOL = 1e-10

#: Default threshold on the smallest singular value for accepting a root.
DEFAULT_ROOT_TOL = 1e-9

#: Width at which golden-section refinement stops.
REFINE_XTOL = 1e-12

#: Roots closer than this are merged into one spectrum point.
MERGE_TOL = 1e-8

#: Default distance tolerance for "eigenvector is constant" in spectrality checks.
DEFAULT_ALIGN_TOL = 1e-7

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class BoundaryMatrix:
    """Unitary matrix of boundary conditions, validated on construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DimensionMismatchError(f"boundary matrix must be square, got {m.shape}")
        defect = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))
        if defect >= UNITARITY_TOL:
            raise NonUnitaryError(
                f"matrix is not unitary: ||B* B - I||_F = {defect:.3e}"
            )
        m = np.ascontiguousarray(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def power(self, k: int) -> np.ndarray:
        """Integer power B^k; negative k uses the adjoint."""
        if k >= 0:
            return np.linalg.matrix_power(self.matrix, k)
        return np.linalg.matrix_power(self.matrix.conj().T, -k)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)

    @classmethod
    def scalar(cls, z: complex) -> "BoundaryMatrix":
        return cls(np.array([[z]], dtype=complex))

    @classmethod
    def identity(cls, n: int) -> "BoundaryMatrix":
        return cls(np.eye(n, dtype=complex))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BoundaryMatrix":
        try:
            n = int(obj["n"])
            re = np.asarray(obj["re"], dtype=float)
            im = np.asarray(obj["im"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise DimensionMismatchError(f"bad boundary matrix JSON: {exc}") from exc
        if re.shape != (n, n) or im.shape != (n, n):
            raise DimensionMismatchError(
                f"boundary matrix JSON shapes {re.shape}, {im.shape} do not match n={n}"
            )
        return cls(re + 1j * im)


def phase_diag(z) -> np.ndarray:
    """Diagonal phase matrix diag(exp(2 pi i z_k))."""
    z = np.asarray(z, dtype=float)
    return np.diag(np.exp(2j * np.pi * z))


def boundary_exponential(domain: IntervalUnion, lam, side: str) -> np.ndarray:
    """Samples of e_lam at the left ("left") or right ("right") endpoints."""
    if side == "left":
        pts = domain.alpha
    elif side == "right":
        pts = domain.beta
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return np.exp(2j * np.pi * float(lam) * pts)


def char_matrix(bmat: BoundaryMatrix, domain: IntervalUnion, lam) -> np.ndarray:
    """Transfer matrix M(lam) = E(lam beta)^(-1) B E(lam alpha)."""
    if bmat.n != domain.n:
        raise DimensionMismatchError(
            f"matrix size {bmat.n} does not match domain with {domain.n} intervals"
        )
    lam = float(lam)
    left = np.exp(-2j * np.pi * lam * domain.beta)
    right = np.exp(2j * np.pi * lam * domain.alpha)
    return left[:, None] * bmat.matrix * right[None, :]


def char_value(bmat: BoundaryMatrix, domain: IntervalUnion, lam):
    """Characteristic data at lam: (det(I - M(lam)), smallest singular value)."""
    A = np.eye(bmat.n) - char_matrix(bmat, domain, lam)
    det = complex(np.linalg.det(A))
    smin = float(np.linalg.svd(A, compute_uv=False)[-1])
    return det, smin


@dataclass(frozen=True)
class SpectrumPoint:
    frequency: float
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class SpectrumSet:
    """Spectrum points found inside a window, sorted by frequency."""

    window: tuple
    points: tuple

    @property
    def frequencies(self) -> list:
        return [p.frequency for p in self.points]

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def to_json(self) -> dict:
        return {
            "window": [self.window[0], self.window[1]],
            "points": [
                {
                    "lambda": p.frequency,
                    "multiplicity": p.multiplicity,
                    "residual": p.residual,
                }
                for p in self.points
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "SpectrumSet":
        if isinstance(obj, (list, tuple)):
            pts = [SpectrumPoint(float(x), 1, 0.0) for x in obj]
            window = (min(p.frequency for p in pts), max(p.frequency for p in pts)) if pts else (0.0, 0.0)
            return cls(window, tuple(sorted(pts, key=lambda p: p.frequency)))
        raw = obj.get("points", [])
        pts = []
        for item in raw:
            if isinstance(item, dict):
                pts.append(
                    SpectrumPoint(
                        float(item["lambda"]),
                        int(item.get("multiplicity", 1)),
                        float(item.get("residual", 0.0)),
                    )
                )
            else:
                pts.append(SpectrumPoint(float(item), 1, 0.0))
        pts.sort(key=lambda p: p.frequency)
        if "window" in obj and obj["window"] is not None:
            window = (float(obj["window"][0]), float(obj["window"][1]))
        elif pts:
            window = (pts[0].frequency, pts[-1].frequency)
        else:
            window = (0.0, 0.0)
        return cls(window, tuple(pts))


def min_gap(frequencies) -> float:
    """Smallest spacing between consecutive frequencies."""
    if isinstance(frequencies, SpectrumSet):
        freqs = frequencies.frequencies
    else:
        freqs = sorted(float(f) for f in frequencies)
    if len(freqs) < 2:
        raise TooFewPointsError("need at least two points for a gap")
    diffs = np.diff(np.sort(np.asarray(freqs)))
    return float(np.min(diffs))


def _endpoint_scale(domain: IntervalUnion) -> float:
    return float(np.max(np.abs(domain.alpha) + np.abs(domain.beta)))


def default_scan_step(domain: IntervalUnion) -> float:
    """Conservative scan step: 1 / (8 * max_i(|a_i| + |b_i|) + 8)."""
    return 1.0 / (8.0 * _endpoint_scale(domain) + 8.0)


def _golden_refine(f, a, b, xtol=REFINE_XTOL):
    """Golden-section minimization of f on [a, b]; returns (x_best, f_best)."""
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    best = min([(f(a), a), (f(b), b), (f1, x1), (f2, x2)])
    for _ in range(200):
        if b - a <= xtol:
            break
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
            best = min(best, (f1, x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
            best = min(best, (f2, x2))
    return best[1], best[0]


def compute_spectrum(
    bmat: BoundaryMatrix,
    domain: IntervalUnion,
    window,
    scan_step: float | None = None,
    tol: float = DEFAULT_ROOT_TOL,
) -> SpectrumSet:
    """Locate all spectrum points of (B, domain) inside a frequency window.

    Scans the smallest singular value of I - M(lam) on a uniform grid, then
    refines every local minimum by golden section.  A refined point lam is
    accepted when smin < tol; its multiplicity is the number of singular
    values of I - M(lam) below tol.

    Parameters
    ----------
    window : (float, float)
        Closed search interval for the frequency.
    scan_step : float, optional
        Grid spacing for the coarse scan.  Must stay below
        1 / (4 * max_i(|a_i| + |b_i|)) so no sign structure is skipped;
        the default is finer than that bound.
    tol : float
        Acceptance threshold on the smallest singular value.
    """
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise WindowError(f"empty window [{lo}, {hi}]")
    if bmat.n != domain.n:
        raise DimensionMismatchError(
            f"matrix size {bmat.n} does not match domain with {domain.n} intervals"
        )
    limit = 1.0 / (4.0 * _endpoint_scale(domain))
    if scan_step is None:
        scan_step = default_scan_step(domain)
    elif not 0.0 < scan_step < limit:
        raise StepError(
            f"scan step {scan_step} too coarse; must lie in (0, {limit:.6g})"
        )

    def smin_at(lam):
        return char_value(bmat, domain, lam)[1]

    count = max(2, int(np.ceil((hi - lo) / scan_step)) + 1)
    xs = np.linspace(lo, hi, count)
    ss = np.array([smin_at(x) for x in xs])

    brackets = []
    for i in range(1, count - 1):
        if ss[i] <= ss[i - 1] and ss[i] <= ss[i + 1]:
            brackets.append((xs[i - 1], xs[i + 1]))
    if ss[0] < ss[1]:
        brackets.append((xs[0], xs[1]))
    if ss[-1] < ss[-2]:
        brackets.append((xs[-2], xs[-1]))

    roots = []
    for a, b in brackets:
        lam, s = _golden_refine(smin_at, a, b)
        if s < tol:
            roots.append((lam, s))
    roots.sort()

    merged = []
    for lam, s in roots:
        if merged and lam - merged[-1][0] < MERGE_TOL:
            if s < merged[-1][1]:
                merged[-1] = (lam, s)
        else:
            merged.append((lam, s))

    points = []
    for lam, s in merged:
        A = np.eye(bmat.n) - char_matrix(bmat, domain, lam)
        sv = np.linalg.svd(A, compute_uv=False)
        mult = int(np.sum(sv < tol))
        points.append(SpectrumPoint(float(lam), mult, float(s)))
    return SpectrumSet((lo, hi), tuple(points))


def eigenspace(
    bmat: BoundaryMatrix,
    domain: IntervalUnion,
    lam,
    tol: float = DEFAULT_ROOT_TOL,
) -> list:
    """Orthonormal basis of {c : M(lam) c = c}, via the SVD of I - M(lam).

    Each returned vector c gives an eigenfunction
    exp(2 pi i lam x) * sum_i c_i * chi_i(x) of the boundary operator.
    """
    A = np.eye(bmat.n) - char_matrix(bmat, domain, lam)
    _, sv, vh = np.linalg.svd(A)
    vecs = [vh[i].conj() for i in range(len(sv)) if sv[i] < tol]
    vecs.reverse()  # smallest singular value first
    return vecs


@dataclass(frozen=True)
class SpectralityReport:
    """Outcome of the constant-eigenvector test over a window."""

    window: tuple
    spectral: bool
    spectrum: SpectrumSet
    violations: tuple

    def to_json(self) -> dict:
        return {
            "window": [self.window[0], self.window[1]],
            "spectral_in_window": self.spectral,
            "spectrum": self.spectrum.to_json(),
            "violations": [
                {"lambda": lam, "reason": reason} for lam, reason in self.violations
            ],
        }


def spectrality_check(
    bmat: BoundaryMatrix,
    domain: IntervalUnion,
    window,
    scan_step: float | None = None,
    tol: float = DEFAULT_ROOT_TOL,
    align_tol: float = DEFAULT_ALIGN_TOL,
) -> SpectralityReport:
    """Check that every spectrum point in the window has the constant eigenvector.

    The pair (B, domain) yields orthogonal exponentials exactly when each
    eigenspace is one dimensional and spanned, up to phase, by
    (1, ..., 1)/sqrt(n).  Certification is restricted to the window searched.
    """
    spectrum = compute_spectrum(bmat, domain, window, scan_step=scan_step, tol=tol)
    u = np.ones(bmat.n) / np.sqrt(bmat.n)
    violations = []
    for pt in spectrum:
        vecs = eigenspace(bmat, domain, pt.frequency, tol=tol)
        if len(vecs) != 1:
            violations.append(
                (pt.frequency, f"eigenspace dimension {len(vecs)}, expected 1")
            )
            continue
        overlap = abs(np.vdot(u, vecs[0]))
        distance = float(np.sqrt(max(0.0, 2.0 - 2.0 * overlap)))
        if distance > align_tol:
            violations.append(
                (pt.frequency, f"eigenvector differs from constant by {distance:.3e}")
            )
    return SpectralityReport(
        window=(float(window[0]), float(window[1])),
        spectral=not violations,
        spectrum=spectrum,
        violations=tuple(violations),
    )


def boundary_matrix_from_spectrum(domain: IntervalUnion, frequencies) -> BoundaryMatrix:
    """Reconstruct B from a candidate spectrum via B e_lam(alpha) = e_lam(beta).

    Chooses n frequencies greedily so the matrix of left boundary samples is
    as well conditioned as possible (each step maximizes the smallest
    singular value), solves for B, then checks unitarity and consistency of
    the remaining frequencies.

    Raises
    ------
    SpanError
        If fewer than n distinct frequencies are given, or the best left
        sample matrix has smin < 1e-8.
    NonUnitaryError
        If the solved matrix is not unitary.
    ConsistencyError
        If some unused frequency is not mapped correctly by the result.
    """
    freqs = [float(f) for f in frequencies]
    if len(set(freqs)) != len(freqs):
        raise DuplicateFrequencyError("candidate spectrum contains duplicates")
    n = domain.n
    if len(freqs) < n:
        raise SpanError(f"need at least {n} frequencies, got {len(freqs)}")

    chosen: list = []
    remaining = list(freqs)
    cols: list = []
    for _ in range(n):
        best = None
        for lam in remaining:
            trial = np.column_stack(cols + [boundary_exponential(domain, lam, "left")])
            s = np.linalg.svd(trial, compute_uv=False)[-1]
            if best is None or s > best[0]:
                best = (s, lam)
        _, lam = best
        remaining.remove(lam)
        chosen.append(lam)
        cols.append(boundary_exponential(domain, lam, "left"))

    A = np.column_stack(cols)
    smin = float(np.linalg.svd(A, compute_uv=False)[-1])
    if smin < 1e-8:
        raise SpanError(
            f"left boundary samples do not span C^{n} (smin = {smin:.3e})"
        )
    R = np.column_stack([boundary_exponential(domain, lam, "right") for lam in chosen])
    B = R @ np.linalg.inv(A)

    try:
        bmat = BoundaryMatrix(B)
    except NonUnitaryError:
        raise NonUnitaryError(
            "frequencies are not consistent with any unitary boundary matrix"
        ) from None

    for lam in freqs:
        lhs = bmat.matrix @ boundary_exponential(domain, lam, "left")
        rhs = boundary_exponential(domain, lam, "right")
        if np.linalg.norm(lhs - rhs) >= 1e-10:
            raise ConsistencyError(
                f"frequency {lam} is not mapped to the right boundary samples"
            )
    return bmat
