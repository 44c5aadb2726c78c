"""Two realizations of the unitary group generated by a boundary condition.

The spectral route expands a function over the orthogonal exponentials
e_lam and multiplies each coefficient by exp(2 pi i lam t).  The boundary
route works on stacked midpoint samples of an equal-length interval union:
a time step that is a whole number of grid cells becomes an index shift,
and every wrap past an interval end applies one power of the boundary
matrix.  On their common ground (grid-aligned t, functions in the spectral
span) the two must agree, which is what the check functions quantify.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryMatrix
from .domain import (
    IntervalUnion,
    SampledFunction,
    _midpoints,
    exp_inner,
    gram,
    indicator_coeff,
)
from .errors import (
    DimensionMismatchError,
    DomainMismatchError,
    GridMismatchError,
    NonOrthogonalError,
    UnequalLengthError,
)

#: Off-diagonal Gram tolerance for accepting a frequency set as orthogonal.
ORTHO_TOL = 1e-10

#: Interval lengths may differ by at most this for the boundary evolver.
LENGTH_TOL = 1e-12


def recommended_samples(domain: IntervalUnion, frequencies) -> int:
    """Samples per interval needed for reliable coefficient quadrature."""
    lmax = max((abs(float(f)) for f in frequencies), default=0.0)
    ell = float(np.max(domain.lengths))
    return int(np.ceil(16.0 * (1.0 + lmax * ell)))


class SpectralEvolver:
    """Evolution by phase rotation of coefficients over orthogonal exponentials."""

    def __init__(self, domain: IntervalUnion, frequencies):
        freqs = tuple(sorted(float(f) for f in frequencies))
        G = gram(domain, freqs)  # also rejects duplicates
        off = G - np.diag(np.diag(G))
        worst = float(np.max(np.abs(off))) if len(freqs) > 1 else 0.0
        if worst >= ORTHO_TOL:
            raise NonOrthogonalError(
                f"frequencies are not pairwise orthogonal (max off-diagonal "
                f"{worst:.3e})"
            )
        self.domain = domain
        self.frequencies = freqs
        self._measure = float(domain.measure)

    def coefficients(self, f: SampledFunction) -> np.ndarray:
        """Expansion coefficients c_lam = <f, e_lam> / measure.

        Uses the closed form when f carries one ("exp" or "indicator"),
        midpoint quadrature otherwise.  The quadrature path insists on the
        recommended grid resolution to keep aliasing out.
        """
        if f.domain != self.domain:
            raise DomainMismatchError("function lives on a different domain")
        lams = np.array(self.frequencies)
        if f.form is not None:
            kind = f.form[0]
            if kind == "exp":
                mu = f.form[1]
                return np.array(
                    [exp_inner(self.domain, mu, lam) / self._measure for lam in lams]
                )
            if kind == "indicator":
                _, a, b = f.form
                return np.array(
                    [
                        indicator_coeff(self.domain, a, b, lam) / self._measure
                        for lam in lams
                    ]
                )
        needed = recommended_samples(self.domain, self.frequencies)
        if f.samples_per_interval < needed:
            raise GridMismatchError(
                f"need at least {needed} samples per interval for these "
                f"frequencies, got {f.samples_per_interval}"
            )
        weighted = f.values * f.weights[:, None]
        return np.array(
            [
                np.sum(weighted * np.exp(-2j * np.pi * lam * f.grid)) / self._measure
                for lam in lams
            ]
        )

    def synthesize(self, coefficients, samples_per_interval: int) -> SampledFunction:
        """Sampled sum_lam c_lam e_lam on the midpoint grid."""
        coefficients = np.asarray(coefficients, dtype=complex)
        if coefficients.shape != (len(self.frequencies),):
            raise DimensionMismatchError(
                f"expected {len(self.frequencies)} coefficients, "
                f"got shape {coefficients.shape}"
            )
        x = _midpoints(self.domain, samples_per_interval)
        vals = np.zeros_like(x, dtype=complex)
        for c, lam in zip(coefficients, self.frequencies):
            vals += c * np.exp(2j * np.pi * lam * x)
        return SampledFunction(self.domain, vals)

    def project(self, f: SampledFunction) -> SampledFunction:
        return self.synthesize(self.coefficients(f), f.samples_per_interval)

    def evolve(self, f: SampledFunction, t: float) -> SampledFunction:
        """U(t) f via coefficient phases exp(2 pi i lam t)."""
        c = self.coefficients(f)
        phased = c * np.exp(2j * np.pi * np.array(self.frequencies) * float(t))
        return self.synthesize(phased, f.samples_per_interval)


class BoundaryEvolver:
    """Evolution by index shifts and boundary-matrix wraps on stacked samples.

    Needs every interval to have the same length ell.  With M samples per
    interval the grid cell is h = ell / M; the requested time is snapped to
    a whole number of cells, and each wrap past an interval end applies one
    power of B to the stacked n-vector of samples.
    """

    def __init__(self, domain: IntervalUnion, bmat: BoundaryMatrix):
        lengths = domain.lengths
        if float(np.max(lengths) - np.min(lengths)) > LENGTH_TOL:
            raise UnequalLengthError(
                f"interval lengths {lengths.tolist()} are not all equal"
            )
        if bmat.n != domain.n:
            raise DimensionMismatchError(
                f"matrix size {bmat.n} does not match {domain.n} intervals"
            )
        self.domain = domain
        self.bmat = bmat
        self.ell = float(lengths[0])

    def snap(self, t: float, samples_per_interval: int):
        """Snap t to the sample grid: (cells, snapped t, |t - snapped|)."""
        h = self.ell / samples_per_interval
        cells = int(round(float(t) / h))
        t_snap = cells * h
        return cells, t_snap, abs(float(t) - t_snap)

    def evolve(self, f: SampledFunction, t: float) -> SampledFunction:
        """U(t) f for t snapped to the grid of f.

        Sample k of the result is B^q applied to sample (k + j) mod M of f,
        where j is the snapped shift in cells and q = (k + j) // M counts
        the wraps (negative q uses the adjoint).
        """
        if f.domain != self.domain:
            raise DomainMismatchError("function lives on a different domain")
        M = f.samples_per_interval
        j, _, _ = self.snap(t, M)
        k = np.arange(M)
        src = (k + j) % M
        wraps = (k + j) // M
        out = np.empty_like(f.values)
        for q in np.unique(wraps):
            Bq = self.bmat.power(int(q))
            sel = wraps == q
            out[:, sel] = Bq @ f.values[:, src[sel]]
        return SampledFunction(self.domain, out)


def evolve_spectral(evolver: SpectralEvolver, f: SampledFunction, t: float):
    return evolver.evolve(f, t)


def evolve_boundary(evolver: BoundaryEvolver, f: SampledFunction, t: float):
    return evolver.evolve(f, t)


def check_local_translation(
    original: SampledFunction, evolved: SampledFunction, t: float
) -> float:
    """Largest deviation of (U(t) f)(x) from f(x + t) where both are defined.

    Compares evolved samples against the original interpolated linearly
    between midpoint samples, restricted to points x with both x and x + t
    inside the domain with a one-cell margin from every interval endpoint.
    Returns 0.0 when no grid point qualifies.
    """
    original._check_same_grid(evolved)
    domain = original.domain
    M = original.samples_per_interval
    h = domain.lengths / M
    worst = 0.0
    for i in range(domain.n):
        if M < 3:
            continue
        for k in range(1, M - 1):
            x = original.grid[i, k]
            y = x + float(t)
            for jdx in range(domain.n):
                if domain.alpha[jdx] + h[jdx] <= y <= domain.beta[jdx] - h[jdx]:
                    u = (y - domain.alpha[jdx]) / h[jdx] - 0.5
                    k0 = int(np.floor(u))
                    frac = u - k0
                    if k0 < 0:
                        k0, frac = 0, 0.0
                    if k0 > M - 2:
                        k0, frac = M - 2, 1.0
                    interp = (1.0 - frac) * original.values[jdx, k0] + frac * (
                        original.values[jdx, k0 + 1]
                    )
                    worst = max(worst, abs(evolved.values[i, k] - interp))
                    break
    return worst


def check_group_law(evolver, f: SampledFunction, s: float, t: float) -> float:
    """Relative norm of U(s + t) f - U(s) U(t) f."""
    lhs = evolver.evolve(f, s + t)
    rhs = evolver.evolve(evolver.evolve(f, t), s)
    diff = SampledFunction(f.domain, lhs.values - rhs.values)
    return diff.norm() / f.norm()


def check_unitarity(evolver, f: SampledFunction, t: float) -> float:
    """Relative change of the norm under evolution."""
    return abs(evolver.evolve(f, t).norm() - f.norm()) / f.norm()
