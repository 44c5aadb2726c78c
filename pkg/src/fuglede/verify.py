"""Spectral-pair verification: orthogonality, Parseval tail, exact tiling.

The orthogonality and Parseval checks use the closed-form inner products
from :mod:`fuglede.domain`.  The tiling check is exact: it requires rational
endpoints and translations, folds every translate of the domain into one
period window, and measures over- and under-covered mass with Fractions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .domain import IntervalUnion, gram, indicator_coeff
from .errors import (
    DuplicateFrequencyError,
    IrrationalEndpointError,
    NonOrthogonalError,
    ParseError,
)

#: Orthogonality (relative off-diagonal Gram) below this counts as exact.
ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class TranslationSet:
    """Translations of the form r + k * period, r in residues, k integer."""

    period: Fraction
    residues: tuple

    def __post_init__(self):
        period = Fraction(self.period)
        if period <= 0:
            raise ParseError(f"period must be positive, got {period}")
        reduced = tuple(sorted(Fraction(r) % period for r in self.residues))
        if len(set(reduced)) != len(reduced):
            raise DuplicateFrequencyError("residues repeat modulo the period")
        if not reduced:
            raise ParseError("need at least one residue")
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "residues", reduced)

    @classmethod
    def from_spec(cls, text: str) -> "TranslationSet":
        """Parse "period=2;residues=0,1/2" into a TranslationSet."""
        fields = {}
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            m = re.fullmatch(r"(\w+)\s*=\s*(.*)", chunk)
            if not m:
                raise ParseError(f"expected key=value, got {chunk!r}")
            fields[m.group(1)] = m.group(2)
        if set(fields) != {"period", "residues"}:
            raise ParseError(
                f"translation set needs exactly period and residues, got {sorted(fields)}"
            )
        try:
            period = Fraction(fields["period"])
            residues = tuple(
                Fraction(r.strip()) for r in fields["residues"].split(",") if r.strip()
            )
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational in translation set: {exc}") from exc
        return cls(period, residues)

    def to_spec(self) -> str:
        return "period={};residues={}".format(
            self.period, ",".join(str(r) for r in self.residues)
        )


def orthogonality_defect(domain: IntervalUnion, frequencies) -> float:
    """Largest off-diagonal |<e_j, e_k>| relative to the measure."""
    freqs = list(frequencies)
    if len(freqs) < 2:
        return 0.0
    G = gram(domain, freqs)
    off = G - np.diag(np.diag(G))
    return float(np.max(np.abs(off)) / float(domain.measure))


def truncate_frequencies(frequencies, bound: float) -> list:
    """Frequencies with |lam| <= bound (tiny slack for float endpoints)."""
    return [f for f in frequencies if abs(float(f)) <= bound + 1e-12]


def parseval_defect(domain: IntervalUnion, frequencies, a, b) -> float:
    """Energy of the indicator of (a, b) missed by the given frequencies.

    Returns ||f||^2 - sum_lam |<f, e_lam>|^2 / measure for f the indicator
    of (a, b) inside the domain.  Nonnegative whenever the frequencies are
    orthogonal, which is checked first.
    """
    freqs = list(frequencies)
    if orthogonality_defect(domain, freqs) >= ORTHO_TOL:
        raise NonOrthogonalError(
            "Parseval defect is only meaningful for orthogonal frequencies"
        )
    norm_sq = float(b) - float(a)
    captured = sum(
        abs(indicator_coeff(domain, a, b, lam)) ** 2 for lam in freqs
    ) / float(domain.measure)
    return norm_sq - captured


@dataclass(frozen=True)
class TilingReport:
    """Exact coverage balance of domain translates over one period window."""

    tiles: bool
    defect: Fraction
    over_measure: Fraction
    under_measure: Fraction

    def to_json(self) -> dict:
        return {
            "tiles": self.tiles,
            "defect": float(self.defect),
            "defect_exact": str(self.defect),
            "over_measure": float(self.over_measure),
            "under_measure": float(self.under_measure),
        }


def tiling_check(domain: IntervalUnion, translations: TranslationSet) -> TilingReport:
    """Decide exactly whether the domain tiles the line by the translations.

    Every translate of every interval is folded modulo the period into the
    window [0, period); the folded pieces must cover the window exactly
    once.  `defect` is the larger of over-covered and under-covered mass,
    both computed in rational arithmetic, so tiles == (defect == 0) with no
    tolerance involved.
    """
    if not domain.is_rational:
        raise IrrationalEndpointError(
            "tiling check needs rational interval endpoints"
        )
    T = translations.period
    pieces = []
    for a, b in zip(domain.lefts, domain.rights):
        for r in translations.residues:
            lo = a + r
            hi = b + r
            k_first = math.floor(-hi / T) + 1
            k_last = math.ceil((T - lo) / T) - 1
            for k in range(k_first, k_last + 1):
                p_lo = max(Fraction(0), lo + k * T)
                p_hi = min(T, hi + k * T)
                if p_hi > p_lo:
                    pieces.append((p_lo, p_hi))

    cuts = sorted({Fraction(0), T, *(p for piece in pieces for p in piece)})
    over = Fraction(0)
    under = Fraction(0)
    for seg_lo, seg_hi in zip(cuts[:-1], cuts[1:]):
        cover = sum(1 for p_lo, p_hi in pieces if p_lo <= seg_lo and seg_hi <= p_hi)
        length = seg_hi - seg_lo
        if cover > 1:
            over += (cover - 1) * length
        elif cover == 0:
            under += length
    return TilingReport(
        tiles=(over == 0 and under == 0),
        defect=max(over, under),
        over_measure=over,
        under_measure=under,
    )
