"""Orthogonal exponentials on finite unions of intervals.

The core objects are an interval union, a unitary boundary matrix acting on
stacked endpoint data, and the frequency sets on which the associated
exponentials become an orthogonal basis.  On top of those sit two
interchangeable realizations of the unitary translation group (one through
coefficient phases, one through sample routing with boundary-matrix wraps),
exact rational tiling checks, a two dimensional square model, and a family
of bump functions showing how badly a Poincare type inequality can fail on
a thin comb of squares.
"""

from .boundary import (
    BoundaryMatrix,
    SpectralityReport,
    SpectrumPoint,
    SpectrumSet,
    boundary_matrix_from_spectrum,
    char_matrix,
    char_value,
    compute_spectrum,
    default_scan_step,
    eigenspace,
    spectrality_check,
)
from .domain import (
    IntervalUnion,
    SampledFunction,
    exp_inner,
    gram,
    indicator_coeff,
    make_domain,
)
from .errors import FugledeError
from .evolution import (
    BoundaryEvolver,
    SpectralEvolver,
    check_group_law,
    check_local_translation,
    check_unitarity,
    evolve_boundary,
    evolve_spectral,
    recommended_samples,
)
from .nikodym import (
    BumpFunction,
    NikodymParams,
    build_u_p,
    grad_norms,
    poincare_quotient,
    weak_decay,
)
from .specparse import parse_spectrum
from .square2d import (
    SquareSample,
    eigen_check,
    evolve_h,
    evolve_v,
    gram2d,
    membership,
    spectrum_points,
)
from .verify import (
    TilingReport,
    TranslationSet,
    orthogonality_defect,
    parseval_defect,
    tiling_check,
    truncate_frequencies,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryEvolver",
    "BoundaryMatrix",
    "BumpFunction",
    "FugledeError",
    "IntervalUnion",
    "NikodymParams",
    "SampledFunction",
    "SpectralEvolver",
    "SpectralityReport",
    "SpectrumPoint",
    "SpectrumSet",
    "SquareSample",
    "TilingReport",
    "TranslationSet",
    "boundary_matrix_from_spectrum",
    "build_u_p",
    "char_matrix",
    "char_value",
    "check_group_law",
    "check_local_translation",
    "check_unitarity",
    "compute_spectrum",
    "default_scan_step",
    "eigen_check",
    "eigenspace",
    "evolve_boundary",
    "evolve_h",
    "evolve_spectral",
    "evolve_v",
    "exp_inner",
    "grad_norms",
    "gram",
    "gram2d",
    "indicator_coeff",
    "make_domain",
    "membership",
    "orthogonality_defect",
    "parse_spectrum",
    "parseval_defect",
    "poincare_quotient",
    "recommended_samples",
    "spectrality_check",
    "spectrum_points",
    "tiling_check",
    "truncate_frequencies",
    "weak_decay",
]
