"""Request and response schemas for the HTTP service.

Wire formats match the ``to_json`` / ``from_json`` conventions of the core
types, so a report written by one endpoint can be fed back to another
without editing.  Frequency fields are serialized under the key ``lambda``.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..boundary import BoundaryMatrix
from ..domain import IntervalUnion, make_domain

Endpoint = Union[int, float, str]


class DomainModel(BaseModel):
    """Union of intervals; endpoints may be numbers, decimals or "p/q"."""

    intervals: list[tuple[Endpoint, Endpoint]] = Field(min_length=1)

    def build(self) -> IntervalUnion:
        return make_domain(self.intervals)

    @classmethod
    def wrap(cls, domain: IntervalUnion) -> "DomainModel":
        return cls(intervals=domain.to_json()["intervals"])


class BoundaryMatrixModel(BaseModel):
    n: int = Field(ge=1)
    re: list[list[float]]
    im: list[list[float]]

    def build(self) -> BoundaryMatrix:
        return BoundaryMatrix.from_json(self.model_dump())

    @classmethod
    def wrap(cls, bmat: BoundaryMatrix) -> "BoundaryMatrixModel":
        return cls(**bmat.to_json())


class SpectrumPointModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    frequency: float = Field(alias="lambda")
    multiplicity: int = 1
    residual: float = 0.0


class SpectrumModel(BaseModel):
    """A finite list of located frequencies, with the window searched."""

    window: Optional[tuple[float, float]] = None
    points: list[SpectrumPointModel] = Field(default_factory=list)


# A spectrum argument is either an expression such as "2Z u 2Z+1/2",
# a bare list of frequencies, or a previously emitted SpectrumModel.
SpectrumInput = Union[str, list[float], SpectrumModel]


class ViolationModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    frequency: float = Field(alias="lambda")
    reason: str


class SpectrumRequest(BaseModel):
    domain: DomainModel
    bmatrix: BoundaryMatrixModel
    window: tuple[float, float]
    scan_step: Optional[float] = None
    tol: float = 1e-9
    align_tol: float = 1e-7


class SpectrumResponse(BaseModel):
    window: tuple[float, float]
    spectral_in_window: bool
    points: list[SpectrumPointModel]
    violations: list[ViolationModel]


class BMatrixRequest(BaseModel):
    domain: DomainModel
    spectrum: SpectrumInput
    truncate: Optional[float] = None


class BMatrixResponse(BaseModel):
    bmatrix: BoundaryMatrixModel
    frequencies: list[float]
    eigenvalues: list[tuple[float, float]]
    unitarity_defect: float


class GramRequest(BaseModel):
    domain: DomainModel
    spectrum: SpectrumInput
    truncate: Optional[float] = None


class GramResponse(BaseModel):
    frequencies: list[float]
    re: list[list[float]]
    im: list[list[float]]
    measure: float
    orthogonality_defect: float


class ParsevalModel(BaseModel):
    a: float
    b: float
    norm_sq: float
    monotone: bool
    relative_defect: float


class TilingModel(BaseModel):
    tiles: bool
    defect: float
    defect_exact: str
    over_measure: float
    under_measure: float


class VerifyRequest(BaseModel):
    domain: DomainModel
    spectrum: SpectrumInput
    truncate: Optional[float] = None
    indicator: Optional[tuple[float, float]] = None
    parseval_bounds: list[float] = Field(default_factory=lambda: [10.0, 25.0, 50.0, 100.0])
    parseval_fraction: float = 0.01
    ortho_tol: float = 1e-10
    tiling: Optional[str] = None

    @model_validator(mode="after")
    def _bounds_nonempty(self):
        if not self.parseval_bounds:
            raise ValueError("parseval_bounds must not be empty")
        return self


class VerifyResponse(BaseModel):
    orthogonality_defect: float
    orthogonal: bool
    # both Parseval fields are omitted when the frequencies are not
    # orthogonal to begin with, since the defect is then meaningless
    parseval_defect_by_K: Optional[dict[str, float]] = None
    parseval: Optional[ParsevalModel] = None
    tiling: Optional[TilingModel] = None
    passed: bool


class EvolveRequest(BaseModel):
    domain: DomainModel
    t: float
    function: str = Field(
        description='Test function, "indicator:a:b" or "exp:lam".'
    )
    method: Literal["spectral", "boundary", "both"] = "both"
    spectrum: Optional[SpectrumInput] = None
    bmatrix: Optional[BoundaryMatrixModel] = None
    truncate: Optional[float] = None
    samples_per_interval: Optional[int] = Field(default=None, ge=2)

    @model_validator(mode="after")
    def _inputs_for_method(self):
        if self.method in ("spectral", "both") and self.spectrum is None:
            raise ValueError(f"method {self.method!r} needs a spectrum")
        if self.method == "boundary" and self.bmatrix is None and self.spectrum is None:
            raise ValueError("method 'boundary' needs a bmatrix or a spectrum")
        return self


class EvolveSampleModel(BaseModel):
    interval_index: int
    x: float
    re: float
    im: float


class EvolveResponse(BaseModel):
    t_requested: float
    t_used: float
    snap_error: float
    method: str
    samples_per_interval: int
    norm_before: float
    norm_after: float
    samples: list[EvolveSampleModel]
    max_method_difference: Optional[float] = None
    local_translation_residual: Optional[float] = None


class TileRequest(BaseModel):
    domain: DomainModel
    translations: str = Field(
        description='Translation set spec, e.g. "period=2;residues=0,1/2".'
    )


class TileResponse(BaseModel):
    period: float
    period_exact: str
    residues: list[str]
    tiling: TilingModel


class NikodymRequest(BaseModel):
    p_max: int = Field(default=3, ge=1)
    n_max: int = Field(default=16, ge=4)

    @model_validator(mode="after")
    def _depth_covers_bumps(self):
        if 4 * self.p_max > self.n_max:
            raise ValueError(
                f"p_max={self.p_max} needs n_max >= {4 * self.p_max}"
            )
        return self


class NikodymRowModel(BaseModel):
    p: int
    norm: float
    integral: float
    grad1_sq: float
    grad2_sq: float
    quotient: float


class NikodymResponse(BaseModel):
    n_max: int
    p_max: int
    measure: float
    rows: list[NikodymRowModel]
    quotient_ratios: list[float]
    cross_decay: Optional[float] = None
    all_ok: bool


class Square2dRequest(BaseModel):
    lmax: float = 4.0
    grid: int = Field(default=64, ge=2)
    n_times: int = Field(default=10, ge=1)
    seed: int = 0
    tol: float = 1e-10

    @model_validator(mode="after")
    def _even_grid(self):
        if self.grid % 2 != 0:
            raise ValueError("grid must be even")
        return self


class Square2dRowModel(BaseModel):
    lambda1: float
    lambda2: float
    max_residual: float
    ok: bool


class Square2dResponse(BaseModel):
    lmax: float
    grid: int
    seed: int
    times: list[tuple[float, float]]
    rows: list[Square2dRowModel]
    gram_max_offdiag: float
    all_ok: bool
