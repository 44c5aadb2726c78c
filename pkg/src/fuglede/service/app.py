"""FastAPI application exposing the toolkit over HTTP.

Every endpoint is a POST taking a JSON document described in `models`.
Domain errors raised by the core package (bad input, failed preconditions)
come back as status 400 with a body {"error": <class name>, "detail": ...};
schema problems are the usual 422 from FastAPI.  Responses contain no
timestamps, so identical requests produce identical bodies.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..boundary import boundary_matrix_from_spectrum, spectrality_check
from ..domain import IntervalUnion, SampledFunction, endpoint_str, gram
from ..errors import FugledeError, FunctionSpecError
from ..evolution import (
    BoundaryEvolver,
    SpectralEvolver,
    check_local_translation,
    recommended_samples,
)
from ..nikodym import NikodymParams, build_u_p, grad_norms, poincare_quotient, weak_decay
from ..specparse import parse_spectrum
from ..square2d import eigen_check, gram2d, spectrum_points
from ..verify import (
    TranslationSet,
    orthogonality_defect,
    parseval_defect,
    tiling_check,
    truncate_frequencies,
)
from .models import (
    BMatrixRequest,
    BMatrixResponse,
    BoundaryMatrixModel,
    EvolveRequest,
    EvolveResponse,
    EvolveSampleModel,
    GramRequest,
    GramResponse,
    NikodymRequest,
    NikodymResponse,
    NikodymRowModel,
    ParsevalModel,
    SpectrumModel,
    SpectrumPointModel,
    SpectrumRequest,
    SpectrumResponse,
    Square2dRequest,
    Square2dResponse,
    Square2dRowModel,
    TileRequest,
    TileResponse,
    TilingModel,
    VerifyRequest,
    VerifyResponse,
    ViolationModel,
)


def resolve_frequencies(spec, truncate=None) -> list:
    """Turn a spectrum argument (expression, list, or model) into floats."""
    if isinstance(spec, str):
        return [float(v) for v in parse_spectrum(spec, truncate=truncate)]
    if isinstance(spec, SpectrumModel):
        freqs = [p.frequency for p in spec.points]
    else:
        freqs = [float(v) for v in spec]
    if truncate is not None:
        freqs = truncate_frequencies(freqs, truncate)
    return sorted(freqs)


def parse_function_spec(domain: IntervalUnion, text: str, samples: int) -> SampledFunction:
    """Build the test function named by "indicator:a:b" or "exp:lam"."""
    parts = text.split(":")
    kind = parts[0].strip().lower()
    try:
        if kind == "indicator" and len(parts) == 3:
            return SampledFunction.from_indicator(
                domain, samples, _rational(parts[1]), _rational(parts[2])
            )
        if kind == "exp" and len(parts) == 2:
            return SampledFunction.from_exponential(domain, samples, _rational(parts[1]))
    except (ValueError, ZeroDivisionError) as exc:
        raise FunctionSpecError(f"bad number in function spec {text!r}: {exc}") from exc
    raise FunctionSpecError(
        f'cannot parse function spec {text!r}; expected "indicator:a:b" or "exp:lam"'
    )


def _rational(text: str) -> float:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


def _tiling_model(report) -> TilingModel:
    return TilingModel(**report.to_json())


def create_app() -> FastAPI:
    app = FastAPI(title="fuglede", version=__version__)

    @app.exception_handler(FugledeError)
    async def _domain_error(request: Request, exc: FugledeError):
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/spectrum", response_model=SpectrumResponse)
    def spectrum(req: SpectrumRequest):
        domain = req.domain.build()
        bmat = req.bmatrix.build()
        report = spectrality_check(
            bmat,
            domain,
            req.window,
            scan_step=req.scan_step,
            tol=req.tol,
            align_tol=req.align_tol,
        )
        return SpectrumResponse(
            window=req.window,
            spectral_in_window=report.spectral,
            points=[
                SpectrumPointModel(
                    frequency=p.frequency,
                    multiplicity=p.multiplicity,
                    residual=p.residual,
                )
                for p in report.spectrum
            ],
            violations=[
                ViolationModel(frequency=lam, reason=reason)
                for lam, reason in report.violations
            ],
        )

    @app.post("/bmatrix", response_model=BMatrixResponse)
    def bmatrix(req: BMatrixRequest):
        domain = req.domain.build()
        freqs = resolve_frequencies(req.spectrum, req.truncate)
        bmat = boundary_matrix_from_spectrum(domain, freqs)
        eig = bmat.eigenvalues()
        defect = float(
            np.linalg.norm(bmat.matrix @ bmat.matrix.conj().T - np.eye(bmat.n))
        )
        return BMatrixResponse(
            bmatrix=BoundaryMatrixModel.wrap(bmat),
            frequencies=freqs,
            eigenvalues=[(float(z.real), float(z.imag)) for z in eig],
            unitarity_defect=defect,
        )

    @app.post("/gram", response_model=GramResponse)
    def gram_endpoint(req: GramRequest):
        domain = req.domain.build()
        freqs = resolve_frequencies(req.spectrum, req.truncate)
        G = gram(domain, freqs)
        return GramResponse(
            frequencies=freqs,
            re=G.real.tolist(),
            im=G.imag.tolist(),
            measure=float(domain.measure),
            orthogonality_defect=orthogonality_defect(domain, freqs),
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        domain = req.domain.build()
        bounds = sorted(set(float(b) for b in req.parseval_bounds))
        truncate = req.truncate
        if truncate is None and isinstance(req.spectrum, str):
            truncate = bounds[-1]
        freqs = resolve_frequencies(req.spectrum, truncate)

        defect = orthogonality_defect(domain, freqs)
        orthogonal = defect < req.ortho_tol

        parseval = None
        defect_by_K = None
        monotone = True
        relative = 0.0
        if orthogonal:
            if req.indicator is not None:
                a, b = req.indicator
            else:
                a, b = float(domain.alpha[0]), float(domain.beta[0])
            norm_sq = b - a
            defect_by_K = {}
            values = []
            for bound in bounds:
                kept = truncate_frequencies(freqs, bound)
                d = parseval_defect(domain, kept, a, b)
                defect_by_K[f"{bound:g}"] = d
                values.append(d)
            monotone = all(v2 <= v1 + 1e-12 for v1, v2 in zip(values, values[1:]))
            relative = values[-1] / norm_sq
            parseval = ParsevalModel(
                a=a,
                b=b,
                norm_sq=norm_sq,
                monotone=monotone,
                relative_defect=relative,
            )

        tiling = None
        tiles_ok = True
        if req.tiling is not None:
            report = tiling_check(domain, TranslationSet.from_spec(req.tiling))
            tiling = _tiling_model(report)
            tiles_ok = report.tiles

        passed = (
            orthogonal
            and monotone
            and relative <= req.parseval_fraction
            and tiles_ok
        )
        return VerifyResponse(
            orthogonality_defect=defect,
            orthogonal=orthogonal,
            parseval_defect_by_K=defect_by_K,
            parseval=parseval,
            tiling=tiling,
            passed=passed,
        )

    @app.post("/evolve", response_model=EvolveResponse)
    def evolve(req: EvolveRequest):
        domain = req.domain.build()
        freqs = None
        if req.spectrum is not None:
            freqs = resolve_frequencies(req.spectrum, req.truncate)

        M = req.samples_per_interval
        if M is None:
            M = recommended_samples(domain, freqs) if freqs else 256

        f = parse_function_spec(domain, req.function, M)

        bev = None
        if req.method in ("boundary", "both"):
            if req.bmatrix is not None:
                bmat = req.bmatrix.build()
            else:
                bmat = boundary_matrix_from_spectrum(domain, freqs)
            bev = BoundaryEvolver(domain, bmat)
            _, t_used, snap_error = bev.snap(req.t, M)
        else:
            t_used, snap_error = float(req.t), 0.0

        g_spectral = g_boundary = None
        if req.method in ("spectral", "both"):
            sev = SpectralEvolver(domain, freqs)
            g_spectral = sev.evolve(f, t_used)
        if bev is not None:
            g_boundary = bev.evolve(f, t_used)

        primary = g_spectral if g_spectral is not None else g_boundary
        max_diff = None
        if g_spectral is not None and g_boundary is not None:
            max_diff = float(np.max(np.abs(g_spectral.values - g_boundary.values)))

        samples = [
            EvolveSampleModel(
                interval_index=i,
                x=float(primary.grid[i, k]),
                re=float(primary.values[i, k].real),
                im=float(primary.values[i, k].imag),
            )
            for i in range(domain.n)
            for k in range(M)
        ]
        return EvolveResponse(
            t_requested=float(req.t),
            t_used=t_used,
            snap_error=snap_error,
            method=req.method,
            samples_per_interval=M,
            norm_before=f.norm(),
            norm_after=primary.norm(),
            samples=samples,
            max_method_difference=max_diff,
            local_translation_residual=check_local_translation(f, primary, t_used),
        )

    @app.post("/tile", response_model=TileResponse)
    def tile(req: TileRequest):
        domain = req.domain.build()
        tset = TranslationSet.from_spec(req.translations)
        report = tiling_check(domain, tset)
        return TileResponse(
            period=float(tset.period),
            period_exact=endpoint_str(tset.period),
            residues=[endpoint_str(r) for r in tset.residues],
            tiling=_tiling_model(report),
        )

    @app.post("/nikodym", response_model=NikodymResponse)
    def nikodym(req: NikodymRequest):
        params = NikodymParams(n_max=req.n_max)
        rows = []
        quotients = []
        for p in range(1, req.p_max + 1):
            u = build_u_p(params, p)
            d1_sq, d2_sq = grad_norms(params, p)
            q = poincare_quotient(params, p)
            quotients.append(q)
            rows.append(
                NikodymRowModel(
                    p=p,
                    norm=u.norm(),
                    integral=u.integral(),
                    grad1_sq=d1_sq,
                    grad2_sq=d2_sq,
                    quotient=q,
                )
            )
        ratios = [
            quotients[i + 1] / quotients[i] for i in range(len(quotients) - 1)
        ]
        cross = None
        if req.p_max >= 2:
            cross = weak_decay(params, 1, build_u_p(params, 2))
        all_ok = (
            all(abs(r.norm - 1.0) < 1e-9 for r in rows)
            and all(r.grad2_sq == 0.0 for r in rows)
            and all(r > 1.0 for r in ratios)
            and (cross is None or cross == 0.0)
        )
        return NikodymResponse(
            n_max=req.n_max,
            p_max=req.p_max,
            measure=float(params.measure),
            rows=rows,
            quotient_ratios=ratios,
            cross_decay=cross,
            all_ok=all_ok,
        )

    @app.post("/square2d", response_model=Square2dResponse)
    def square2d(req: Square2dRequest):
        pts = spectrum_points(req.lmax)
        rng = np.random.default_rng(req.seed)
        G = req.grid
        times = []
        for _ in range(req.n_times):
            k1 = int(rng.integers(-2 * G, 2 * G + 1))
            k2 = int(rng.integers(-2 * G, 2 * G + 1))
            times.append((k1 / G, k2 / G))
        rows = []
        for l1, l2 in pts:
            worst = max(eigen_check(l1, l2, t1, t2, G) for t1, t2 in times)
            rows.append(
                Square2dRowModel(
                    lambda1=l1,
                    lambda2=l2,
                    max_residual=worst,
                    ok=worst < req.tol,
                )
            )
        Gm = gram2d(pts, G)
        offdiag = Gm - np.diag(np.diag(Gm))
        return Square2dResponse(
            lmax=req.lmax,
            grid=G,
            seed=req.seed,
            times=times,
            rows=rows,
            gram_max_offdiag=float(np.max(np.abs(offdiag))),
            all_ok=all(r.ok for r in rows),
        )

    return app


app = create_app()
