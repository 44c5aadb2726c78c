"""Command line client for the analysis service.

Every subcommand builds a JSON request, sends it to the service, and
formats the response.  By default the app is mounted in process through an
ASGI transport, so no server is needed; pass --server (or set
FUGLEDE_SERVER) to talk to a running instance instead.

Exit codes: 0 on success, 1 when a requested check fails (verify, tile,
nikodym, square2d, or evolve with --cross-tol), 2 on bad input or
transport trouble.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import io
import json
import os
import sys

import httpx

GREEN = "\x1b[32m"
RED = "\x1b[31m"
RESET = "\x1b[0m"


class CliError(Exception):
    """Anything that should abort with exit code 2."""


def _paint(text: str, color: str) -> str:
    if os.environ.get("FUGLEDE_NO_COLOR") or os.environ.get("NO_COLOR"):
        return text
    if not sys.stderr.isatty():
        return text
    return color + text + RESET


def _status(ok: bool) -> str:
    return _paint("PASS", GREEN) if ok else _paint("FAIL", RED)


def _say(message: str) -> None:
    print(message, file=sys.stderr)


def _post(path: str, payload: dict, server: str | None) -> dict:
    try:
        if server:
            with httpx.Client(base_url=server, timeout=300.0) as client:
                resp = client.post(path, json=payload)
                status, doc = resp.status_code, resp.json()
        else:
            status, doc = asyncio.run(_post_asgi(path, payload))
    except httpx.HTTPError as exc:
        raise CliError(f"request to {path} failed: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"service returned invalid JSON: {exc}") from exc
    if status == 200:
        return doc
    if isinstance(doc, dict) and "error" in doc:
        raise CliError(f"{doc['error']}: {doc['detail']}")
    if status == 422:
        raise CliError(f"invalid request: {json.dumps(doc.get('detail', doc))}")
    raise CliError(f"unexpected status {status} from {path}")


async def _post_asgi(path: str, payload: dict):
    from .service.app import create_app

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(
        transport=transport, base_url="http://service.internal", timeout=300.0
    ) as client:
        resp = await client.post(path, json=payload)
        return resp.status_code, resp.json()


# ---------------------------------------------------------------------------
# input loading


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from exc


def domain_payload(value: str) -> dict:
    """Accept a JSON file, inline JSON, or shorthand like "0:1/2,1:3/2"."""
    text = value.strip()
    if text.startswith("{"):
        doc = json.loads(text)
    elif os.path.exists(value):
        doc = _read_json(value)
    elif ":" in text:
        pairs = [seg.split(":") for seg in text.split(",")]
        if any(len(p) != 2 for p in pairs):
            raise CliError(f"cannot parse domain shorthand {value!r}")
        return {"intervals": [[a.strip(), b.strip()] for a, b in pairs]}
    else:
        raise CliError(f"domain {value!r}: no such file and not a:b,c:d shorthand")
    if isinstance(doc, dict) and "domain" in doc:
        doc = doc["domain"]
    if not isinstance(doc, dict) or "intervals" not in doc:
        raise CliError(f'domain {value!r} must contain {{"intervals": [[a, b], ...]}}')
    return {"intervals": doc["intervals"]}


def bmatrix_payload(value: str) -> dict:
    text = value.strip()
    doc = json.loads(text) if text.startswith("{") else _read_json(value)
    if isinstance(doc, dict) and "bmatrix" in doc:
        doc = doc["bmatrix"]
    if not isinstance(doc, dict) or not {"n", "re", "im"} <= set(doc):
        raise CliError(f'boundary matrix {value!r} must contain keys "n", "re", "im"')
    return {"n": doc["n"], "re": doc["re"], "im": doc["im"]}


def spectrum_payload(value: str):
    """A file or inline JSON becomes a point list; anything else is an expression."""
    text = value.strip()
    if text.startswith("{") or text.startswith("["):
        doc = json.loads(text)
    elif os.path.exists(value):
        doc = _read_json(value)
    else:
        return value
    if isinstance(doc, dict) and "spectrum" in doc:
        doc = doc["spectrum"]
    return doc


# ---------------------------------------------------------------------------
# output


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _as_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _csv_text(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _format_spectrum(doc, fmt):
    if fmt == "json":
        return _as_json(doc)
    return _csv_text(
        ["lambda", "multiplicity", "smin_residual"],
        [[p["lambda"], p["multiplicity"], p["residual"]] for p in doc["points"]],
    )


def _format_gram(doc, fmt):
    if fmt == "json":
        return _as_json(doc)
    re, im = doc["re"], doc["im"]
    rows = [
        [i, j, re[i][j], im[i][j]]
        for i in range(len(re))
        for j in range(len(re))
    ]
    return _csv_text(["row", "col", "re", "im"], rows)


def _format_evolve(doc, fmt):
    if fmt == "json":
        return _as_json(doc)
    comments = [
        f"t={doc['t_used']!r} snap_error={doc['snap_error']!r} method={doc['method']}"
    ]
    rows = [
        [s["interval_index"], s["x"], s["re"], s["im"]] for s in doc["samples"]
    ]
    return _csv_text(["interval_index", "x", "re", "im"], rows, comments)


def _format_nikodym(doc, fmt):
    if fmt == "json":
        return _as_json(doc)
    rows = [[r["p"], r["norm"], r["grad1_sq"], r["quotient"]] for r in doc["rows"]]
    return _csv_text(["p", "norm", "grad1_sq", "quotient"], rows)


def _format_square2d(doc, fmt):
    if fmt == "json":
        return _as_json(doc)
    rows = [
        [r["lambda1"], r["lambda2"], r["max_residual"], r["ok"]]
        for r in doc["rows"]
    ]
    return _csv_text(["lambda1", "lambda2", "max_residual", "ok"], rows)


# ---------------------------------------------------------------------------
# subcommands


def cmd_spectrum(args) -> int:
    payload = {
        "domain": domain_payload(args.domain),
        "bmatrix": bmatrix_payload(args.bmatrix),
        "window": [args.window[0], args.window[1]],
    }
    if args.scan_step is not None:
        payload["scan_step"] = args.scan_step
    if args.tol is not None:
        payload["tol"] = args.tol
    doc = _post("/spectrum", payload, args.server)
    _emit(_format_spectrum(doc, args.format), args.out)
    verdict = "yes" if doc["spectral_in_window"] else f"no ({len(doc['violations'])} violations)"
    _say(
        f"{len(doc['points'])} spectrum points in "
        f"[{args.window[0]:g}, {args.window[1]:g}]; spectral there: {verdict}"
    )
    return 0


def cmd_bmatrix(args) -> int:
    payload = {
        "domain": domain_payload(args.domain),
        "spectrum": spectrum_payload(args.spectrum),
    }
    if args.truncate is not None:
        payload["truncate"] = args.truncate
    doc = _post("/bmatrix", payload, args.server)
    _emit(_as_json(doc), args.out)
    n = doc["bmatrix"]["n"]
    _say(
        f"{n}x{n} boundary matrix from {len(doc['frequencies'])} frequencies; "
        f"unitarity defect {doc['unitarity_defect']:.3g}"
    )
    return 0


def cmd_gram(args) -> int:
    payload = {
        "domain": domain_payload(args.domain),
        "spectrum": spectrum_payload(args.spectrum),
    }
    if args.truncate is not None:
        payload["truncate"] = args.truncate
    doc = _post("/gram", payload, args.server)
    _emit(_format_gram(doc, args.format), args.out)
    _say(
        f"{len(doc['frequencies'])} frequencies; "
        f"orthogonality defect {doc['orthogonality_defect']:.3g}"
    )
    return 0


def cmd_verify(args) -> int:
    payload = {
        "domain": domain_payload(args.domain),
        "spectrum": spectrum_payload(args.spectrum),
    }
    if args.truncate is not None:
        payload["truncate"] = args.truncate
    if args.indicator is not None:
        payload["indicator"] = [args.indicator[0], args.indicator[1]]
    if args.bounds is not None:
        payload["parseval_bounds"] = args.bounds
    if args.tiling is not None:
        payload["tiling"] = args.tiling
    doc = _post("/verify", payload, args.server)
    _emit(_as_json(doc), args.out)
    bits = [f"orthogonality defect {doc['orthogonality_defect']:.3g}"]
    if doc["parseval"] is not None:
        bits.append(f"parseval relative defect {doc['parseval']['relative_defect']:.3g}")
    if doc["tiling"] is not None:
        bits.append(
            "tiles" if doc["tiling"]["tiles"]
            else f"tiling defect {doc['tiling']['defect_exact']}"
        )
    _say(f"{_status(doc['passed'])}: " + "; ".join(bits))
    return 0 if doc["passed"] else 1


def cmd_evolve(args) -> int:
    payload = {
        "domain": domain_payload(args.domain),
        "function": args.function,
        "t": args.t,
        "method": args.method,
    }
    if args.spectrum is not None:
        payload["spectrum"] = spectrum_payload(args.spectrum)
    if args.bmatrix is not None:
        payload["bmatrix"] = bmatrix_payload(args.bmatrix)
    if args.truncate is not None:
        payload["truncate"] = args.truncate
    if args.samples is not None:
        payload["samples_per_interval"] = args.samples
    doc = _post("/evolve", payload, args.server)
    _emit(_format_evolve(doc, args.format), args.out)
    bits = [
        f"t={doc['t_used']:g} (snap error {doc['snap_error']:.3g})",
        f"norm {doc['norm_before']:.6g} -> {doc['norm_after']:.6g}",
    ]
    if doc["max_method_difference"] is not None:
        bits.append(f"method difference {doc['max_method_difference']:.3g}")
    ok = True
    if args.cross_tol is not None:
        if doc["max_method_difference"] is None:
            raise CliError("--cross-tol needs --method both")
        ok = doc["max_method_difference"] < args.cross_tol
        bits.append(f"cross check {_status(ok)}")
    _say("; ".join(bits))
    return 0 if ok else 1


def cmd_tile(args) -> int:
    payload = {
        "domain": domain_payload(args.domain),
        "translations": args.translations,
    }
    doc = _post("/tile", payload, args.server)
    _emit(_as_json(doc), args.out)
    tiling = doc["tiling"]
    if tiling["tiles"]:
        _say(f"{_status(True)}: tiles with period {doc['period_exact']}")
    else:
        _say(
            f"{_status(False)}: does not tile; defect {tiling['defect_exact']} "
            f"(over {tiling['over_measure']:g}, under {tiling['under_measure']:g})"
        )
    return 0 if tiling["tiles"] else 1


def cmd_nikodym(args) -> int:
    payload = {"p_max": args.p_max, "n_max": args.n_max}
    doc = _post("/nikodym", payload, args.server)
    _emit(_format_nikodym(doc, args.format), args.out)
    quotients = ", ".join(f"{r['quotient']:.3g}" for r in doc["rows"])
    _say(f"{_status(doc['all_ok'])}: quotients {quotients}")
    return 0 if doc["all_ok"] else 1


def cmd_square2d(args) -> int:
    payload = {
        "lmax": args.lmax,
        "grid": args.grid,
        "n_times": args.times,
        "seed": args.seed,
    }
    if args.tol is not None:
        payload["tol"] = args.tol
    doc = _post("/square2d", payload, args.server)
    _emit(_format_square2d(doc, args.format), args.out)
    worst = max((r["max_residual"] for r in doc["rows"]), default=0.0)
    _say(
        f"{_status(doc['all_ok'])}: {len(doc['rows'])} frequency pairs, "
        f"{len(doc['times'])} times, worst residual {worst:.3g}"
    )
    return 0 if doc["all_ok"] else 1


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("fuglede.service.app:app", host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuglede",
        description="Spectra, boundary matrices and local translations on interval unions.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--server",
        default=os.environ.get("FUGLEDE_SERVER"),
        help="base URL of a running service; default is in-process",
    )
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def formats(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser(
        "spectrum", parents=[common],
        help="locate spectrum points of (domain, boundary matrix) in a window",
    )
    p.add_argument("--domain", required=True, help="domain JSON file, inline JSON, or a:b,c:d")
    p.add_argument("--bmatrix", required=True, help="boundary matrix JSON file or inline JSON")
    p.add_argument("--window", nargs=2, type=float, required=True, metavar=("LO", "HI"))
    p.add_argument("--scan-step", type=float, default=None)
    p.add_argument("--tol", type=float, default=None, help="singular value acceptance threshold")
    formats(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser(
        "bmatrix", parents=[common],
        help="recover the boundary matrix from a candidate spectrum",
    )
    p.add_argument("--domain", required=True)
    p.add_argument("--spectrum", required=True, help="expression, JSON file, or inline JSON")
    p.add_argument("--truncate", type=float, default=None, metavar="K", help="keep |lambda| <= K")
    p.set_defaults(func=cmd_bmatrix)

    p = sub.add_parser("gram", parents=[common], help="Gram matrix of the exponentials")
    p.add_argument("--domain", required=True)
    p.add_argument("--spectrum", required=True)
    p.add_argument("--truncate", type=float, default=None, metavar="K")
    formats(p)
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser(
        "verify", parents=[common],
        help="orthogonality, Parseval completeness, and optional tiling checks",
    )
    p.add_argument("--domain", required=True)
    p.add_argument("--spectrum", required=True)
    p.add_argument("--truncate", type=float, default=None, metavar="K")
    p.add_argument("--indicator", nargs=2, type=float, default=None, metavar=("A", "B"))
    p.add_argument("--bounds", nargs="+", type=float, default=None, metavar="K",
                   help="Parseval truncation bounds (default 10 25 50 100)")
    p.add_argument("--tiling", default=None, metavar="SPEC",
                   help='translation set, e.g. "period=2;residues=0,1/2"')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser(
        "evolve", parents=[common],
        help="apply the translation group to a test function",
    )
    p.add_argument("--domain", required=True)
    p.add_argument("--spectrum", default=None)
    p.add_argument("--bmatrix", default=None)
    p.add_argument("-f", "--f", "--function", dest="function", required=True,
                   metavar="SPEC", help='"indicator:a:b" or "exp:lam"')
    p.add_argument("--t", type=float, required=True, help="translation time")
    p.add_argument("--method", choices=("spectral", "boundary", "both"), default="both")
    p.add_argument("--samples", type=int, default=None, metavar="M", help="samples per interval")
    p.add_argument("--truncate", type=float, default=None, metavar="K")
    p.add_argument("--cross-tol", type=float, default=None, metavar="TOL",
                   help="fail (exit 1) if the two methods differ by more than TOL")
    formats(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("tile", parents=[common], help="exact tiling check for a translation set")
    p.add_argument("--domain", required=True)
    p.add_argument("--translations", required=True, metavar="SPEC",
                   help='e.g. "period=2;residues=0,1/2"')
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser(
        "nikodym", parents=[common],
        help="Poincare quotients of the comb-supported bump family",
    )
    p.add_argument("--p-max", type=int, default=3)
    p.add_argument("--n-max", type=int, default=16)
    formats(p)
    p.set_defaults(func=cmd_nikodym)

    p = sub.add_parser(
        "square2d", parents=[common],
        help="eigenfunction and Gram checks on the two dimensional square model",
    )
    p.add_argument("--check-eigen", action="store_true", default=True,
                   help="residual table per frequency pair (on by default)")
    p.add_argument("--lmax", type=float, default=4.0)
    p.add_argument("--grid", "--G", dest="grid", type=int, default=64, metavar="G")
    p.add_argument("--times", type=int, default=10, help="random grid-aligned times")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    formats(p)
    p.set_defaults(func=cmd_square2d)

    p = sub.add_parser("serve", help="run the HTTP service with uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
