"""Command-line client for the void-size fitting and geometry service.

The CLI parses local CSV files, posts typed requests to the HTTP service
(an in-process app instance by default, or a remote base URL via --server)
and renders the responses.  Standard output carries data: JSON reports,
CSV tables, bare numbers.  Standard error carries summaries, warnings and
error messages.

Exit statuses: 0 success, 2 parse or usage failure, 3 degenerate data,
4 coefficient of variation out of range, 5 geodesic solve failed to
converge, 1 anything unexpected.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import httpx

from .service.schemas import FitReportDocument as ReportDocument  # noqa: F401

_FRACTION_SUM_WARN = 1e-6

_EXIT_OK = 0
_EXIT_UNEXPECTED = 1
_EXIT_USAGE = 2
_EXIT_DEGENERATE = 3
_EXIT_CV_RANGE = 4
_EXIT_NO_CONVERGENCE = 5

_EXIT_BY_CODE = {
    "bad_request": _EXIT_USAGE,
    "invalid_data": _EXIT_USAGE,
    "chart_boundary": _EXIT_USAGE,
    "degenerate_data": _EXIT_DEGENERATE,
    "inconsistent_data": _EXIT_DEGENERATE,
    "cv_out_of_range": _EXIT_CV_RANGE,
    "no_convergence": _EXIT_NO_CONVERGENCE,
}


class CliError(Exception):
    """Fatal CLI-side failure with an explicit exit status."""

    def __init__(self, message: str, exit_status: int = _EXIT_USAGE):
        super().__init__(message)
        self.exit_status = exit_status


@dataclass(frozen=True)
class InputSpec:
    """A local input file and how to read it."""

    path: Path
    format: str
    unit_scale: float = 1.0


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _read_rows(path: Path, width: int) -> list[tuple[int, list[float]]]:
    """Parse a CSV file into numeric rows of fixed width.

    '#' starts a comment, blank lines are skipped, and a leading header row
    is detected by a non-numeric first token.  Any later malformed row is a
    hard error naming its line number.
    """
    try:
        text = path.read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    rows: list[tuple[int, list[float]]] = []
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if not seen_data and not _is_number(fields[0]):
            seen_data = True  # header row
            continue
        seen_data = True
        if len(fields) != width:
            raise CliError(
                f"{path}:{lineno}: expected {width} comma-separated "
                f"value(s), got {len(fields)}"
            )
        try:
            rows.append((lineno, [float(f) for f in fields]))
        except ValueError:
            raise CliError(f"{path}:{lineno}: non-numeric field in {line!r}") from None
    if not rows:
        raise CliError(f"{path}: no data rows")
    return rows


def _read_raw_values(path: Path, kind: str) -> list[float]:
    values = []
    for lineno, (value,) in _read_rows(path, width=1):
        if value <= 0.0:
            raise CliError(f"{path}:{lineno}: {kind} must be positive, got {value}")
        values.append(value)
    return values


def _read_histogram(path: Path) -> tuple[list[float], list[float]]:
    centers, fractions = [], []
    for lineno, (center, fraction) in _read_rows(path, width=2):
        if center <= 0.0:
            raise CliError(f"{path}:{lineno}: class centre must be positive, got {center}")
        if fraction < 0.0:
            raise CliError(f"{path}:{lineno}: fraction must be non-negative, got {fraction}")
        centers.append(center)
        fractions.append(fraction)
    total = sum(fractions)
    if total > 0.0 and abs(total - 1.0) > _FRACTION_SUM_WARN:
        print(
            f"warning: fractions sum to {total:.9g}; normalising to 1",
            file=sys.stderr,
        )
    return centers, fractions


def _make_client(server: Optional[str]):
    if server:
        return httpx.Client(base_url=server, timeout=120.0)
    import warnings

    with warnings.catch_warnings():
        # The bundled test client is the in-process transport; its import
        # warns about the httpx backend on some starlette builds.
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app, raise_server_exceptions=False)


def _post(client, path: str, payload: dict):
    try:
        return client.post(path, json=payload)
    except httpx.HTTPError as exc:
        raise CliError(f"request to service failed: {exc}", _EXIT_UNEXPECTED) from None


def _handle_error_response(response) -> int:
    """Print the service's error to stderr and map it to an exit status."""
    try:
        detail = response.json().get("detail")
    except ValueError:
        detail = None
    if response.status_code == 422:
        print(f"invalid request: {json.dumps(detail)}", file=sys.stderr)
        return _EXIT_USAGE
    if isinstance(detail, dict):
        code = detail.get("code", "")
        print(f"error ({code}): {detail.get('message', '')}", file=sys.stderr)
        if code == "no_convergence" and "upper_bound" in detail:
            print(
                "straight-line upper bound (not a geodesic distance):",
                file=sys.stderr,
            )
            print(f"upper_bound,{detail['upper_bound']!r}")
        return _EXIT_BY_CODE.get(code, _EXIT_UNEXPECTED)
    print(f"service error: HTTP {response.status_code}", file=sys.stderr)
    return _EXIT_UNEXPECTED


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_fit(args) -> int:
    spec = InputSpec(path=Path(args.file), format=args.format, unit_scale=args.unit_scale)
    payload: dict = {
        "format": spec.format,
        "method": args.method or ("mle" if spec.format == "volumes" else "cv"),
        "unit_scale": spec.unit_scale,
        "seed": args.seed,
        "source": str(spec.path),
    }
    if spec.format == "histogram":
        centers, fractions = _read_histogram(spec.path)
        payload["class_centers"] = centers
        payload["fractions"] = fractions
    else:
        kind = "volume" if spec.format == "volumes" else "diameter"
        payload["values"] = _read_raw_values(spec.path, kind)
    response = _post(_make_client(args.server), "/fit", payload)
    if response.status_code != 200:
        return _handle_error_response(response)
    doc = response.json()
    print(
        f"fitted mu={doc['mu']:.6g} beta={doc['beta']:.6g} label={doc['label']} "
        f"(n={doc['n_values']}, sample mean={doc['sample_mean']:.6g})",
        file=sys.stderr,
    )
    print(
        f"entropy={doc['entropy']:.6g} deficit_vs_random={doc['entropy_deficit']:.6g}",
        file=sys.stderr,
    )
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.output)
    return _EXIT_OK


def _cmd_pdf_table(args) -> int:
    if args.points < 2:
        raise CliError("--points must be at least 2")
    if not 0 < args.lo < args.hi:
        raise CliError("need 0 < --lo < --hi")
    payload = {
        "mu": args.mu,
        "beta": args.beta,
        "variable": args.variable,
        "lo": args.lo,
        "hi": args.hi,
        "points": args.points,
    }
    response = _post(_make_client(args.server), "/pdf-table", payload)
    if response.status_code != 200:
        return _handle_error_response(response)
    doc = response.json()
    lines = ["x,density"]
    lines += [f"{x!r},{d!r}" for x, d in zip(doc["xs"], doc["densities"])]
    _emit("\n".join(lines) + "\n", args.output)
    return _EXIT_OK


def _cmd_geometry(args) -> int:
    client = _make_client(args.server)
    query = args.query
    values = args.args
    if query == "entropy":
        if len(values) != 2:
            raise CliError("geometry entropy takes MU BETA")
        response = _post(client, "/geometry/entropy", {"mu": values[0], "beta": values[1]})
    elif query == "curvature":
        if len(values) != 1:
            raise CliError("geometry curvature takes BETA")
        response = _post(client, "/geometry/curvature", {"beta": values[0]})
    elif query == "distance":
        if len(values) != 4:
            raise CliError("geometry distance takes MU1 BETA1 MU2 BETA2")
        response = _post(
            client,
            "/geometry/distance",
            {
                "p": {"mu": values[0], "beta": values[1]},
                "q": {"mu": values[2], "beta": values[3]},
            },
        )
    elif query == "shoot":
        if len(values) != 4:
            raise CliError("geometry shoot takes MU BETA D_MU D_BETA")
        response = _post(
            client,
            "/geometry/shoot",
            {
                "start": {"mu": values[0], "beta": values[1]},
                "velocity": {"d_mu": values[2], "d_beta": values[3]},
                "t_end": args.t_end,
                "steps": args.steps,
            },
        )
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown geometry query {query!r}")
    if response.status_code != 200:
        return _handle_error_response(response)
    doc = response.json()
    if query == "shoot":
        lines = ["t,mu,beta"]
        lines += [
            f"{t!r},{m!r},{b!r}"
            for t, m, b in zip(doc["ts"], doc["mus"], doc["betas"])
        ]
        _emit("\n".join(lines) + "\n", args.output)
        print(
            f"length={doc['length']:.10g} energy={doc['energy']:.10g}",
            file=sys.stderr,
        )
    elif query == "distance":
        _emit(f"{doc['distance']!r}\n", args.output)
    else:
        _emit(f"{doc['value']!r}\n", args.output)
    return _EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return _EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voidgamma",
        description="Fit gamma void-size laws and query the parameter geometry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit (mu, beta) to a CSV sample")
    fit.add_argument("file", help="input CSV file")
    fit.add_argument(
        "--format",
        required=True,
        choices=("volumes", "diameters", "histogram"),
        help="input layout: raw volumes, raw diameters, or class_center,fraction rows",
    )
    fit.add_argument(
        "--method",
        choices=("mle", "cv"),
        default=None,
        help="fit method (default: mle for volumes, cv otherwise)",
    )
    fit.add_argument("--unit-scale", type=float, default=1.0, dest="unit_scale",
                     help="multiply input lengths by this factor (volumes scale by its cube)")
    fit.add_argument("--seed", type=int, default=None,
                     help="seed recorded in the report for provenance")
    fit.add_argument("--output", default=None, help="write the JSON report here instead of stdout")
    fit.add_argument("--server", default=None, help="base URL of a running service")

    table = sub.add_parser("pdf-table", help="tabulate a density on a uniform grid")
    table.add_argument("--mu", type=float, required=True)
    table.add_argument("--beta", type=float, required=True)
    table.add_argument("--variable", choices=("volume", "diameter"), default="volume")
    table.add_argument("--lo", type=float, required=True)
    table.add_argument("--hi", type=float, required=True)
    table.add_argument("--points", type=int, required=True)
    table.add_argument("--output", default=None, help="write the CSV table here instead of stdout")
    table.add_argument("--server", default=None, help="base URL of a running service")

    geom = sub.add_parser("geometry", help="query the parameter-surface geometry")
    geom.add_argument("query", choices=("entropy", "curvature", "distance", "shoot"))
    geom.add_argument("args", type=float, nargs="*", help="numeric arguments for the query")
    geom.add_argument("--t-end", type=float, default=1.0, dest="t_end",
                      help="integration horizon for shoot")
    geom.add_argument("--steps", type=int, default=1000, help="integration steps for shoot")
    geom.add_argument("--output", default=None, help="write the result here instead of stdout")
    geom.add_argument("--server", default=None, help="base URL of a running service")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


_HANDLERS = {
    "fit": _cmd_fit,
    "pdf-table": _cmd_pdf_table,
    "geometry": _cmd_geometry,
    "serve": _cmd_serve,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else _EXIT_OK
    try:
        return _HANDLERS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_status
    except Exception as exc:  # noqa: BLE001 - last-resort stderr report
        print(f"unexpected error: {exc}", file=sys.stderr)
        return _EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
