"""graphkms command line: a thin client of the HTTP service.

By default the CLI talks to an in-process instance of the FastAPI app;
set GRAPHKMS_URL to point it at a running server instead.  Machine
output (--format json) is byte-identical across identical invocations:
fixed orderings, rationals as "p/q" strings, no floats and no timing.

Exit codes: 0 success, 2 schema violation, 3 mode unavailable,
4 infeasible seed, 5 verification failure.
"""

from __future__ import annotations

import json
import math
import os
import sys
from fractions import Fraction

import click
import httpx

from .serialize import canonical_json

EXIT_CODES = {
    "SchemaViolation": 2,
    "ExactModeUnavailable": 3,
    "NotSubInvariant": 4,
}


def _client() -> httpx.Client:
    url = os.environ.get("GRAPHKMS_URL")
    if url:
        return httpx.Client(base_url=url)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _graph_input(file, builtin) -> dict:
    if (file is None) == (builtin is None):
        click.echo("error: provide exactly one of --file or --builtin", err=True)
        sys.exit(2)
    if builtin is not None:
        return {"builtin": builtin}
    try:
        with open(file) as fh:
            return {"graph": json.load(fh)}
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot read graph file: {exc}", err=True)
        sys.exit(2)


def _post(path: str, payload: dict) -> dict:
    with _client() as client:
        response = client.post(path, json=payload)
    if response.status_code == 200:
        return response.json()
    detail = response.json().get("detail")
    if isinstance(detail, dict) and "code" in detail:
        code, message = detail["code"], detail.get("message", "")
    else:
        code, message = "SchemaViolation", str(detail)
    click.echo(f"error [{code}]: {message}", err=True)
    sys.exit(EXIT_CODES.get(code, 2))


def _beta_of(q_str: str) -> str:
    q = Fraction(q_str)
    return f"{math.log(q):.6f}"


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(canonical_json(report), nl=False)
        return
    results = report["results"]
    command = report["command"]
    if command == "classify":
        for row in results["vertices"]:
            flag = "  [window boundary]" if row["window_boundary"] else ""
            click.echo(f"{row['id']:>10}  {row['class']}{flag}")
    elif command == "transfer":
        for v, image in sorted(results["delta_images"].items()):
            body = " + ".join(f"{w}*d_{u}" for u, w in sorted(image.items())) or "0"
            click.echo(f"T d_{v} = {body}")
    elif command == "spectrum":
        if not results["points"]:
            click.echo("no feasible q found")
        for p in results["points"]:
            note = f"  ({p['annotation']})" if "annotation" in p else ""
            click.echo(
                f"q = {p['q']}  (beta = {_beta_of(p['q'])})  dimension {p['dimension']}{note}"
            )
    elif command == "solve":
        click.echo(f"q = {results['q']}  cone dimension {results['dimension']}")
        if results["window_relaxed"]:
            click.echo(f"window-relaxed at: {', '.join(results['window_relaxed'])}")
        for i, ray in enumerate(results["rays"]):
            weights = ", ".join(f"{v}: {w}" for v, w in sorted(ray["weights"].items()))
            click.echo(f"ray {i}: {weights}")
            if "normalization" in ray:
                click.echo(f"       {ray['normalization']}")
    elif command == "tower":
        click.echo(
            f"q = {results['q']}  depth {results['depth']}  "
            f"quasi-invariance {'pass' if results['quasi_invariance']['passed'] else 'FAIL'}  "
            f"seed round-trip {'pass' if results['pushforward_matches_seed'] else 'FAIL'}"
        )
        for level in results["tower"]:
            weights = ", ".join(
                f"{p}: {w}" for p, w in sorted(level["measure"].items())
            )
            mark = "ok" if level["certificate"] else "FAIL"
            click.echo(f"mu_{level['depth']} [{mark}]: {weights}")
    elif command == "verify":
        verdict = "pass" if results["all_passed"] else "FAIL"
        click.echo(
            f"q = {results['q']}  depth {results['depth']}  "
            f"rays {results['rays_checked']}  {verdict}"
        )
        if results["window_relaxed"]:
            click.echo(f"window-relaxed at: {', '.join(results['window_relaxed'])}")
        if "annotation" in results:
            click.echo(results["annotation"])
    else:
        click.echo(canonical_json(report), nl=False)


def _graph_options(fn):
    fn = click.option("--file", "-f", type=click.Path(), default=None,
                      help="Graph JSON file.")(fn)
    fn = click.option("--builtin", "-b", default=None,
                      help="Name of a packaged example graph.")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "table"]),
                      default="table", help="Output format.")(fn)
    return fn


@click.group()
def main():
    """Compute the KMS-weight structure of discrete graph algebras."""


@main.command()
@_graph_options
def classify(file, builtin, fmt):
    """Classify vertices as regular or singular."""
    _emit(_post("/classify", _graph_input(file, builtin)), fmt)


@main.command()
@_graph_options
def transfer(file, builtin, fmt):
    """Print the vertex transfer matrix and its action on point masses."""
    _emit(_post("/transfer", _graph_input(file, builtin)), fmt)


@main.command()
@_graph_options
@click.option("--exact", "mode", flag_value="exact", default=True,
              help="Exact spectrum (all-regular finite graphs).")
@click.option("--scan", "scan_args", nargs=3, type=str, default=None,
              help="Grid scan: QMIN QMAX STEPS.")
def spectrum(file, builtin, fmt, mode, scan_args):
    """Feasible q values (q = e^beta) with cone dimensions."""
    payload = _graph_input(file, builtin)
    if scan_args:
        payload.update(
            {"mode": "scan", "qmin": scan_args[0], "qmax": scan_args[1],
             "steps": int(scan_args[2])}
        )
        threads = os.environ.get("GRAPHKMS_THREADS")
        if threads:
            payload["workers"] = int(threads)
    else:
        payload["mode"] = "exact"
    _emit(_post("/spectrum", payload), fmt)


@main.command()
@_graph_options
@click.option("--q", required=True, help="Positive rational q = e^beta, e.g. 2 or 1/2.")
def solve(file, builtin, fmt, q):
    """Extreme rays of the sub-invariance cone at q."""
    payload = _graph_input(file, builtin)
    payload["q"] = q
    _emit(_post("/solve", payload), fmt)


@main.command()
@_graph_options
@click.option("--q", required=True, help="Positive rational q = e^beta.")
@click.option("--depth", type=int, required=True, help="Tower depth N.")
@click.option("--seed", "seed_index", type=int, default=0,
              help="Index of the extreme ray used as seed.")
@click.option("--seed-weights", default=None,
              help='Explicit seed as JSON, e.g. \'{"u": "1", "v": "2"}\'.')
def tower(file, builtin, fmt, q, depth, seed_index, seed_weights):
    """Build and certify a boundary measure tower from a cone member."""
    payload = _graph_input(file, builtin)
    payload.update({"q": q, "depth": depth, "seed_index": seed_index})
    if seed_weights is not None:
        try:
            payload["seed_weights"] = json.loads(seed_weights)
        except json.JSONDecodeError as exc:
            click.echo(f"error: bad --seed-weights: {exc}", err=True)
            sys.exit(2)
    _emit(_post("/tower", payload), fmt)


@main.command()
@_graph_options
@click.option("--q", required=True, help="Positive rational q = e^beta.")
@click.option("--depth", type=int, required=True, help="Tower depth N.")
def verify(file, builtin, fmt, q, depth):
    """Round-trip check: solve, build towers for every ray, verify all
    certificates and the quasi-invariance relation."""
    payload = _graph_input(file, builtin)
    payload.update({"q": q, "depth": depth})
    report = _post("/verify", payload)
    _emit(report, fmt)
    if not report["results"]["all_passed"]:
        sys.exit(5)


if __name__ == "__main__":
    main()
