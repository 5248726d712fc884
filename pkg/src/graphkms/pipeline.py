"""The classify/transfer/spectrum/solve/tower/verify pipeline.

Each function takes a resolved graph plus parameters and returns a
deterministic, JSON-serializable report body.  The service endpoints and
the CLI are both thin wrappers around these.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional

from .builtin_graphs import builtin_graph
from .errors import NotSubInvariant, SchemaViolation
from .graphs import (
    DiscreteGraph,
    boundary_vertices,
    classify_vertices,
    graph_from_json,
)
from .measures import AtomicMeasure, dirac
from .serialize import digest, frac_str, measure_json, parse_frac, path_key
from .solver import (
    MeasureTower,
    SubInvarianceProblem,
    build_tower,
    kms_spectrum_exact,
    kms_spectrum_scan,
    normalization_report,
    pushforward_to_vertices,
    solve_cone,
    transfer_matrix,
    verify_quasi_invariance,
    weight_eval,
)


def resolve_graph(builtin: Optional[str], graph_doc: Optional[dict]) -> DiscreteGraph:
    if (builtin is None) == (graph_doc is None):
        raise SchemaViolation("provide exactly one of a builtin name or a graph document")
    if builtin is not None:
        return builtin_graph(builtin)
    return graph_from_json(graph_doc)


def _report(command: str, g: DiscreteGraph, params: dict, results: dict) -> dict:
    return {
        "command": command,
        "inputs_digest": digest({"graph": g.to_json(), "params": params}),
        "results": results,
    }


def run_classify(g: DiscreteGraph) -> dict:
    labels = classify_vertices(g)
    boundary = boundary_vertices(g)
    return _report(
        "classify",
        g,
        {},
        {
            "vertices": [
                {"id": v, "class": labels[v], "window_boundary": v in boundary}
                for v in g.vertices
            ]
        },
    )


def run_transfer(g: DiscreteGraph) -> dict:
    a = transfer_matrix(g)
    matrix = {
        v: {w: a.entry(v, w) for w in g.vertices if a.entry(v, w)}
        for v in g.vertices
        if any(a.entry(v, w) for w in g.vertices)
    }
    deltas = {
        v: measure_json(a.apply(dirac(g.vertex_space(), v))) for v in g.vertices
    }
    return _report("transfer", g, {}, {"matrix": matrix, "delta_images": deltas})


def _spectrum_entry(point) -> dict:
    entry = {"q": frac_str(point.q), "dimension": point.dimension}
    if point.tracial:
        entry["annotation"] = "beta=0 excluded by the weight classification; tracial case"
    return entry


def run_spectrum(
    g: DiscreteGraph,
    mode: str,
    qmin: Optional[str] = None,
    qmax: Optional[str] = None,
    steps: Optional[int] = None,
    workers: Optional[int] = None,
) -> dict:
    if mode == "exact":
        points = kms_spectrum_exact(g)
        params = {"mode": "exact"}
    elif mode == "scan":
        if qmin is None or qmax is None or steps is None:
            raise SchemaViolation("scan mode needs qmin, qmax and steps")
        points = kms_spectrum_scan(
            g, parse_frac(qmin), parse_frac(qmax), int(steps), workers
        )
        params = {"mode": "scan", "qmin": str(qmin), "qmax": str(qmax), "steps": steps}
    else:
        raise SchemaViolation(f"unknown spectrum mode {mode!r}")
    return _report(
        "spectrum", g, params, {"mode": mode, "points": [_spectrum_entry(p) for p in points]}
    )


def run_solve(g: DiscreteGraph, q: str) -> dict:
    cone = solve_cone(SubInvarianceProblem.for_graph(g, parse_frac(q)))
    rays = []
    for ray in cone.rays:
        norm = normalization_report(cone, ray)
        entry: Dict[str, object] = {"weights": measure_json(ray)}
        if norm["normalizable"]:
            entry["probability"] = measure_json(norm["probability_ray"])
        else:
            entry["normalization"] = norm["reason"]
        rays.append(entry)
    return _report(
        "solve",
        g,
        {"q": str(q)},
        {
            "q": frac_str(parse_frac(q)),
            "dimension": cone.dimension,
            "rays": rays,
            "window_relaxed": sorted(cone.window_relaxed),
        },
    )


def _seed_measure(
    g: DiscreteGraph, q: Fraction, seed_index: int, seed_weights: Optional[dict]
) -> AtomicMeasure:
    if seed_weights is not None:
        return AtomicMeasure(
            g.vertex_space(), {v: parse_frac(w) for v, w in seed_weights.items()}
        )
    cone = solve_cone(SubInvarianceProblem.for_graph(g, q))
    if not 0 <= seed_index < len(cone.rays):
        raise NotSubInvariant(
            f"no extreme ray with index {seed_index}; cone has {len(cone.rays)} ray(s)"
        )
    return cone.rays[seed_index]


def _tower_json(tower: MeasureTower) -> List[dict]:
    return [
        {
            "depth": n,
            "measure": measure_json(tower.measures[n], path_key),
            "certificate": True if n == 0 else tower.certificates[n - 1],
        }
        for n in range(tower.depth + 1)
    ]


def run_tower(
    g: DiscreteGraph,
    q: str,
    depth: int,
    seed_index: int = 0,
    seed_weights: Optional[dict] = None,
) -> dict:
    qq = parse_frac(q)
    seed = _seed_measure(g, qq, seed_index, seed_weights)
    tower = build_tower(g, seed, qq, depth)
    quasi = verify_quasi_invariance(tower)
    back = pushforward_to_vertices(tower)
    return _report(
        "tower",
        g,
        {"q": str(q), "depth": depth, "seed_index": seed_index},
        {
            "q": frac_str(qq),
            "depth": depth,
            "seed": measure_json(seed),
            "tower": _tower_json(tower),
            "quasi_invariance": quasi,
            "pushforward_matches_seed": back == seed,
        },
    )


def run_verify(g: DiscreteGraph, q: str, depth: int) -> dict:
    qq = parse_frac(q)
    cone = solve_cone(SubInvarianceProblem.for_graph(g, qq))
    per_ray = []
    all_passed = True
    for i, ray in enumerate(cone.rays):
        tower = build_tower(g, ray, qq, depth)
        quasi = verify_quasi_invariance(tower)
        back = pushforward_to_vertices(tower)
        ok = (
            all(tower.certificates)
            and quasi["passed"]
            and back == ray
        )
        all_passed = all_passed and ok
        per_ray.append(
            {
                "ray_index": i,
                "ray": measure_json(ray),
                "certificates": all(tower.certificates),
                "quasi_invariance": quasi["passed"],
                "pushforward_matches_seed": back == ray,
                "passed": ok,
            }
        )
    results = {
        "q": frac_str(qq),
        "depth": depth,
        "rays_checked": len(cone.rays),
        "window_relaxed": sorted(cone.window_relaxed),
        "per_ray": per_ray,
        "all_passed": all_passed,
    }
    if qq == 1:
        results["annotation"] = "q=1: tracial case; beta=0 is outside the weight classification"
    return _report("verify", g, {"q": str(q), "depth": depth}, results)
