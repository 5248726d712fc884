"""Vertex-level transfer operator, sub-invariance cones and measure towers.

The transfer operator pulls a vertex measure back along the source map and
pushes it forward along the range map; its matrix entry at (v, w) counts
the edges from w to v.  A vertex measure is sub-invariant at q = e^beta
when (T mu)(v) <= q mu(v) everywhere, with equality at regular vertices.
The nonnegative solutions of that system form a polyhedral cone, computed
here exactly by the double description method.  Each cone member seeds a
tower of boundary measures connected by pushforward certificates, the
finite-depth realization of a quasi-invariant boundary measure.

Everything is parametrized by the positive rational q = e^beta; beta
itself only ever appears as a display value.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .boundary import BoundarySpace, build_boundary, rho_map, cylinder_members, shift
from .errors import (
    ConsistencyFailure,
    DepthExceeded,
    ExactModeUnavailable,
    NotSubInvariant,
    WindowTooSmall,
)
from .graphs import (
    DiscreteGraph,
    FinitePath,
    boundary_vertices,
    effective_singular,
)
from .measures import (
    AtomicMeasure,
    LocalHomeoPresentation,
    SpaceMap,
    pullback,
    pushforward,
)


@dataclass(frozen=True)
class TransferMatrix:
    """Integer matrix A with A(v, w) = number of edges from w to v."""

    vertices: Tuple[str, ...]
    entries: Dict[Tuple[str, str], int]

    def entry(self, v: str, w: str) -> int:
        return self.entries.get((v, w), 0)

    def apply(self, mu: AtomicMeasure) -> AtomicMeasure:
        weights: Dict[str, Fraction] = {}
        for w, mass in mu.weights.items():
            for v in self.vertices:
                a = self.entry(v, w)
                if a:
                    weights[v] = weights.get(v, Fraction(0)) + a * mass
        return AtomicMeasure(mu.space, weights)


def transfer_matrix(g: DiscreteGraph) -> TransferMatrix:
    entries: Dict[Tuple[str, str], int] = {}
    for e in g.edges:
        key = (g.r(e), g.s(e))
        entries[key] = entries.get(key, 0) + 1
    return TransferMatrix(g.vertices, entries)


def transfer_via_measures(g: DiscreteGraph, mu: AtomicMeasure) -> AtomicMeasure:
    """T mu computed through the measure calculus: pull back along the
    source map, push forward along the range map.  Used to cross-validate
    the matrix form."""
    e0, e1 = g.vertex_space(), g.edge_space()
    s_map = LocalHomeoPresentation(e1, e0, {e: g.s(e) for e in g.edges})
    r_map = SpaceMap(e1, e0, {e: g.r(e) for e in g.edges})
    return pushforward(r_map, pullback(s_map, mu))


@dataclass(frozen=True)
class SubInvarianceProblem:
    """The constraint system T mu <= q mu with equality on regular vertices.

    For windowed graphs, vertices whose incoming edges may cross the
    window boundary are demoted to inequality rows and flagged: every
    true solution of the infinite graph restricted to the window still
    satisfies the relaxed system.
    """

    graph: DiscreteGraph
    q: Fraction
    equality_vertices: Tuple[str, ...]
    inequality_vertices: Tuple[str, ...]
    window_relaxed: Tuple[str, ...]

    @classmethod
    def for_graph(cls, g: DiscreteGraph, q) -> "SubInvarianceProblem":
        q = Fraction(q)
        if q <= 0:
            raise ValueError("q must be a positive rational")
        sng = effective_singular(g)
        eq = tuple(v for v in g.vertices if v not in sng)
        ineq = tuple(v for v in g.vertices if v in sng)
        relaxed = tuple(v for v in g.vertices if v in boundary_vertices(g))
        if g.window is not None and not eq:
            raise WindowTooSmall("window relaxation leaves no equality rows")
        return cls(g, q, eq, ineq, relaxed)

    def satisfied_by(self, mu: AtomicMeasure) -> bool:
        t_mu = transfer_matrix(self.graph).apply(mu)
        for v in self.equality_vertices:
            if t_mu(v) != self.q * mu(v):
                return False
        for v in self.inequality_vertices:
            if t_mu(v) > self.q * mu(v):
                return False
        return all(w >= 0 for w in mu.weights.values())


@dataclass(frozen=True)
class SolutionCone:
    problem: SubInvarianceProblem
    rays: Tuple[AtomicMeasure, ...]
    dimension: int

    @property
    def window_relaxed(self) -> Tuple[str, ...]:
        return self.problem.window_relaxed


def _normalize_ray(vec: Tuple[Fraction, ...]) -> Tuple[Fraction, ...]:
    lead = next((x for x in vec if x != 0), None)
    if lead is None:
        return vec
    return tuple(x / lead for x in vec)


def _double_description(
    n: int, rows: Sequence[Tuple[Tuple[Fraction, ...], bool]]
) -> List[Tuple[Fraction, ...]]:
    """Extreme rays of {x >= 0 : a.x >= 0 (or = 0) for each row}.

    Starts from the nonnegative orthant and inserts one constraint at a
    time; the cone stays pointed throughout, so the standard zero-set
    adjacency test applies.
    """
    unit = [
        tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))
        for i in range(n)
    ]
    # processed constraints, for activity bookkeeping; the orthant facets first
    processed: List[Tuple[Fraction, ...]] = [
        tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))
        for i in range(n)
    ]

    def zero_set(ray: Tuple[Fraction, ...]) -> frozenset:
        return frozenset(
            i
            for i, row in enumerate(processed)
            if sum(a * x for a, x in zip(row, ray)) == 0
        )

    rays = list(unit)
    for row, is_equality in rows:
        vals = [sum(a * x for a, x in zip(row, r)) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zsets = {i: zero_set(rays[i]) for i in range(len(rays))}
        keep = zero if is_equality else pos + zero
        new_rays = [rays[i] for i in keep]
        for ip in pos:
            for im in neg:
                meet = zsets[ip] & zsets[im]
                adjacent = not any(
                    k not in (ip, im) and meet <= zsets[k] for k in range(len(rays))
                )
                if not adjacent:
                    continue
                combo = tuple(
                    vals[ip] * rays[im][j] - vals[im] * rays[ip][j] for j in range(n)
                )
                new_rays.append(_normalize_ray(combo))
        processed.append(row)
        rays = []
        seen = set()
        for r in new_rays:
            r = _normalize_ray(r)
            if any(r) and r not in seen:
                seen.add(r)
                rays.append(r)
    return rays


def solve_cone(problem: SubInvarianceProblem) -> SolutionCone:
    """All nonnegative exact solutions of the sub-invariance system, as
    extreme rays normalized so the first nonzero weight is 1."""
    g = problem.graph
    order = list(g.vertices)
    index = {v: i for i, v in enumerate(order)}
    a = transfer_matrix(g)
    rows: List[Tuple[Tuple[Fraction, ...], bool]] = []
    for v in problem.equality_vertices:
        # (T mu)(v) - q mu(v) = 0
        row = [Fraction(a.entry(v, w)) for w in order]
        row[index[v]] -= problem.q
        rows.append((tuple(row), True))
    for v in problem.inequality_vertices:
        # q mu(v) - (T mu)(v) >= 0
        row = [Fraction(-a.entry(v, w)) for w in order]
        row[index[v]] += problem.q
        rows.append((tuple(row), False))
    vecs = _double_description(len(order), rows)
    vecs.sort()
    space = g.vertex_space()
    rays = tuple(
        AtomicMeasure(space, {v: vec[i] for v, i in index.items()}) for vec in vecs
    )
    dim = linalg.rank(vecs) if vecs else 0
    return SolutionCone(problem, rays, dim)


def normalization_report(cone: SolutionCone, ray: AtomicMeasure) -> dict:
    """Whether a ray scales to a probability measure.

    Windowed graphs never normalize: the global measure either grows
    geometrically along the line (q != 1) or has constant weights (q = 1),
    so its total mass is infinite even though every window mass is finite.
    """
    g = cone.problem.graph
    if g.window is not None:
        reason = (
            "window mass grows like q^n; no probability normalization"
            if cone.problem.q != 1
            else "constant weights on an infinite line; no probability normalization"
        )
        return {"normalizable": False, "reason": reason}
    total = ray.total_mass()
    if total == 0:
        return {"normalizable": False, "reason": "zero measure"}
    scaled = ray.scale(Fraction(1, 1) / total)
    return {
        "normalizable": True,
        "probability_ray": scaled,
    }


@dataclass(frozen=True)
class SpectrumPoint:
    q: Fraction
    dimension: int
    tracial: bool


def kms_spectrum_exact(g: DiscreteGraph) -> List[SpectrumPoint]:
    """Exact spectrum for finite all-regular graphs.

    With every vertex regular the system is T mu = q mu with mu >= 0, so
    feasible q are nonnegative eigenvalues of the transfer matrix that
    admit a nonnegative eigenvector.  The characteristic polynomial is
    monic with integer coefficients, so its rational roots are integers
    dividing the constant term; irrational eigenvalues are outside exact
    rational arithmetic and are not reported.
    """
    if g.window is not None or effective_singular(g):
        raise ExactModeUnavailable(
            "exact spectrum requires a finite graph with only regular vertices"
        )
    order = list(g.vertices)
    a = transfer_matrix(g)
    matrix = [[a.entry(v, w) for w in order] for v in order]
    coeffs = linalg.charpoly(matrix)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    constant = abs(int(coeffs[-1]))
    candidates = sorted(
        d for d in range(1, constant + 1) if constant % d == 0
    )
    points = []
    for d in candidates:
        q = Fraction(d)
        if linalg.poly_eval(coeffs, q) != 0:
            continue
        cone = solve_cone(SubInvarianceProblem.for_graph(g, q))
        if cone.dimension > 0:
            points.append(SpectrumPoint(q, cone.dimension, q == 1))
    return points


def kms_spectrum_scan(
    g: DiscreteGraph,
    qmin: Fraction,
    qmax: Fraction,
    steps: int,
    workers: Optional[int] = None,
) -> List[SpectrumPoint]:
    """Cone dimension over an evenly spaced rational q-grid.

    Grid points are independent; they may be evaluated concurrently and
    are merged back in q-order.
    """
    qmin, qmax = Fraction(qmin), Fraction(qmax)
    if steps < 1 or qmin <= 0 or qmax < qmin:
        raise ValueError("scan needs 0 < qmin <= qmax and steps >= 1")
    if steps == 1:
        grid = [qmin]
    else:
        step = (qmax - qmin) / (steps - 1)
        grid = [qmin + i * step for i in range(steps)]

    def at(q: Fraction) -> SpectrumPoint:
        cone = solve_cone(SubInvarianceProblem.for_graph(g, q))
        return SpectrumPoint(q, cone.dimension, q == 1)

    if workers is None:
        workers = int(os.environ.get("GRAPHKMS_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(at, grid))
    else:
        points = [at(q) for q in grid]
    return [p for p in points if p.dimension > 0]


@dataclass(frozen=True)
class MeasureTower:
    """Measures mu_0..mu_N on the truncated boundary spaces, with exact
    pushforward certificates (rho_n)_* mu_n = mu_{n-1}."""

    graph: DiscreteGraph
    q: Fraction
    depth: int
    spaces: Tuple[BoundarySpace, ...]
    measures: Tuple[AtomicMeasure, ...]
    certificates: Tuple[bool, ...]


def _vertex_measure_to_paths(g: DiscreteGraph, space, mu0: AtomicMeasure) -> AtomicMeasure:
    return AtomicMeasure(
        space, {g.vertex_path(v): w for v, w in mu0.weights.items()}
    )


def build_tower(
    g: DiscreteGraph, mu0: AtomicMeasure, q, depth: int
) -> MeasureTower:
    """Reconstruct the boundary measure tower seeded by a cone member.

    Depth n weights: q^{-1} times the weight of the shifted path for
    positive-length paths; mu0(v) - q^{-1}(T mu0)(v) for singular
    vertices.  Membership of mu0 in the cone is checked first; without it
    the singular-vertex subtraction would go negative.
    """
    q = Fraction(q)
    problem = SubInvarianceProblem.for_graph(g, q)
    if not problem.satisfied_by(mu0):
        raise NotSubInvariant("seed measure is not in the sub-invariance cone")
    t_mu0 = transfer_matrix(g).apply(mu0)
    spaces = tuple(build_boundary(g, n) for n in range(depth + 1))
    measures = [_vertex_measure_to_paths(g, spaces[0].space, mu0)]
    certificates: List[bool] = []
    sng = effective_singular(g)
    for n in range(1, depth + 1):
        weights: Dict[FinitePath, Fraction] = {}
        prev = measures[-1]
        for a in spaces[n].points():
            if a.is_vertex():
                v = a.vertex
                if v not in sng:
                    continue
                w = mu0(v) - t_mu0(v) / q
                if w < 0:
                    raise NotSubInvariant(
                        f"negative singular-vertex mass at {v}; T mu <= q mu violated"
                    )
            else:
                w = prev(shift(spaces[n], a)) / q
            if w:
                weights[a] = w
        mu_n = AtomicMeasure(spaces[n].space, weights)
        pushed = pushforward(rho_map(spaces[n], spaces[n - 1]), mu_n)
        cert = pushed == prev
        if not cert:
            raise ConsistencyFailure(f"tower certificate failed at depth {n}")
        certificates.append(cert)
        measures.append(mu_n)
    return MeasureTower(g, q, depth, spaces, tuple(measures), tuple(certificates))


def verify_quasi_invariance(tower: MeasureTower) -> dict:
    """Re-check the cylinder relation nu(Z{a}) = q^{-1} nu(Z{shift(a)}) on
    every positive-length point at every depth; report the first
    counterexample per depth."""
    report = {"passed": True, "depths": []}
    for n in range(1, tower.depth + 1):
        mu_n, mu_prev = tower.measures[n], tower.measures[n - 1]
        checked = 0
        witness = None
        for a in sorted(tower.spaces[n].points(), key=repr):
            if a.is_vertex():
                continue
            checked += 1
            if mu_n(a) * tower.q != mu_prev(shift(tower.spaces[n], a)):
                witness = a
                break
        ok = witness is None
        report["depths"].append(
            {
                "depth": n,
                "checked": checked,
                "passed": ok,
                "witness": None if ok else repr(witness),
            }
        )
        if not ok:
            report["passed"] = False
    return report


def pushforward_to_vertices(tower: MeasureTower) -> AtomicMeasure:
    """Push the top measure down the whole tower; equals the seed exactly."""
    mu = tower.measures[tower.depth]
    for n in range(tower.depth, 0, -1):
        mu = pushforward(rho_map(tower.spaces[n], tower.spaces[n - 1]), mu)
    g = tower.graph
    return AtomicMeasure(
        g.vertex_space(), {a.vertex: w for a, w in mu.weights.items()}
    )


def weight_eval(tower: MeasureTower, base: Sequence[FinitePath]) -> Fraction:
    """The weight of the cylinder over a uniform-length base: the mass the
    depth-k tower measure gives its member set."""
    base = list(base)
    if not base:
        return Fraction(0)
    k = len(base[0])
    if k > tower.depth:
        raise DepthExceeded(f"cylinder base length {k} exceeds tower depth {tower.depth}")
    members = cylinder_members(tower.spaces[k], base)
    return tower.measures[k].mass_of(members)
