"""Discrete directed graphs, finite paths, cycles and vertex classification.

A graph is the quadruple (vertices, edges, range, source).  Paths compose
right-to-left in the range/source convention used throughout: consecutive
edges a_k, a_{k+1} must satisfy s(a_k) = r(a_{k+1}), the range of a path
is the range of its first edge and the source is the source of its last.

The source map of a discrete graph is automatically a local homeomorphism
(every subset is open), so no separate witness is needed here.

Windowed graphs model integer-indexed infinite graphs through a finite
window [-N, N].  Truncation alone cannot certify that a vertex has
finitely many incoming edges, so windowed graphs carry an in-degree rule
and vertices whose incoming edges may cross the window boundary are
flagged as boundary vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .errors import (
    IndexOutOfRange,
    NonPrimitiveCycle,
    NotComposable,
    SchemaViolation,
    WindowRuleMissing,
)
from .measures import DiscreteSpace

REGULAR = "Regular"
SINGULAR = "Singular"


@dataclass(frozen=True)
class Window:
    kind: str
    radius: int
    rules: Tuple[Tuple[str, int], ...] = ()

    def rule(self, name: str) -> Optional[int]:
        for key, value in self.rules:
            if key == name:
                return value
        return None


@dataclass(frozen=True)
class FinitePath:
    """A composable edge sequence; a bare vertex when empty.

    ``vertex`` always holds the range r(a) of the path, which doubles as
    the vertex itself for length-0 paths.
    """

    vertex: str
    edges: Tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.edges)

    def is_vertex(self) -> bool:
        return not self.edges

    def __repr__(self):
        if self.is_vertex():
            return f"Path({self.vertex})"
        return f"Path({'.'.join(self.edges)})"


class DiscreteGraph:
    """A finite (possibly windowed) discrete graph."""

    def __init__(
        self,
        vertices: Tuple[str, ...],
        edges: Tuple[str, ...],
        source: Dict[str, str],
        range_: Dict[str, str],
        window: Optional[Window] = None,
        name: str = "graph",
    ):
        if len(set(vertices)) != len(vertices):
            raise SchemaViolation("duplicate vertex ids")
        if len(set(edges)) != len(edges):
            raise SchemaViolation("duplicate edge ids")
        vset = set(vertices)
        for e in edges:
            if e not in source or e not in range_:
                raise SchemaViolation(f"edge {e} missing an endpoint map")
            if source[e] not in vset or range_[e] not in vset:
                raise SchemaViolation(f"edge {e} references an undeclared vertex")
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self._source = dict(source)
        self._range = dict(range_)
        self.window = window
        self.name = name
        self._in_edges: Dict[str, List[str]] = {v: [] for v in vertices}
        self._out_edges: Dict[str, List[str]] = {v: [] for v in vertices}
        for e in edges:
            self._in_edges[range_[e]].append(e)
            self._out_edges[source[e]].append(e)

    # -- basic maps -----------------------------------------------------

    def s(self, edge: str) -> str:
        return self._source[edge]

    def r(self, edge: str) -> str:
        return self._range[edge]

    def in_edges(self, vertex: str) -> Tuple[str, ...]:
        return tuple(self._in_edges[vertex])

    def out_edges(self, vertex: str) -> Tuple[str, ...]:
        return tuple(self._out_edges[vertex])

    def vertex_space(self) -> DiscreteSpace:
        return DiscreteSpace(f"{self.name}:E0", frozenset(self.vertices))

    def edge_space(self) -> DiscreteSpace:
        return DiscreteSpace(f"{self.name}:E1", frozenset(self.edges))

    # -- paths ----------------------------------------------------------

    def vertex_path(self, vertex: str) -> FinitePath:
        if vertex not in self._in_edges:
            raise SchemaViolation(f"unknown vertex {vertex}")
        return FinitePath(vertex)

    def make_path(self, edges: Tuple[str, ...]) -> FinitePath:
        if not edges:
            raise NotComposable("use vertex_path for length-0 paths")
        for e in edges:
            if e not in self._source:
                raise SchemaViolation(f"unknown edge {e}")
        for a, b in zip(edges, edges[1:]):
            if self.s(a) != self.r(b):
                raise NotComposable(f"{a} and {b} do not compose: s({a}) != r({b})")
        return FinitePath(self.r(edges[0]), tuple(edges))

    def path_r(self, path: FinitePath) -> str:
        return path.vertex

    def path_s(self, path: FinitePath) -> str:
        if path.is_vertex():
            return path.vertex
        return self.s(path.edges[-1])

    # -- serialization --------------------------------------------------

    def to_json(self) -> dict:
        doc: dict = {
            "vertices": list(self.vertices),
            "edges": [
                {"id": e, "src": self.s(e), "rng": self.r(e)} for e in self.edges
            ],
        }
        if self.window is not None:
            doc["window"] = {
                "kind": self.window.kind,
                "radius": self.window.radius,
                "rules": dict(self.window.rules),
            }
        return doc


def prefix(a: FinitePath, n: int) -> FinitePath:
    """First n edges of the path; n = 0 gives the range vertex."""
    if not 0 <= n <= len(a):
        raise IndexOutOfRange(f"prefix length {n} not in [0, {len(a)}]")
    return FinitePath(a.vertex, a.edges[:n])


def segment(g: DiscreteGraph, a: FinitePath, k: int, n: int) -> FinitePath:
    """Edges k through n of the path, 1-indexed inclusive."""
    if not 1 <= k <= n <= len(a):
        raise IndexOutOfRange(f"segment ({k},{n}) invalid for length {len(a)}")
    return g.make_path(a.edges[k - 1 : n])


def classify_vertices(g: DiscreteGraph) -> Dict[str, str]:
    """Regular vertices have a nonempty finite set of incoming edges.

    For windowed graphs the classification is read from the window's
    in-degree rule, never from the truncation.
    """
    if g.window is not None:
        rule = g.window.rule("in_degree")
        if rule is None:
            raise WindowRuleMissing("windowed graph has no in-degree rule")
        label = REGULAR if rule > 0 else SINGULAR
        return {v: label for v in g.vertices}
    return {
        v: (REGULAR if g.in_edges(v) else SINGULAR) for v in g.vertices
    }


def boundary_vertices(g: DiscreteGraph) -> FrozenSet[str]:
    """Windowed vertices whose incoming edges may cross the window edge."""
    if g.window is None:
        return frozenset()
    rule = g.window.rule("in_degree")
    if rule is None:
        raise WindowRuleMissing("windowed graph has no in-degree rule")
    return frozenset(v for v in g.vertices if len(g.in_edges(v)) < rule)


def effective_singular(g: DiscreteGraph) -> FrozenSet[str]:
    """Vertices treated as singular by the cone and tower machinery.

    For windowed graphs this includes boundary vertices: their missing
    in-edges make the truncation behave like a genuine finite graph in
    which they emit no incoming edges, which keeps every tower
    certificate exact.
    """
    labels = classify_vertices(g)
    sng = {v for v, lab in labels.items() if lab == SINGULAR}
    return frozenset(sng) | boundary_vertices(g)


def enumerate_paths(g: DiscreteGraph, n: int) -> Set[FinitePath]:
    """All composable edge sequences of length n (vertices when n = 0)."""
    if n < 0:
        raise IndexOutOfRange("path length must be nonnegative")
    if n == 0:
        return {g.vertex_path(v) for v in g.vertices}
    frontier: List[Tuple[str, ...]] = [(e,) for e in g.edges]
    for _ in range(n - 1):
        frontier = [
            seq + (e,)
            for seq in frontier
            for e in g.in_edges(g.s(seq[-1]))
        ]
    return {g.make_path(seq) for seq in frontier}


def rotation_period(edges: Tuple[str, ...]) -> int:
    """Minimal period of the edge sequence under rotation."""
    n = len(edges)
    for p in range(1, n + 1):
        if n % p == 0 and all(edges[i] == edges[i % p] for i in range(n)):
            return p
    return n


@dataclass(frozen=True)
class Cycle:
    """A path of positive length with matching range and source."""

    path: FinitePath
    primitive_length: int

    def __len__(self) -> int:
        return len(self.path)

    def is_primitive(self) -> bool:
        return self.primitive_length == len(self.path)


def make_cycle(g: DiscreteGraph, edges: Tuple[str, ...]) -> Cycle:
    path = g.make_path(edges)
    if g.path_r(path) != g.path_s(path):
        raise NotComposable("range and source of a cycle must agree")
    return Cycle(path, rotation_period(path.edges))


def primitive_cycle(g: DiscreteGraph, c: Cycle) -> Cycle:
    if c.is_primitive():
        return c
    return make_cycle(g, c.path.edges[: c.primitive_length])


def find_cycles(g: DiscreteGraph, max_len: int) -> Set[Cycle]:
    """All based cycles of length up to max_len, by exhaustive search."""
    found: Set[Cycle] = set()
    for n in range(1, max_len + 1):
        for path in enumerate_paths(g, n):
            if g.path_r(path) == g.path_s(path):
                found.add(Cycle(path, rotation_period(path.edges)))
    return found


def is_principal(g: DiscreteGraph) -> bool:
    """The graph groupoid is principal iff the graph has no cycles.

    Decided by depth-first search on the vertex digraph, independently of
    the exhaustive cycle enumeration above.
    """
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in g.vertices}
    for start in g.vertices:
        if color[start] != WHITE:
            continue
        stack = [(start, iter(g.out_edges(start)))]
        color[start] = GRAY
        while stack:
            v, edges = stack[-1]
            advanced = False
            for e in edges:
                w = g.r(e)
                if color[w] == GRAY:
                    return False
                if color[w] == WHITE:
                    color[w] = GRAY
                    stack.append((w, iter(g.out_edges(w))))
                    advanced = True
                    break
            if not advanced:
                color[v] = BLACK
                stack.pop()
    return True


@dataclass(frozen=True)
class EventuallyCyclicPath:
    """The infinite path b c^infinity given by an exit b and a cycle c."""

    exit_path: FinitePath
    cycle: Cycle

    def validate(self, g: DiscreteGraph) -> None:
        if g.path_s(self.exit_path) != g.path_r(self.cycle.path):
            raise NotComposable("exit does not compose with the cycle")
        c = self.cycle.path.edges
        b = self.exit_path.edges
        if len(b) >= len(c) and b[-len(c) :] == c:
            raise NotComposable("exit path ends with the cycle; not an exit")


def periodicity_group(
    g: DiscreteGraph, a: EventuallyCyclicPath, strict: bool = False
) -> int:
    """Positive generator of Per(b c^infinity): the primitive cycle length.

    Non-primitive cycle presentations are reduced automatically unless
    ``strict`` is set.
    """
    a.validate(g)
    if strict and not a.cycle.is_primitive():
        raise NonPrimitiveCycle(
            f"cycle of length {len(a.cycle)} has period {a.cycle.primitive_length}"
        )
    return a.cycle.primitive_length


def eventually_cyclic_truncation(
    g: DiscreteGraph, a: EventuallyCyclicPath, length: int
) -> FinitePath:
    """Explicit prefix of b c^infinity of the given length."""
    a.validate(g)
    b, c = a.exit_path.edges, a.cycle.path.edges
    reps = max(0, -(-(length - len(b)) // len(c)))
    edges = (b + c * reps)[:length]
    if not edges:
        return g.vertex_path(a.exit_path.vertex)
    return g.make_path(edges)


# -- JSON graph files ---------------------------------------------------


def _integer_line(radius: int, name: str) -> DiscreteGraph:
    """The doubly infinite line graph truncated to the window [-N, N].

    Edge e_n points from v_n to v_{n-1}; only edges with both endpoints
    inside the window are enumerated.
    """
    vertices = tuple(f"v{n}" for n in range(-radius, radius + 1))
    edges = tuple(f"e{n}" for n in range(-radius + 1, radius + 1))
    source = {f"e{n}": f"v{n}" for n in range(-radius + 1, radius + 1)}
    range_ = {f"e{n}": f"v{n - 1}" for n in range(-radius + 1, radius + 1)}
    window = Window("integer-line", radius, (("in_degree", 1), ("out_degree", 1)))
    return DiscreteGraph(vertices, edges, source, range_, window, name)


def graph_from_json(doc: dict, name: str = "graph") -> DiscreteGraph:
    if not isinstance(doc, dict):
        raise SchemaViolation("graph document must be a JSON object")
    window = None
    if doc.get("window") is not None:
        wdoc = doc["window"]
        if not isinstance(wdoc, dict) or wdoc.get("kind") != "integer-line":
            raise SchemaViolation("window kind must be 'integer-line'")
        radius = wdoc.get("radius")
        if not isinstance(radius, int) or radius < 1:
            raise SchemaViolation("window radius must be an integer >= 1")
        rules = wdoc.get("rules", {})
        if not isinstance(rules, dict) or not all(
            isinstance(v, int) for v in rules.values()
        ):
            raise SchemaViolation("window rules must map names to integers")
        if not doc.get("vertices") and not doc.get("edges"):
            return _integer_line(radius, name)
        window = Window("integer-line", radius, tuple(sorted(rules.items())))
    vertices = doc.get("vertices")
    edges = doc.get("edges")
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise SchemaViolation("'vertices' must be a list of strings")
    if not isinstance(edges, list):
        raise SchemaViolation("'edges' must be a list")
    source: Dict[str, str] = {}
    range_: Dict[str, str] = {}
    ids: List[str] = []
    for entry in edges:
        if not isinstance(entry, dict) or not {"id", "src", "rng"} <= set(entry):
            raise SchemaViolation("each edge needs 'id', 'src' and 'rng'")
        ids.append(entry["id"])
        source[entry["id"]] = entry["src"]
        range_[entry["id"]] = entry["rng"]
    try:
        return DiscreteGraph(tuple(vertices), tuple(ids), source, range_, window, name)
    except SchemaViolation:
        raise
    except Exception as exc:  # defensive: malformed ids of wrong type
        raise SchemaViolation(str(exc))
