"""Packaged example graphs usable offline from the CLI and service."""

from __future__ import annotations

import re
from typing import List

from .errors import SchemaViolation
from .graphs import DiscreteGraph, _integer_line


def two_vertex() -> DiscreteGraph:
    """u <-e- v: one edge from v into u; v receives nothing."""
    return DiscreteGraph(
        ("u", "v"), ("e",), {"e": "v"}, {"e": "u"}, name="two-vertex"
    )


def three_vertex_flow() -> DiscreteGraph:
    """u <-e- v -f-> w: the middle vertex feeds both ends."""
    return DiscreteGraph(
        ("u", "v", "w"),
        ("e", "f"),
        {"e": "v", "f": "v"},
        {"e": "u", "f": "w"},
        name="three-vertex-flow",
    )


def double_line(radius: int = 3) -> DiscreteGraph:
    """The doubly infinite line graph, truncated to the window [-N, N]."""
    return _integer_line(radius, f"double-line-{radius}")


def bouquet(n: int) -> DiscreteGraph:
    """A single vertex with n loops; the finite n-to-1 covering analog."""
    if n < 1:
        raise SchemaViolation("bouquet needs at least one loop")
    loops = tuple(f"l{i}" for i in range(1, n + 1))
    return DiscreteGraph(
        ("v",), loops, {l: "v" for l in loops}, {l: "v" for l in loops},
        name=f"bouquet-{n}",
    )


def cycle(n: int) -> DiscreteGraph:
    """A directed n-cycle; every vertex regular, transfer is a permutation."""
    if n < 1:
        raise SchemaViolation("cycle needs at least one vertex")
    vertices = tuple(f"v{i}" for i in range(n))
    edges = tuple(f"c{i}" for i in range(n))
    source = {f"c{i}": f"v{(i + 1) % n}" for i in range(n)}
    range_ = {f"c{i}": f"v{i}" for i in range(n)}
    return DiscreteGraph(vertices, edges, source, range_, name=f"cycle-{n}")


def loop() -> DiscreteGraph:
    """One vertex with one loop."""
    g = bouquet(1)
    return DiscreteGraph(g.vertices, g.edges, g._source, g._range, name="loop")


_FIXED = {
    "two-vertex": two_vertex,
    "three-vertex-flow": three_vertex_flow,
    "double-line": double_line,
    "loop": loop,
}


def builtin_names() -> List[str]:
    return sorted(_FIXED) + ["bouquet-<n>", "cycle-<n>", "double-line-<radius>"]


def builtin_graph(name: str) -> DiscreteGraph:
    if name in _FIXED:
        return _FIXED[name]()
    for prefix, factory in (
        ("bouquet-", bouquet),
        ("cycle-", cycle),
        ("double-line-", double_line),
    ):
        match = re.fullmatch(re.escape(prefix) + r"(\d+)", name)
        if match:
            return factory(int(match.group(1)))
    raise SchemaViolation(f"unknown builtin graph {name!r}")
