"""Truncated boundary path spaces and the tower connecting them.

The depth-n boundary space holds every path of length exactly n together
with the shorter paths that end at a singular vertex.  The full boundary
path space is never materialized: a boundary measure is represented by
its tower of finite-depth measures, whose cylinder values at all depths
determine it.

For windowed graphs the singular set used here includes window-boundary
vertices, so the truncation is internally consistent at every depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Set

from .errors import DepthMismatch, MixedLengthBase, ShiftOfVertex
from .graphs import DiscreteGraph, FinitePath, effective_singular, enumerate_paths, prefix, segment
from .measures import DiscreteSpace, SpaceMap


@dataclass(frozen=True)
class BoundarySpace:
    """Paths of length n plus shorter singular paths, as a discrete space."""

    graph: DiscreteGraph
    depth: int
    space: DiscreteSpace

    def __contains__(self, point: FinitePath) -> bool:
        return point in self.space.points

    def points(self) -> FrozenSet[FinitePath]:
        return self.space.points


def build_boundary(g: DiscreteGraph, n: int) -> BoundarySpace:
    """The depth-n boundary space; depth 0 is the vertex space."""
    singular = effective_singular(g)
    pts: Set[FinitePath] = set()
    for k in range(n):
        pts.update(
            p for p in enumerate_paths(g, k) if g.path_s(p) in singular
        )
    pts.update(enumerate_paths(g, n))
    return BoundarySpace(g, n, DiscreteSpace(f"{g.name}:dE{n}", frozenset(pts)))


def rho(space_n: BoundarySpace, a: FinitePath) -> FinitePath:
    """The tower map down one depth: truncate full-length paths, fix the rest."""
    n = space_n.depth
    if n < 1:
        raise DepthMismatch("rho needs depth >= 1")
    if a not in space_n:
        raise DepthMismatch(f"{a!r} is not a point of depth {n}")
    if len(a) == n:
        return prefix(a, n - 1)
    return a


def rho_map(space_n: BoundarySpace, space_prev: BoundarySpace) -> SpaceMap:
    if space_prev.depth != space_n.depth - 1:
        raise DepthMismatch("rho_map expects consecutive depths")
    return SpaceMap(
        space_n.space,
        space_prev.space,
        {a: rho(space_n, a) for a in space_n.points()},
    )


def rho_inf(g: DiscreteGraph, n: int, a: FinitePath) -> FinitePath:
    """Image of a depth-N representative at depth n <= N: truncate if longer."""
    if n < 0:
        raise DepthMismatch("depth must be nonnegative")
    if len(a) > n:
        return prefix(a, n)
    return a


def shift(space_n: BoundarySpace, a: FinitePath) -> FinitePath:
    """Backwards shift: drop the first edge; the source for length-1 paths.

    Lands in the boundary space one depth down.  Undefined on vertices.
    """
    g = space_n.graph
    if a not in space_n:
        raise DepthMismatch(f"{a!r} is not a point of depth {space_n.depth}")
    if a.is_vertex():
        raise ShiftOfVertex("the shift is undefined on length-0 paths")
    if len(a) == 1:
        return g.vertex_path(g.s(a.edges[0]))
    return segment(g, a, 2, len(a))


def cylinder_members(
    space: BoundarySpace, base: Iterable[FinitePath]
) -> FrozenSet[FinitePath]:
    """Points of the space whose prefix of the base length lies in the base."""
    base = frozenset(base)
    if not base:
        return frozenset()
    lengths = {len(p) for p in base}
    if len(lengths) != 1:
        raise MixedLengthBase(f"base mixes path lengths {sorted(lengths)}")
    (k,) = lengths
    return frozenset(
        a for a in space.points() if len(a) >= k and prefix(a, k) in base
    )


def pi_system_partition(
    space: BoundarySpace,
    base_a: Iterable[FinitePath],
    base_b: Iterable[FinitePath],
) -> FrozenSet[FinitePath]:
    """Base of the intersection cylinder Z(A) and Z(B), |A|-paths >= |B|-paths."""
    base_a = frozenset(base_a)
    base_b = frozenset(base_b)
    if not base_a or not base_b:
        return frozenset()
    len_a = {len(p) for p in base_a}
    len_b = {len(p) for p in base_b}
    if len(len_a) != 1 or len(len_b) != 1:
        raise MixedLengthBase("bases must have uniform path length")
    (n,) = len_a
    (m,) = len_b
    if n < m:
        return pi_system_partition(space, base_b, base_a)
    return frozenset(a for a in base_a if prefix(a, m) in base_b)
