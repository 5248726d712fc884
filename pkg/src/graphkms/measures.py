"""Finitely supported measures on countable discrete spaces.

Everything here is exact: weights are nonnegative ``fractions.Fraction``
values and all identities (restriction, gluing, pullback, pushforward,
transfer) are checked by equality, never by tolerance.

On a discrete space every subset is clopen and Borel, and every finitely
supported measure is automatically regular (inner- and outer-regular and
finite on compacts), so the usual distinction between Borel and regular
Borel measures carries no computational content here.  Measures of
infinite total mass are representable only through windowed spaces with
finite support per window; uncountable covers are outside scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .errors import CoverIncomplete, IncompatibleSections, MemberNotInSpace

Rational = Fraction


def _as_fraction(x) -> Fraction:
    f = Fraction(x)
    return f


@dataclass(frozen=True)
class DiscreteSpace:
    """A countable discrete space given by an explicit finite point set."""

    name: str
    points: frozenset

    def __contains__(self, point) -> bool:
        return point in self.points

    def subspace(self, members: Iterable) -> "DiscreteSpace":
        members = frozenset(members)
        missing = members - self.points
        if missing:
            raise MemberNotInSpace(f"points {sorted(map(repr, missing))} not in {self.name}")
        return DiscreteSpace(self.name, members)


@dataclass(frozen=True)
class SubsetOfSpace:
    space: DiscreteSpace
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        missing = self.members - self.space.points
        if missing:
            raise MemberNotInSpace(
                f"points {sorted(map(repr, missing))} not in {self.space.name}"
            )

    def __contains__(self, point) -> bool:
        return point in self.members


class AtomicMeasure:
    """A finitely supported measure; weight 0 off the support."""

    __slots__ = ("space", "weights")

    def __init__(self, space: DiscreteSpace, weights: Mapping):
        clean: Dict = {}
        for point, w in weights.items():
            w = _as_fraction(w)
            if w < 0:
                raise ValueError(f"negative weight {w} at {point!r}")
            if point not in space.points:
                raise MemberNotInSpace(f"{point!r} not in {space.name}")
            if w != 0:
                clean[point] = w
        self.space = space
        self.weights = clean

    def __call__(self, point) -> Fraction:
        return self.weights.get(point, Fraction(0))

    @property
    def support(self) -> frozenset:
        return frozenset(self.weights)

    def total_mass(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def mass_of(self, members: Iterable) -> Fraction:
        return sum((self.weights.get(p, Fraction(0)) for p in members), Fraction(0))

    def scale(self, c) -> "AtomicMeasure":
        c = _as_fraction(c)
        return AtomicMeasure(self.space, {p: c * w for p, w in self.weights.items()})

    def add(self, other: "AtomicMeasure") -> "AtomicMeasure":
        if other.space.points != self.space.points:
            raise MemberNotInSpace("measures live on different spaces")
        merged = dict(self.weights)
        for p, w in other.weights.items():
            merged[p] = merged.get(p, Fraction(0)) + w
        return AtomicMeasure(self.space, merged)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return self.space.points == other.space.points and self.weights == other.weights

    def __hash__(self):
        return hash((self.space.points, frozenset(self.weights.items())))

    def __repr__(self):
        body = ", ".join(f"{p!r}: {w}" for p, w in sorted(self.weights.items(), key=repr))
        return f"AtomicMeasure({self.space.name}, {{{body}}})"


def zero_measure(space: DiscreteSpace) -> AtomicMeasure:
    return AtomicMeasure(space, {})


def dirac(space: DiscreteSpace, point) -> AtomicMeasure:
    return AtomicMeasure(space, {point: Fraction(1)})


@dataclass(frozen=True)
class Cover:
    """An ordered finite list of subsets covering a space (or a subset of it)."""

    space: DiscreteSpace
    pieces: Tuple[SubsetOfSpace, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        for piece in self.pieces:
            if piece.space.points != self.space.points:
                raise MemberNotInSpace("cover piece lives on a different space")

    def union(self) -> frozenset:
        out: frozenset = frozenset()
        for piece in self.pieces:
            out |= piece.members
        return out

    def check_covers(self, members: frozenset | None = None) -> None:
        target = self.space.points if members is None else members
        missing = target - self.union()
        if missing:
            raise CoverIncomplete(f"cover misses {sorted(map(repr, missing))}")

    def disjointify(self) -> "Cover":
        """Normalize to the partition S(i) = V_i minus the earlier pieces."""
        seen: frozenset = frozenset()
        parts = []
        for piece in self.pieces:
            parts.append(SubsetOfSpace(self.space, piece.members - seen))
            seen |= piece.members
        return Cover(self.space, tuple(parts))


def restrict(mu: AtomicMeasure, v: SubsetOfSpace) -> AtomicMeasure:
    """Restriction of ``mu`` to the subset ``v``, viewed as a subspace."""
    if v.space.points != mu.space.points:
        raise MemberNotInSpace("subset lives on a different space")
    sub = DiscreteSpace(mu.space.name, v.members)
    return AtomicMeasure(sub, {p: w for p, w in mu.weights.items() if p in v.members})


def check_locality(muA: AtomicMeasure, muB: AtomicMeasure, cover: Cover) -> bool:
    """True iff the two measures agree on every cover piece.

    For a complete cover this is equivalent to pointwise equality of the
    measures (sheaf locality).
    """
    cover.check_covers()
    return all(
        restrict(muA, piece) == restrict(muB, piece) for piece in cover.pieces
    )


def glue(cover: Cover, locals_: Sequence[AtomicMeasure]) -> AtomicMeasure:
    """Glue compatible local measures into the unique global measure.

    ``locals_[i]`` must live on ``cover.pieces[i]`` and any two local
    measures must agree on the pairwise overlap of their pieces.  The
    global weight at a point is read off the first piece containing it;
    compatibility makes the result independent of the piece order.
    """
    if len(locals_) != len(cover.pieces):
        raise CoverIncomplete("one local measure per cover piece required")
    for piece, mu in zip(cover.pieces, locals_):
        if mu.space.points != piece.members:
            raise MemberNotInSpace("local measure does not live on its piece")
    for i, (piece_i, mu_i) in enumerate(zip(cover.pieces, locals_)):
        for j in range(i + 1, len(locals_)):
            piece_j, mu_j = cover.pieces[j], locals_[j]
            for point in piece_i.members & piece_j.members:
                if mu_i(point) != mu_j(point):
                    raise IncompatibleSections(point, i, j)
    weights: Dict = {}
    for piece, mu in zip(cover.pieces, locals_):
        for point in piece.members:
            if point not in weights:
                weights[point] = mu(point)
    return AtomicMeasure(cover.space, weights)


@dataclass(frozen=True)
class SpaceMap:
    """A total map between discrete spaces."""

    domain: DiscreteSpace
    codomain: DiscreteSpace
    mapping: Mapping

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))
        missing = self.domain.points - set(self.mapping)
        if missing:
            raise MemberNotInSpace(f"map not total; missing {sorted(map(repr, missing))}")
        bad = {self.mapping[p] for p in self.domain.points} - self.codomain.points
        if bad:
            raise MemberNotInSpace(f"map hits points outside codomain: {sorted(map(repr, bad))}")

    def __call__(self, point):
        return self.mapping[point]

    def fiber(self, point) -> frozenset:
        return frozenset(p for p in self.domain.points if self.mapping[p] == point)


@dataclass(frozen=True)
class LocalHomeoPresentation:
    """A map together with a cover of its domain witnessing local injectivity.

    The cover is normalized to a partition on construction; the map must be
    injective on each resulting piece.
    """

    domain: DiscreteSpace
    codomain: DiscreteSpace
    mapping: Mapping
    injective_pieces: Cover = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))
        if self.injective_pieces is None:
            # default witness: one singleton piece per point
            pieces = tuple(
                SubsetOfSpace(self.domain, frozenset({p}))
                for p in sorted(self.domain.points, key=repr)
            )
            object.__setattr__(self, "injective_pieces", Cover(self.domain, pieces))
        missing = self.domain.points - set(self.mapping)
        if missing:
            raise MemberNotInSpace(f"map not total; missing {sorted(map(repr, missing))}")
        self.injective_pieces.check_covers()
        partition = self.injective_pieces.disjointify()
        for piece in partition.pieces:
            images = [self.mapping[p] for p in piece.members]
            if len(set(images)) != len(images):
                raise ValueError("map is not injective on a cover piece")
        object.__setattr__(self, "injective_pieces", partition)

    def __call__(self, point):
        return self.mapping[point]

    def as_map(self) -> SpaceMap:
        return SpaceMap(self.domain, self.codomain, self.mapping)


def pullback(phi: LocalHomeoPresentation, mu: AtomicMeasure) -> AtomicMeasure:
    """Pullback of ``mu`` along ``phi``: locally, a set measures the same
    as its image.

    Built by gluing the local pullbacks over the injective pieces; on a
    discrete space this comes down to weight phi^*mu({x}) = mu({phi(x)}).
    """
    if mu.space.points != phi.codomain.points:
        raise MemberNotInSpace("measure does not live on the codomain")
    locals_ = []
    for piece in phi.injective_pieces.pieces:
        sub = DiscreteSpace(phi.domain.name, piece.members)
        locals_.append(AtomicMeasure(sub, {p: mu(phi(p)) for p in piece.members}))
    return glue(phi.injective_pieces, locals_)


def pushforward(phi: SpaceMap, mu: AtomicMeasure) -> AtomicMeasure:
    """Pushforward: the weight at a point is the mass of its fiber."""
    if mu.space.points != phi.domain.points:
        raise MemberNotInSpace("measure does not live on the domain")
    weights: Dict = {}
    for p, w in mu.weights.items():
        image = phi(p)
        weights[image] = weights.get(image, Fraction(0)) + w
    return AtomicMeasure(phi.codomain, weights)


def transfer_apply(phi: LocalHomeoPresentation, f: Mapping) -> Dict:
    """Transfer operator on finitely supported functions: fiber sums.

    (Lf)(y) = sum of f over the phi-fiber of y.
    """
    out: Dict = {}
    for x, value in f.items():
        if x not in phi.domain.points:
            raise MemberNotInSpace(f"{x!r} not in {phi.domain.name}")
        value = _as_fraction(value)
        if value == 0:
            continue
        y = phi(x)
        out[y] = out.get(y, Fraction(0)) + value
    return {y: v for y, v in out.items() if v != 0}


def integrate(mu: AtomicMeasure, f: Mapping) -> Fraction:
    """Integral of a finitely supported function against ``mu``."""
    total = Fraction(0)
    for x, value in f.items():
        if x not in mu.space.points:
            raise MemberNotInSpace(f"{x!r} not in {mu.space.name}")
        total += _as_fraction(value) * mu(x)
    return total
