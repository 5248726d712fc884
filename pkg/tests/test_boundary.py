import pytest

from graphkms.boundary import (
    build_boundary,
    cylinder_members,
    pi_system_partition,
    rho,
    rho_inf,
    rho_map,
    shift,
)
from graphkms.builtin_graphs import (
    bouquet,
    cycle,
    double_line,
    loop,
    three_vertex_flow,
    two_vertex,
)
from graphkms.errors import DepthMismatch, MixedLengthBase, ShiftOfVertex
from graphkms.graphs import enumerate_paths, prefix


def labels(space):
    out = set()
    for p in space.points():
        out.add(p.vertex if p.is_vertex() else p.edges)
    return out


def test_build_boundary_examples():
    g = two_vertex()
    assert labels(build_boundary(g, 0)) == {"u", "v"}
    # depth 1: the single edge, plus the singular vertex v
    assert labels(build_boundary(g, 1)) == {"v", ("e",)}
    # depth 2: no length-2 paths; only v and the length-1 path ending at v
    assert labels(build_boundary(g, 2)) == {"v", ("e",)}

    g = loop()
    assert labels(build_boundary(g, 2)) == {("l1", "l1")}

    g = three_vertex_flow()
    assert labels(build_boundary(g, 1)) == {"v", ("e",), ("f",)}


def test_build_boundary_windowed_uses_boundary_vertex():
    g = double_line(2)
    # v2 has no in-window in-edges, so it sits in every depth as a stub
    space = build_boundary(g, 1)
    assert g.vertex_path("v2") in space
    assert g.make_path(("e2",)) in space


def test_boundary_sizes_growth():
    g = bouquet(2)
    for n in range(4):
        assert len(build_boundary(g, n).points()) == 2 ** n


def test_rho_examples():
    g = two_vertex()
    s1, s0 = build_boundary(g, 1), build_boundary(g, 0)
    e = g.make_path(("e",))
    assert rho(s1, e) == g.vertex_path("u")
    assert rho(s1, g.vertex_path("v")) == g.vertex_path("v")
    with pytest.raises(DepthMismatch):
        rho(s0, g.vertex_path("u"))
    with pytest.raises(DepthMismatch):
        rho(s1, g.vertex_path("u"))


def test_rho_map_is_total_and_surjective():
    for g in [two_vertex(), three_vertex_flow(), loop(), bouquet(2), double_line(2)]:
        for n in range(1, 4):
            sn, sp = build_boundary(g, n), build_boundary(g, n - 1)
            phi = rho_map(sn, sp)
            assert {phi(a) for a in sn.points()} == set(sp.points())


def test_rho_inf_examples():
    g = loop()
    a = g.make_path(("l1", "l1", "l1"))
    assert rho_inf(g, 2, a).edges == ("l1", "l1")
    assert rho_inf(g, 3, a) == a
    assert rho_inf(g, 0, a) == g.vertex_path("v")
    with pytest.raises(DepthMismatch):
        rho_inf(g, -1, a)


def test_rho_inf_factors_through_tower():
    # truncating straight to depth n equals stepping down the tower
    g = bouquet(2)
    n_top = 3
    top = build_boundary(g, n_top)
    for a in top.points():
        stepped = a
        for n in range(n_top, 0, -1):
            stepped = rho(build_boundary(g, n), stepped)
            assert stepped == rho_inf(g, n - 1, a)
    for a in top.points():
        assert rho_inf(g, 0, a) == g.vertex_path(a.vertex)


def test_shift_examples():
    g = cycle(3)
    s2 = build_boundary(g, 2)
    a = g.make_path(("c0", "c1"))
    assert shift(s2, a).edges == ("c1",)
    s1 = build_boundary(g, 1)
    assert shift(s1, g.make_path(("c0",))) == g.vertex_path("v1")
    s0 = build_boundary(g, 0)
    with pytest.raises(ShiftOfVertex):
        shift(s0, g.vertex_path("v0"))


def test_shift_compatible_with_tower():
    # rho after shift equals shift after rho on full-length paths
    g = bouquet(2)
    for n in (2, 3):
        sn, sp = build_boundary(g, n), build_boundary(g, n - 1)
        spp = build_boundary(g, n - 2)
        for a in sn.points():
            if len(a) < 2:
                continue
            assert rho(sp, shift(sn, a)) == shift(sp, rho(sn, a))


def test_cylinder_members_examples():
    g = loop()
    s2 = build_boundary(g, 2)
    base = [g.make_path(("l1",))]
    assert cylinder_members(s2, base) == frozenset({g.make_path(("l1", "l1"))})
    assert cylinder_members(s2, []) == frozenset()

    g = two_vertex()
    s1 = build_boundary(g, 1)
    # vertex base: every point whose range vertex matches
    assert cylinder_members(s1, [g.vertex_path("u")]) == frozenset(
        {g.make_path(("e",))}
    )
    assert cylinder_members(s1, [g.vertex_path("v")]) == frozenset(
        {g.vertex_path("v")}
    )


def test_cylinder_members_mixed_lengths():
    g = loop()
    s2 = build_boundary(g, 2)
    with pytest.raises(MixedLengthBase):
        cylinder_members(s2, [g.vertex_path("v"), g.make_path(("l1",))])


def test_pi_system_examples():
    g = bouquet(2)
    s3 = build_boundary(g, 3)
    u = set(enumerate_paths(g, 2))
    v = [g.make_path(("l1",))]
    meet = pi_system_partition(s3, u, v)
    assert meet == frozenset(p for p in u if p.edges[0] == "l1")
    # argument order does not matter
    assert pi_system_partition(s3, v, u) == meet
    assert pi_system_partition(s3, u, []) == frozenset()


def test_pi_system_matches_member_intersection():
    g = bouquet(2)
    s3 = build_boundary(g, 3)
    u = {p for p in enumerate_paths(g, 2) if p.edges[1] == "l2"}
    v = [g.make_path(("l1",))]
    meet = pi_system_partition(s3, u, v)
    assert cylinder_members(s3, meet) == cylinder_members(s3, u) & cylinder_members(
        s3, v
    )


def test_vertex_cylinders_partition_every_depth():
    for g in [two_vertex(), three_vertex_flow(), loop(), bouquet(2), double_line(2)]:
        for n in range(4):
            space = build_boundary(g, n)
            cells = [
                cylinder_members(space, [g.vertex_path(v)]) for v in g.vertices
            ]
            seen = set()
            for cell in cells:
                assert not (cell & seen)
                seen |= cell
            assert seen == set(space.points())


def test_prefix_cylinder_refinement():
    # length-(k+1) cylinders refine length-k cylinders
    g = bouquet(2)
    space = build_boundary(g, 3)
    for p in enumerate_paths(g, 2):
        inner = cylinder_members(space, [p])
        outer = cylinder_members(space, [prefix(p, 1)])
        assert inner <= outer
