import random
from fractions import Fraction

import pytest

from fixtures import two_squares
from oracles import brute_force_delaunay
from pathclass import geom
from pathclass.delaunay import delaunay, triangulate, triangulate_points, triangulate_workspace
from pathclass.errors import DegeneracyError, InputError, QueryError
from pathclass.scene import make_scene


def _simplex_set(pts, simplices):
    return {frozenset(pts[i] for i in s) for s in simplices}


def test_unit_square_two_triangles():
    pts, _, simplices = delaunay([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert len(simplices) == 2
    shared = set(simplices[0]) & set(simplices[1])
    assert len(shared) == 2


def test_square_with_center_fans():
    pts, _, simplices = delaunay([(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)])
    c = pts.index((0.5, 0.5))
    assert len(simplices) == 4
    assert all(c in s for s in simplices)
    opts, osimp = brute_force_delaunay(pts)
    assert _simplex_set(pts, simplices) == _simplex_set(opts, osimp)


def test_two_squares_empty_circumcircles():
    t = triangulate(two_squares())
    scene = t.scene
    for ob in scene.obstacles:
        for v in ob.vertices:
            assert v in t.points
    for s in t.simplices:
        verts = [t.points[i] for i in s]
        for j, p in enumerate(t.points):
            if j not in s:
                assert geom.in_sphere(verts, p) != geom.INSIDE
    opts, osimp = brute_force_delaunay(t.points)
    assert _simplex_set(t.points, t.simplices) == _simplex_set(opts, osimp)
    assert sum(t.inside_obstacle[s] != 0 for s in range(len(t))) == 4


def test_matches_oracle_random_including_degenerate():
    rng = random.Random(5)
    for trial in range(30):
        d = 2 if trial < 20 else 3
        n = rng.randint(d + 2, 18 if d == 2 else 10)
        if trial % 3 == 0:
            pts = [tuple(rng.randint(0, 4) for _ in range(d)) for _ in range(n)]
        else:
            pts = [tuple(rng.uniform(-10, 10) for _ in range(d)) for _ in range(n)]
        try:
            upts, _, simp = delaunay(pts)
        except DegeneracyError:
            continue
        opts, osimp = brute_force_delaunay(pts)
        assert _simplex_set(upts, simp) == _simplex_set(opts, osimp)


def test_insertion_order_invariance():
    rng = random.Random(9)
    pts = [(rng.randint(0, 6), rng.randint(0, 6)) for _ in range(25)]
    base = delaunay(pts)
    ref = _simplex_set(base[0], base[2])
    for _ in range(5):
        rng.shuffle(pts)
        p2, _, s2 = delaunay(pts)
        assert _simplex_set(p2, s2) == ref


def test_euler_relation_and_neighbors():
    rng = random.Random(2)
    pts = [(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(40)]
    t = triangulate_points(pts)
    v = len(t.points)
    e = len(t.edges())
    f = len(t.simplices) + 1
    assert v - e + f == 2
    for s, nb in enumerate(t.neighbors):
        for k, o in enumerate(nb):
            if o >= 0:
                assert s in t.neighbors[o]
                assert set(t.facet(s, k)) <= set(t.simplices[o])


def test_covers_convex_hull():
    rng = random.Random(4)
    pts = [(Fraction(rng.randint(0, 50)), Fraction(rng.randint(0, 50))) for _ in range(30)]
    t = triangulate_points(pts)
    hull = geom.convex_hull(list(t.points))
    area = sum(abs(geom.polygon_signed_area2(t.simplex_points(s))) for s in range(len(t)))
    assert area == geom.polygon_signed_area2(hull.vertices)


def test_3d_volume_covers_hull():
    rng = random.Random(6)
    pts = [tuple(Fraction(rng.randint(0, 9)) for _ in range(3)) for _ in range(20)]
    t = triangulate_points(pts)

    def vol(p):
        return abs(geom._det([[p[i][k] - p[0][k] for k in range(3)] for i in range(1, 4)]))

    total = sum(vol([geom._fr(x) for x in t.simplex_points(s)]) for s in range(len(t)))
    hull = geom.convex_hull(list(t.points))
    c = geom._fr(hull.vertices[0])
    hv = Fraction(0)
    for tri in hull.triangles():
        hv += vol([c] + [geom._fr(x) for x in tri])
    assert total == hv


def test_degenerate_input():
    with pytest.raises(DegeneracyError):
        delaunay([(0, 0), (1, 1), (2, 2), (3, 3)])
    with pytest.raises(InputError):
        delaunay([(0, 0), (1, 1, 1)])


def test_locate_and_star():
    t = triangulate(two_squares())
    s = t.locate((2, 0.5))
    assert s >= 0 and t.contains(s, (2, 0.5))
    assert t.locate((7, 7)) == -1
    # a vertex lies in every simplex of its star
    v = t.points.index((1.0, 1.0))
    star = t.star((1, 1))
    assert star == sorted(i for i, simp in enumerate(t.simplices) if v in simp)
    # exact rational queries
    q = (Fraction(1, 3), Fraction(7, 3))
    s = t.locate(q)
    assert t.contains(s, q)


def test_simplex_adjacent_obstacles():
    t = triangulate(two_squares())
    sets = set()
    for s in range(len(t)):
        if t.inside_obstacle[s]:
            with pytest.raises(QueryError):
                t.simplex_adjacent_obstacles(s)
        else:
            sets.add(t.simplex_adjacent_obstacles(s))
    assert frozenset({1, 2}) in sets
    # a simplex touching only workspace corners
    t2 = triangulate_points([(0, 0), (1, 0), (0, 1), (10, 10), (11, 10), (10, 11)], [0, 0, 0, 1, 1, 1])
    s = t2.locate((0.2, 0.2))
    assert t2.simplex_adjacent_obstacles(s) == frozenset()


def test_concave_notch_simplex():
    notch = make_scene(2, (-1, -1), (4, 4), [dict(vertices=[(0, 0), (3, 0), (3, 3), (2, 3), (1.5, 1), (1, 3), (0, 3)])])
    t = triangulate(notch)
    notch_simplices = [s for s in range(len(t)) if not t.inside_obstacle[s] and
                       all(t.tags[i] == 1 for i in t.simplices[s])]
    assert notch_simplices
    assert all(t.simplex_adjacent_obstacles(s) == {1} for s in notch_simplices)


def test_empty_scene_needs_obstacles():
    scene = make_scene(2, (0, 0), (1, 1), [])
    with pytest.raises(InputError):
        triangulate(scene)
    assert len(triangulate_workspace(scene).simplices) == 2


def test_conforms_on_fixtures():
    assert triangulate(two_squares()).missing_obstacle_edges() == []
