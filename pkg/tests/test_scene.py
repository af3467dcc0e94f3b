import pytest

from fixtures import box, cube, pillar_platform_3d, two_squares
from pathclass import geom
from pathclass.errors import InputError, SceneValidationError
from pathclass.scene import ear_clip, make_scene, obstacle_distance

CUBE_FACES = [[0, 2, 3, 1], [4, 5, 7, 6], [0, 1, 5, 4], [2, 6, 7, 3], [0, 4, 6, 2], [1, 3, 7, 5]]


def test_two_squares_scene():
    s = two_squares()
    assert s.n_obstacles == 2 and s.dim == 2
    assert s.obstacle_at((0.5, 0.5)) == 1
    assert s.obstacle_at((3.5, 0.5)) == 2
    assert s.obstacle_at((1, 0.5)) == 0  # boundary is not interior
    assert s.obstacle_at((2, 2)) == 0
    assert s.min_separation() == pytest.approx(2.0)
    assert len(s.corners()) == 4


def test_clockwise_polygon_is_reversed():
    s = make_scene(2, (0, 0), (5, 5), [dict(vertices=[(1, 1), (1, 2), (2, 2), (2, 1)])])
    assert geom.polygon_signed_area2(s.obstacles[0].shape.vertices) > 0


def test_concave_polygon_split_into_triangles():
    ell = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
    s = make_scene(2, (-1, -1), (3, 3), [dict(vertices=ell)])
    ob = s.obstacles[0]
    assert not ob.shape.convex
    assert len(ob.pieces) == 4
    area = sum(geom.polygon_signed_area2(p.vertices) for p in ob.pieces)
    assert area == geom.polygon_signed_area2(ob.shape.vertices)
    assert ob.classify((1.5, 1.5)) == geom.EXTERIOR
    assert ob.classify((0.5, 0.5)) == geom.INTERIOR


def test_ear_clip_counts():
    poly = [(0, 0), (4, 0), (4, 4), (3, 4), (2, 1), (1, 4), (0, 4)]
    tris = ear_clip(poly)
    assert len(tris) == len(poly) - 2


@pytest.mark.parametrize("obstacles", [
    [box(0, 0, 1, 1, id=1), box(3, 0, 4, 1, id=3)],
    [box(0, 0, 1, 1, id=2)],
])
def test_ids_must_be_dense(obstacles):
    with pytest.raises(SceneValidationError):
        make_scene(2, (-1, -1), (5, 5), obstacles)


def test_overlap_and_touch_rejected():
    with pytest.raises(SceneValidationError):
        make_scene(2, (-1, -1), (5, 5), [box(0, 0, 2, 2), box(1, 1, 3, 3)])
    with pytest.raises(SceneValidationError):
        make_scene(2, (-1, -1), (5, 5), [box(0, 0, 1, 1), box(1, 0, 2, 1)])
    # one polygon nested inside another's concavity without touching is fine
    u = [(0, 0), (3, 0), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)]
    make_scene(2, (-1, -1), (4, 4), [dict(vertices=u), box(1.2, 1.5, 1.8, 2.5)])


def test_bad_inputs():
    with pytest.raises(InputError):
        make_scene(4, (0,), (1,), [])
    with pytest.raises(InputError):
        make_scene(2, (1, 1), (0, 0), [])
    with pytest.raises(SceneValidationError):
        make_scene(2, (0, 0), (5, 5), [box(4, 4, 6, 6)])
    with pytest.raises(SceneValidationError):
        make_scene(2, (0, 0), (5, 5), [dict(vertices=[(1, 1), (3, 3), (3, 1), (1, 3)])])
    with pytest.raises(InputError):
        make_scene(2, (0, 0), (5, 5), [dict(id=1)])


def test_3d_faces_and_hulls():
    verts = cube(0, 0, 0, 1, 1, 1)
    s = make_scene(3, (-1, -1, -1), (2, 2, 2), [dict(vertices=verts, faces=CUBE_FACES)])
    assert s.obstacles[0].shape.convex
    assert s.obstacle_at((0.5, 0.5, 0.5)) == 1
    # inward-facing input is flipped
    inward = [f[::-1] for f in CUBE_FACES]
    s2 = make_scene(3, (-1, -1, -1), (2, 2, 2), [dict(vertices=verts, faces=inward)])
    assert s2.obstacle_at((0.5, 0.5, 0.5)) == 1
    with pytest.raises(SceneValidationError):
        make_scene(3, (-1, -1, -1), (2, 2, 2), [dict(vertices=verts, faces=CUBE_FACES[:-1])])


def test_3d_concave_needs_pieces():
    # an L-shaped prism given by faces is rejected; pieces are accepted
    s = pillar_platform_3d()
    ob = s.obstacles[0]
    assert ob.shape is None and len(ob.pieces) == 9
    # a point on a face shared by two pieces is interior to the union
    assert ob.classify((2.4, 5.0, 1.0)) == geom.INTERIOR
    assert ob.classify((2.9, 5.0, 4.2)) == geom.INTERIOR
    assert ob.classify((2.9, 5.0, 2.0)) == geom.BOUNDARY


def test_distances_and_without():
    s = two_squares()
    assert obstacle_distance(*s.obstacles) == pytest.approx(2.0)
    s1 = s.without(1)
    assert s1.n_obstacles == 1 and s1.obstacles[0].id == 1
    assert s1.obstacle_at((3.5, 0.5)) == 1
    a = make_scene(3, (0, 0, 0), (10, 10, 10), [dict(vertices=cube(1, 1, 1, 2, 2, 2)),
                                               dict(vertices=cube(4, 1, 1, 5, 2, 2))])
    assert a.min_separation() == pytest.approx(2.0)
    b = make_scene(3, (0, 0, 0), (10, 10, 10), [dict(vertices=cube(1, 1, 1, 2, 2, 2)),
                                               dict(vertices=cube(3, 3, 3, 4, 4, 4))])
    assert b.min_separation() == pytest.approx(3 ** 0.5)
