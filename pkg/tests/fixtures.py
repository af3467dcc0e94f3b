"""Scenes shared by the test modules."""

from __future__ import annotations

from pathclass.delaunay import triangulate
from pathclass.jointcover import build_joint_cover, workspace_complex
from pathclass.scene import make_scene


def box(x0, y0, x1, y1, **kw):
    return dict(vertices=[(x0, y0), (x1, y0), (x1, y1), (x0, y1)], **kw)


def cube(x0, y0, z0, x1, y1, z1):
    return [(x, y, z) for x in (x0, x1) for y in (y0, y1) for z in (z0, z1)]


def two_squares():
    return make_scene(2, (-1, -1), (5, 5), [box(0, 0, 1, 1), box(3, 0, 4, 1)])


def slit(gap, x0=4.8, x1=5.2):
    """A wall at x in [x0, x1] across [0,10]x[0,6] with a gap centered at y=3."""
    h = gap / 2
    return make_scene(2, (0, 0), (10, 6), [box(x0, 0, x1, 3 - h), box(x0, 3 + h, x1, 6)])


def generic_2d(i):
    """Small planar scenes with irrational-looking coordinates."""
    scenes = [
        [dict(vertices=[(1.13, 1.07), (2.71, 1.29), (2.37, 2.83), (1.41, 2.51)]),
         dict(vertices=[(5.19, 4.03), (6.93, 4.61), (6.11, 6.17)])],
        [dict(vertices=[(1.23, 5.11), (2.97, 5.37), (2.11, 7.43)]),
         dict(vertices=[(4.31, 1.17), (6.07, 1.53), (5.87, 3.29), (4.63, 2.91)]),
         dict(vertices=[(7.21, 6.13), (8.57, 6.41), (8.03, 8.27)])],
        [dict(vertices=[(2.03, 2.17), (7.91, 2.43), (7.63, 3.11), (2.29, 2.89)]),
         dict(vertices=[(4.47, 5.13), (5.69, 5.31), (5.21, 6.77)])],
        [dict(vertices=[(1.31, 1.43), (2.59, 1.21), (2.83, 2.67), (1.57, 2.93)]),
         dict(vertices=[(6.17, 1.37), (7.73, 1.61), (7.29, 2.97)]),
         dict(vertices=[(3.91, 6.03), (5.33, 6.29), (4.77, 7.81)]),
         dict(vertices=[(7.61, 7.07), (8.87, 7.23), (8.41, 8.69), (7.43, 8.31)])],
        [dict(vertices=[(3.17, 3.23), (6.71, 3.47), (6.53, 6.61), (3.39, 6.37), (4.97, 5.09)])],
    ]
    return make_scene(2, (0, 0), (10, 10), scenes[i])


def triangle_of_boxes_3d():
    """Three boxes around a vertical axis in a 3D box."""
    return make_scene(3, (0, 0, 0), (10, 10, 10), [
        dict(vertices=cube(2.1, 2.3, 2.2, 3.9, 3.7, 7.9)),
        dict(vertices=cube(6.2, 2.1, 2.4, 7.8, 3.6, 7.7)),
        dict(vertices=cube(4.1, 6.3, 2.3, 5.9, 7.8, 7.6)),
    ])


def cover(scene):
    t = triangulate(scene)
    jc, g = build_joint_cover(t)
    return t, jc, g, workspace_complex(jc)


def column(x0, y0, x1, y1, levels):
    """A box stacked from cube pieces so that no boundary edge is long."""
    return [cube(x0, y0, a, x1, y1, b) for a, b in zip(levels, levels[1:])]


def pillar_platform_3d():
    """Two pillars below the ceiling, each with a platform reaching toward the
    middle; the free space has no topological hole."""
    tall = [0, 1, 2, 3, 3.9, 4.6, 5.5, 6.3, 7.1]
    short = [0, 1, 2, 3, 3.9, 4.6, 5.5, 6.3]
    return make_scene(3, (0, 0, 0), (10, 10, 10), [
        dict(convex_pieces=column(1.9, 4.1, 2.9, 5.9, tall) + [cube(2.9, 4.1, 3.9, 4.1, 5.9, 4.6)]),
        dict(convex_pieces=column(7.1, 4.1, 8.1, 5.9, short) + [cube(5.9, 4.1, 3.9, 7.1, 5.9, 4.6)]),
    ])


PILLAR_START = (5, 1, 1)
PILLAR_GOAL = (5, 9, 1)
PILLAR_PATHS = {
    "left-far": [PILLAR_START, (0.8, 1, 1), (0.8, 9, 1), PILLAR_GOAL],
    "left-near": [PILLAR_START, (3.5, 1, 3), (3.5, 9, 3), PILLAR_GOAL],
    "over-platform": [PILLAR_START, (5, 1, 5.5), (5, 9, 5.5), PILLAR_GOAL],
    "right-near": [PILLAR_START, (6.5, 1, 3), (6.5, 9, 3), PILLAR_GOAL],
    "right-far": [PILLAR_START, (9.2, 1, 1), (9.2, 9, 1), PILLAR_GOAL],
}
