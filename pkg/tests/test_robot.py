import math
import random

import pytest

from fixtures import box, two_squares
from pathclass.errors import SpecError, UnsupportedError
from pathclass.robot import (
    build_complex,
    chain_angles,
    chain_pose,
    link_length_error,
    make_spec,
    point_robot,
    pose_collides,
    rigid_pose,
    serial_chain,
)
from pathclass.scene import make_scene


def test_three_collinear_points_one_open_chain():
    s_b = build_complex(serial_chain([1.0, 1.0]))
    assert len(s_b.chains) == 1
    c = s_b.chains[0]
    assert not c.closed and c.points == (0, 1, 2) and c.lengths == (1.0, 1.0)


def _humanoid():
    names = ["torso", "h", "la", "ra", "ll", "rl", "la2", "ra2"]
    links = [("torso", "h", 1), ("torso", "la", 1), ("la", "la2", 1), ("torso", "ra", 1),
             ("ra", "ra2", 1), ("torso", "ll", 1), ("torso", "rl", 1)]
    return make_spec(names, links)


def test_humanoid_four_chains_share_an_endpoint():
    names = ["t", "a", "b", "c", "d"]
    spec = make_spec(names, [("t", x, 1) for x in "abcd"])
    s_b = build_complex(spec)
    assert len(s_b.chains) == 4
    assert all(0 in (c.points[0], c.points[-1]) for c in s_b.chains)
    assert s_b.closed_flags == (False,) * 4
    s_b = build_complex(_humanoid())
    assert len(s_b.chains) == 5
    assert sorted(len(c.points) for c in s_b.chains) == [2, 2, 2, 3, 3]


def test_cycle_is_one_closed_chain():
    spec = make_spec("abcd", [("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)])
    s_b = build_complex(spec)
    assert len(s_b.chains) == 1 and s_b.chains[0].closed
    assert len(s_b.chains[0].edges) == 4


def test_cycle_through_branch_vertex():
    spec = make_spec("abcx", [("a", "b", 1), ("b", "c", 1), ("c", "a", 1), ("a", "x", 2)])
    s_b = build_complex(spec)
    assert sorted(c.closed for c in s_b.chains) == [False, True]


def _edge_partition_ok(s_b):
    edges = [tuple(sorted(e)) for c in s_b.chains for e in c.edges]
    return sorted(edges) == sorted(s_b.edges) and len(set(edges)) == len(edges)


def test_edge_partition_random_trees_and_cycles():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(2, 9)
        links = {(rng.randrange(i), i) for i in range(1, n)}
        for _ in range(rng.randint(0, 3)):
            a, b = rng.sample(range(n), 2)
            links.add((min(a, b), max(a, b)))
        names = [f"k{i}" for i in range(n)]
        spec = make_spec(names, [(names[a], names[b], 1 + rng.random()) for a, b in links])
        s_b = build_complex(spec)
        assert _edge_partition_ok(s_b)
        assert sum(len(c.edges) for c in s_b.chains) == len(spec.links)
        for c in s_b.chains:
            if not c.closed:
                assert len(set(c.points)) == len(c.points)


def test_decomposition_invariant_under_renaming():
    rng = random.Random(2)
    spec = _humanoid()
    base = build_complex(spec)
    for _ in range(10):
        perm = list(spec.key_points)
        rng.shuffle(perm)
        rename = dict(zip(spec.key_points, perm))
        links = [(rename[spec.key_points[a]], rename[spec.key_points[b]], l) for a, b, l in spec.links]
        other = build_complex(make_spec(perm, links))

        def shape(s):
            return sorted((len(c.points), c.closed, tuple(sorted(c.lengths))) for c in s.chains)

        assert shape(other) == shape(base)


def test_spec_validation():
    with pytest.raises(SpecError):
        make_spec([], [])
    with pytest.raises(SpecError):
        make_spec("ab", [("a", "b", 0)])
    with pytest.raises(SpecError):
        make_spec("ab", [("a", "a", 1)])
    with pytest.raises(SpecError):
        make_spec("abc", [("a", "b", 1)])
    with pytest.raises(SpecError):
        make_spec("ab", [("a", "z", 1)])
    with pytest.raises(SpecError):
        make_spec("ab", [("a", "b", 1), ("b", "a", 2)])
    with pytest.raises(SpecError):
        make_spec("ab", [("a", "b", 1)], reconfigurable=True)
    with pytest.raises(SpecError):
        make_spec("ab", [("a", "b", 1)], link_width=-1)
    assert point_robot().k == 1


def test_chain_pose_preserves_lengths():
    rng = random.Random(1)
    spec = serial_chain([0.4, 1.3, 2.0, 0.7])
    chain = build_complex(spec).chains[0]
    for _ in range(200):
        angles = [rng.uniform(-math.pi, math.pi) for _ in range(4)]
        pts = chain_pose(chain, (rng.uniform(-5, 5), rng.uniform(-5, 5)), angles)
        assert link_length_error(spec, pts) <= 1e-12
        assert all(abs(a - b) <= 1e-12 or abs(abs(a - b) - 2 * math.pi) <= 1e-12
                   for a, b in zip(chain_angles(pts), angles))


def test_chain_pose_errors():
    with pytest.raises(SpecError):
        chain_pose([1.0, 1.0], (0, 0), [0.0])
    spec = make_spec("abc", [("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])
    closed = build_complex(spec).chains[0]
    with pytest.raises(UnsupportedError):
        chain_pose(closed, (0, 0), [0, 0, 0])


def test_rigid_pose_keeps_shape():
    ref = [(0, 0), (1, 0), (0.5, 1)]
    out = rigid_pose(ref, (3, 4), 0.7)
    assert out[0] == pytest.approx((3, 4))
    for i in range(3):
        for j in range(3):
            assert math.dist(out[i], out[j]) == pytest.approx(math.dist(ref[i], ref[j]), abs=1e-12)


def test_pose_collides():
    scene = two_squares()
    spec = serial_chain([1.0], link_width=0.1)
    assert not pose_collides(scene, spec, [(2, -1), (3, -1)])
    assert pose_collides(scene, spec, [(0.5, -1), (0.5, 0.5)])  # link enters obstacle 1
    assert pose_collides(scene, spec, [(2, -0.05), (2, -0.95)]) is False
    assert pose_collides(scene, spec, [(1.05, -0.05), (1.05, -0.95)])  # capsule grazes within 0.1
    assert pose_collides(scene, spec, [(-100, 0), (-99, 0)])  # out of bounds
    pt = point_robot()
    assert pose_collides(scene, pt, [(0.5, 0.5)])
    assert not pose_collides(scene, pt, [(2, 0.5)])


def test_collisions_planar_only():
    from fixtures import cube
    scene = make_scene(3, (0, 0, 0), (4, 4, 4), [dict(vertices=cube(1, 1, 1, 2, 2, 2))])
    with pytest.raises(UnsupportedError):
        pose_collides(scene, point_robot(), [(3, 3, 3)])
