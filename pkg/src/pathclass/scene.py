"""Scenes: an axis-aligned workspace box plus polytope obstacles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import geom
from .errors import DegeneracyError, InputError, SceneValidationError
from .geom import BOUNDARY, EXTERIOR, INTERIOR, Polytope


@dataclass(frozen=True)
class Obstacle:
    """One obstacle O_i.

    ``shape`` is the full boundary (a simple CCW polygon in 2D, a closed
    polyhedron in 3D, or ``None`` when the obstacle is given only as convex
    pieces). ``pieces`` are convex polytopes whose union is the obstacle.
    """

    id: int
    shape: Polytope | None
    pieces: tuple

    @property
    def vertices(self):
        seen = {}
        if self.shape is not None:
            for v in self.shape.vertices:
                seen.setdefault(v, None)
        for piece in self.pieces:
            for v in piece.vertices:
                seen.setdefault(v, None)
        return list(seen)

    def classify(self, p):
        """Exact interior/boundary/exterior test for a point."""
        if self.shape is not None:
            return geom.point_in_polytope(p, self.shape)
        on = False
        for piece in self.pieces:
            c = geom.point_in_polytope(p, piece)
            if c == INTERIOR:
                return INTERIOR
            on = on or c == BOUNDARY
        if not on:
            return EXTERIOR
        # a point on an internal face shared by two pieces is interior
        return _union_boundary_point(p, self.pieces)


def _union_boundary_point(p, pieces):
    d = len(p)
    eps = Fraction(1, 2**40)
    for offs in product((-1, 1), repeat=d):
        q = tuple(Fraction(p[k]) + offs[k] * eps for k in range(d))
        if not any(geom.point_in_polytope(q, piece) != EXTERIOR for piece in pieces):
            return BOUNDARY
    return INTERIOR


@dataclass(frozen=True)
class Scene:
    dim: int
    lo: tuple
    hi: tuple
    obstacles: tuple

    @property
    def n_obstacles(self):
        return len(self.obstacles)

    def corners(self):
        return [tuple(c) for c in product(*zip(self.lo, self.hi))]

    def obstacle(self, oid):
        if not 1 <= oid <= len(self.obstacles):
            raise InputError(f"unknown obstacle id {oid}")
        return self.obstacles[oid - 1]

    def in_bounds(self, p):
        return all(self.lo[k] <= p[k] <= self.hi[k] for k in range(self.dim))

    def obstacle_at(self, p):
        """Id of the obstacle whose interior contains ``p``, else 0."""
        for ob in self.obstacles:
            if ob.classify(p) == INTERIOR:
                return ob.id
        return 0

    def min_separation(self):
        """Minimum float distance between two distinct obstacles (inf if N < 2)."""
        best = float("inf")
        for a in range(len(self.obstacles)):
            for b in range(a + 1, len(self.obstacles)):
                best = min(best, obstacle_distance(self.obstacles[a], self.obstacles[b]))
        return best

    def without(self, oid):
        """Scene with obstacle ``oid`` removed and later ids shifted down."""
        kept = [ob for ob in self.obstacles if ob.id != oid]
        return Scene(self.dim, self.lo, self.hi, tuple(_renumber(ob, i + 1) for i, ob in enumerate(kept)))


def _renumber(ob, new_id):
    shape = None if ob.shape is None else ob.shape.with_id(new_id)
    return Obstacle(new_id, shape, tuple(p.with_id(new_id) for p in ob.pieces))


def obstacle_distance(a, b):
    """Float distance between two obstacles' boundaries (0 if they touch)."""
    best = float("inf")
    for pa in a.pieces:
        for pb in b.pieces:
            best = min(best, piece_distance(pa, pb))
    return best


def piece_distance(pa, pb):
    if geom.convex_polytopes_overlap(pa, pb):
        return 0.0
    if pa.dim == 2:
        best = float("inf")
        for e1 in pa.edges():
            for e2 in pb.edges():
                best = min(
                    best,
                    geom.dist_point_segment(e1[0], *e2),
                    geom.dist_point_segment(e1[1], *e2),
                    geom.dist_point_segment(e2[0], *e1),
                    geom.dist_point_segment(e2[1], *e1),
                )
        return best
    return _gjk_like(pa, pb)


def _gjk_like(pa, pb):
    # Distance between convex polyhedra: the minimum over vertex-face and
    # edge-edge feature pairs.
    import numpy as np

    best = float("inf")
    for a_poly, b_poly in ((pa, pb), (pb, pa)):
        for v in a_poly.vertices:
            for tri in b_poly.triangles():
                best = min(best, _pt_tri_dist(np.array(geom.to_float(v)), [np.array(geom.to_float(t)) for t in tri]))
    for e1 in pa.edges():
        for e2 in pb.edges():
            best = min(best, _seg_seg_dist3(*(np.array(geom.to_float(x)) for x in (*e1, *e2))))
    return best


def _pt_tri_dist(p, tri):
    import numpy as np

    a, b, c = tri
    n = np.cross(b - a, c - a)
    nn = float(n @ n)
    if nn > 0:
        proj = p - (n @ (p - a)) / nn * n
        # barycentric inside test
        for u, v in ((a, b), (b, c), (c, a)):
            if np.cross(v - u, proj - u) @ n < 0:
                break
        else:
            return float(np.linalg.norm(p - proj))
    return min(geom.dist_point_segment(p, u, v) for u, v in ((a, b), (b, c), (c, a)))


def _seg_seg_dist3(p1, q1, p2, q2):
    import numpy as np

    d1, d2, r = q1 - p1, q2 - p2, p1 - p2
    a, e, f = d1 @ d1, d2 @ d2, d2 @ r
    c, b = d1 @ r, d1 @ d2
    den = a * e - b * b
    s = 0.0 if den <= 1e-300 else min(1.0, max(0.0, (b * f - c * e) / den))
    t = (b * s + f) / e if e > 0 else 0.0
    if t < 0:
        t, s = 0.0, (min(1.0, max(0.0, -c / a)) if a > 0 else 0.0)
    elif t > 1:
        t, s = 1.0, (min(1.0, max(0.0, (b - c) / a)) if a > 0 else 0.0)
    return float(np.linalg.norm(p1 + d1 * s - p2 - d2 * t))


# ---------------------------------------------------------------------------
# construction and validation


def make_scene(dim, lo, hi, obstacles):
    """Build and validate a scene.

    ``obstacles`` is a list of mappings with optional ``id`` and one of
    ``vertices`` (2D polygon, or 3D point cloud whose hull is taken),
    ``vertices`` + ``faces`` (3D polyhedron) or ``convex_pieces`` (list of
    point lists). Ids must be dense 1..N.
    """
    if dim not in (2, 3):
        raise InputError(f"dimension must be 2 or 3, got {dim}")
    lo = geom.as_point(lo, dim)
    hi = geom.as_point(hi, dim)
    if any(lo[k] >= hi[k] for k in range(dim)):
        raise InputError("workspace bounds must satisfy lo < hi on every axis")
    obs = []
    for idx, spec in enumerate(obstacles):
        oid = spec.get("id", idx + 1)
        if isinstance(oid, bool) or not isinstance(oid, int):
            raise InputError(f"obstacle {idx}: id must be an integer")
        obs.append(_build_obstacle(dim, oid, spec, idx))
    ids = sorted(o.id for o in obs)
    if ids != list(range(1, len(obs) + 1)):
        raise SceneValidationError(f"obstacle ids must be dense 1..N, got {ids}")
    obs.sort(key=lambda o: o.id)
    scene = Scene(dim, lo, hi, tuple(obs))
    validate(scene)
    return scene


def _build_obstacle(dim, oid, spec, idx):
    where = f"obstacle {idx} (id {oid})"
    pieces_in = spec.get("convex_pieces")
    verts_in = spec.get("vertices")
    faces_in = spec.get("faces")
    if pieces_in is None and verts_in is None:
        raise InputError(f"{where}: needs 'vertices' or 'convex_pieces'")
    try:
        shape = None
        pieces = []
        if pieces_in is not None:
            for pts in pieces_in:
                hull = geom.convex_hull([geom.as_point(p, dim) for p in pts])
                pieces.append(hull.with_id(oid))
        if verts_in is not None:
            verts = [geom.as_point(p, dim) for p in verts_in]
            if dim == 2:
                shape = _polygon(verts, oid, where)
                if not pieces:
                    pieces = [shape] if shape.convex else [
                        Polytope(tuple(t), None, oid, True) for t in ear_clip(shape.vertices)
                    ]
            elif faces_in is not None:
                shape = _polyhedron(verts, faces_in, oid, where)
                if not pieces:
                    if not shape.convex:
                        raise SceneValidationError(f"{where}: concave 3D obstacles need convex_pieces")
                    pieces = [shape]
            else:
                shape = geom.convex_hull(verts).with_id(oid)
                if pieces:
                    raise InputError(f"{where}: give either a vertex cloud or convex_pieces, not both")
                pieces = [shape]
    except DegeneracyError as exc:
        raise SceneValidationError(f"{where}: {exc}") from exc
    return Obstacle(oid, shape, tuple(pieces))


def _polygon(verts, oid, where):
    if not geom.polygon_is_simple(verts):
        raise SceneValidationError(f"{where}: polygon is not simple")
    if geom.polygon_signed_area2(verts) < 0:
        verts = verts[::-1]
    return Polytope(tuple(verts), None, oid, geom.polygon_is_convex(verts))


def _polyhedron(verts, faces, oid, where):
    faces = tuple(tuple(int(i) for i in f) for f in faces)
    n = len(verts)
    directed = {}
    for f in faces:
        if len(f) < 3 or any(not 0 <= i < n for i in f):
            raise InputError(f"{where}: bad face {list(f)}")
        for k in range(len(f)):
            e = (f[k], f[(k + 1) % len(f)])
            directed[e] = directed.get(e, 0) + 1
    for (a, b), cnt in directed.items():
        if cnt != 1 or directed.get((b, a)) != 1:
            raise SceneValidationError(f"{where}: faces do not form a closed oriented surface")
    vol = sum(
        geom._det([geom._fr(a), geom._fr(b), geom._fr(c)])
        for a, b, c in Polytope(tuple(verts), faces, oid).triangles()
    )
    if vol == 0:
        raise SceneValidationError(f"{where}: polyhedron has zero volume")
    if vol < 0:
        faces = tuple(f[::-1] for f in faces)
    poly = Polytope(tuple(verts), faces, oid, False)
    convex = all(
        geom._orient([*tri, v], 3) <= 0 for tri in poly.triangles() for v in verts
    )
    return Polytope(tuple(verts), faces, oid, convex)


def ear_clip(vertices):
    """Triangulate a simple CCW polygon into triangles (exact ear clipping)."""
    idx = list(range(len(vertices)))
    out = []
    guard = 0
    while len(idx) > 3:
        n = len(idx)
        for k in range(n):
            a, b, c = vertices[idx[k - 1]], vertices[idx[k]], vertices[idx[(k + 1) % n]]
            if geom._orient([a, b, c], 2) <= 0:
                continue
            tri = (a, b, c)
            blocked = False
            for j in idx:
                v = vertices[j]
                if v in tri:
                    continue
                if geom._in_polygon(v, tri) != EXTERIOR:
                    blocked = True
                    break
            if not blocked:
                out.append(tri)
                del idx[k]
                break
        else:
            raise DegeneracyError("ear clipping failed; polygon is not simple")
        guard += 1
    out.append(tuple(vertices[i] for i in idx))
    return out


def validate(scene):
    """Check bounds and pairwise disjointness; raise SceneValidationError."""
    for ob in scene.obstacles:
        for v in ob.vertices:
            if not scene.in_bounds(v):
                raise SceneValidationError(f"obstacle {ob.id} leaves the workspace at {geom.to_float(v)}")
    obs = scene.obstacles
    for a in range(len(obs)):
        for b in range(a + 1, len(obs)):
            if _obstacles_touch(obs[a], obs[b]):
                raise SceneValidationError(f"obstacles {obs[a].id} and {obs[b].id} overlap or touch")


def _obstacles_touch(a, b):
    if a.shape is not None and b.shape is not None and a.shape.dim == 2:
        return geom.polygons_overlap(a.shape, b.shape)
    return any(geom.convex_polytopes_overlap(pa, pb) for pa in a.pieces for pb in b.pieces)

