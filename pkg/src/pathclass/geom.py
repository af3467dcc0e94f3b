"""Exact geometric primitives.

Coordinates are held in an exact representation: a ``float`` when the input
value is exactly a double, a ``fractions.Fraction`` otherwise. Predicates run
the floating-point filter from :mod:`pathclass.kernels` when every input is a
float and fall back to rational arithmetic when the filter cannot certify the
sign, so every sign returned here is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from itertools import combinations
from numbers import Rational

from . import kernels
from .errors import DegeneracyError, InputError

POSITIVE = 1
ZERO = 0
NEGATIVE = -1

INSIDE = 1
ON = 0
OUTSIDE = -1

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"

_UNCERTAIN = kernels.UNCERTAIN


def exact(value):
    """Convert a number or decimal string into the exact coordinate type."""
    if isinstance(value, bool):
        raise InputError(f"not a coordinate: {value!r}")
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InputError(f"coordinate must be finite, got {value!r}")
        return value
    if isinstance(value, (int, Rational)):
        q = Fraction(value)
    elif isinstance(value, (str, Decimal)):
        try:
            q = Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a coordinate: {value!r}") from exc
    else:
        raise InputError(f"not a coordinate: {value!r}")
    try:
        f = float(q)
    except OverflowError:
        return q
    if math.isfinite(f) and Fraction(f) == q:
        return f
    return q


def as_point(coords, dim=None):
    """Return ``coords`` as a tuple of exact numbers, checking the dimension."""
    try:
        p = tuple(exact(c) for c in coords)
    except TypeError as exc:
        raise InputError(f"not a point: {coords!r}") from exc
    if len(p) not in (2, 3):
        raise InputError(f"points must have 2 or 3 coordinates, got {len(p)}")
    if dim is not None and len(p) != dim:
        raise InputError(f"expected a {dim}D point, got {len(p)}D")
    return p


def to_float(p):
    return tuple(float(c) for c in p)


def _all_float(points):
    for p in points:
        for c in p:
            if type(c) is not float:
                return False
    return True


def _fr(p):
    return [Fraction(c) for c in p]


def _det(m):
    """Exact determinant of a small square matrix of Fractions (Bareiss-free elimination)."""
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        inv = 1 / m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] * inv
            if f:
                for c in range(i, n):
                    m[r][c] -= f * m[i][c]
    return det


def _sgn(x):
    return (x > 0) - (x < 0)


def _check_dims(points, count=None):
    if count is not None and len(points) != count:
        raise InputError(f"expected {count} points, got {len(points)}")
    d = len(points[0])
    if d not in (2, 3) or any(len(p) != d for p in points):
        raise InputError("points must share one dimension (2 or 3)")
    return d


def orient_exact(points):
    a = _fr(points[0])
    rows = [[c - a[k] for k, c in enumerate(_fr(p))] for p in points[1:]]
    return _sgn(_det(rows))


def orient(points):
    """Sign of det[p1 - p0; ...; pd - p0] for d+1 points in d dimensions.

    Positive for a counter-clockwise triangle in 2D and for a right-handed
    tetrahedron in 3D.
    """
    d = _check_dims(points)
    if len(points) != d + 1:
        raise InputError(f"orient needs {d + 1} points in {d}D, got {len(points)}")
    return _orient(points, d)


def _orient(points, d):
    if _all_float(points):
        if d == 2:
            (ax, ay), (bx, by), (cx, cy) = points
            s = kernels.orient2d(ax, ay, bx, by, cx, cy)
        else:
            (ax, ay, az), (bx, by, bz), (cx, cy, cz), (dx, dy, dz) = points
            s = kernels.orient3d(ax, ay, az, bx, by, bz, cx, cy, cz, dx, dy, dz)
        if s != _UNCERTAIN:
            return s
    return orient_exact(points)


def _lifted_exact(points):
    q = _fr(points[-1])
    rows = []
    for p in points[:-1]:
        diff = [c - q[k] for k, c in enumerate(_fr(p))]
        rows.append(diff + [sum(x * x for x in diff)])
    return _sgn(_det(rows))


def _lifted(points, d):
    """Sign of det[[p_i, |p_i|^2, 1]] over the d+2 rows (query last)."""
    if _all_float(points):
        if d == 2:
            (ax, ay), (bx, by), (cx, cy), (dx, dy) = points
            s = kernels.incircle(ax, ay, bx, by, cx, cy, dx, dy)
        else:
            a, b, c, e, q = points
            s = kernels.insphere(*a, *b, *c, *e, *q)
        if s != _UNCERTAIN:
            return s
    return _lifted_exact(points)


def _homogeneous_orient(points, d):
    # sign of det[[p_i, 1]] == (-1)^d * orient
    s = _orient(points, d)
    return s if d == 2 else -s


def in_sphere(simplex, query):
    """Exact position of ``query`` relative to the circumsphere of ``simplex``.

    Returns ``INSIDE`` (1), ``ON`` (0) or ``OUTSIDE`` (-1); the vertex order
    of the simplex does not matter.
    """
    points = list(simplex) + [query]
    d = _check_dims(points)
    if len(simplex) != d + 1:
        raise InputError(f"in_sphere needs a {d}-simplex of {d + 1} points")
    o = _homogeneous_orient(list(simplex), d)
    if o == 0:
        raise InputError("degenerate simplex has no circumsphere")
    return _lifted(points, d) * o


def in_sphere_perturbed(simplex, query):
    """:func:`in_sphere` under symbolic perturbation; never returns ``ON``.

    Each point's lifted height is raised by an infinitesimal whose magnitude
    decreases with the lexicographic order of its coordinates, so the answer
    is a deterministic function of the coordinates alone. Points must be
    pairwise distinct.
    """
    points = list(simplex) + [query]
    d = len(query)
    o = _homogeneous_orient(list(simplex), d)
    if o == 0:
        raise InputError("degenerate simplex has no circumsphere")
    s = _lifted(points, d)
    if s != 0:
        return s * o
    for i in sorted(range(d + 2), key=lambda k: points[k]):
        others = points[:i] + points[i + 1:]
        c = _homogeneous_orient(others, d)
        if c:
            cof = c if (i + d) % 2 == 0 else -c
            return cof * o
    raise DegeneracyError("all cofactors vanish; points are not distinct")


def lex_key(p):
    return tuple(p)


# ---------------------------------------------------------------------------
# Polytopes


@dataclass(frozen=True)
class Polytope:
    """A polygon (2D) or a polyhedron with face index lists (3D).

    2D vertices are counter-clockwise; 3D faces are oriented so their normals
    (right-hand rule) point outward.
    """

    vertices: tuple
    faces: tuple | None = None
    id: int = 0
    convex: bool = False
    bbox: tuple = field(default=None, compare=False)

    def __post_init__(self):
        if self.bbox is None:
            d = len(self.vertices[0])
            lo = tuple(min(v[k] for v in self.vertices) for k in range(d))
            hi = tuple(max(v[k] for v in self.vertices) for k in range(d))
            object.__setattr__(self, "bbox", (lo, hi))

    @property
    def dim(self):
        return len(self.vertices[0])

    def with_id(self, obstacle_id):
        return Polytope(self.vertices, self.faces, obstacle_id, self.convex, self.bbox)

    def edges(self):
        """2D boundary edges, or the unique undirected 3D face edges."""
        if self.dim == 2:
            n = len(self.vertices)
            return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]
        seen = set()
        out = []
        for f in self.faces:
            for i in range(len(f)):
                a, b = f[i], f[(i + 1) % len(f)]
                key = (min(a, b), max(a, b))
                if key not in seen:
                    seen.add(key)
                    out.append((self.vertices[key[0]], self.vertices[key[1]]))
        return out

    def triangles(self):
        """Fan triangulation of the 3D faces as vertex-coordinate triples."""
        out = []
        for f in self.faces:
            for i in range(1, len(f) - 1):
                out.append((self.vertices[f[0]], self.vertices[f[i]], self.vertices[f[i + 1]]))
        return out


def polygon_signed_area2(vertices):
    n = len(vertices)
    return sum(
        Fraction(vertices[i][0]) * Fraction(vertices[(i + 1) % n][1])
        - Fraction(vertices[(i + 1) % n][0]) * Fraction(vertices[i][1])
        for i in range(n)
    )


def polygon_is_convex(vertices):
    n = len(vertices)
    for i in range(n):
        if _orient([vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]], 2) < 0:
            return False
    return True


def segments_intersect(a, b, c, d):
    """Closed 2D segments ab and cd share at least one point."""
    o1 = _orient([a, b, c], 2)
    o2 = _orient([a, b, d], 2)
    o3 = _orient([c, d, a], 2)
    o4 = _orient([c, d, b], 2)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and on_segment(c, a, b))
        or (o2 == 0 and on_segment(d, a, b))
        or (o3 == 0 and on_segment(a, c, d))
        or (o4 == 0 and on_segment(b, c, d))
    )


def on_segment(p, a, b):
    """``p`` lies on the closed segment ab (any dimension; exact)."""
    d = len(p)
    if d == 2:
        if _orient([a, b, p], 2) != 0:
            return False
    else:
        # cross product must vanish
        u = [Fraction(b[k]) - Fraction(a[k]) for k in range(3)]
        w = [Fraction(p[k]) - Fraction(a[k]) for k in range(3)]
        if (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]) != (0, 0, 0):
            return False
    return all(min(a[k], b[k]) <= p[k] <= max(a[k], b[k]) for k in range(d))


def polygon_is_simple(vertices):
    n = len(vertices)
    if n < 3:
        return False
    if len(set(vertices)) != n:
        return False
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges may only share their common vertex
                a, b = edges[i]
                c, d = edges[j]
                shared = b if j == i + 1 else a
                other_i = a if j == i + 1 else b
                other_j = d if j == i + 1 else c
                if on_segment(other_j, *edges[i]) and other_j != shared:
                    return False
                if on_segment(other_i, *edges[j]) and other_i != shared:
                    return False
                continue
            if segments_intersect(*edges[i], *edges[j]):
                return False
    return polygon_signed_area2(vertices) != 0


def convex_hull(points):
    """Minimal convex polytope containing ``points``; vertices are a subset of them.

    2D hulls are counter-clockwise without collinear boundary points. 3D hulls
    carry outward-oriented polygonal faces (coplanar facets merged).
    """
    pts = [as_point(p) for p in points]
    if not pts:
        raise InputError("convex hull of an empty set")
    d = _check_dims(pts)
    uniq = sorted(set(pts))
    if d == 2:
        return _hull2d(uniq)
    return _hull3d(uniq)


def _hull2d(pts):
    if len(pts) < 3:
        raise DegeneracyError("need at least 3 affinely independent points")

    def half(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2 and _orient([chain[-2], chain[-1], p], 2) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegeneracyError("all points are collinear")
    return Polytope(tuple(hull), None, 0, True)


def _drop_axis(normal):
    mags = [abs(c) for c in normal]
    return mags.index(max(mags))


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _hull3d(pts):
    n = len(pts)
    if n < 4:
        raise DegeneracyError("need at least 4 affinely independent points")
    fr = [_fr(p) for p in pts]
    planes = {}
    for i, j, k in combinations(range(n), 3):
        u = [fr[j][a] - fr[i][a] for a in range(3)]
        v = [fr[k][a] - fr[i][a] for a in range(3)]
        nrm = _cross(u, v)
        if nrm == (0, 0, 0):
            continue
        off = sum(nrm[a] * fr[i][a] for a in range(3))
        pos = neg = False
        on = []
        for m in range(n):
            s = _sgn(sum(nrm[a] * fr[m][a] for a in range(3)) - off)
            if s > 0:
                pos = True
            elif s < 0:
                neg = True
            else:
                on.append(m)
            if pos and neg:
                break
        if pos and neg:
            continue
        if not pos and not neg:
            raise DegeneracyError("all points are coplanar")
        # orient the normal outward (all other points on the negative side)
        if pos:
            nrm = tuple(-c for c in nrm)
            off = -off
        g = math.gcd(*(int(c.numerator) for c in nrm)) if all(c.denominator == 1 for c in nrm) else 0
        key = _plane_key(nrm, off) if g == 0 else _plane_key(tuple(c / g for c in nrm), off / g)
        planes.setdefault(key, (nrm, frozenset(on)))
    if not planes:
        raise DegeneracyError("all points are coplanar")
    faces_pts = []
    used = set()
    for nrm, on in planes.values():
        members = sorted(on)
        ax = _drop_axis(nrm)
        keep = [a for a in range(3) if a != ax]
        proj = sorted({(pts[m][keep[0]], pts[m][keep[1]]): m for m in members}.items())
        ring2d = _hull2d([pp for pp, _ in proj]).vertices
        back = {pp: m for pp, m in proj}
        ring = [back[pp] for pp in ring2d]
        # projected CCW matches the outward normal only if the dropped component is positive
        if nrm[ax] < 0:
            ring = ring[::-1]
        # cyclic permutation of (x, y, z) order matters when dropping y
        if ax == 1:
            ring = ring[::-1]
        faces_pts.append(ring)
        used.update(ring)
    order = sorted(used)
    index = {m: i for i, m in enumerate(order)}
    verts = tuple(pts[m] for m in order)
    faces = tuple(sorted(tuple(index[m] for m in _rotate_min(ring)) for ring in faces_pts))
    return Polytope(verts, faces, 0, True)


def _rotate_min(ring):
    k = ring.index(min(ring))
    return ring[k:] + ring[:k]


def _plane_key(nrm, off):
    # normalize by the first nonzero component's magnitude
    lead = next(abs(c) for c in nrm if c != 0)
    return tuple(Fraction(c) / lead for c in nrm) + (Fraction(off) / lead,)


def point_in_polytope(p, poly):
    """Exact classification of ``p`` as interior, boundary or exterior."""
    p = as_point(p)
    if len(p) != poly.dim:
        raise InputError("point and polytope dimensions differ")
    lo, hi = poly.bbox
    if any(p[k] < lo[k] or p[k] > hi[k] for k in range(len(p))):
        return EXTERIOR
    if poly.dim == 2:
        return _in_polygon(p, poly.vertices)
    if poly.convex:
        return _in_convex3d(p, poly)
    return _in_polyhedron(p, poly)


def _in_polygon(p, verts):
    n = len(verts)
    inside = False
    px, py = p
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        if on_segment(p, a, b):
            return BOUNDARY
        if (a[1] > py) != (b[1] > py):
            o = _orient([a, b, p], 2)
            if (b[1] > a[1] and o > 0) or (b[1] < a[1] and o < 0):
                inside = not inside
    return INTERIOR if inside else EXTERIOR


def _in_convex3d(p, poly):
    on = False
    for tri in _face_planes(poly):
        s = _orient([tri[0], tri[1], tri[2], p], 3)
        if s > 0:
            return EXTERIOR
        if s == 0:
            on = True
    return BOUNDARY if on else INTERIOR


def _face_planes(poly):
    return [(poly.vertices[f[0]], poly.vertices[f[1]], poly.vertices[f[2]]) for f in poly.faces]


_RAY_DIRS = [
    (Fraction(9137, 10000), Fraction(3571, 10000), Fraction(1931, 10000)),
    (Fraction(-2711, 10000), Fraction(8123, 10000), Fraction(5147, 10000)),
    (Fraction(4409, 10000), Fraction(-6121, 10000), Fraction(6577, 10000)),
    (Fraction(-5381, 10000), Fraction(-4271, 10000), Fraction(-7283, 10000)),
]


def _in_polyhedron(p, poly):
    tris = poly.triangles()
    for a, b, c in tris:
        if _orient([a, b, c, p], 3) == 0 and _in_triangle3d(p, a, b, c):
            return BOUNDARY
    lo, hi = poly.bbox
    span = sum(Fraction(hi[k]) - Fraction(lo[k]) for k in range(3)) + 1
    for direction in _RAY_DIRS:
        far = tuple(Fraction(p[k]) + direction[k] * span * 4 for k in range(3))
        count = 0
        degenerate = False
        for a, b, c in tris:
            hit = _segment_triangle(p, far, a, b, c)
            if hit is None:
                degenerate = True
                break
            count += hit
        if not degenerate:
            return INTERIOR if count % 2 else EXTERIOR
    raise DegeneracyError("could not find a generic ray for the containment test")


def _in_triangle3d(p, a, b, c):
    nrm = _cross([Fraction(b[k]) - Fraction(a[k]) for k in range(3)],
                 [Fraction(c[k]) - Fraction(a[k]) for k in range(3)])
    ax = _drop_axis(nrm)
    keep = [k for k in range(3) if k != ax]
    pa, pb, pc, pp = ([q[keep[0]], q[keep[1]]] for q in (a, b, c, p))
    o1 = _orient([pa, pb, pp], 2)
    o2 = _orient([pb, pc, pp], 2)
    o3 = _orient([pc, pa, pp], 2)
    return not ((o1 < 0 or o2 < 0 or o3 < 0) and (o1 > 0 or o2 > 0 or o3 > 0))


def _segment_triangle(p, q, a, b, c):
    """1 if segment pq properly crosses triangle abc, 0 if not, None if degenerate."""
    s1 = _orient([a, b, c, p], 3)
    s2 = _orient([a, b, c, q], 3)
    if s1 * s2 > 0:
        return 0
    if s1 == 0 or s2 == 0:
        return None
    e1 = _orient([p, q, a, b], 3)
    e2 = _orient([p, q, b, c], 3)
    e3 = _orient([p, q, c, a], 3)
    if e1 == 0 or e2 == 0 or e3 == 0:
        if (e1 >= 0 and e2 >= 0 and e3 >= 0) or (e1 <= 0 and e2 <= 0 and e3 <= 0):
            return None
        return 0
    return 1 if (e1 > 0) == (e2 > 0) == (e3 > 0) else 0


def segment_crosses_interior(p, q, poly):
    """True iff the open segment pq meets the interior of a convex polytope.

    Exact Cyrus-Beck clipping against the polytope's supporting half-spaces.
    """
    planes = halfspaces(poly)
    P = _fr(p)
    Q = _fr(q)
    t0, t1 = Fraction(0), Fraction(1)
    for nrm, off in planes:
        a = sum(nrm[k] * P[k] for k in range(len(P))) - off
        b = sum(nrm[k] * (Q[k] - P[k]) for k in range(len(P)))
        # interior: a + t*b < 0
        if b == 0:
            if a >= 0:
                return False
            continue
        t = -a / b
        if b > 0:
            t1 = min(t1, t)
        else:
            t0 = max(t0, t)
        if t0 >= t1:
            return False
    return t0 < t1


def halfspaces(poly):
    """Outward (normal, offset) pairs with interior ``normal . x < offset``."""
    cached = getattr(poly, "_halfspaces", None)
    if cached is not None:
        return cached
    out = []
    if poly.dim == 2:
        n = len(poly.vertices)
        for i in range(n):
            a = _fr(poly.vertices[i])
            b = _fr(poly.vertices[(i + 1) % n])
            nrm = (b[1] - a[1], a[0] - b[0])
            out.append((nrm, nrm[0] * a[0] + nrm[1] * a[1]))
    else:
        for f in poly.faces:
            a, b, c = (_fr(poly.vertices[f[k]]) for k in range(3))
            nrm = _cross([b[k] - a[k] for k in range(3)], [c[k] - a[k] for k in range(3)])
            out.append((nrm, sum(nrm[k] * a[k] for k in range(3))))
    object.__setattr__(poly, "_halfspaces", out)
    return out


def convex_polytopes_overlap(a, b):
    """Closed convex polytopes share a point (exact separating-axis test)."""
    axes = [nrm for nrm, _ in halfspaces(a)] + [nrm for nrm, _ in halfspaces(b)]
    if a.dim == 3:
        for e1 in a.edges():
            u = [Fraction(e1[1][k]) - Fraction(e1[0][k]) for k in range(3)]
            for e2 in b.edges():
                v = [Fraction(e2[1][k]) - Fraction(e2[0][k]) for k in range(3)]
                c = _cross(u, v)
                if c != (0, 0, 0):
                    axes.append(c)
    va = [_fr(v) for v in a.vertices]
    vb = [_fr(v) for v in b.vertices]
    for ax in axes:
        pa = [sum(ax[k] * v[k] for k in range(len(ax))) for v in va]
        pb = [sum(ax[k] * v[k] for k in range(len(ax))) for v in vb]
        if max(pa) < min(pb) or max(pb) < min(pa):
            return False
    return True


def polygons_overlap(a, b):
    """Closed simple polygons (possibly concave) share a point."""
    for e1 in a.edges():
        for e2 in b.edges():
            if segments_intersect(*e1, *e2):
                return True
    return (
        _in_polygon(a.vertices[0], b.vertices) != EXTERIOR
        or _in_polygon(b.vertices[0], a.vertices) != EXTERIOR
    )


def centroid(points):
    n = len(points)
    d = len(points[0])
    return tuple(exact(sum(Fraction(p[k]) for p in points) / n) for k in range(d))


def dist_point_segment(p, a, b):
    """Float Euclidean distance from point p to segment ab (any dimension)."""
    p, a, b = to_float(p), to_float(a), to_float(b)
    u = [b[k] - a[k] for k in range(len(p))]
    w = [p[k] - a[k] for k in range(len(p))]
    den = sum(x * x for x in u)
    t = 0.0 if den == 0 else max(0.0, min(1.0, sum(w[k] * u[k] for k in range(len(p))) / den))
    return math.sqrt(sum((w[k] - t * u[k]) ** 2 for k in range(len(p))))
