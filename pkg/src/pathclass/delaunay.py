"""Incremental Delaunay triangulation (2D) and tetrahedralization (3D).

Bowyer-Watson insertion with ghost simplices closing the convex hull, a
visibility walk for point location, and exact predicates with symbolic
perturbation, so the output is a deterministic function of the point set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import geom, kernels
from .errors import DegeneracyError, InputError, QueryError
from .geom import BOUNDARY, INTERIOR

GHOST = -1


@dataclass(frozen=True, eq=False)
class Triangulation:
    """Canonical simplicial decomposition of the hull of ``points``.

    Attributes
    ----------
    points : tuple
        Exact vertex coordinates, deduplicated, in first-seen order.
    tags : tuple of int
        Obstacle id per vertex, 0 for workspace corners and free points.
    simplices : tuple of tuple
        Sorted vertex-index tuples, the list itself sorted.
    neighbors : tuple of tuple
        ``neighbors[s][k]`` is the simplex across the facet opposite vertex
        ``simplices[s][k]``, or -1 on the hull.
    inside_obstacle : tuple of int
        Obstacle id whose interior holds the simplex, 0 for free simplices.
    """

    dim: int
    points: tuple
    tags: tuple
    simplices: tuple
    neighbors: tuple
    inside_obstacle: tuple
    scene: object = None
    _mesh: object = field(default=None, repr=False)

    def __len__(self):
        return len(self.simplices)

    def mesh(self):
        if self._mesh is None:
            object.__setattr__(
                self, "_mesh",
                kernels.mesh([geom.to_float(p) for p in self.points], self.simplices, self.neighbors),
            )
        return self._mesh

    def facet(self, s, k):
        v = self.simplices[s]
        return v[:k] + v[k + 1:]

    def simplex_points(self, s):
        return [self.points[i] for i in self.simplices[s]]

    def is_free(self, s):
        return self.inside_obstacle[s] == 0

    def edges(self):
        out = set()
        for simp in self.simplices:
            out.update(combinations(simp, 2))
        return out

    def contains(self, s, p):
        """Closed-simplex membership of ``p`` (exact)."""
        pts = self.simplex_points(s)
        o = geom._orient(pts, self.dim)
        for k in range(self.dim + 1):
            q = pts[:k] + [p] + pts[k + 1:]
            if geom._orient(q, self.dim) * o < 0:
                return False
        return True

    def locate(self, p, start=0):
        """Index of one simplex whose closure contains ``p``, or -1 outside the hull."""
        p = geom.as_point(p, self.dim)
        if not self.simplices:
            return -1
        start = min(max(start, 0), len(self.simplices) - 1)
        f = geom.to_float(p)
        if self.dim == 2:
            s = kernels.walk2d(self.mesh(), start, f[0], f[1])
        else:
            s = kernels.walk3d(self.mesh(), start, f[0], f[1], f[2])
        exact_input = all(type(c) is float for c in p)
        if s >= 0 and (exact_input or self.contains(s, p)):
            return s
        if s == kernels.WALK_OUTSIDE and exact_input:
            return -1
        return _walk_exact(self.points, self.simplices, self.neighbors, start, p, self.dim)

    def star(self, p, start=0):
        """Sorted indices of every simplex whose closure contains ``p``."""
        s = self.locate(p, start)
        if s < 0:
            return []
        seen = {s}
        todo = [s]
        while todo:
            t = todo.pop()
            for nb in self.neighbors[t]:
                if nb >= 0 and nb not in seen and self.contains(nb, p):
                    seen.add(nb)
                    todo.append(nb)
        return sorted(seen)

    def simplex_adjacent_obstacles(self, s):
        """Obstacle ids with a vertex on simplex ``s``; corners contribute none."""
        if not 0 <= s < len(self.simplices):
            raise QueryError(f"no simplex {s}")
        if self.inside_obstacle[s]:
            raise QueryError(f"simplex {s} lies inside obstacle {self.inside_obstacle[s]}")
        return frozenset(self.tags[i] for i in self.simplices[s] if self.tags[i])

    def missing_obstacle_edges(self):
        """Obstacle boundary edges absent from the triangulation (conformity check)."""
        if self.scene is None:
            return []
        index = {p: i for i, p in enumerate(self.points)}
        present = self.edges()
        missing = []
        for ob in self.scene.obstacles:
            polys = [ob.shape] if ob.shape is not None else list(ob.pieces)
            for poly in polys:
                for a, b in poly.edges():
                    e = tuple(sorted((index[a], index[b])))
                    if e not in present:
                        missing.append((ob.id, a, b))
        return missing


def _xorshift(state):
    state ^= (state << 13) & 0xFFFFFFFF
    state ^= state >> 17
    state ^= (state << 5) & 0xFFFFFFFF
    return state


def _walk_exact(points, simplices, neighbors, start, p, d):
    s = start
    state = 88172645
    for _ in range(4 * len(simplices) + 64):
        v = [points[i] for i in simplices[s]]
        o = geom._orient(v, d)
        state = _xorshift(state)
        first = state % (d + 1)
        for j in range(d + 1):
            k = (first + j) % (d + 1)
            q = v[:k] + [p] + v[k + 1:]
            if geom._orient(q, d) * o < 0:
                nb = neighbors[s][k]
                if nb < 0:
                    return -1
                s = nb
                break
        else:
            return s
    raise DegeneracyError("point location did not terminate")


def _ghost_conflict(pts, cells, facets, sid, q, d):
    """Conflict test for a ghost cell (hull facet + GHOST)."""
    cell = cells[sid]
    facet = tuple(v for v in cell if v != GHOST)
    key = frozenset(facet)
    finite = next(t for t in facets[key] if t != sid)
    fcell = cells[finite]
    apex = next(v for v in fcell if v not in key)
    fp = [pts[v] for v in facet]
    side_q = geom._orient(fp + [q], d)
    if side_q == 0:
        return geom.in_sphere_perturbed([pts[v] for v in fcell], q) > 0
    side_in = geom._orient(fp + [pts[apex]], d)
    return side_q * side_in < 0


def _conflict(pts, cells, facets, sid, q, d):
    cell = cells[sid]
    if GHOST in cell:
        return _ghost_conflict(pts, cells, facets, sid, q, d)
    return geom.in_sphere_perturbed([pts[v] for v in cell], q) > 0


def delaunay(points, dim=None):
    """Delaunay simplices of a point list.

    Returns ``(unique_points, index_map, simplices)`` where ``index_map[i]``
    is the position of input point ``i`` in ``unique_points`` and
    ``simplices`` is the sorted list of sorted vertex tuples.
    """
    pts_in = [geom.as_point(p, dim) for p in points]
    if not pts_in:
        raise DegeneracyError("no points")
    d = len(pts_in[0])
    if any(len(p) != d for p in pts_in):
        raise InputError("mixed point dimensions")
    uniq = {}
    index_map = []
    for p in pts_in:
        index_map.append(uniq.setdefault(p, len(uniq)))
    pts = list(uniq)
    if len(pts) < d + 1:
        raise DegeneracyError(f"need at least {d + 1} affinely independent points")
    init = _initial_simplex(pts, d)
    rest = sorted((i for i in range(len(pts)) if i not in init), key=lambda i: pts[i])

    cells = {}
    facets = {}
    next_id = [0]

    def add(cell):
        sid = next_id[0]
        next_id[0] += 1
        cells[sid] = cell
        for k in range(d + 1):
            key = frozenset(cell[:k] + cell[k + 1:])
            facets.setdefault(key, []).append(sid)
        return sid

    def remove(sid):
        cell = cells.pop(sid)
        for k in range(d + 1):
            key = frozenset(cell[:k] + cell[k + 1:])
            lst = facets[key]
            lst.remove(sid)
            if not lst:
                del facets[key]

    last = add(tuple(init))
    for k in range(d + 1):
        add(tuple(init[:k]) + (GHOST,) + tuple(init[k + 1:]))

    for qi in rest:
        q = pts[qi]
        start = _locate_build(pts, cells, facets, last, q, d)
        cavity = {start}
        todo = [start]
        while todo:
            sid = todo.pop()
            cell = cells[sid]
            for k in range(d + 1):
                key = frozenset(cell[:k] + cell[k + 1:])
                for nb in facets[key]:
                    if nb != sid and nb not in cavity and _conflict(pts, cells, facets, nb, q, d):
                        cavity.add(nb)
                        todo.append(nb)
        boundary = []
        for sid in cavity:
            cell = cells[sid]
            for k in range(d + 1):
                fac = cell[:k] + cell[k + 1:]
                key = frozenset(fac)
                if all(nb in cavity for nb in facets[key]):
                    continue
                boundary.append(fac)
        for sid in cavity:
            remove(sid)
        for fac in boundary:
            sid = add(fac + (qi,))
            if GHOST not in fac:
                last = sid

    simplices = sorted(tuple(sorted(c)) for c in cells.values() if GHOST not in c)
    return pts, index_map, simplices


def _initial_simplex(pts, d):
    chosen = [0]
    for i in range(1, len(pts)):
        cand = chosen + [i]
        if _affinely_independent([pts[j] for j in cand], d):
            chosen = cand
            if len(chosen) == d + 1:
                break
    if len(chosen) < d + 1:
        raise DegeneracyError(f"fewer than {d + 1} affinely independent points")
    return chosen


def _affinely_independent(pts, d):
    base = geom._fr(pts[0])
    rows = [[c - base[k] for k, c in enumerate(geom._fr(p))] for p in pts[1:]]
    # rank via elimination
    rank = 0
    cols = d
    rows = [r[:] for r in rows]
    for c in range(cols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [rows[r][j] - f * rows[rank][j] for j in range(cols)]
        rank += 1
    return rank == len(rows)


def _locate_build(pts, cells, facets, start, q, d):
    """Walk from finite cell ``start``; return a conflicting cell."""
    s = start
    state = 2463534242
    for _ in range(4 * len(cells) + 64):
        cell = cells[s]
        v = [pts[i] for i in cell]
        o = geom._orient(v, d)
        state = _xorshift(state)
        first = state % (d + 1)
        for j in range(d + 1):
            k = (first + j) % (d + 1)
            if geom._orient(v[:k] + [q] + v[k + 1:], d) * o < 0:
                key = frozenset(cell[:k] + cell[k + 1:])
                nb = next(t for t in facets[key] if t != s)
                if GHOST in cells[nb]:
                    return nb
                s = nb
                break
        else:
            return s
    raise DegeneracyError("point location did not terminate")


def triangulate_points(points, tags=None, scene=None):
    """Triangulate a bare point list; see :class:`Triangulation`."""
    pts, index_map, simplices = delaunay(points)
    d = len(pts[0])
    tag_list = [0] * len(pts)
    if tags is not None:
        for i, t in enumerate(tags):
            j = index_map[i]
            if t and not tag_list[j]:
                tag_list[j] = t
    neighbors = _neighbors(simplices, d)
    inside = [0] * len(simplices)
    if scene is not None:
        inside = [_inside_id(scene, [pts[i] for i in s]) for s in simplices]
    return Triangulation(d, tuple(pts), tuple(tag_list), tuple(simplices), neighbors, tuple(inside), scene)


def _neighbors(simplices, d):
    owner = {}
    nbrs = [[-1] * (d + 1) for _ in simplices]
    for s, simp in enumerate(simplices):
        for k in range(d + 1):
            key = simp[:k] + simp[k + 1:]
            other = owner.pop(key, None)
            if other is None:
                owner[key] = (s, k)
            else:
                t, j = other
                nbrs[s][k] = t
                nbrs[t][j] = s
    return tuple(tuple(n) for n in nbrs)


_WEIGHTS = [(1, 1, 1, 1), (1, 2, 3, 4), (4, 3, 2, 1), (2, 5, 3, 7), (7, 3, 5, 2), (3, 1, 4, 1)]


def _inside_id(scene, simplex_pts):
    """Obstacle containing the simplex, judged at a point off every obstacle boundary."""
    d = len(simplex_pts[0])
    for w in _WEIGHTS:
        w = w[: d + 1]
        tot = sum(w)
        p = tuple(
            geom.exact(sum(Fraction(w[i]) * Fraction(simplex_pts[i][k]) for i in range(d + 1)) / tot)
            for k in range(d)
        )
        hit = 0
        on_boundary = False
        for ob in scene.obstacles:
            c = ob.classify(p)
            if c == INTERIOR:
                hit = ob.id
                break
            if c == BOUNDARY:
                on_boundary = True
        if hit or not on_boundary:
            return hit
    return 0


def triangulate(scene):
    """Delaunay triangulation of every obstacle vertex plus the workspace corners."""
    if not scene.obstacles:
        raise InputError("scene has no obstacles")
    points = []
    tags = []
    for ob in scene.obstacles:
        for v in ob.vertices:
            points.append(v)
            tags.append(ob.id)
    for c in scene.corners():
        points.append(c)
        tags.append(0)
    return triangulate_points(points, tags, scene)


def triangulate_workspace(scene):
    """Like :func:`triangulate` but also accepts an obstacle-free scene."""
    if scene.obstacles:
        return triangulate(scene)
    return triangulate_points(scene.corners(), None, scene)

