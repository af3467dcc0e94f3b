"""Joint cover: labeled free regions merged from a triangulation.

Free simplices are grouped into connected components of facet-adjacent
simplices sharing one adjacent-obstacle set. Each component is then cut
into pieces whose dual graphs are trees and where two pieces share at
most one facet, so that region sequences can tell apart every way of
winding around an obstacle.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from . import geom
from .errors import ContainmentError, InputError, QueryError
from .geom import INTERIOR


@dataclass(frozen=True)
class FreeRegion:
    id: int
    adjacent_obstacles: frozenset
    label: int
    simplices: tuple
    compact: bool
    component: int
    hole_index: int | None = None


@dataclass(frozen=True)
class AdjacencyGraph:
    """G_A: obstacle nodes plus the adjacent sets of size >= 2 as hyperedges."""

    nodes: tuple
    hyperedges: tuple

    @property
    def edges(self):
        out = set()
        for h in self.hyperedges:
            out.update(combinations(h, 2))
        return tuple(sorted(out))

    def to_dict(self):
        return {"nodes": list(self.nodes), "hyperedges": [list(h) for h in self.hyperedges],
                "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class WorkspaceComplex:
    """S_W: one vertex per region, edges from facet adjacency, triangles in 3D."""

    vertices: tuple
    edges: tuple
    triangles: tuple

    def neighbors(self, r):
        return self._adj().get(r, ())

    def _adj(self):
        cached = self.__dict__.get("_adj_cache")
        if cached is None:
            adj = {v: set() for v in self.vertices}
            for a, b in self.edges:
                adj[a].add(b)
                adj[b].add(a)
            cached = {v: tuple(sorted(n)) for v, n in adj.items()}
            object.__setattr__(self, "_adj_cache", cached)
        return cached

    def has_edge(self, a, b):
        return b in self._adj().get(a, ())

    def graph(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True, eq=False)
class JointCover:
    triangulation: object
    regions: tuple
    adjacency: tuple
    simplex_region: tuple
    simplex_sets: tuple
    n_obstacles: int
    removed: frozenset = frozenset()
    split: bool = True
    _fp: list = field(default_factory=list, repr=False)

    @property
    def dim(self):
        return self.triangulation.dim

    def region(self, rid):
        return self.regions[rid]

    def is_free(self, s):
        return self.simplex_region[s] >= 0

    def shared_facets(self, a, b):
        """Facets (vertex tuples) shared by regions ``a`` and ``b``."""
        t = self.triangulation
        out = []
        for s in self.regions[a].simplices:
            for k, nb in enumerate(t.neighbors[s]):
                if nb >= 0 and self.simplex_region[nb] == b:
                    out.append(t.facet(s, k))
        return sorted(set(out))

    def fingerprint(self):
        """Stable digest of the cover's geometry and partition."""
        if not self._fp:
            t = self.triangulation
            payload = json.dumps({
                "points": [[str(c) for c in p] for p in t.points],
                "simplices": t.simplices,
                "regions": list(self.simplex_region),
                "removed": sorted(self.removed),
            }, separators=(",", ":"))
            self._fp.append(hashlib.sha256(payload.encode()).hexdigest()[:16])
        return self._fp[0]


def godel(ids):
    """2^{i1} 3^{i2} 5^{i3} ... over the ids in the given order."""
    out = 1
    for p, e in zip(primes(len(ids)), ids):
        out *= p**e
    return out


def primes(n):
    """The first ``n`` primes."""
    out = []
    k = 2
    while len(out) < n:
        if all(k % p for p in out if p * p <= k):
            out.append(k)
        k += 1
    return out


def label_region(adjacent, n_obstacles, hole_index=None):
    """Integer label of a free region.

    {i} -> i; hole k inside O_i -> -i*k; {i, j} with j < i -> N*i + j;
    three or more ids -> Godel number with ids in descending order. An
    empty set (a region touching only workspace corners) is labeled 0.
    """
    ids = sorted((int(i) for i in adjacent), reverse=True)
    if any(i < 1 for i in ids):
        raise InputError("obstacle ids must be positive")
    if hole_index is not None:
        if len(ids) != 1 or hole_index < 1:
            raise InputError("a hole index needs exactly one obstacle and k >= 1")
        return -ids[0] * hole_index
    if not ids:
        return 0
    if len(ids) == 1:
        return ids[0]
    if len(ids) == 2:
        return n_obstacles * ids[0] + ids[1]
    return godel(ids)


# ---------------------------------------------------------------------------
# construction


def build_joint_cover(t, split=True):
    """Merge free simplices into regions; return ``(JointCover, AdjacencyGraph)``.

    With ``split`` false, regions are the whole components.
    """
    n = t.scene.n_obstacles if t.scene is not None else max(t.tags, default=0)
    sets = tuple(
        frozenset(t.tags[i] for i in simp if t.tags[i]) if not t.inside_obstacle[s] else None
        for s, simp in enumerate(t.simplices)
    )
    jc = _assemble(t, sets, n, frozenset(), split)
    return jc, adjacency_graph(jc)


def _components(t, sets):
    comp = [-1] * len(t.simplices)
    comps = []
    for s in range(len(t.simplices)):
        if sets[s] is None or comp[s] >= 0:
            continue
        cid = len(comps)
        members = []
        comp[s] = cid
        todo = [s]
        while todo:
            u = todo.pop()
            members.append(u)
            for nb in t.neighbors[u]:
                if nb >= 0 and comp[nb] < 0 and sets[nb] == sets[s]:
                    comp[nb] = cid
                    todo.append(nb)
        comps.append(sorted(members))
    return comp, comps


def _hole_obstacle(t, sets, members, comp, cid):
    """Obstacle id enclosing the component as a pocket, else None."""
    ids = sets[members[0]]
    if len(ids) != 1:
        return None
    (oid,) = ids
    for s in members:
        for nb in t.neighbors[s]:
            if nb < 0:
                return None
            if comp[nb] == cid:
                continue
            if sets[nb] is not None or t.inside_obstacle[nb] != oid:
                return None
    return oid


def _assemble(t, sets, n, removed, split):
    comp, comps = _components(t, sets)
    hole_count = {}
    comp_label = []
    comp_hole = []
    for cid, members in enumerate(comps):
        oid = _hole_obstacle(t, sets, members, comp, cid)
        if oid is None:
            comp_hole.append(None)
            comp_label.append(label_region(sets[members[0]], n))
        else:
            hole_count[oid] = hole_count.get(oid, 0) + 1
            comp_hole.append(hole_count[oid])
            comp_label.append(label_region(sets[members[0]], n, hole_count[oid]))

    piece = list(comp)
    if split:
        piece = _split_pieces(t, comp, comps)

    # canonical region ids: order pieces by their smallest simplex
    first = {}
    for s, p in enumerate(piece):
        if p >= 0 and p not in first:
            first[p] = s
    order = sorted(first, key=first.get)
    remap = {p: i for i, p in enumerate(order)}
    simplex_region = tuple(remap[p] if p >= 0 else -1 for p in piece)
    members = [[] for _ in order]
    for s, r in enumerate(simplex_region):
        if r >= 0:
            members[r].append(s)
    regions = []
    for r, ms in enumerate(members):
        cid = comp[ms[0]]
        compact = all(nb >= 0 for s in ms for nb in t.neighbors[s])
        regions.append(FreeRegion(r, sets[ms[0]], comp_label[cid], tuple(ms), compact, cid, comp_hole[cid]))
    pairs = set()
    for s, r in enumerate(simplex_region):
        if r < 0:
            continue
        for nb in t.neighbors[s]:
            if nb >= 0 and simplex_region[nb] >= 0 and simplex_region[nb] != r:
                pairs.add((min(r, simplex_region[nb]), max(r, simplex_region[nb])))
    return JointCover(t, tuple(regions), tuple(sorted(pairs)), simplex_region, sets, n, removed, split)


def _split_pieces(t, comp, comps):
    """Cut components until every piece is a dual tree and pieces share <= 1 facet."""
    # canonical BFS spanning forest per component
    parent = {}
    depth = {}
    tree = set()
    for members in comps:
        root = members[0]
        parent[root] = -1
        depth[root] = 0
        q = deque([root])
        while q:
            u = q.popleft()
            for nb in sorted(t.neighbors[u]):
                if nb >= 0 and comp[nb] == comp[root] and nb not in parent:
                    parent[nb] = u
                    depth[nb] = depth[u] + 1
                    tree.add((min(u, nb), max(u, nb)))
                    q.append(nb)
    cut = set()

    def tree_path(a, b):
        """Tree edges on the path between simplices a and b of one component."""
        left, right = [], []
        while a != b:
            if depth[a] >= depth[b]:
                left.append((min(a, parent[a]), max(a, parent[a])))
                a = parent[a]
            else:
                right.append((min(b, parent[b]), max(b, parent[b])))
                b = parent[b]
        return left + right[::-1]

    while True:
        piece = _label_pieces(t, comp, tree, cut)
        violation = _first_violation(t, comp, tree, piece)
        if violation is None:
            return piece
        kind, data = violation
        if kind == "cycle":
            u, v = data
            path = tree_path(u, v)
            if len(path) >= 2:
                a = len(path) // 3
                b = max(a + 1, (2 * len(path)) // 3)
                cut.add(path[a])
                cut.add(path[min(b, len(path) - 1)])
            else:
                cut.add(path[0])
        else:
            (a1, b1), (a2, b2) = data
            path = tree_path(a1, a2) if a1 != a2 else tree_path(b1, b2)
            cut.add(path[len(path) // 2])


def _label_pieces(t, comp, tree, cut):
    piece = [-1] * len(comp)
    nxt = 0
    adj = {}
    for a, b in tree:
        if (a, b) not in cut:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    for s in range(len(comp)):
        if comp[s] < 0 or piece[s] >= 0:
            continue
        piece[s] = nxt
        todo = [s]
        while todo:
            u = todo.pop()
            for v in adj.get(u, ()):
                if piece[v] < 0:
                    piece[v] = nxt
                    todo.append(v)
        nxt += 1
    return piece


def _first_violation(t, comp, tree, piece):
    shared = {}
    for s in range(len(comp)):
        if piece[s] < 0:
            continue
        for nb in t.neighbors[s]:
            if nb <= s or piece[nb] < 0:
                continue
            if piece[nb] == piece[s]:
                if (s, nb) not in tree:
                    return "cycle", (s, nb)
                continue
            key = (piece[s], piece[nb])
            rev = (piece[nb], piece[s])
            if rev in shared:
                first = shared[rev]
                a, b = first
                return "multi", ((b, a), (s, nb))
            if key in shared:
                return "multi", (shared[key], (s, nb))
            shared[key] = (s, nb)
    return None


def adjacency_graph(jc):
    nodes = tuple(i for i in range(1, jc.n_obstacles + 1) if i not in jc.removed)
    hyper = sorted({tuple(sorted(r.adjacent_obstacles)) for r in jc.regions if len(r.adjacent_obstacles) >= 2})
    return AdjacencyGraph(nodes, tuple(hyper))


def workspace_complex(jc):
    """S_W: regions as vertices, shared facets as edges, and in 3D the
    pairwise-adjacent region triples around a free interior edge."""
    tris = set()
    if jc.dim == 3:
        t = jc.triangulation
        adj = set(jc.adjacency)
        around = {}
        for s, simp in enumerate(t.simplices):
            for e in combinations(simp, 2):
                around.setdefault(e, []).append(s)
        for e, ss in around.items():
            if any(jc.simplex_region[s] < 0 for s in ss) or not _interior_edge(t, e, ss):
                continue
            regs = sorted({jc.simplex_region[s] for s in ss})
            for tri in combinations(regs, 3):
                if all(p in adj for p in combinations(tri, 2)):
                    tris.add(tri)
    return WorkspaceComplex(tuple(r.id for r in jc.regions), jc.adjacency, tuple(sorted(tris)))


def _interior_edge(t, e, ss):
    # an edge is interior when its simplices close up around it (no hull facet contains it)
    es = set(e)
    for s in ss:
        for k, nb in enumerate(t.neighbors[s]):
            if nb < 0 and es <= set(t.facet(s, k)):
                return False
    return True


# ---------------------------------------------------------------------------
# queries and what-if


def what_if_remove(jc, g, obstacle):
    """Cover and G_A with ``obstacle`` deleted, without re-triangulating.

    Simplices inside the obstacle become free, the id is dropped from every
    adjacent set, and components re-merge. Regions are not re-split.
    """
    if obstacle not in g.nodes:
        raise InputError(f"unknown obstacle id {obstacle}")
    t = jc.triangulation
    removed = jc.removed | {obstacle}
    sets = tuple(
        frozenset(t.tags[i] for i in simp if t.tags[i] and t.tags[i] not in removed)
        if (t.inside_obstacle[s] == 0 or t.inside_obstacle[s] in removed) else None
        for s, simp in enumerate(t.simplices)
    )
    new = _assemble(t, sets, jc.n_obstacles, removed, False)
    return new, adjacency_graph(new)


def region_of_point(jc, p):
    """Region id containing ``p``; boundary points resolve to the smallest id."""
    t = jc.triangulation
    p = geom.as_point(p, t.dim)
    scene = t.scene
    if scene is not None:
        if not scene.in_bounds(p):
            raise ContainmentError(f"point {geom.to_float(p)} is outside the workspace")
        for ob in scene.obstacles:
            if ob.id not in jc.removed and ob.classify(p) == INTERIOR:
                raise ContainmentError(f"point {geom.to_float(p)} is inside obstacle {ob.id}")
    star = t.star(p)
    if not star:
        raise ContainmentError(f"point {geom.to_float(p)} is outside the triangulated workspace")
    regs = {jc.simplex_region[s] for s in star if jc.simplex_region[s] >= 0}
    if regs:
        return min(regs)
    # the point sits in a flagged simplex that pokes out of its obstacle
    seen = set(star)
    frontier = list(star)
    while frontier:
        nxt = []
        found = set()
        for s in frontier:
            for nb in t.neighbors[s]:
                if nb >= 0 and nb not in seen:
                    seen.add(nb)
                    if jc.simplex_region[nb] >= 0:
                        found.add(jc.simplex_region[nb])
                    nxt.append(nb)
        if found:
            return min(found)
        frontier = nxt
    raise QueryError("cover has no free region")


def simplex_of_point(jc, p):
    """A free simplex containing ``p`` (smallest id among the free star)."""
    t = jc.triangulation
    star = t.star(geom.as_point(p, t.dim))
    free = [s for s in star if jc.simplex_region[s] >= 0]
    return min(free) if free else -1


def first_betti_number(jc):
    """Rank of H_1 (over GF(2)) of the closed free subcomplex."""
    t = jc.triangulation
    free = [t.simplices[s] for s in range(len(t.simplices)) if jc.simplex_region[s] >= 0]
    verts = sorted({v for s in free for v in s})
    edges = sorted({e for s in free for e in combinations(s, 2)})
    tris = sorted({f for s in free for f in combinations(s, 3)})
    eidx = {e: i for i, e in enumerate(edges)}
    # rank of the vertex-edge boundary = V - components
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = len(verts)
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    rank1 = len(verts) - comps
    pivots = {}
    rank2 = 0
    for f in tris:
        row = 0
        for e in combinations(f, 2):
            row |= 1 << eidx[e]
        while row:
            top = row.bit_length() - 1
            if top in pivots:
                row ^= pivots[top]
            else:
                pivots[top] = row
                rank2 += 1
                break
    return len(edges) - rank1 - rank2


def is_hole_free(jc):
    """True when the free space has no 1-dimensional hole (first Betti number 0)."""
    return first_betti_number(jc) == 0
