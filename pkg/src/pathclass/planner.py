"""Planning on the workspace and robot complexes.

Steps: search region sequences on S_W, realize a base point path through
shared-facet centroids, split it into mutually visible pieces, interpolate a
planar chain along it, and certify non-existence when no sequence survives.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice

import networkx as nx

from . import geom
from .errors import NonExistenceError, PlanningError, QueryError, ResolutionError, UnsupportedError
from .jointcover import simplex_of_point
from .robot import CollisionModel, build_complex, link_length_error
from .scene import obstacle_distance
from .states import (
    StateRep,
    complex_view,
    contract,
    densify,
    reduce_sequence,
    region_sequence,
)


@dataclass(frozen=True)
class TopologicalPath:
    """Contracted states from start to goal plus the base region sequence."""

    states: tuple
    regions: tuple


@dataclass
class GeometricPlan:
    waypoints: list
    regions: list
    valid: list
    topological: TopologicalPath | None = None

    @property
    def ok(self):
        return all(self.valid)


@dataclass
class NonExistenceCertificate:
    """Why no path was found.

    ``kind`` is ``"connectivity"`` (``cut`` holds the start component) or
    ``"embedding-infeasible"`` (``sequences`` pairs each region sequence with
    the regions that failed the clearance test).
    """

    kind: str
    cut: tuple = ()
    sequences: list = field(default_factory=list)
    length_bound: int | None = None
    heuristic: bool = False
    complete: bool = True

    def summary(self):
        if self.kind == "connectivity":
            return f"no region sequence connects start and goal ({len(self.cut)} regions reachable)"
        return (f"all {len(self.sequences)} region sequences up to length {self.length_bound} "
                f"contain regions too narrow for the robot")

    def to_dict(self):
        return {
            "kind": self.kind,
            "cut": list(self.cut),
            "sequences": [{"regions": list(s), "pruned": list(p)} for s, p in self.sequences],
            "length_bound": self.length_bound,
            "heuristic": self.heuristic,
            "complete": self.complete,
        }


# ---------------------------------------------------------------------------
# step 1-2: topological search


def _whole_robot(region, s_b):
    return StateRep(tuple((region, k) for k in range(len(s_b.vertices))))


def _topological(seq, start, goal, view, s_b):
    states = [contract(start, view, s_b)]
    for r in seq[1:-1]:
        states.append(contract(_whole_robot(r, s_b), view, s_b))
    states.append(contract(goal, view, s_b))
    return TopologicalPath(tuple(reduce_sequence(states)), tuple(seq))


def search_topological(start, goal, jc, s_w, s_b, k=1, graph=None):
    """Up to ``k`` class-distinct topological paths, shortest first.

    The base key point's region walks a simple path on S_W; interior entries
    place the whole robot in one region. Ties in length break on the region
    id sequence. Raises NonExistenceError with a connectivity certificate
    when the goal region is unreachable.
    """
    g = s_w.graph() if graph is None else graph
    rs, rg = start.pairs[0][0], goal.pairs[0][0]
    view = complex_view(jc, s_w)
    if rs not in g or rg not in g or not nx.has_path(g, rs, rg):
        reach = nx.node_connected_component(g, rs) if rs in g else {rs}
        raise NonExistenceError(NonExistenceCertificate("connectivity", tuple(sorted(reach))))
    if rs == rg:
        seqs = [[rs]]
    else:
        seqs = []
        bound = None
        for path in nx.shortest_simple_paths(g, rs, rg):
            if len(seqs) >= k and len(path) > bound:
                break
            seqs.append(path)
            if len(seqs) == k:
                bound = len(path)
        seqs.sort(key=lambda p: (len(p), p))
        seqs = seqs[:k]
    out = []
    seen = set()
    for seq in seqs:
        tp = _topological(seq, start, goal, view, s_b)
        if tp.states not in seen:
            seen.add(tp.states)
            out.append(tp)
    return out


# ---------------------------------------------------------------------------
# step 3: realize a point path


def _facet_centroid(t, facet):
    return geom.centroid([t.points[i] for i in facet])


def _region_simplex_with(jc, region, p):
    t = jc.triangulation
    for s in t.star(p):
        if jc.simplex_region[s] == region:
            return s
    s = simplex_of_point(jc, p)
    return s


def _segment_in_region(jc, region, a, b):
    try:
        _, simplices = densify([a, b], jc)
    except (QueryError, ResolutionError):
        return False
    return all(jc.simplex_region[s] == region for s in simplices[1:-1]) and all(
        jc.simplex_region[s] == region or region in _star_regions(jc, p)
        for s, p in ((simplices[0], a), (simplices[-1], b))
    )


def _star_regions(jc, p):
    return {jc.simplex_region[s] for s in jc.triangulation.star(p)}


def _dual_route(jc, region, s_from, s_to):
    """Intra-region facet centroids along the dual BFS route s_from -> s_to."""
    t = jc.triangulation
    prev = {s_from: None}
    q = deque([s_from])
    while q:
        u = q.popleft()
        if u == s_to:
            break
        for k, nb in enumerate(t.neighbors[u]):
            if nb >= 0 and nb not in prev and jc.simplex_region[nb] == region:
                prev[nb] = (u, k)
                q.append(nb)
    if s_to not in prev:
        return []
    out = []
    u = s_to
    while prev[u] is not None:
        v, k = prev[u]
        out.append(_facet_centroid(t, t.facet(v, k)))
        u = v
    return out[::-1]


def realize_point_path(tp, jc, start_point, goal_point):
    """Polyline from start to goal through centroids of the facets shared by
    consecutive regions; legs that leave their region are rerouted through
    centroids of intra-region facets."""
    t = jc.triangulation
    regions = list(tp.regions)
    anchors = [geom.as_point(start_point, t.dim)]
    for a, b in zip(regions, regions[1:]):
        facets = jc.shared_facets(a, b)
        anchors.append(_facet_centroid(t, facets[0]))
    anchors.append(geom.as_point(goal_point, t.dim))
    out = [anchors[0]]
    for i, region in enumerate(regions):
        x, y = anchors[i], anchors[i + 1]
        if x == y:
            continue
        if not _segment_in_region(jc, region, x, y):
            sx = _region_simplex_with(jc, region, x)
            sy = _region_simplex_with(jc, region, y)
            out.extend(_dual_route(jc, region, sx, sy))
        out.append(y)
    return out


# ---------------------------------------------------------------------------
# step 4: visibility split


def _visible(a, b, pieces, scene, clearance):
    for piece in pieces:
        lo, hi = piece.bbox
        if any(max(a[k], b[k]) < lo[k] - clearance or min(a[k], b[k]) > hi[k] + clearance
               for k in range(len(a))):
            continue
        if geom.segment_crosses_interior(a, b, piece):
            return False
        if clearance > 0 and _segment_piece_distance(a, b, piece) <= clearance:
            return False
    mid = tuple(geom.exact((Fraction(a[k]) + Fraction(b[k])) / 2) for k in range(len(a)))
    return scene.obstacle_at(mid) == 0


def _segment_piece_distance(a, b, piece):
    if piece.dim != 2:
        return min(geom.dist_point_segment(v, a, b) for v in piece.vertices)
    from . import kernels

    ring = [geom.to_float(v) for v in piece.vertices]
    return kernels.segment_polygon_dist(*geom.to_float(a), *geom.to_float(b), ring)


def split_visible(fp, jc, clearance=0.0):
    """Greedy maximal pieces whose endpoints see each other.

    Each piece ``fp[i..j]`` ends at the farthest ``j`` whose straight segment
    from ``fp[i]`` avoids obstacle interiors (and keeps distance greater than
    ``clearance`` when positive); adjacent samples always form a piece.
    """
    scene = jc.triangulation.scene
    pieces_geo = [p for ob in scene.obstacles if ob.id not in jc.removed for p in ob.pieces]
    pts = [geom.as_point(p, scene.dim) for p in fp]
    if len(pts) < 2:
        return [pts]
    out = []
    i = 0
    while i < len(pts) - 1:
        j = len(pts) - 1
        while j > i + 1 and not _visible(pts[i], pts[j], pieces_geo, scene, clearance):
            j -= 1
        out.append(pts[i:j + 1])
        i = j
    return out


def shortcut(pieces):
    """Polyline through the piece endpoints."""
    if not pieces:
        return []
    return [pieces[0][0]] + [p[-1] for p in pieces]


# ---------------------------------------------------------------------------
# step 5-6: chain interpolation


def _serial_order(s_b):
    if not s_b.edges:
        return [0]
    if len(s_b.chains) != 1 or s_b.chains[0].closed:
        raise UnsupportedError("interpolation supports a single open chain or a point robot")
    return list(s_b.chains[0].points)


def _sample_polyline(pts, step):
    """Points along the polyline with consecutive spacing <= step."""
    out = [pts[0]]
    for a, b in zip(pts, pts[1:]):
        n = max(1, math.ceil(math.dist(a, b) / step))
        for i in range(1, n + 1):
            out.append((a[0] + (b[0] - a[0]) * i / n, a[1] + (b[1] - a[1]) * i / n))
    return out


def _trail_angle(history, cur, length):
    """Direction from ``cur`` to the latest point of ``history`` (searched
    backwards) at distance ``length``, or None."""
    for j in range(len(history) - 1, 0, -1):
        p, q = history[j - 1], history[j]
        if math.dist(p, cur) < length:
            continue
        # |q + u (p - q) - cur| = length for the u in [0, 1] nearest q
        dx, dy = p[0] - q[0], p[1] - q[1]
        fx, fy = q[0] - cur[0], q[1] - cur[1]
        aa = dx * dx + dy * dy
        bb = 2 * (fx * dx + fy * dy)
        cc = fx * fx + fy * fy - length * length
        disc = bb * bb - 4 * aa * cc
        if aa == 0 or disc < 0:
            continue
        r = math.sqrt(disc)
        us = [u for u in ((-bb - r) / (2 * aa), (-bb + r) / (2 * aa)) if 0 <= u <= 1]
        if not us:
            continue
        u = min(us)
        x, y = q[0] + u * dx, q[1] + u * dy
        return math.atan2(y - cur[1], x - cur[0])
    return None


def interpolate_chain(pieces, spec, jc, step, start_config, angle_steps=64, rings=3, max_halvings=8):
    """Waypoints for a planar open chain whose base follows the pieces.

    The base advances along the pieces by at most ``step``. Link angles are
    then chosen joint by joint by greedy projection: candidates fan out from
    a reference angle in increments of ``2 pi / angle_steps`` (``rings``
    half-turns at most), and the first one that is collision-free and moves
    its key point by at most ``step`` wins. The reference is the angle that
    keeps the link on the base's traced path, or the previous angle when the
    trace is too short. A stuck step is retried with half the base advance;
    failure after ``max_halvings`` retries raises PlanningError.
    """
    scene = jc.triangulation.scene
    if scene.dim != 2:
        raise UnsupportedError("chain interpolation is planar only")
    s_b = build_complex(spec)
    order = _serial_order(s_b)
    model = CollisionModel(scene)
    base_path = [geom.to_float(p) for p in shortcut(pieces)]
    start = [tuple(map(float, p)) for p in start_config]
    targets = _sample_polyline(base_path, step)
    if math.dist(targets[0], start[order[0]]) > 1e-12:
        targets.insert(0, start[order[0]])
    lengths = list(s_b.chains[0].lengths) if s_b.edges else []
    angles = [math.atan2(start[b][1] - start[a][1], start[b][0] - start[a][0])
              for a, b in zip(order, order[1:])]
    history = [start[k] for k in reversed(order)]
    pose = list(start)
    waypoints = [list(pose)]
    delta = 2 * math.pi / angle_steps
    point_spec = _LinkSpec((), spec.link_width)

    def place(base, prev_angles, prev_pose):
        trace = history + [base]
        new_angles = []
        pts = {order[0]: base}
        cur = base
        for i, (l, a_prev) in enumerate(zip(lengths, prev_angles)):
            key = order[i + 1]
            ref = _trail_angle(trace, cur, l)
            a0 = a_prev if ref is None else ref
            link = _LinkSpec(((0, 1, l),), spec.link_width)
            found = None
            for m in range(rings * angle_steps // 2 + 1):
                for sgn in ((0,) if m == 0 else (1, -1)):
                    a = a0 + sgn * m * delta
                    p = (cur[0] + l * math.cos(a), cur[1] + l * math.sin(a))
                    if math.dist(p, prev_pose[key]) > step or model.collides(link, [cur, p]):
                        continue
                    found = (a, p)
                    break
                if found:
                    break
            if found is None:
                return None
            new_angles.append(found[0])
            pts[key] = found[1]
            cur = found[1]
        return new_angles, [pts[k] for k in range(len(prev_pose))]

    idx = 1
    cur_base = targets[0]
    while idx < len(targets):
        target = targets[idx]
        frac = 1.0
        for _ in range(max_halvings + 1):
            base = (cur_base[0] + (target[0] - cur_base[0]) * frac,
                    cur_base[1] + (target[1] - cur_base[1]) * frac)
            res = None if model.collides(point_spec, [base]) else place(base, angles, pose)
            if res is not None:
                break
            frac /= 2
        else:
            raise PlanningError(f"interpolation stuck near base position {cur_base}")
        angles, pose = res
        waypoints.append(list(pose))
        history.append(base)
        cur_base = base
        if frac == 1.0:
            idx += 1
    valid = [not model.collides(spec, w) and link_length_error(spec, w) <= 1e-9 for w in waypoints]
    regions = [region_sequence(piece, jc) for piece in pieces]
    return GeometricPlan(waypoints, regions, valid)


class _LinkSpec:
    def __init__(self, links, width):
        self.links = links
        self.link_width = width


# ---------------------------------------------------------------------------
# existence


def region_clearance(jc, scene, cache=None):
    """Minimum distance between any two obstacles adjacent to each region
    (infinite for regions adjacent to fewer than two obstacles)."""
    cache = {} if cache is None else cache
    out = []
    for r in jc.regions:
        ids = sorted(r.adjacent_obstacles)
        best = math.inf
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                key = (ids[i], ids[j])
                if key not in cache:
                    cache[key] = obstacle_distance(scene.obstacle(ids[i]), scene.obstacle(ids[j]))
                best = min(best, cache[key])
        out.append(best)
    return out


def pruned_graph(jc, s_w, min_width, keep=()):
    """S_W without regions whose clearance is below ``min_width``."""
    g = s_w.graph()
    if min_width <= 0:
        return g, []
    clear = region_clearance(jc, jc.triangulation.scene)
    bad = [r for r, c in enumerate(clear) if c < min_width and r not in keep]
    g.remove_nodes_from(bad)
    return g, bad


@dataclass
class Existence:
    exists: bool
    witness: tuple = ()
    certificate: NonExistenceCertificate | None = None


def check_existence(start, goal, jc, s_w, spec, length_bound=12, max_sequences=10000):
    """Connectivity test on S_W, then clearance pruning of region sequences.

    Regions whose obstacle clearance is below twice the link width cannot
    hold the robot. Non-existence from pruning is marked heuristic.
    """
    rs, rg = start.pairs[0][0], goal.pairs[0][0]
    g = s_w.graph()
    if not nx.has_path(g, rs, rg):
        reach = nx.node_connected_component(g, rs)
        return Existence(False, certificate=NonExistenceCertificate("connectivity", tuple(sorted(reach))))
    width = 2 * spec.link_width
    pg, bad = pruned_graph(jc, s_w, width, keep=(rs, rg))
    if nx.has_path(pg, rs, rg):
        return Existence(True, witness=tuple(nx.shortest_path(pg, rs, rg)))
    bad = set(bad)
    seqs = []
    complete = True
    paths = nx.all_simple_paths(g, rs, rg, cutoff=max(1, length_bound - 1))
    for path in islice(paths, max_sequences + 1):
        if len(seqs) == max_sequences:
            complete = False
            break
        seqs.append((tuple(path), tuple(r for r in path if r in bad)))
    seqs.sort(key=lambda x: (len(x[0]), x[0]))
    cert = NonExistenceCertificate("embedding-infeasible", sequences=seqs, length_bound=length_bound,
                                   heuristic=True, complete=complete)
    return Existence(False, certificate=cert)


# ---------------------------------------------------------------------------
# full pipeline


@dataclass
class PlanResult:
    plans: list
    topological: list
    certificate: NonExistenceCertificate | None = None
    failures: list = field(default_factory=list)


def plan(jc, s_w, spec, start_config, goal_config, k=1, step=0.1, length_bound=12, angle_steps=64):
    """Run the planning pipeline; returns a PlanResult."""
    from .states import state_of

    s_b = build_complex(spec)
    start = state_of(start_config, jc)
    goal = state_of(goal_config, jc)
    ex = check_existence(start, goal, jc, s_w, spec, length_bound)
    if not ex.exists:
        return PlanResult([], [], ex.certificate)
    g, _ = pruned_graph(jc, s_w, 2 * spec.link_width, keep=(start.pairs[0][0], goal.pairs[0][0]))
    tps = search_topological(start, goal, jc, s_w, s_b, k, graph=g)
    order = _serial_order(s_b)
    base_s, base_g = start_config[order[0]], goal_config[order[0]]
    plans = []
    failures = []
    for tp in tps:
        fp = realize_point_path(tp, jc, base_s, base_g)
        if jc.dim == 2:
            pieces = split_visible(fp, jc, clearance=spec.link_width)
            try:
                gp = interpolate_chain(pieces, spec, jc, step, start_config, angle_steps=angle_steps)
            except PlanningError as exc:
                failures.append(str(exc))
                continue
        else:
            if spec.links:
                raise UnsupportedError("3D planning covers point robots only")
            pts = [geom.to_float(p) for p in fp]
            gp = GeometricPlan([[p] for p in pts], [], [True] * len(pts))
        gp.topological = tp
        plans.append(gp)
    if not plans:
        cert = NonExistenceCertificate("embedding-infeasible", sequences=[(tp.regions, ()) for tp in tps],
                                       length_bound=length_bound, heuristic=True, complete=False)
        return PlanResult([], tps, cert, failures)
    return PlanResult(plans, tps, None, failures)
