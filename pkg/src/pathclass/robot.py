"""Robot key-point complex S_B and planar chain geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import geom, kernels
from .errors import SpecError, UnsupportedError


@dataclass(frozen=True)
class RobotSpec:
    """Key points joined by fixed-length links.

    ``joint_limits`` maps a link index to an ``(lo, hi)`` range in radians
    for the link's angle relative to the previous link of its chain.
    """

    key_points: tuple
    links: tuple
    link_width: float = 0.0
    joint_limits: dict = field(default_factory=dict)

    @property
    def k(self):
        return len(self.key_points)

    def index(self, name):
        try:
            return self.key_points.index(name)
        except ValueError:
            raise SpecError(f"unknown key point {name!r}") from None


def make_spec(key_points, links, link_width=0.0, joint_limits=None, reconfigurable=False):
    """Validate and build a :class:`RobotSpec`.

    ``links`` holds ``(a, b, length)`` triples naming key points.
    """
    if reconfigurable:
        raise SpecError("reconfigurable robots are not supported")
    names = tuple(str(n) for n in key_points)
    if not names:
        raise SpecError("robot needs at least one key point")
    if len(set(names)) != len(names):
        raise SpecError("key point names must be unique")
    index = {n: i for i, n in enumerate(names)}
    out = []
    seen = set()
    for item in links:
        try:
            a, b, length = item
        except (TypeError, ValueError):
            raise SpecError(f"link must be (a, b, length), got {item!r}") from None
        if str(a) not in index or str(b) not in index:
            raise SpecError(f"link {item!r} names an unknown key point")
        ia, ib = index[str(a)], index[str(b)]
        length = float(length)
        if ia == ib:
            raise SpecError(f"link {item!r} is a self-loop")
        if not length > 0 or not math.isfinite(length):
            raise SpecError(f"link {item!r} needs a positive length")
        key = (min(ia, ib), max(ia, ib))
        if key in seen:
            raise SpecError(f"duplicate link {item!r}")
        seen.add(key)
        out.append((ia, ib, length))
    width = float(link_width)
    if width < 0 or not math.isfinite(width):
        raise SpecError("link_width must be a non-negative number")
    limits = {}
    for k, rng in (joint_limits or {}).items():
        lo, hi = (float(x) for x in rng)
        if lo > hi:
            raise SpecError(f"joint limit {k}: lo > hi")
        limits[int(k)] = (lo, hi)
    spec = RobotSpec(names, tuple(out), width, limits)
    _check_connected(spec)
    return spec


def _check_connected(spec):
    adj = {i: set() for i in range(spec.k)}
    for a, b, _ in spec.links:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    todo = [0]
    while todo:
        u = todo.pop()
        for v in adj[u] - seen:
            seen.add(v)
            todo.append(v)
    if len(seen) != spec.k:
        raise SpecError("link graph is disconnected")


def point_robot():
    return make_spec(["p"], [])


def serial_chain(lengths, link_width=0.0, prefix="q"):
    """Open chain q0-q1-...-qn with the given link lengths."""
    names = [f"{prefix}{i}" for i in range(len(lengths) + 1)]
    return make_spec(names, [(names[i], names[i + 1], l) for i, l in enumerate(lengths)], link_width)


@dataclass(frozen=True)
class Chain:
    """Key-point indices along a chain; closed chains repeat no vertex."""

    points: tuple
    lengths: tuple
    closed: bool

    @property
    def edges(self):
        n = len(self.points)
        m = n if self.closed else n - 1
        return tuple((self.points[i], self.points[(i + 1) % n]) for i in range(m))


@dataclass(frozen=True)
class RobotComplex:
    """S_B: key points, links, and the chain decomposition."""

    spec: RobotSpec
    vertices: tuple
    edges: tuple
    chains: tuple

    @property
    def closed_flags(self):
        return tuple(c.closed for c in self.chains)

    def has_edge(self, a, b):
        return (min(a, b), max(a, b)) in self._edge_set()

    def _edge_set(self):
        cached = self.__dict__.get("_es")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_es", cached)
        return cached

    def fingerprint(self):
        return repr((self.spec.key_points, self.spec.links, self.spec.link_width))


def build_complex(spec):
    """Decompose the link graph into maximal open paths between vertices of
    degree other than 2, closed chains through a branch vertex, and cycles."""
    _check_connected(spec)
    length = {}
    adj = {i: [] for i in range(spec.k)}
    for a, b, l in spec.links:
        adj[a].append(b)
        adj[b].append(a)
        length[(min(a, b), max(a, b))] = l
    for v in adj:
        adj[v].sort()
    used = set()
    chains = []

    def walk(start, nxt):
        pts = [start]
        prev, cur = start, nxt
        used.add((min(prev, cur), max(prev, cur)))
        while cur != start and len(adj[cur]) == 2:
            pts.append(cur)
            a, b = adj[cur]
            step = b if a == prev else a
            prev, cur = cur, step
            used.add((min(prev, cur), max(prev, cur)))
        if cur == start:
            return pts, True
        pts.append(cur)
        return pts, False

    for v in range(spec.k):
        if len(adj[v]) == 2:
            continue
        for w in adj[v]:
            if (min(v, w), max(v, w)) in used:
                continue
            pts, closed = walk(v, w)
            if not closed and pts[-1] < pts[0]:
                pts.reverse()
            chains.append(_chain(pts, closed, length))
    for v in range(spec.k):
        for w in adj[v]:
            if (min(v, w), max(v, w)) not in used:
                pts, closed = walk(v, w)
                chains.append(_chain(pts, closed, length))
    chains.sort(key=lambda c: (c.points, c.closed))
    edges = tuple(sorted(length))
    return RobotComplex(spec, tuple(range(spec.k)), edges, tuple(chains))


def _chain(pts, closed, length):
    n = len(pts)
    m = n if closed else n - 1
    ls = tuple(length[(min(pts[i], pts[(i + 1) % n]), max(pts[i], pts[(i + 1) % n]))] for i in range(m))
    return Chain(tuple(pts), ls, closed)


def chain_pose(chain, base, angles):
    """Key-point positions of an open planar chain from absolute link angles.

    ``chain`` is a :class:`Chain` or a sequence of link lengths.
    """
    if isinstance(chain, Chain):
        if chain.closed:
            raise UnsupportedError("closed chains embed as rigid bodies; use rigid_pose")
        lengths = chain.lengths
    else:
        lengths = tuple(float(l) for l in chain)
    if len(angles) != len(lengths):
        raise SpecError(f"expected {len(lengths)} angles, got {len(angles)}")
    x, y = (float(c) for c in base)
    out = [(x, y)]
    for l, a in zip(lengths, angles):
        x += l * math.cos(a)
        y += l * math.sin(a)
        out.append((x, y))
    return out


def chain_angles(positions):
    """Absolute link angles of a planar chain pose."""
    return [math.atan2(b[1] - a[1], b[0] - a[0]) for a, b in zip(positions, positions[1:])]


def rigid_pose(reference, base, angle):
    """Rotate a closed chain's reference shape about its first point, then translate."""
    c, s = math.cos(angle), math.sin(angle)
    x0, y0 = (float(v) for v in reference[0])
    bx, by = (float(v) for v in base)
    return [
        (bx + c * (float(x) - x0) - s * (float(y) - y0), by + s * (float(x) - x0) + c * (float(y) - y0))
        for x, y in reference
    ]


class CollisionModel:
    """Obstacle rings prepared once for repeated capsule checks."""

    def __init__(self, scene):
        if scene.dim != 2:
            raise UnsupportedError("collision checks are planar only")
        rings = [[geom.to_float(v) for v in p.vertices] for ob in scene.obstacles for p in ob.pieces]
        self.polys = kernels.polygons(rings) if rings else None
        self.lo = geom.to_float(scene.lo)
        self.hi = geom.to_float(scene.hi)

    def collides(self, spec, positions):
        for x, y in positions:
            if not (self.lo[0] <= x <= self.hi[0] and self.lo[1] <= y <= self.hi[1]):
                return True
        if self.polys is None:
            return False
        if spec.links:
            segs = [(*positions[a], *positions[b]) for a, b, _ in spec.links]
        else:
            segs = [(*p, *p) for p in positions]
        return bool(kernels.capsules_hit(segs, spec.link_width, self.polys))


def pose_collides(scene, spec, positions):
    """True iff a link capsule of radius ``link_width`` meets an obstacle, or a
    key point leaves the workspace box."""
    return CollisionModel(scene).collides(spec, [tuple(map(float, p)) for p in positions])


def link_length_error(spec, positions):
    """Largest absolute deviation of a link length from its specification."""
    err = 0.0
    for a, b, l in spec.links:
        err = max(err, abs(math.dist(positions[a], positions[b]) - l))
    return err
