"""Robot states, their contraction, path representations and path classes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import geom
from .errors import ComparisonError, ContainmentError, InputError, ResolutionError
from .jointcover import primes, region_of_point, simplex_of_point


@dataclass(frozen=True)
class StateRep:
    """L(.): one (region id, key-point index) pair per key point."""

    pairs: tuple

    @property
    def regions(self):
        return tuple(r for r, _ in self.pairs)


@dataclass(frozen=True)
class ContractedRep:
    """L^c(.): canonical blocks of (region ids, key-point indices)."""

    blocks: tuple

    @property
    def code(self):
        return encode_blocks(self.blocks)

    @property
    def regions(self):
        return tuple(sorted({r for regs, _ in self.blocks for r in regs}))

    def to_json(self):
        return [[list(r), list(k)] for r, k in self.blocks]


def state_of(configuration, jc):
    """Map each key point of a configuration to its region."""
    pairs = []
    for k, p in enumerate(configuration):
        try:
            r = region_of_point(jc, p)
        except ContainmentError as exc:
            raise InputError(f"invalid configuration: key point {k}: {exc}") from exc
        pairs.append((r, k))
    return StateRep(tuple(pairs))


def contract(l, s_w, s_b):
    """Contract a state to its canonical block list.

    Blocks start as single (region, key point) pairs and merge to a fixed
    point: (1) blocks on the same region set joined by an S_B link; (2)
    blocks joined by an S_B link whose combined regions form an S_W edge of
    compact regions. Accepts a StateRep or an already contracted rep.
    """
    if isinstance(l, ContractedRep):
        blocks = [(frozenset(r), frozenset(k)) for r, k in l.blocks]
    else:
        blocks = [(frozenset([r]), frozenset([k])) for r, k in l.pairs]
    compact = s_w.compact if hasattr(s_w, "compact") else None
    changed = True
    while changed:
        changed = False
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                if _mergeable(blocks[i], blocks[j], s_w, s_b, compact):
                    blocks[i] = (blocks[i][0] | blocks[j][0], blocks[i][1] | blocks[j][1])
                    del blocks[j]
                    changed = True
                    break
            if changed:
                break
    out = sorted((tuple(sorted(r)), tuple(sorted(k))) for r, k in blocks)
    return ContractedRep(tuple(out))


def _linked(ka, kb, s_b):
    return any(s_b.has_edge(a, b) for a in ka for b in kb)


def _mergeable(a, b, s_w, s_b, compact):
    if not _linked(a[1], b[1], s_b):
        return False
    if a[0] == b[0]:
        return True
    union = a[0] | b[0]
    if len(union) != 2 or compact is None:
        return False
    x, y = sorted(union)
    return s_w.has_edge(x, y) and compact(x) and compact(y)


@dataclass(frozen=True)
class ComplexView:
    """S_W adjacency plus region compactness, as consumed by :func:`contract`."""

    s_w: object
    flags: tuple

    def has_edge(self, a, b):
        return self.s_w.has_edge(a, b)

    def compact(self, r):
        return self.flags[r]


def complex_view(jc, s_w):
    return ComplexView(s_w, tuple(r.compact for r in jc.regions))


# ---------------------------------------------------------------------------
# canonical integer encoding


def _tokens(blocks):
    toks = [len(blocks)]
    for regs, kps in blocks:
        toks.append(len(regs))
        toks.extend(regs)
        toks.append(len(kps))
        toks.extend(kps)
    return toks


def encode_blocks(blocks):
    """Prime-power code prod p_j^(t_j + 1) of the length-prefixed token list."""
    toks = _tokens(blocks)
    out = 1
    for p, t in zip(primes(len(toks)), toks):
        out *= p ** (t + 1)
    return out


def decode_blocks(code):
    """Inverse of :func:`encode_blocks`."""
    toks = []
    k = 2
    found = []
    while code > 1:
        if all(k % p for p in found if p * p <= k):
            found.append(k)
            e = 0
            while code % k == 0:
                code //= k
                e += 1
            if e == 0:
                raise InputError("not a valid state code")
            toks.append(e - 1)
        k += 1
    it = iter(toks)
    n = next(it)
    blocks = []
    for _ in range(n):
        nr = next(it)
        regs = tuple(next(it) for _ in range(nr))
        nk = next(it)
        kps = tuple(next(it) for _ in range(nk))
        blocks.append((regs, kps))
    return tuple(blocks)


# ---------------------------------------------------------------------------
# path representations


@dataclass(frozen=True)
class PathRepresentation:
    """Sequence of contracted states, consecutive duplicates removed and
    immediate backtracks cancelled."""

    entries: tuple
    provenance: tuple

    def codes(self):
        return [e.code for e in self.entries]

    def __len__(self):
        return len(self.entries)


def reduce_sequence(seq):
    """Drop consecutive repeats and cancel backtracks (A B A -> A)."""
    out = []
    for x in seq:
        if out and out[-1] == x:
            continue
        if len(out) >= 2 and out[-2] == x:
            out.pop()
            continue
        out.append(x)
    return out


def provenance(jc, s_b):
    return (jc.fingerprint(), s_b.fingerprint())


def path_representation(configs, jc, s_w, s_b):
    """Representation of a sampled configuration path.

    Consecutive samples must keep every key point in the same or an S_W
    adjacent region; otherwise a ResolutionError names the offending step.
    """
    view = complex_view(jc, s_w)
    prev = None
    reps = []
    for i, cfg in enumerate(configs):
        st = state_of(cfg, jc)
        if prev is not None:
            for (ra, k), (rb, _) in zip(prev.pairs, st.pairs):
                if ra != rb and not s_w.has_edge(ra, rb):
                    raise ResolutionError(
                        f"step {i}: key point {k} jumps from region {ra} to {rb}; sample the path more densely",
                        i,
                    )
        prev = st
        reps.append(contract(st, view, s_b))
    return PathRepresentation(tuple(reduce_sequence(reps)), provenance(jc, s_b))


def representation_from_states(states, jc, s_w, s_b):
    view = complex_view(jc, s_w)
    reps = [contract(st, view, s_b) for st in states]
    return PathRepresentation(tuple(reduce_sequence(reps)), provenance(jc, s_b))


def same_class(r1, r2):
    """Whether two representations are element-wise identical."""
    if r1.provenance != r2.provenance:
        raise ComparisonError("representations were built over different covers or robots")
    return r1.entries == r2.entries


def densify(polyline, jc):
    """Walk a polyline through the free simplices it traverses.

    Each segment is followed exactly: from the current point, the free
    simplex (among those whose closure holds it) that the segment stays in
    longest is taken, and its exit point becomes the next sample. Ties, as
    when a segment runs along a shared facet, go to the smaller region id.

    Returns ``(points, simplices)`` where ``simplices[i]`` is the simplex
    traversed up to ``points[i]``; the first entry is the simplex of the
    start point. Raises ContainmentError when the path leaves free space.
    """
    t = jc.triangulation
    pts = [geom.as_point(p, t.dim) for p in polyline]
    if not pts:
        return [], []
    first = simplex_of_point(jc, pts[0])
    if first < 0:
        region_of_point(jc, pts[0])  # raises with the reason
        first = _nearest_free(jc, pts[0])
    out_p = [pts[0]]
    out_s = [first]
    limit = 4 * len(t.simplices) + 8
    for a, b in zip(pts, pts[1:]):
        if a == b:
            continue
        fa, fb = geom._fr(a), geom._fr(b)
        bary = {}
        T = Fraction(0)
        cur = a
        for _ in range(limit):
            best = None
            for s in t.star(cur):
                r = jc.simplex_region[s]
                if r < 0:
                    continue
                if s not in bary:
                    bary[s] = (_barycentric(t, s, fa), _barycentric(t, s, fb))
                hi = _exit_param(*bary[s], T)
                if hi is not None and (best is None or (hi, -r, -s) > (best[0], -best[1], -best[2])):
                    best = (hi, r, s)
            if best is None:
                raise ContainmentError(f"path leaves free space at {geom.to_float(cur)}")
            hi, _, s = best
            if hi >= 1:
                out_p.append(b)
                out_s.append(s)
                break
            T = hi
            cur = tuple(geom.exact(fa[k] + T * (fb[k] - fa[k])) for k in range(t.dim))
            out_p.append(cur)
            out_s.append(s)
        else:
            raise ResolutionError("path walk did not terminate; the path may be degenerate", len(out_p))
    return out_p, out_s


def _barycentric(t, s, p):
    """Exact barycentric coordinates of ``p`` in simplex ``s``."""
    verts = [geom._fr(v) for v in t.simplex_points(s)]
    d = t.dim

    def vol(vs):
        return geom._det([[v[k] - vs[0][k] for k in range(d)] for v in vs[1:]])

    total = vol(verts)
    return [vol(verts[:k] + [p] + verts[k + 1:]) / total for k in range(d + 1)]


def _exit_param(la, lb, T):
    """Largest parameter u in (T, 1] such that the segment stays in the closed
    simplex on [T, u], or None when it does not continue inside from T."""
    lo, hi = Fraction(0), Fraction(1)
    for da, db in zip(la, lb):
        slope = db - da
        if slope == 0:
            if da < 0:
                return None
        elif slope > 0:
            lo = max(lo, -da / slope)
        else:
            hi = min(hi, -da / slope)
    if lo > T or hi <= T:
        return None
    return hi


def _nearest_free(jc, p):
    r = region_of_point(jc, p)
    return min(jc.regions[r].simplices)


def point_path_representation(polyline, jc, s_w, s_b):
    """Representation of a point path (single key point) after densifying."""
    _, simplices = densify(polyline, jc)
    regions = [jc.simplex_region[s] for s in simplices]
    states = [StateRep(((r, 0),)) for r in regions]
    return representation_from_states(states, jc, s_w, s_b)


def region_sequence(polyline, jc):
    _, simplices = densify(polyline, jc)
    return reduce_sequence([jc.simplex_region[s] for s in simplices])


# ---------------------------------------------------------------------------
# h-signature oracle (2D)

RAY_ANGLE = 0.1234


@dataclass(frozen=True)
class HSignature:
    """Freely reduced word; letter +i / -i is a crossing of obstacle i's ray."""

    word: tuple

    def __str__(self):
        return " ".join(f"a{abs(x)}" if x > 0 else f"a{abs(x)}^-1" for x in self.word) or "e"


def ray_anchors(scene):
    """Interior representative point per obstacle (centroid of its first piece)."""
    return {ob.id: geom.centroid(list(ob.pieces[0].vertices)) for ob in scene.obstacles}


def h_signature(path, scene, theta=RAY_ANGLE):
    """Crossing word of a 2D polyline against parallel rays from each obstacle.

    Rays point along (-sin theta, -cos theta). Points on a ray's line count
    as its right side, so each crossing is attributed to exactly one segment.
    A crossing from the ray's left to its right contributes +i.
    """
    if scene.dim != 2:
        raise InputError("h-signatures are defined for planar scenes only")
    pts = [geom.as_point(p, 2) for p in path]
    pieces = [p for ob in scene.obstacles for p in ob.pieces]
    for a, b in zip(pts, pts[1:]):
        for piece in pieces:
            if geom.segment_crosses_interior(a, b, piece):
                raise InputError("invalid path: it crosses an obstacle")
    for p in pts:
        if scene.obstacle_at(p):
            raise InputError("invalid path: a vertex lies inside an obstacle")
    dvec = (Fraction(-math.sin(theta)), Fraction(-math.cos(theta)))
    anchors = {i: tuple(Fraction(c) for c in a) for i, a in ray_anchors(scene).items()}
    word = []
    for a, b in zip(pts, pts[1:]):
        A = (Fraction(a[0]), Fraction(a[1]))
        B = (Fraction(b[0]), Fraction(b[1]))
        e = (B[0] - A[0], B[1] - A[1])
        hits = []
        for i, p in anchors.items():
            sa = _cross(dvec, (A[0] - p[0], A[1] - p[1]))
            sb = _cross(dvec, (B[0] - p[0], B[1] - p[1]))
            if (sa > 0) == (sb > 0):
                continue
            den = _cross(e, dvec)
            # a + t e = p + s d  ->  s = cross(e, a - p) / cross(e, d)
            s_num = _cross(e, (A[0] - p[0], A[1] - p[1]))
            if den == 0 or s_num * den <= 0:
                continue
            t_param = sa / _cross(dvec, (A[0] - B[0], A[1] - B[1]))
            hits.append((t_param, i if sa > 0 else -i))
        for _, letter in sorted(hits):
            if word and word[-1] == -letter:
                word.pop()
            else:
                word.append(letter)
    return HSignature(tuple(word))


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]
