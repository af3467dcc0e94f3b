"""JSON, SVG and OBJ input/output.

Coordinates are written as JSON numbers when they are floats and as
``"p/q"`` strings when they are exact rationals, so a written file reads
back to the same exact values.
"""

from __future__ import annotations

import hashlib
import json
import json.decoder
import json.scanner
from fractions import Fraction

from . import geom
from .delaunay import Triangulation, _neighbors, triangulate_workspace
from .errors import InputError
from .jointcover import _assemble, adjacency_graph, build_joint_cover, first_betti_number, workspace_complex
from .robot import make_spec
from .scene import make_scene

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# line-anchored JSON


class Located(dict):
    """A JSON object that remembers the line it starts on."""

    line = 0


class _LineDecoder(json.JSONDecoder):
    def __init__(self):
        super().__init__()

        def parse_object(s_and_end, strict, scan_once, object_hook, object_pairs_hook, memo=None):
            s, end = s_and_end
            obj, stop = json.decoder.JSONObject(s_and_end, strict, scan_once, object_hook, object_pairs_hook, memo)
            out = Located(obj)
            out.line = s.count("\n", 0, end) + 1
            return out, stop

        self.parse_object = parse_object
        self.scan_once = json.scanner.py_make_scanner(self)


def loads(text, source="<input>"):
    """Parse JSON text; syntax errors raise InputError with line and column."""
    try:
        return _LineDecoder().decode(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return loads(text, str(path))


def _where(obj, source):
    line = getattr(obj, "line", 0)
    return f"{source}:{line}" if line else source


def _coord(x, where):
    if isinstance(x, bool):
        raise InputError(f"{where}: coordinate must be a number, got {x!r}")
    if isinstance(x, (int, float)):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            pass
    raise InputError(f"{where}: coordinate must be a number or 'p/q' string, got {x!r}")


def _point(p, where):
    if not isinstance(p, list):
        raise InputError(f"{where}: point must be a list, got {p!r}")
    return tuple(_coord(x, where) for x in p)


def dump_coord(x):
    x = geom.exact(x) if isinstance(x, Fraction) else x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


def dump_point(p):
    return [dump_coord(c) for c in p]


def dumps(obj):
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# scenes and robots


def scene_from_json(data, source="<scene>"):
    """Build a validated Scene from a parsed scene document."""
    if not isinstance(data, dict):
        raise InputError(f"{source}: scene must be a JSON object")
    where = _where(data, source)
    dim = data.get("dimension")
    if dim not in (2, 3):
        raise InputError(f"{where}: 'dimension' must be 2 or 3")
    bounds = data.get("bounds")
    if not isinstance(bounds, dict) or "lo" not in bounds or "hi" not in bounds:
        raise InputError(f"{where}: 'bounds' must be an object with 'lo' and 'hi'")
    bw = _where(bounds, source)
    lo, hi = _point(bounds["lo"], bw), _point(bounds["hi"], bw)
    obs_in = data.get("obstacles", [])
    if not isinstance(obs_in, list):
        raise InputError(f"{where}: 'obstacles' must be a list")
    obstacles = []
    for ob in obs_in:
        ow = _where(ob, source)
        if not isinstance(ob, dict):
            raise InputError(f"{ow}: obstacle must be an object")
        spec = {}
        if "id" in ob:
            spec["id"] = ob["id"]
        try:
            if "vertices" in ob:
                spec["vertices"] = [_point(p, ow) for p in ob["vertices"]]
            if "faces" in ob:
                spec["faces"] = [[int(i) for i in f] for f in ob["faces"]]
            if "convex_pieces" in ob:
                spec["convex_pieces"] = [[_point(p, ow) for p in piece] for piece in ob["convex_pieces"]]
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"{ow}: malformed obstacle: {exc}") from None
        obstacles.append(spec)
    try:
        return make_scene(dim, lo, hi, obstacles)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


def scene_to_json(scene):
    obs = []
    for ob in scene.obstacles:
        d = {"id": ob.id}
        if ob.shape is not None:
            d["vertices"] = [dump_point(v) for v in ob.shape.vertices]
            if scene.dim == 3 and ob.shape.faces is not None:
                d["faces"] = [list(f) for f in ob.shape.faces]
        if ob.shape is None or len(ob.pieces) > 1 and scene.dim == 3:
            d["convex_pieces"] = [[dump_point(v) for v in p.vertices] for p in ob.pieces]
        obs.append(d)
    return {
        "schema_version": SCHEMA_VERSION,
        "dimension": scene.dim,
        "bounds": {"lo": dump_point(scene.lo), "hi": dump_point(scene.hi)},
        "obstacles": obs,
    }


def robot_from_json(data, source="<robot>"):
    """RobotSpec from ``{key_points, links: [[a, b, length]], link_width, joint_limits}``."""
    if not isinstance(data, dict):
        raise InputError(f"{source}: robot must be a JSON object")
    where = _where(data, source)
    try:
        return make_spec(
            data.get("key_points", ["p"]),
            data.get("links", []),
            data.get("link_width", 0.0),
            data.get("joint_limits"),
            bool(data.get("reconfigurable", False)),
        )
    except (TypeError, ValueError) as exc:
        raise type(exc)(f"{where}: {exc}") from None


def configurations_from_json(data, dim, source="<path>"):
    """Configurations from ``{"configurations": [[pt, ...], ...]}`` or a
    point-robot path ``{"points": [pt, ...]}``."""
    if isinstance(data, dict) and "configurations" in data:
        where = _where(data, source)
        return [[_point(p, where) for p in cfg] for cfg in data["configurations"]]
    if isinstance(data, dict) and "points" in data:
        where = _where(data, source)
        return [[_point(p, where)] for p in data["points"]]
    raise InputError(f"{source}: path needs 'configurations' or 'points'")


def configuration_from_json(data, source):
    """One configuration: a list of key-point coordinates."""
    if isinstance(data, dict):
        data = data.get("key_points", data.get("configuration"))
    if not isinstance(data, list) or not data:
        raise InputError(f"{source}: configuration must be a non-empty list of points")
    return [_point(p, source) for p in data]


# ---------------------------------------------------------------------------
# decompositions


def decompose(scene):
    """Triangulation, joint cover, G_A and S_W of a scene."""
    t = triangulate_workspace(scene)
    jc, g = build_joint_cover(t)
    return jc, g, workspace_complex(jc)


def cover_to_json(jc, g, s_w, triangulation=True):
    t = jc.triangulation
    comps = {}
    for r in jc.regions:
        comps.setdefault(r.component, []).append(r.id)
    out = {
        "schema_version": SCHEMA_VERSION,
        "dimension": jc.dim,
        "fingerprint": jc.fingerprint(),
        "n_obstacles": jc.n_obstacles,
        "removed": sorted(jc.removed),
        "split": jc.split,
        "regions": [
            {
                "id": r.id,
                "label": r.label,
                "adjacent_obstacles": sorted(r.adjacent_obstacles),
                "compact": r.compact,
                "component": r.component,
                "n_simplices": len(r.simplices),
            }
            for r in jc.regions
        ],
        "components": [
            {
                "id": c,
                "label": jc.regions[rs[0]].label,
                "adjacent_obstacles": sorted(jc.regions[rs[0]].adjacent_obstacles),
                "regions": rs,
            }
            for c, rs in sorted(comps.items())
        ],
        "adjacency_graph": g.to_dict(),
        "workspace_complex": {
            "vertices": list(s_w.vertices),
            "edges": [list(e) for e in s_w.edges],
            "triangles": [list(x) for x in s_w.triangles],
        },
        "betti_1": first_betti_number(jc),
        "scene": scene_to_json(t.scene),
    }
    if triangulation:
        out["triangulation"] = {
            "points": [dump_point(p) for p in t.points],
            "tags": list(t.tags),
            "simplices": [list(s) for s in t.simplices],
            "inside_obstacle": list(t.inside_obstacle),
            "simplex_region": list(jc.simplex_region),
        }
    return out


def cover_from_json(data, source="<cover>"):
    """Rebuild ``(jc, g, s_w)`` from :func:`cover_to_json` output without
    re-triangulating."""
    if not isinstance(data, dict) or "triangulation" not in data or "scene" not in data:
        raise InputError(f"{source}: not a decomposition with an embedded triangulation")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise InputError(f"{source}: unsupported schema_version {data.get('schema_version')!r}")
    scene = scene_from_json(data["scene"], source)
    tri = data["triangulation"]
    where = _where(tri, source)
    try:
        pts = tuple(_point(p, where) for p in tri["points"])
        simplices = tuple(tuple(int(i) for i in s) for s in tri["simplices"])
        t = Triangulation(scene.dim, pts, tuple(int(x) for x in tri["tags"]), simplices,
                          _neighbors(simplices, scene.dim), tuple(int(x) for x in tri["inside_obstacle"]), scene)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: malformed triangulation: {exc}") from None
    removed = frozenset(int(x) for x in data.get("removed", []))
    sets = tuple(
        frozenset(t.tags[i] for i in simp if t.tags[i] and t.tags[i] not in removed)
        if (t.inside_obstacle[s] == 0 or t.inside_obstacle[s] in removed) else None
        for s, simp in enumerate(t.simplices)
    )
    jc = _assemble(t, sets, int(data.get("n_obstacles", scene.n_obstacles)), removed, bool(data.get("split", True)))
    if "fingerprint" in data and jc.fingerprint() != data["fingerprint"]:
        raise InputError(f"{source}: fingerprint mismatch; the file was edited or is corrupt")
    return jc, adjacency_graph(jc), workspace_complex(jc)


# ---------------------------------------------------------------------------
# SVG and OBJ

PALETTE = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
           "#1f78b4", "#b2df8a", "#fb9a99", "#cab2d6")
PATH_COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e")


def label_color(label):
    """Fixed palette color keyed by a hash of the region label."""
    h = int(hashlib.sha256(str(label).encode()).hexdigest(), 16)
    return PALETTE[h % len(PALETTE)]


def to_svg(jc, paths=(), size=600, draw_edges=True):
    """SVG of a planar cover: regions filled by label color, obstacles dark,
    optional polylines (lists of points) on top."""
    t = jc.triangulation
    if t.dim != 2:
        raise InputError("SVG export is for planar scenes; use OBJ in 3D")
    scene = t.scene
    lo, hi = geom.to_float(scene.lo), geom.to_float(scene.hi)
    scale = size / max(hi[0] - lo[0], hi[1] - lo[1])
    w, h = (hi[0] - lo[0]) * scale, (hi[1] - lo[1]) * scale

    def xy(p):
        x, y = geom.to_float(p)
        return f"{(x - lo[0]) * scale:.3f},{h - (y - lo[1]) * scale:.3f}"

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
           f'viewBox="0 0 {w:.3f} {h:.3f}">']
    stroke = ' stroke="#ffffff" stroke-width="0.5"' if draw_edges else ""
    for s, simp in enumerate(t.simplices):
        r = jc.simplex_region[s]
        pts = " ".join(xy(t.points[i]) for i in simp)
        if r < 0:
            continue
        reg = jc.regions[r]
        out.append(f'<polygon points="{pts}" fill="{label_color(reg.label)}" fill-opacity="0.55"{stroke}>'
                   f'<title>region {r} label {reg.label}</title></polygon>')
    for ob in scene.obstacles:
        if ob.id in jc.removed:
            continue
        poly = ob.shape if ob.shape is not None else None
        rings = [poly.vertices] if poly is not None else [p.vertices for p in ob.pieces]
        for ring in rings:
            out.append(f'<polygon points="{" ".join(xy(v) for v in ring)}" fill="#333333">'
                       f'<title>obstacle {ob.id}</title></polygon>')
    for i, path in enumerate(paths):
        pts = " ".join(xy(p) for p in path)
        out.append(f'<polyline points="{pts}" fill="none" stroke="{PATH_COLORS[i % len(PATH_COLORS)]}" '
                   f'stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def to_obj(jc, free=True):
    """Wavefront OBJ of the boundary triangles of each 3D region (one group
    per region) plus the obstacle surfaces."""
    t = jc.triangulation
    if t.dim != 3:
        raise InputError("OBJ export is for 3D scenes")
    lines = ["# regions and obstacles"]
    for p in t.points:
        x, y, z = geom.to_float(p)
        lines.append(f"v {x!r} {y!r} {z!r}")
    if free:
        for r in jc.regions:
            lines.append(f"g region_{r.id}_label_{r.label}")
            for s in r.simplices:
                for k, nb in enumerate(t.neighbors[s]):
                    if nb < 0 or jc.simplex_region[nb] != r.id:
                        f = t.facet(s, k)
                        lines.append("f " + " ".join(str(i + 1) for i in f))
    index = {p: i for i, p in enumerate(t.points)}
    for ob in t.scene.obstacles:
        if ob.id in jc.removed:
            continue
        lines.append(f"g obstacle_{ob.id}")
        for piece in ob.pieces:
            for tri in piece.triangles():
                lines.append("f " + " ".join(str(index[v] + 1) for v in tri))
    return "\n".join(lines) + "\n"
