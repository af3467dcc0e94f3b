"""Command-line interface: ``pathclass decompose|classify|plan|remove-obstacle|export``.

Exit codes: 0 success or SAME, 2 malformed input, 3 scene validation
failure, 4 path resolution failure, 10 DIFFERENT, 20 no path exists,
1 any other library error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import io
from .errors import (
    InputError,
    NonExistenceError,
    PathClassError,
    ResolutionError,
    SceneValidationError,
    SpecError,
)
from .jointcover import what_if_remove, workspace_complex
from .planner import plan as run_plan
from .robot import build_complex
from .states import densify, h_signature, path_representation, same_class

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MALFORMED = 2
EXIT_INVALID = 3
EXIT_RESOLUTION = 4
EXIT_DIFFERENT = 10
EXIT_NONEXISTENT = 20


def _seed():
    raw = os.environ.get("PATHCLASS_SEED")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"PATHCLASS_SEED must be an integer, got {raw!r}") from None


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_cover(args):
    """``(jc, g, s_w)`` from ``--cover`` when given, else by decomposing the scene."""
    if getattr(args, "cover", None):
        jc, g, s_w = io.cover_from_json(io.load(args.cover), args.cover)
        return jc, g, s_w
    scene = io.scene_from_json(io.load(args.scene), args.scene)
    return io.decompose(scene)


def _load_robot(path):
    if path is None or path == "point":
        return io.robot_from_json({})
    return io.robot_from_json(io.load(path), path)


def _load_configuration(arg):
    text = arg.strip()
    if text.startswith("["):
        return io.configuration_from_json(io.loads(text, "<argument>"), "<argument>")
    return io.configuration_from_json(io.load(arg), arg)


# ---------------------------------------------------------------------------
# commands


def cmd_decompose(args):
    scene = io.scene_from_json(io.load(args.scene), args.scene)
    jc, g, s_w = io.decompose(scene)
    _write(args.out, io.dumps(io.cover_to_json(jc, g, s_w)))
    _export(jc, args)
    return EXIT_OK


def _export(jc, args, paths=()):
    if getattr(args, "svg", None):
        _write(args.svg, io.to_svg(jc, paths))
    if getattr(args, "obj", None):
        _write(args.obj, io.to_obj(jc))


def cmd_classify(args):
    jc, _, s_w = _load_cover(args)
    spec = _load_robot(args.robot)
    s_b = build_complex(spec)
    paths = []
    reps = []
    for name in (args.path_a, args.path_b):
        configs = io.configurations_from_json(io.load(name), jc.dim, name)
        if any(len(c) != spec.k for c in configs):
            raise InputError(f"{name}: every configuration needs {spec.k} key points")
        if args.densify:
            if spec.k != 1:
                raise InputError("--densify applies to point robots only")
            pts, _ = densify([c[0] for c in configs], jc)
            configs = [[p] for p in pts]
        try:
            reps.append(path_representation(configs, jc, s_w, s_b))
        except ResolutionError as exc:
            raise ResolutionError(f"{name}: {exc}", exc.step_index) from None
        paths.append([c[0] for c in configs])
    for name, rep in zip(("A", "B"), reps):
        print(f"{name}: " + " ".join(str(c) for c in rep.codes()))
    same = same_class(*reps)
    print("SAME" if same else "DIFFERENT")
    if jc.dim == 2:
        h = [h_signature(p, jc.triangulation.scene) for p in paths]
        print(f"h-signature A: {h[0]}")
        print(f"h-signature B: {h[1]}")
        agree = (h[0] == h[1]) == same
        print("h-signature agreement: " + ("yes" if agree else "no"))
    return EXIT_OK if same else EXIT_DIFFERENT


def cmd_plan(args):
    jc, _, s_w = _load_cover(args)
    spec = _load_robot(args.robot)
    start = _load_configuration(args.start)
    goal = _load_configuration(args.goal)
    for name, cfg in (("start", start), ("goal", goal)):
        if len(cfg) != spec.k:
            raise InputError(f"{name} needs {spec.k} key points, got {len(cfg)}")
    res = run_plan(jc, s_w, spec, start, goal, k=args.alternatives, step=args.step,
                   length_bound=args.length_bound, angle_steps=args.angle_steps)
    doc = {
        "schema_version": io.SCHEMA_VERSION,
        "fingerprint": jc.fingerprint(),
        "plans": [
            {
                "class_sequence": [str(s.code) for s in p.topological.states],
                "states": [s.to_json() for s in p.topological.states],
                "regions": list(p.topological.regions),
                "piece_regions": p.regions,
                "waypoints": [[list(map(float, q)) for q in w] for w in p.waypoints],
                "valid": p.valid,
            }
            for p in res.plans
        ],
        "certificate": res.certificate.to_dict() if res.certificate else None,
        "failures": res.failures,
    }
    _write(args.out, io.dumps(doc))
    if args.svg and jc.dim == 2:
        _write(args.svg, io.to_svg(jc, [[w[0] for w in p.waypoints] for p in res.plans]))
    for i, p in enumerate(res.plans):
        print(f"plan {i}: regions {' '.join(map(str, p.topological.regions))}, {len(p.waypoints)} waypoints",
              file=sys.stderr)
    if res.certificate is not None:
        print(f"no path: {res.certificate.summary()}", file=sys.stderr)
        return EXIT_NONEXISTENT
    return EXIT_OK


def cmd_remove_obstacle(args):
    jc, g, _ = _load_cover(args)
    new, g2 = what_if_remove(jc, g, args.obstacle)
    _write(args.out, io.dumps(io.cover_to_json(new, g2, workspace_complex(new))))
    _export(new, args)
    return EXIT_OK


def cmd_export(args):
    jc, _, _ = _load_cover(args)
    if not args.svg and not args.obj:
        raise InputError("export needs --svg or --obj")
    _export(jc, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser():
    p = argparse.ArgumentParser(prog="pathclass", description="Path classes from joint covers of obstacle scenes.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="joint cover, G_A and S_W of a scene")
    d.add_argument("scene")
    d.add_argument("-o", "--out", help="output JSON (default stdout)")
    d.add_argument("--svg", help="write a 2D rendering")
    d.add_argument("--obj", help="write a 3D rendering")
    d.set_defaults(func=cmd_decompose)

    c = sub.add_parser("classify", help="compare the path classes of two paths")
    c.add_argument("scene")
    c.add_argument("robot", nargs="?", help="robot JSON, or 'point' (the default)")
    c.add_argument("path_a")
    c.add_argument("path_b")
    c.add_argument("--cover", help="decomposition JSON to reuse instead of the scene")
    c.add_argument("--densify", action="store_true", help="refine point paths at region boundaries first")
    c.set_defaults(func=cmd_classify)

    pl = sub.add_parser("plan", help="plan motions in distinct path classes")
    pl.add_argument("scene")
    pl.add_argument("robot", help="robot JSON, or 'point'")
    pl.add_argument("start", help="key-point list as JSON file or inline JSON")
    pl.add_argument("goal", help="key-point list as JSON file or inline JSON")
    pl.add_argument("--cover")
    pl.add_argument("-o", "--out")
    pl.add_argument("--svg")
    pl.add_argument("--alternatives", type=int, default=1)
    pl.add_argument("--step", type=float, default=0.1)
    pl.add_argument("--length-bound", type=int, default=12)
    pl.add_argument("--angle-steps", type=int, default=64)
    pl.set_defaults(func=cmd_plan)

    r = sub.add_parser("remove-obstacle", help="cover after deleting one obstacle")
    r.add_argument("scene")
    r.add_argument("obstacle", type=int)
    r.add_argument("--cover")
    r.add_argument("-o", "--out")
    r.add_argument("--svg")
    r.add_argument("--obj")
    r.set_defaults(func=cmd_remove_obstacle)

    e = sub.add_parser("export", help="render a scene or decomposition")
    e.add_argument("scene")
    e.add_argument("--cover")
    e.add_argument("--svg")
    e.add_argument("--obj")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _seed()
        if args.command == "plan" and (args.alternatives < 1 or args.step <= 0 or args.length_bound < 1):
            raise InputError("--alternatives and --length-bound must be >= 1 and --step > 0")
        return args.func(args)
    except NonExistenceError as exc:
        print(f"no path: {exc}", file=sys.stderr)
        return EXIT_NONEXISTENT
    except SceneValidationError as exc:
        print(f"invalid scene: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ResolutionError as exc:
        print(f"resolution error at step {exc.step_index}: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    except (InputError, SpecError) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except PathClassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
