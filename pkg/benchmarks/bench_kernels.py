"""Compare the compiled and pure-Python kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Times the raw predicates, the point-location walk and the capsule collision
test on each backend, then an end-to-end triangulation plus joint cover in a
subprocess per backend (``PATHCLASS_PURE=1`` forces the pure kernels).
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from pathclass import _pykernels as py
from pathclass import geom
from pathclass.delaunay import triangulate
from pathclass.scene import make_scene

try:
    from pathclass import _ckernels as ck
except ImportError:
    ck = None


def _scene():
    rng = random.Random(0)
    obs = []
    for i in range(6):
        for j in range(6):
            x, y = 1 + 3 * i + rng.uniform(0, 0.5), 1 + 3 * j + rng.uniform(0, 0.5)
            obs.append({"vertices": [(x, y), (x + 1.3, y + 0.1), (x + 1.1, y + 1.4), (x - 0.1, y + 1.2)]})
    return make_scene(2, (0, 0), (20, 20), obs)


def _cases(mod, t, rng):
    args2 = [[rng.uniform(-10, 10) for _ in range(8)] for _ in range(20000)]
    coords = [geom.to_float(p) for p in t.points]
    m = mod.mesh(coords, t.simplices, t.neighbors)
    queries = [(rng.randrange(len(t.simplices)), rng.uniform(0, 20), rng.uniform(0, 20)) for _ in range(2000)]
    rings = [[geom.to_float(v) for v in p.vertices] for ob in t.scene.obstacles for p in ob.pieces]
    polys = mod.polygons(rings)
    segs = [[(rng.uniform(0, 20), rng.uniform(0, 20), rng.uniform(0, 20), rng.uniform(0, 20))] for _ in range(500)]
    return {
        "orient2d x20000": lambda: [mod.orient2d(*a[:6]) for a in args2],
        "incircle x20000": lambda: [mod.incircle(*a) for a in args2],
        "walk2d x2000": lambda: [mod.walk2d(m, s, x, y) for s, x, y in queries],
        "capsules_hit x500": lambda: [mod.capsules_hit(s, 0.1, polys) for s in segs],
    }


END_TO_END = (
    "import sys, time; sys.path.insert(0, 'benchmarks'); from bench_kernels import _scene;"
    "from pathclass.delaunay import triangulate; from pathclass.jointcover import build_joint_cover;"
    "from pathclass import kernels; s = _scene(); t0 = time.perf_counter();"
    "build_joint_cover(triangulate(s)); print(f'{kernels.BACKEND:<8}{time.perf_counter() - t0:.3f} s')"
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    t = triangulate(_scene())
    backends = [("python", py)] + ([("cython", ck)] if ck is not None else [])
    results = {}
    for name, mod in backends:
        for case, fn in _cases(mod, t, random.Random(1)).items():
            results.setdefault(case, {})[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
    print(f"{'kernel':<22}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    for case, r in results.items():
        c = r.get("cython")
        speed = f"{r['python'] / c:8.1f}x" if c else "      n/a"
        print(f"{case:<22}{r['python']:>10.4f}{(c or float('nan')):>10.4f}{speed}")
    print("\nend to end (triangulation + joint cover, 36 obstacles):")
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    for pure in ("1", "0"):
        env = dict(os.environ, PATHCLASS_PURE=pure)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, cwd=root, capture_output=True, text=True)
        print("  " + (out.stdout.strip() or out.stderr.strip().splitlines()[-1]))


if __name__ == "__main__":
    main()
