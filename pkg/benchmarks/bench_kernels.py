"""Compare the numba kernels with the numpy fallback.

Each backend runs in its own interpreter because the choice is made at
import time from HYPGRPD_KERNELS.  Usage::

    python3 benchmarks/bench_kernels.py [--radius 6] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from hypgrpd import _kernels, germs, hypgraph

radius, repeat = int(sys.argv[1]), int(sys.argv[2])
g = germs.preset_ball("dyadic-affine", radius).graph
indptr, indices = g.csr

def best(fn):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out

dist = _kernels.bfs_all_pairs(indptr, indices)
members = np.arange(len(g))
rng = np.random.default_rng(0)
table = rng.integers(0, 6, size=(60, 60))
table = np.minimum(table, table.T)
np.fill_diagonal(table, _kernels.INF)
lg = hypgraph.build_level_graph(g, 2, 8, 1)
lind, lidx = lg.graph.csr

rows = {}
for name, fn in {
    "bfs_all_pairs": lambda: int(_kernels.bfs_all_pairs(indptr, indices).sum()),
    "four_point_delta2": lambda: _kernels.four_point_delta2(dist, 0, members),
    "logscale_delta": lambda: _kernels.logscale_delta(table),
    "geodesic_patterns": lambda: [int(x) for x in _kernels.geodesic_patterns(lind, lidx, lg.edge_types, lg.graph.distances, 6)[:2]],
}.items():
    t, out = best(fn)
    rows[name] = {"seconds": t, "result": out}
print(json.dumps({"backend": _kernels.BACKEND, "vertices": len(g), "rows": rows}))
"""


def run(backend: str, radius: int, repeat: int) -> dict:
    env = dict(os.environ, HYPGRPD_KERNELS=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, str(radius), str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radius", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run("numba", args.radius, args.repeat)
    slow = run("numpy", args.radius, args.repeat)
    print(f"dyadic-affine ball, radius {args.radius}, {fast['vertices']} vertices")
    print(f"{'kernel':<20}{'numba s':>12}{'numpy s':>12}{'speedup':>10}  same")
    for name, row in fast["rows"].items():
        other = slow["rows"][name]
        speed = other["seconds"] / max(row["seconds"], 1e-9)
        same = row["result"] == other["result"]
        print(f"{name:<20}{row['seconds']:>12.4f}{other['seconds']:>12.4f}{speed:>10.1f}  {same}")


if __name__ == "__main__":
    main()
