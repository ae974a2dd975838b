"""Hyperbolicity analysis of finite graphs, optionally carrying a quasi-cocycle.

Infinite graphs are handled through finite balls; every routine works with
exact integer distances from BFS, and Gromov products come back as
``Fraction`` values in half-integers.

Orientation convention for :class:`CocycleGraph`: an arrow ``u -> v`` has
``lam[u] > lam[v]``, so directed paths descend the potential and run toward
the boundary point the cocycle is attached to.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from . import _kernels
from ._kernels import UNREACHED

Vertex = Hashable


class GraphError(ValueError):
    pass


class Graph:
    """Finite undirected simple graph with cached all-pairs distances."""

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[tuple[Vertex, Vertex]]):
        self.vertices: tuple = tuple(vertices)
        self.index: dict = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise GraphError("duplicate vertices")
        pairs = set()
        for u, v in edges:
            i, j = self.index[u], self.index[v]
            if i != j:
                pairs.add((min(i, j), max(i, j)))
        self.edge_pairs: tuple = tuple(sorted(pairs))

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        n = len(self.vertices)
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, j in self.edge_pairs:
            adj[i].append(j)
            adj[j].append(i)
        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in adj])
        indices = np.array([j for a in adj for j in sorted(a)], dtype=np.int64)
        return indptr, indices

    def neighbors(self, i: int) -> np.ndarray:
        indptr, indices = self.csr
        return indices[indptr[i] : indptr[i + 1]]

    @cached_property
    def distances(self) -> np.ndarray:
        d = _kernels.bfs_all_pairs(*self.csr)
        d.setflags(write=False)
        return d

    def dist(self, u: Vertex, v: Vertex) -> int:
        d = int(self.distances[self.index[u], self.index[v]])
        if d == UNREACHED:
            raise GraphError(f"{u!r} and {v!r} lie in different components")
        return d

    def is_connected(self) -> bool:
        return len(self) == 0 or bool((self.distances[0] != UNREACHED).all())

    def ball_members(self, center: Vertex, radius: int | None) -> np.ndarray:
        row = self.distances[self.index[center]]
        ok = row != UNREACHED
        if radius is not None:
            ok &= row <= radius
        return np.nonzero(ok)[0]

    def induced(self, members: Sequence[int]) -> Graph:
        keep = set(int(i) for i in members)
        verts = [self.vertices[i] for i in sorted(keep)]
        edges = [
            (self.vertices[i], self.vertices[j])
            for i, j in self.edge_pairs
            if i in keep and j in keep
        ]
        return Graph(verts, edges)

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edge_pairs) == len(self) - 1

    def label(self, v: Vertex) -> str:
        return vertex_label(v)

    def to_json(self) -> dict:
        lab = [self.label(v) for v in self.vertices]
        return {
            "vertices": lab,
            "edges": [[lab[i], lab[j]] for i, j in self.edge_pairs],
        }

    def to_dot(self, name: str = "G") -> str:
        lab = [self.label(v) for v in self.vertices]
        lines = [f"graph {name} {{"]
        lines += [f'  "{x}";' for x in lab]
        lines += [f'  "{lab[i]}" -- "{lab[j]}";' for i, j in self.edge_pairs]
        lines.append("}")
        return "\n".join(lines) + "\n"


def vertex_label(v) -> str:
    if isinstance(v, str):
        return v
    if hasattr(v, "label"):
        return v.label()
    return str(v)


class CocycleGraph(Graph):
    """Graph with arrows descending an integer potential ``lam``.

    ``links`` are undirected edges that are not arrows (for example the
    group-action edges of a self-similarity graph).  ``delta`` bounds
    ``|lam(u) - lam(v)|`` over all edges, ``eta`` is the quasi-additivity
    defect of the cocycle the potential came from.  Vertices listed in
    ``truncated`` are cut off by a ball boundary and are exempt from having an
    outgoing arrow.
    """

    def __init__(
        self,
        vertices: Iterable[Vertex],
        arrows: Iterable[tuple[Vertex, Vertex]],
        lam: dict,
        links: Iterable[tuple[Vertex, Vertex]] = (),
        delta: int | None = None,
        eta: int = 0,
        truncated: Iterable[Vertex] = (),
        meta: dict | None = None,
    ):
        arrows = list(dict.fromkeys((u, v) for u, v in arrows if u != v))
        links = list(dict.fromkeys((u, v) for u, v in links if u != v))
        super().__init__(vertices, arrows + links)
        self.lam: dict = {v: int(lam[v]) for v in self.vertices}
        self.arrows: tuple = tuple(arrows)
        self.links: tuple = tuple(links)
        self.eta = int(eta)
        self.truncated = frozenset(truncated)
        self.meta = dict(meta or {})
        spread = max(
            (abs(self.lam[u] - self.lam[v]) for u, v in arrows + links), default=0
        )
        self.delta = spread if delta is None else int(delta)
        if spread > self.delta:
            raise GraphError(f"an edge changes the potential by {spread} > delta={self.delta}")
        for u, v in arrows:
            if self.lam[u] - self.lam[v] <= 2 * self.eta:
                raise GraphError(f"arrow {u!r}->{v!r} does not drop the potential by more than 2*eta")
        succ: list[list[int]] = [[] for _ in self.vertices]
        for u, v in arrows:
            succ[self.index[u]].append(self.index[v])
        self.successors: tuple = tuple(tuple(sorted(s)) for s in succ)

    @property
    def min_drop(self) -> int:
        return min((self.lam[u] - self.lam[v] for u, v in self.arrows), default=0)

    @property
    def lam_array(self) -> np.ndarray:
        return np.array([self.lam[v] for v in self.vertices], dtype=np.int64)

    def sinks(self) -> list[Vertex]:
        return [v for v, s in zip(self.vertices, self.successors) if not s]

    def is_cocomplete(self) -> bool:
        return all(v in self.truncated for v in self.sinks())

    def to_json(self) -> dict:
        lab = [self.label(v) for v in self.vertices]
        idx = self.index
        return {
            "vertices": lab,
            "edges": [[lab[idx[u]], lab[idx[v]]] for u, v in self.arrows],
            "links": [[lab[idx[u]], lab[idx[v]]] for u, v in self.links],
            "lambda": {lab[i]: self.lam[v] for i, v in enumerate(self.vertices)},
            "delta": self.delta,
            "eta": self.eta,
            "truncated": sorted(lab[idx[v]] for v in self.truncated),
        }

    @classmethod
    def from_json(cls, data: dict | str) -> CocycleGraph:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            data["vertices"],
            [tuple(e) for e in data.get("edges", [])],
            data["lambda"],
            links=[tuple(e) for e in data.get("links", [])],
            delta=data.get("delta"),
            eta=data.get("eta", 0),
            truncated=data.get("truncated", ()),
        )

    def to_dot(self, name: str = "G") -> str:
        lab = [self.label(v) for v in self.vertices]
        idx = self.index
        lines = [f"digraph {name} {{"]
        lines += [f'  "{x}" [label="{self.lam[v]}"];' for x, v in zip(lab, self.vertices)]
        lines += [f'  "{lab[idx[u]]}" -> "{lab[idx[v]]}";' for u, v in self.arrows]
        lines += [f'  "{lab[idx[u]]}" -> "{lab[idx[v]]}" [dir=none];' for u, v in self.links]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def restricted(self, members: Sequence[int]) -> CocycleGraph:
        keep = {self.vertices[int(i)] for i in members}
        verts = [v for v in self.vertices if v in keep]
        cut = set(self.truncated) & keep
        for i in members:
            v = self.vertices[int(i)]
            if any(self.vertices[j] not in keep for j in self.successors[int(i)]):
                cut.add(v)
        return CocycleGraph(
            verts,
            [(u, v) for u, v in self.arrows if u in keep and v in keep],
            {v: self.lam[v] for v in verts},
            links=[(u, v) for u, v in self.links if u in keep and v in keep],
            delta=self.delta,
            eta=self.eta,
            truncated=cut,
            meta=self.meta,
        )


# ------------------------------------------------------------ Gromov products


def gromov_product(g: Graph, x0: Vertex, x: Vertex, y: Vertex) -> Fraction:
    return Fraction(g.dist(x0, x) + g.dist(x0, y) - g.dist(x, y), 2)


def four_point_delta(g: Graph, x0: Vertex, radius: int | None = None) -> Fraction:
    """Least ``delta`` with ``(x,z) >= min((x,y),(y,z)) - delta`` over the ball.

    Products are taken at ``x0`` with distances of ``g`` itself; ``radius=None``
    means the whole component of ``x0``.
    """
    members = g.ball_members(x0, radius)
    sub = g.distances[np.ix_(members, members)]
    if (sub == UNREACHED).any():
        raise GraphError("ball is not connected")
    return Fraction(_kernels.four_point_delta2(g.distances, g.index[x0], members), 2)


def four_point_delta_all(g: Graph) -> Fraction:
    """Four-point delta maximized over every basepoint."""
    if not g.is_connected():
        raise GraphError("graph is not connected")
    best = 0
    members = np.arange(len(g))
    for b in range(len(g)):
        best = max(best, _kernels.four_point_delta2(g.distances, b, members))
    return Fraction(best, 2)


# ------------------------------------------------------------ thin triangles


def _interval_points(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    n = len(g)
    pa = list(range(n))
    pb = list(range(n))
    for i, j in g.edge_pairs:
        pa.append(i)
        pb.append(j)
    return np.array(pa, dtype=np.int64), np.array(pb, dtype=np.int64)


EXHAUSTIVE_LIMIT = 300


def thin_triangle_delta(
    g: Graph,
    radius: int | None = None,
    center: Vertex | None = None,
    exhaustive: bool = False,
    samples: int = 200,
    seed: int = 0,
) -> Fraction:
    """Least ``R`` making geodesic triangles ``R``-thin, on the ball around ``center``.

    The ball is taken as an induced subgraph.  Points of a side include edge
    midpoints, so results live in half-integers.  In exhaustive mode every
    geodesic triangle (all vertex triples, all geodesic selections) is
    examined; otherwise ``samples`` random triangles with random geodesic
    sides are drawn from a seeded generator.
    """
    if center is None:
        center = g.vertices[0]
    ball = g.induced(g.ball_members(center, radius))
    if not ball.is_connected():
        raise GraphError("ball is not connected")
    if exhaustive:
        if len(ball) > EXHAUSTIVE_LIMIT:
            raise GraphError(f"exhaustive mode is limited to {EXHAUSTIVE_LIMIT} vertices")
        indptr, indices = ball.csr
        pa, pb = _interval_points(ball)
        return Fraction(_kernels.thin_triangle2(ball.distances, indptr, indices, pa, pb), 2)
    rng = random.Random(seed)
    best = 0
    n = len(ball)
    for _ in range(samples):
        x, y, z = (rng.randrange(n) for _ in range(3))
        sides = [random_geodesic(ball, a, b, rng) for a, b in ((x, y), (y, z), (z, x))]
        best = max(best, _triangle_thinness2(ball.distances, sides))
    return Fraction(best, 2)


def random_geodesic(g: Graph, s: int, t: int, rng: random.Random) -> list[int]:
    d = g.distances
    path = [s]
    cur = s
    while cur != t:
        nxt = [int(w) for w in g.neighbors(cur) if d[w, t] == d[cur, t] - 1]
        cur = rng.choice(nxt)
        path.append(cur)
    return path


def _triangle_thinness2(d: np.ndarray, sides: list[list[int]]) -> int:
    best = 0
    for k, side in enumerate(sides):
        others = sorted({v for j, s in enumerate(sides) if j != k for v in s})
        block = d[np.ix_(side, others)].min(axis=1)
        best = max(best, 2 * int(block.max()))
        shared = {frozenset(e) for j, s in enumerate(sides) if j != k for e in zip(s, s[1:])}
        for i, (a, b) in enumerate(zip(side, side[1:])):
            if frozenset((a, b)) not in shared:
                best = max(best, 1 + 2 * int(min(block[i], block[i + 1])))
    return best


def geodesic_triangle_thinness(g: Graph, sides: list[list[Vertex]]) -> Fraction:
    """Exact thinness of one triangle given by three vertex paths."""
    idx = [[g.index[v] for v in s] for s in sides]
    return Fraction(_triangle_thinness2(g.distances, idx), 2)


# ------------------------------------------------------------ Busemann


@dataclass(frozen=True)
class RaySpec:
    vertices: tuple
    truncated: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise GraphError("empty ray")

    def check(self, cg: CocycleGraph) -> None:
        arrows = set(cg.arrows)
        for u, v in zip(self.vertices, self.vertices[1:]):
            if (u, v) not in arrows:
                raise GraphError(f"{u!r}->{v!r} is not an arrow")

    def __len__(self) -> int:
        return len(self.vertices)


def busemann_estimate(
    g: Graph, ray: RaySpec | Sequence[Vertex], x: Vertex, y: Vertex, min_length: int = 3
) -> tuple[int, int]:
    """Range of ``|x - r_n| - |y - r_n|`` over the last third of the ray."""
    pts = ray.vertices if isinstance(ray, RaySpec) else tuple(ray)
    if len(pts) < min_length:
        raise GraphError(f"ray has {len(pts)} vertices, need at least {min_length}")
    start = len(pts) - max(1, len(pts) // 3)
    vals = [g.dist(x, r) - g.dist(y, r) for r in pts[start:]]
    return min(vals), max(vals)


# ------------------------------------------------------------ directed paths


def directed_paths(cg: CocycleGraph, start: int, length: int) -> Iterable[tuple[int, ...]]:
    """All maximal directed paths from ``start`` with at most ``length`` arrows."""
    stack = [(start,)]
    while stack:
        p = stack.pop()
        nxt = cg.successors[p[-1]]
        if len(p) > length or not nxt:
            yield p
            continue
        for w in nxt:
            stack.append(p + (w,))


@dataclass(frozen=True)
class QuasiGeodesicReport:
    stretch: Fraction
    step: int
    paths_checked: int
    violation: tuple | None

    def to_json(self) -> dict:
        return {
            "lambda": str(self.stretch),
            "delta_prime": self.step,
            "paths_checked": self.paths_checked,
            "violation": None if self.violation is None else [vertex_label(v) for v in self.violation],
        }


def qg_constants(delta: int, eta: int, min_drop: int | None = None) -> Fraction:
    if eta > 0:
        return Fraction(delta + eta, eta)
    if not min_drop:
        raise GraphError("an exact cocycle needs a positive arrow drop")
    return Fraction(delta, min_drop)


def directed_path_qg_constants(cg: CocycleGraph, horizon: int = 8) -> QuasiGeodesicReport:
    """``(Lambda, 1)`` constants for directed paths, checked on all paths up to ``horizon``.

    ``Lambda = (delta + eta) / eta``; for an exact cocycle (``eta = 0``) the
    arrow drop ``m`` plays the part of ``eta`` and ``Lambda = delta / m``.
    """
    lam_c = qg_constants(cg.delta, cg.eta, cg.min_drop)
    d = cg.distances
    count = 0
    for s in range(len(cg)):
        for p in directed_paths(cg, s, horizon):
            count += 1
            for i, j in itertools.combinations(range(len(p)), 2):
                dij = d[p[i], p[j]]
                if dij == UNREACHED or (j - i) > lam_c * int(dij):
                    bad = tuple(cg.vertices[k] for k in p[i : j + 1])
                    return QuasiGeodesicReport(lam_c, 1, count, bad)
    return QuasiGeodesicReport(lam_c, 1, count, None)


# ------------------------------------------------------------ convergence criterion


@dataclass(frozen=True)
class CriterionReport:
    rho0: int | None
    k_m: int | None
    tail_max: int | None
    profile: tuple
    pairs_checked: int
    horizon: int
    violation: dict | None
    truncated: bool

    @property
    def ok(self) -> bool:
        return self.violation is None

    def to_json(self) -> dict:
        return {
            "rho0": self.rho0,
            "k_m": self.k_m,
            "tail_max": self.tail_max,
            "profile": list(self.profile),
            "pairs_checked": self.pairs_checked,
            "horizon": self.horizon,
            "violation": self.violation,
            "truncated": self.truncated,
        }


def _reach_layers(cg: CocycleGraph, horizon: int) -> list[list[np.ndarray]]:
    layers = []
    for s in range(len(cg)):
        cur = {s}
        rows = [np.array([s], dtype=np.int64)]
        for _ in range(horizon):
            cur = {w for v in cur for w in cg.successors[v]}
            rows.append(np.array(sorted(cur), dtype=np.int64))
        layers.append(rows)
    return layers


def convergence_criterion(
    cg: CocycleGraph, delta1: int, m: int, horizon: int
) -> CriterionReport:
    """Finite certificate for the converging-paths criterion on a ball.

    For every pair of starting vertices at distance ``<= m`` and every pair of
    directed paths from them of length ``<= horizon``, collect
    ``|u_i - v_j|`` over index pairs with ``|lam(u_i) - lam(v_j)| <= delta1``.
    ``profile[k]`` is the maximum over ``i, j > k``.  The report gives
    ``rho0 = profile[horizon // 2] + 1`` and the least ``k_m`` with
    ``profile[k_m] < rho0``.  A violation is reported when some qualifying
    pair is disconnected or the tail maximum exceeds the maximum over early
    indices (paths drifting apart).
    """
    if delta1 < cg.delta + cg.eta:
        raise GraphError(f"delta1={delta1} is below delta + eta = {cg.delta + cg.eta}")
    if horizon < 2:
        raise GraphError("horizon must be at least 2")
    d = cg.distances
    lam = cg.lam_array
    layers = _reach_layers(cg, horizon)
    flat = []
    for rows in layers:
        steps = np.concatenate([np.full(len(r), i, dtype=np.int64) for i, r in enumerate(rows)])
        verts = np.concatenate(rows)
        flat.append((steps, verts))
    H = horizon
    # best[i, j] = max distance over qualifying pairs at indices (i, j)
    best = np.full((H + 1, H + 1), -1, dtype=np.int64)
    pairs = 0
    violation = None
    n = len(cg)
    for a in range(n):
        for b in range(n):
            dab = d[a, b]
            if dab == UNREACHED or dab > m:
                continue
            pairs += 1
            sa, va = flat[a]
            sb, vb = flat[b]
            close = np.abs(lam[va][:, None] - lam[vb][None, :]) <= delta1
            dist = d[np.ix_(va, vb)]
            if ((dist == UNREACHED) & close).any() and violation is None:
                ia, ib = np.argwhere((dist == UNREACHED) & close)[0]
                violation = {
                    "kind": "disconnected",
                    "u0": vertex_label(cg.vertices[a]),
                    "v0": vertex_label(cg.vertices[b]),
                    "u_i": vertex_label(cg.vertices[va[ia]]),
                    "v_j": vertex_label(cg.vertices[vb[ib]]),
                }
            vals = np.where(close, dist, -1)
            np.maximum.at(best, (sa[:, None].repeat(len(vb), 1), sb[None, :].repeat(len(va), 0)), vals)
    # profile[k] = max over i, j > k
    suffix = best.copy()
    for i in range(H - 1, -1, -1):
        suffix[i, :] = np.maximum(suffix[i, :], suffix[i + 1, :])
    for j in range(H - 1, -1, -1):
        suffix[:, j] = np.maximum(suffix[:, j], suffix[:, j + 1])
    profile = tuple(int(suffix[k + 1, k + 1]) for k in range(H))
    half = H // 2
    tail_max = profile[half]
    head_max = int(best[: half + 1, : half + 1].max())
    truncated = bool(cg.truncated) or any(not s for s in cg.successors)
    if tail_max < 0:
        return CriterionReport(None, None, None, profile, pairs, H, violation or {"kind": "no qualifying pairs past the midpoint"}, truncated)
    rho0 = tail_max + 1
    k_m = next(k for k in range(H) if profile[k] < rho0)
    if violation is None and tail_max > head_max:
        violation = {"kind": "diverging", "tail_max": tail_max, "head_max": head_max}
    return CriterionReport(rho0, k_m, tail_max, profile, pairs, H, violation, truncated)


# ------------------------------------------------------------ level graph


HORIZONTAL, DESCENDING, ASCENDING = 0, 1, 2


@dataclass
class LevelGraph:
    source: CocycleGraph
    delta2: int
    r: int
    rho1: int
    horizontal: tuple
    vertical: tuple  # (upper, lower) index pairs
    graph: Graph = field(repr=False)
    params: dict = field(default_factory=dict)

    def level(self, i: int) -> int:
        return self.source.lam[self.source.vertices[i]] // self.delta2

    @cached_property
    def edge_types(self) -> np.ndarray:
        """Type of every CSR entry of :attr:`graph`, traversed from its row."""
        indptr, indices = self.graph.csr
        lam = self.source.lam_array
        hor = set(self.horizontal) | {(j, i) for i, j in self.horizontal}
        out = np.empty(len(indices), dtype=np.int64)
        for u in range(len(indptr) - 1):
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if (u, w) in hor:
                    out[k] = HORIZONTAL
                else:
                    out[k] = DESCENDING if lam[w] < lam[u] else ASCENDING
        return out

    def check_geodesics(self, max_run: int = 6) -> dict:
        """Exhaustive scan of every geodesic for the down-before-up and run-length rules."""
        indptr, indices = self.graph.csr
        o, r, w = _kernels.geodesic_patterns(
            indptr, indices, self.edge_types, self.graph.distances, max_run
        )
        lab = [vertex_label(v) for v in self.source.vertices]
        return {
            "descending_after_ascending": o,
            "long_horizontal_runs": r,
            "order_witness": None if w[0] < 0 else [lab[w[0]], lab[w[1]]],
            "run_witness": None if w[2] < 0 else [lab[w[2]], lab[w[3]]],
        }

    def distortion(self) -> tuple[Fraction, Fraction]:
        """``(max |u-v|_1/|u-v|, max |u-v|/|u-v|_1)`` over all pairs."""
        d0 = self.source.distances
        d1 = self.graph.distances
        mask = (d0 > 0) & (d1 > 0)
        if ((d0 == UNREACHED) != (d1 == UNREACHED)).any():
            raise GraphError("level graph changes connectivity")
        a = max((Fraction(int(x), int(y)) for x, y in zip(d1[mask], d0[mask])), default=Fraction(1))
        b = max((Fraction(int(x), int(y)) for x, y in zip(d0[mask], d1[mask])), default=Fraction(1))
        return a, b

    def to_json(self) -> dict:
        lab = [vertex_label(v) for v in self.source.vertices]
        return {
            "vertices": lab,
            "levels": {lab[i]: self.level(i) for i in range(len(lab))},
            "horizontal": [[lab[i], lab[j]] for i, j in self.horizontal],
            "vertical": [[lab[i], lab[j]] for i, j in self.vertical],
            "params": self.params,
        }


def build_level_graph(
    cg: CocycleGraph,
    delta2: int,
    r: int,
    rho1: int,
    k: int = 0,
    delta1: int | None = None,
) -> LevelGraph:
    """Coarsen ``cg`` into horizontal and vertical edges between potential bands.

    A band is ``level(v) = lam(v) // delta2``.  Horizontal edges join two
    vertices of one band linked by a chain of at most ``r`` hops of
    ``cg``-length at most ``rho1`` that stays inside the band.  Vertical edges
    follow a directed path from a vertex of band ``l`` to a vertex of band
    ``l - 1``.  The caller supplies ``k`` (the stabilization index measured by
    :func:`convergence_criterion`); ``delta2 > (k + 1) * delta1`` and
    ``r >= 4 * delta2 / (rho1 * gain)`` are enforced, where ``gain`` is ``eta``
    or, for exact cocycles, the least arrow drop.
    """
    if delta1 is None:
        delta1 = cg.delta + cg.eta
    gain = cg.eta if cg.eta > 0 else cg.min_drop
    if delta1 < cg.delta + cg.eta:
        raise GraphError("delta1 must be at least delta + eta")
    if delta2 <= (k + 1) * delta1:
        raise GraphError(f"delta2={delta2} must exceed (k+1)*delta1={(k + 1) * delta1}")
    if r % 4 or r <= 0:
        raise GraphError("r must be a positive multiple of 4")
    if gain <= 0:
        raise GraphError("graph has no arrows")
    if r * rho1 * gain < 4 * delta2:
        raise GraphError(f"r={r} is below 4*delta2/(rho1*gain)={Fraction(4 * delta2, rho1 * gain)}")
    d = cg.distances
    lam = cg.lam_array
    level = lam // delta2
    n = len(cg)
    horizontal = set()
    for l in np.unique(level):
        band = np.nonzero(level == l)[0]
        sub = d[np.ix_(band, band)]
        hop = (sub != UNREACHED) & (sub <= rho1)
        # BFS in the hop graph up to r steps
        for a in range(len(band)):
            seen = {a}
            frontier = [a]
            for _ in range(r):
                nxt = []
                for x in frontier:
                    for y in np.nonzero(hop[x])[0]:
                        y = int(y)
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
                frontier = nxt
                if not frontier:
                    break
            for b in seen:
                if b > a:
                    horizontal.add((int(band[a]), int(band[b])))
    vertical = set()
    for u in range(n):
        l = level[u]
        floor_ = (l - 1) * delta2
        stack = list(cg.successors[u])
        seen = set(stack)
        while stack:
            w = stack.pop()
            if lam[w] < floor_:
                continue
            if lam[w] < l * delta2:
                vertical.add((u, w))
            for x in cg.successors[w]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
    verts = cg.vertices
    edges = [(verts[i], verts[j]) for i, j in horizontal] + [(verts[i], verts[j]) for i, j in vertical]
    params = {"delta1": delta1, "delta2": delta2, "r": r, "rho1": rho1, "k": k, "gain": gain}
    return LevelGraph(
        cg, delta2, r, rho1, tuple(sorted(horizontal)), tuple(sorted(vertical)), Graph(verts, edges), params
    )


# ------------------------------------------------------------ minimal level


@dataclass(frozen=True)
class MinLevelReport:
    value: int
    best_geodesic: int
    spread: int

    def to_json(self) -> dict:
        return {"min_level": self.value, "max_over_geodesics": self.best_geodesic, "spread": self.spread}


def min_level_scale(cg: CocycleGraph, u: Vertex, v: Vertex) -> MinLevelReport:
    """Minimal potential along geodesics from ``u`` to ``v``.

    ``value`` is the minimum over all geodesics, ``best_geodesic`` the largest
    minimum any single geodesic achieves; their difference is the spread.
    """
    d = cg.distances
    s, t = cg.index[u], cg.index[v]
    if d[s, t] == UNREACHED:
        raise GraphError("vertices lie in different components")
    lam = cg.lam_array
    on = np.nonzero(d[s] + d[:, t] == d[s, t])[0]
    lo = int(lam[on].min())
    order = sorted(on, key=lambda i: d[s, i])
    wide = {}
    for i in order:
        if i == s:
            wide[i] = int(lam[s])
            continue
        prev = [wide[j] for j in cg.neighbors(i) if j in wide and d[s, j] == d[s, i] - 1]
        wide[i] = min(int(lam[i]), max(prev))
    return MinLevelReport(lo, wide[t], wide[t] - lo)


# ------------------------------------------------------------ small constructors


def path_cocycle_graph(n: int) -> CocycleGraph:
    """Vertices ``0..n`` with arrows ``i+1 -> i`` and ``lam = i``."""
    return CocycleGraph(range(n + 1), [(i + 1, i) for i in range(n)], {i: i for i in range(n + 1)}, truncated=[0])


def tree_cocycle_graph(parent: dict) -> CocycleGraph:
    """Rooted tree given by a child -> parent map; ``lam`` is depth, arrows point to parents."""
    verts = list(dict.fromkeys(list(parent) + list(parent.values())))
    depth: dict = {}

    def dep(v):
        if v not in depth:
            depth[v] = 0 if v not in parent else dep(parent[v]) + 1
        return depth[v]

    for v in verts:
        dep(v)
    roots = [v for v in verts if v not in parent]
    return CocycleGraph(verts, list(parent.items()), depth, truncated=roots)


def bfs_tree_parents(g: Graph, root: Vertex) -> dict:
    parent = {}
    seen = {g.index[root]}
    queue = deque([g.index[root]])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            w = int(w)
            if w not in seen:
                seen.add(w)
                parent[g.vertices[w]] = g.vertices[u]
                queue.append(w)
    return parent
