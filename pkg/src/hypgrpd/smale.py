"""Symbolic Smale spaces: two-sided shifts of finite type, limit-space
gluing of contracting groups, and stationary Bratteli-Vershik systems.

Two-sided sequences are stored as a pair of eventually periodic words: the
future ``x0 x1 x2 ...`` and the past ``x0 x-1 x-2 ...``.  The stable plaque
of ``x`` is the set of sequences sharing its future (coordinates ``>= 0``);
the shift ``(sx)_n = x_{n+1}`` contracts it.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .hypgraph import CocycleGraph, Graph
from .quadratic import QuadSurd
from .selfsim import ElementSet, WreathRecursion, act, nucleus
from .words import EvPeriodicWord, word_str


class SpliceError(ValueError):
    pass


class AdicError(ValueError):
    pass


class NotContracting(ValueError):
    pass


# ------------------------------------------------------------ two-sided sequences


@dataclass(frozen=True)
class BiSeq:
    """Two-sided sequence; ``future[0] == past[0] == x0``."""

    past: EvPeriodicWord
    future: EvPeriodicWord

    def __post_init__(self) -> None:
        if self.past[0] != self.future[0]:
            raise ValueError("past and future disagree at coordinate 0")

    @classmethod
    def parse(cls, text: str) -> BiSeq:
        """``"(0)1.0(1)"`` is ``...0001.0111...`` with ``x0`` right after the dot."""
        head, dot, tail = text.partition(".")
        if not dot:
            raise ValueError(f"expected 'past.future', got {text!r}")
        future = EvPeriodicWord.parse(tail)
        if not head.startswith("(") or ")" not in head:
            raise ValueError(f"past must look like '(period)preperiod', got {head!r}")
        per, _, pre = head[1:].partition(")")
        past = EvPeriodicWord(tuple(reversed(pre)), tuple(reversed(per))).prepend([future[0]])
        return cls(past, future)

    def __getitem__(self, k: int):
        return self.future[k] if k >= 0 else self.past[-k]

    def window(self, lo: int, hi: int) -> tuple:
        return tuple(self[k] for k in range(lo, hi))

    def shift(self, k: int = 1) -> BiSeq:
        x = self
        for _ in range(k):
            x = BiSeq(x.past.prepend([x.future[1]]), x.future.tail(1))
        return x

    def __str__(self) -> str:
        back = self.past.tail(1)
        pre = "".join(map(str, reversed(back.preperiod)))
        per = "".join(map(str, reversed(back.period)))
        return f"({per}){pre}.{self.future}"

    def to_json(self) -> str:
        return str(self)


class SftSystem:
    """Shift of finite type given by prohibited words or a 0-1 matrix."""

    def __init__(self, alphabet: Sequence | None, prohibited: Iterable, matrix=None):
        words = {tuple(w) for w in prohibited}
        if alphabet is None:
            alphabet = sorted({x for w in words for x in w})
        self.alphabet: tuple = tuple(alphabet)
        if any(not w for w in words):
            raise ValueError("empty prohibited word")
        if any(x not in self.alphabet for w in words for x in w):
            raise ValueError("prohibited word uses a letter outside the alphabet")
        self.prohibited: frozenset = frozenset(words)
        self.matrix = None if matrix is None else tuple(tuple(int(a) for a in row) for row in matrix)
        self.max_len = max((len(w) for w in words), default=1)
        self.memory = max(1, self.max_len - 1)
        self._graph = None

    @classmethod
    def from_matrix(cls, matrix, alphabet: Sequence | None = None) -> SftSystem:
        n = len(matrix)
        if any(len(row) != n for row in matrix):
            raise ValueError("transition matrix must be square")
        alphabet = tuple(alphabet) if alphabet is not None else tuple(str(i) for i in range(n))
        bad = [(alphabet[i], alphabet[j]) for i in range(n) for j in range(n) if not matrix[i][j]]
        return cls(alphabet, bad, matrix)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SftSystem)
            and set(self.alphabet) == set(other.alphabet)
            and self.prohibited == other.prohibited
            and self.matrix == other.matrix
        )

    def __hash__(self) -> int:
        return hash((frozenset(self.alphabet), self.prohibited))

    def admissible_word(self, w: Sequence) -> bool:
        w = tuple(w)
        return not any(
            w[i : i + len(p)] == p for p in self.prohibited for i in range(len(w) - len(p) + 1)
        )

    def admits(self, x: BiSeq) -> bool:
        """Check every window of ``x``; one full period past each preperiod suffices."""
        back = x.past.tail(1)
        lo = -(len(back.preperiod) + len(back.period) + self.max_len)
        hi = len(x.future.preperiod) + len(x.future.period) + self.max_len
        return self.admissible_word(x.window(lo, hi))

    # -- the graph of admissible blocks of length ``memory``

    def block_graph(self) -> tuple[list, dict]:
        """Essential blocks and their successors: blocks on some bi-infinite path."""
        if self._graph is None:
            m = self.memory
            blocks = [b for b in itertools.product(self.alphabet, repeat=m) if self.admissible_word(b)]
            succ = {
                b: [b[1:] + (x,) for x in self.alphabet if self.admissible_word(b + (x,))]
                for b in blocks
            }
            alive = set(blocks)
            changed = True
            while changed:
                indeg = Counter(c for b in alive for c in succ[b] if c in alive)
                keep = {b for b in alive if indeg[b] and any(c in alive for c in succ[b])}
                changed = keep != alive
                alive = keep
            blocks = [b for b in blocks if b in alive]
            self._graph = (blocks, {b: [c for c in succ[b] if c in alive] for b in blocks})
        return self._graph

    def language(self, n: int) -> set:
        """Words of length ``n`` occurring in some bi-infinite admissible sequence."""
        blocks, succ = self.block_graph()
        m = self.memory
        if n <= m:
            return {b[:n] for b in blocks} if n else {()}
        layer = {b: {b} for b in blocks}
        for _ in range(n - m):
            nxt: dict = {}
            for b, words in layer.items():
                for c in succ[b]:
                    nxt.setdefault(c, set()).update(w + c[-1:] for w in words)
            layer = nxt
        return set().union(*layer.values()) if layer else set()

    def to_json(self) -> dict:
        out = {"alphabet": list(self.alphabet), "prohibited": sorted("".join(map(str, w)) for w in self.prohibited)}
        if self.matrix is not None:
            out["matrix"] = [list(r) for r in self.matrix]
        return out

    @classmethod
    def from_json(cls, data: dict) -> SftSystem:
        if "matrix" in data:
            return cls.from_matrix(data["matrix"], data.get("alphabet"))
        return cls(data.get("alphabet"), [tuple(w) for w in data.get("prohibited", [])])


def full_shift(k: int = 2) -> SftSystem:
    return SftSystem(tuple(str(i) for i in range(k)), ())


def golden_mean_shift() -> SftSystem:
    return SftSystem(("0", "1"), [("1", "1")])


def free_group_sft(rank: int = 2) -> SftSystem:
    """Reduced words in a free group: a letter may not follow its inverse."""
    gens = "abcdefgh"[:rank]
    alphabet = tuple(gens) + tuple(g.upper() for g in gens)
    bad = [(g, g.upper()) for g in gens] + [(g.upper(), g) for g in gens]
    return SftSystem(alphabet, bad)


def dual_sft(s: SftSystem) -> SftSystem:
    """Reverse every prohibited word; a matrix presentation is transposed."""
    matrix = None if s.matrix is None else tuple(zip(*s.matrix))
    return SftSystem(s.alphabet, [tuple(reversed(w)) for w in s.prohibited], matrix)


def reversal_invariant(s: SftSystem) -> bool:
    return {tuple(reversed(w)) for w in s.prohibited} == set(s.prohibited)


def random_biseq(s: SftSystem, rng: random.Random) -> BiSeq:
    """Random eventually periodic admissible sequence from walks on the block graph."""
    blocks, succ = s.block_graph()
    if not blocks:
        raise ValueError("the shift is empty")
    pred: dict = {b: [] for b in blocks}
    for b in blocks:
        for c in succ[b]:
            pred[c].append(b)
    start = rng.choice(blocks)

    def walk(step) -> tuple[list, int, int]:
        seen = {start: 0}
        path = [start]
        while True:
            nxt = rng.choice(step[path[-1]])
            if nxt in seen:
                return path, seen[nxt], len(path)
            seen[nxt] = len(path)
            path.append(nxt)

    path, j, k = walk(succ)
    letters = list(start) + [b[-1] for b in path[1:]]
    future = EvPeriodicWord(letters[:j], letters[j:k])
    path, j, k = walk(pred)
    letters = [start[0]] + [b[0] for b in path[1:]]
    past = EvPeriodicWord(letters[:j], letters[j:k])
    return BiSeq(past, future)


def enumerate_biseqs(s: SftSystem, max_pre: int = 1, max_period: int = 2) -> list[BiSeq]:
    """All admissible sequences whose two halves have short preperiods and periods."""
    halves = set()
    for p in range(max_pre + 1):
        for q in range(1, max_period + 1):
            for pre in itertools.product(s.alphabet, repeat=p):
                for per in itertools.product(s.alphabet, repeat=q):
                    halves.add(EvPeriodicWord(pre, per))
    halves = sorted(halves, key=str)
    out = []
    for fut in halves:
        for past in halves:
            if past[0] == fut[0]:
                x = BiSeq(past, fut)
                if s.admits(x):
                    out.append(x)
    return out


def splice(s: SftSystem, x: BiSeq, y: BiSeq) -> BiSeq:
    """``[x, y]``: the future of ``x`` glued to the past of ``y``."""
    if x.window(0, s.memory) != y.window(0, s.memory):
        raise SpliceError(f"{x} and {y} do not share coordinates 0..{s.memory - 1}")
    return BiSeq(y.past, x.future)


def in_plaque(s: SftSystem, x: BiSeq, y: BiSeq) -> bool:
    """``y`` lies in the plaque ``{y : [x, y] = x}`` (same past as ``x``)."""
    return splice(s, x, y) == x


def fried_logscale(s: SftSystem, x: BiSeq, y: BiSeq, horizon: int) -> int:
    """Largest ``n <= horizon`` with ``x_k == y_k`` for all ``|k| < n``."""
    if x.future[0] != y.future[0]:
        return 0
    a = x.future.agreement(y.future)
    b = x.past.agreement(y.past)
    return min([horizon] + [v for v in (a, b) if v is not None])


@dataclass
class DualityReport:
    ok: bool
    horizon: int
    counts: list
    mismatch: str | None
    projected_prohibited: list
    dual_prohibited: list

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "horizon": self.horizon,
            "language_sizes": self.counts,
            "mismatch": self.mismatch,
            "projected_prohibited": self.projected_prohibited,
            "dual_prohibited": self.dual_prohibited,
            "prohibited_match": self.projected_prohibited == self.dual_prohibited,
        }


def duality_witness(s: SftSystem, horizon: int) -> DualityReport:
    """Compare the past projection of the two-sided shift with the dual shift.

    The past of a two-sided sequence read backward is ``x0 x-1 x-2 ...``; its
    words are the reversed words of ``s``.  They must coincide with the
    language of ``dual_sft(s)`` at every length up to ``horizon``.
    """
    dual = dual_sft(s)
    counts, mismatch = [], None
    projected: dict = {}
    for n in range(1, horizon + 1):
        past = {tuple(reversed(w)) for w in s.language(n)}
        projected[n] = past
        other = dual.language(n)
        counts.append(len(past))
        if past != other and mismatch is None:
            mismatch = word_str(min(past ^ other))
    # minimal forbidden words of the projected language, up to the longest constraint
    forbidden = []
    for n in range(1, min(horizon, s.max_len) + 1):
        for w in itertools.product(s.alphabet, repeat=n):
            if w not in projected[n] and (n == 1 or (w[1:] in projected[n - 1] and w[:-1] in projected[n - 1])):
                forbidden.append(word_str(w))
    return DualityReport(
        mismatch is None,
        horizon,
        counts,
        mismatch,
        sorted(forbidden),
        sorted(word_str(w) for w in dual.prohibited),
    )


# ------------------------------------------------------------ contracting groups


@dataclass
class GluingGraph:
    level: int
    vertices: tuple
    edges: tuple  # (u, v, labels) with u < v
    nucleus: tuple

    def simple_graph(self) -> Graph:
        return Graph(self.vertices, [(u, v) for u, v, _ in self.edges])

    def degrees(self) -> Counter:
        deg = Counter({v: 0 for v in self.vertices})
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_cycle(self) -> bool:
        return (
            len(self.vertices) >= 3
            and set(self.degrees().values()) == {2}
            and self.simple_graph().is_connected()
        )

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "vertices": [word_str(v) for v in self.vertices],
            "edges": [[word_str(u), word_str(v), list(lab)] for u, v, lab in self.edges],
            "identifications": len(self.edges),
            "nucleus": list(self.nucleus),
        }

    def to_dot(self, name: str = "Gluing") -> str:
        lines = [f"graph {name} {{"]
        lines += [f'  "{word_str(v)}";' for v in self.vertices]
        lines += [
            f'  "{word_str(u)}" -- "{word_str(v)}" [label="{",".join(lab)}"];' for u, v, lab in self.edges
        ]
        lines.append("}")
        return "\n".join(lines) + "\n"


def limit_space_gluing(rec: WreathRecursion, n: int, budget: int = 2_000) -> GluingGraph:
    """Level-``n`` approximation of the limit space.

    Words ``v, w`` of length ``n`` are joined when a nucleus element ``g`` maps
    ``v`` to ``w`` and its section at ``v`` is again in the nucleus.
    """
    nuc = nucleus(rec, budget)
    if not nuc.ok:
        raise NotContracting(nuc.status)
    store = ElementSet(rec, budget=budget * 10)
    for g in nuc.elements:
        store.add(g)
    verts = tuple(itertools.product(rec.alphabet, repeat=n))
    labels: dict = {}
    for g in nuc.elements:
        for v in verts:
            w = act(g, v)
            if w == v:
                continue
            if store.find(g.section(v)) is None:
                continue
            key = (min(v, w), max(v, w))
            labels.setdefault(key, set()).add(g.label())
    edges = tuple((u, v, tuple(sorted(lab))) for (u, v), lab in sorted(labels.items()))
    return GluingGraph(n, verts, edges, tuple(g.label() for g in nuc.elements))


def gamma_graph(rec: WreathRecursion, max_len: int, max_vertices: int = 1 << 20) -> CocycleGraph:
    """Self-similarity graph on ``X^{<= max_len}`` with potential = word length.

    Prepending a letter gives arrows ``xv -> v``; generators give links
    ``v -- s(v)`` between words of equal length.
    """
    k = len(rec.alphabet)
    if sum(k**i for i in range(max_len + 1)) > max_vertices:
        raise ValueError(f"X^<={max_len} exceeds {max_vertices} vertices")
    verts = [v for i in range(max_len + 1) for v in itertools.product(rec.alphabet, repeat=i)]
    arrows = [((x,) + v, v) for v in verts if len(v) < max_len for x in rec.alphabet]
    links = sorted({tuple(sorted((v, act(s, v)))) for s in rec.generators() for v in verts if v})
    cg = CocycleGraph(verts, arrows, {v: len(v) for v in verts}, links, truncated=[()])
    cg.label = lambda v: word_str(v) or "e"  # type: ignore[method-assign]
    return cg


# ------------------------------------------------------------ Bratteli-Vershik systems


class AdicSystem:
    """Stationary ordered Bratteli diagram.

    ``edges[e] = (source, range)``; a path ``e0 e1 ...`` needs
    ``range(e_i) == source(e_{i+1})``.  ``order[v]`` lists the edges ending at
    ``v`` from smallest to largest.  The tile of a path is the range of its
    first edge unless ``tile_type`` says otherwise; the substitution defaults
    to ``v -> sources of order[v]``.
    """

    def __init__(self, vertices, edges: dict, order: dict, substitution: dict | None = None, tile_type: dict | None = None):
        self.vertices: tuple = tuple(vertices)
        self.edges: dict = {str(e): (s, r) for e, (s, r) in edges.items()}
        self.order: dict = {v: tuple(str(e) for e in order[v]) for v in self.vertices}
        for v in self.vertices:
            fiber = sorted(e for e, (_, r) in self.edges.items() if r == v)
            if sorted(self.order[v]) != fiber:
                raise AdicError(f"order at {v} must list exactly the edges ending there")
        if any(s not in self.vertices or r not in self.vertices for s, r in self.edges.values()):
            raise AdicError("edge endpoint outside the vertex set")
        self.rank = {e: i for v in self.vertices for i, e in enumerate(self.order[v])}
        if substitution is None:
            substitution = {v: tuple(self.edges[e][0] for e in self.order[v]) for v in self.vertices}
        self.substitution: dict = {v: tuple(w) for v, w in substitution.items()}
        self.tile_type: dict = dict(tile_type) if tile_type else {e: r for e, (_, r) in self.edges.items()}

    def source(self, e: str):
        return self.edges[e][0]

    def range(self, e: str):
        return self.edges[e][1]

    def is_max(self, e: str) -> bool:
        return self.rank[e] == len(self.order[self.range(e)]) - 1

    def is_min(self, e: str) -> bool:
        return self.rank[e] == 0

    def matrix(self) -> np.ndarray:
        """``a[i, j]`` = number of edges from vertex ``i`` to vertex ``j``."""
        idx = {v: i for i, v in enumerate(self.vertices)}
        a = np.zeros((len(self.vertices),) * 2, dtype=np.int64)
        for s, r in self.edges.values():
            a[idx[s], idx[r]] += 1
        return a

    def substitution_matrix(self) -> np.ndarray:
        """``m[i, j]`` = occurrences of tile ``i`` in the image of tile ``j``."""
        idx = {v: i for i, v in enumerate(self.vertices)}
        m = np.zeros((len(self.vertices),) * 2, dtype=np.int64)
        for j, v in enumerate(self.vertices):
            for t in self.substitution.get(v, ()):
                m[idx[t], j] += 1
        return m

    def admissible(self, path: Sequence[str]) -> bool:
        path = tuple(path)
        if any(e not in self.edges for e in path):
            return False
        return all(self.range(a) == self.source(b) for a, b in zip(path, path[1:]))

    def prefixes(self, n: int) -> list[tuple]:
        out = [()]
        for _ in range(n):
            out = [p + (e,) for p in out for e in self.edges if not p or self.range(p[-1]) == self.source(e)]
        return out

    def extreme_prefix(self, n: int, kind: str = "min") -> tuple:
        """Length-``n`` prefix of the unique infinite minimal (or maximal) path."""
        test = self.is_min if kind == "min" else self.is_max
        alive = {e for e in self.edges if test(e)}
        while True:
            keep = {e for e in alive if any(self.range(e) == self.source(f) for f in alive)}
            if keep == alive:
                break
            alive = keep
        paths = [p for p in itertools.product(sorted(alive), repeat=n) if self.admissible(p)] if n else [()]
        if len(paths) != 1:
            raise AdicError(f"the diagram has {len(paths)} infinite {kind}imal paths at length {n}")
        return paths[0]

    def is_proper(self) -> bool:
        try:
            self.extreme_prefix(len(self.edges) + 1, "min")
            self.extreme_prefix(len(self.edges) + 1, "max")
        except AdicError:
            return False
        return True

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": {e: {"source": s, "range": r} for e, (s, r) in self.edges.items()},
            "order": {v: list(self.order[v]) for v in self.vertices},
            "substitution": {v: "".join(w) for v, w in self.substitution.items()},
            "tile_type": dict(self.tile_type),
        }

    @classmethod
    def from_json(cls, data: dict) -> AdicSystem:
        edges = {}
        for e, val in data["edges"].items():
            edges[e] = (val["source"], val["range"]) if isinstance(val, dict) else tuple(val)
        sub = data.get("substitution")
        if sub is not None:
            sub = {v: tuple(w) for v, w in sub.items()}
        return cls(data["vertices"], edges, data["order"], sub, data.get("tile_type"))


def golden_adic() -> AdicSystem:
    """Five-edge diagram with matrix [[2, 1], [1, 1]] and orders 1<2<3, 4<5."""
    edges = {"1": ("A", "A"), "2": ("A", "A"), "3": ("B", "A"), "4": ("A", "B"), "5": ("B", "B")}
    return AdicSystem(("A", "B"), edges, {"A": ["1", "2", "3"], "B": ["4", "5"]})


def vershik_map(adic: AdicSystem, prefix: Sequence[str]) -> tuple:
    """Adic successor of a finite path prefix.

    The first non-maximal edge moves to the next edge of its fiber and all
    earlier edges become minimal.  The prefix of the maximal path wraps to
    the prefix of the minimal path; any other all-maximal prefix has an image
    that depends on the unseen tail and is rejected.
    """
    path = tuple(str(e) for e in prefix)
    if not adic.admissible(path):
        raise AdicError(f"{''.join(path)} is not an admissible path")
    for n, e in enumerate(path):
        if not adic.is_max(e):
            break
    else:
        if path == adic.extreme_prefix(len(path), "max"):
            return adic.extreme_prefix(len(path), "min")
        raise AdicError(f"{''.join(path)} is maximal; its image depends on the tail")
    fiber = adic.order[adic.range(e)]
    out = [fiber[adic.rank[e] + 1]]
    for _ in range(n):
        out.append(adic.order[adic.source(out[-1])][0])
    return tuple(reversed(out)) + path[n + 1 :]


def substitution_expand(adic: AdicSystem, seed, iterations: int) -> tuple:
    word = tuple(seed)
    for _ in range(iterations):
        word = tuple(t for x in word for t in adic.substitution[x])
    return word


def _primitive(a: np.ndarray) -> bool:
    """Wielandt: a primitive n x n matrix has a positive power of exponent (n-1)^2 + 1."""
    n = len(a)
    b = (a > 0).astype(np.int64)
    p = np.eye(n, dtype=np.int64)
    for _ in range((n - 1) ** 2 + 1):
        p = ((p @ b) > 0).astype(np.int64)
    return bool(p.all())


@dataclass
class PerronData:
    eigenvalue: QuadSurd | None
    lengths: tuple | None
    interval: tuple[Fraction, Fraction]
    approx_lengths: tuple

    def to_json(self) -> dict:
        out = {
            "interval": [str(self.interval[0]), str(self.interval[1])],
            "approx_lengths": [float(x) for x in self.approx_lengths],
            "exact": self.eigenvalue is not None,
        }
        if self.eigenvalue is not None:
            out["eigenvalue"] = str(self.eigenvalue)
            out["lengths"] = [str(x) for x in self.lengths]
            out["eigenvalue_exact"] = self.eigenvalue.to_json()
            out["lengths_exact"] = [x.to_json() for x in self.lengths]
        return out


def perron_data(matrix, max_den: int = 10**6) -> PerronData:
    """Perron eigenvalue of ``matrix`` and a positive left eigenvector with first entry 1.

    Exact in a quadratic field for 2 x 2 input; otherwise only the
    Collatz-Wielandt interval and a floating point vector are certified.
    """
    a = np.asarray(matrix, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or (a < 0).any():
        raise ValueError("need a square nonnegative integer matrix")
    if not _primitive(a):
        raise ValueError("matrix is not primitive")
    at = a.T
    v = np.ones(len(a))
    for _ in range(500):
        v = at @ v
        v /= v[0]
    x = [Fraction(float(t)).limit_denominator(max_den) for t in v]
    ratios = [sum(int(at[i, j]) * x[j] for j in range(len(x))) / x[i] for i in range(len(x))]
    interval = (min(ratios), max(ratios))
    if len(a) != 2:
        return PerronData(None, None, interval, tuple(v))
    (p, q), (r, s) = a.tolist()
    tr, det = p + s, p * s - q * r
    root = QuadSurd.sqrt_of(tr * tr - 4 * det)
    lam = (root + tr) / 2
    # first row of (A^T - lam) l = 0 with l = (1, l2): (p - lam) + r * l2 = 0
    second = (lam - p) / r
    d = lam.d if lam.q else second.d
    lengths = (QuadSurd.rational(1, d), second)
    return PerronData(lam, lengths, interval, tuple(v))


def tile_lengths(adic: AdicSystem) -> PerronData:
    """Inflation factor and tile lengths, normalized so the first tile has length 1."""
    return perron_data(adic.substitution_matrix().T)


def leaf_itinerary(adic: AdicSystem, prefix: Sequence[str], steps: int) -> tuple:
    """Tile types met along a leaf, starting at the tile of ``prefix``.

    Paths that differ only in their first edge share a tile, so the walk
    applies the adic successor to the prefix with its first edge removed.
    """
    path = tuple(str(e) for e in prefix)
    if not path or not adic.admissible(path):
        raise AdicError("need a nonempty admissible prefix")
    out = [adic.tile_type[path[0]]]
    tail = path[1:]
    for _ in range(steps - 1):
        if not tail:
            raise AdicError("prefix too short to leave its tile")
        if all(adic.is_max(e) for e in tail):
            raise AdicError(f"orbit reached the maximal prefix after {len(out)} tiles")
        tail = vershik_map(adic, tail)
        out.append(adic.tile_type[adic.order[adic.source(tail[0])][0]])
    return tuple(out)


def is_factor(word: Sequence, adic: AdicSystem, seed="A", max_iter: int = 30) -> int | None:
    """Smallest ``n`` with ``word`` a factor of the ``n``-th image of ``seed``."""
    w = "".join(map(str, word))
    img = substitution_expand(adic, seed, 0)
    for n in range(max_iter + 1):
        if w in "".join(img):
            return n
        if len(img) > 10**6:
            break
        img = substitution_expand(adic, img, 1)
    return None
