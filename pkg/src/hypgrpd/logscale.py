"""Integer log-scales on finite sets and the metrics associated with them.

A log-scale is stored as a symmetric ``int64`` table with ``INF`` on the
diagonal.  Metrics are tables of exact ``Fraction`` values.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, Sequence

import mpmath
import numpy as np

from . import _kernels
from ._kernels import INF

__all__ = [
    "LogScale",
    "MetricTable",
    "EquivalenceBounds",
    "delta_of",
    "metric_from_logscale",
    "frink_bounds_hold",
    "logscale_from_metric",
    "product_logscale",
    "paste_logscales",
    "pasting_level",
    "equivalence_bounds",
]


@dataclass(frozen=True)
class LogScale:
    points: tuple
    table: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=np.int64)
        n = len(self.points)
        if t.shape != (n, n):
            raise ValueError(f"table shape {t.shape} does not match {n} points")
        if len(set(self.points)) != n:
            raise ValueError("duplicate points")
        if not np.array_equal(t, t.T):
            raise ValueError("log-scale must be symmetric")
        if n and not np.all(np.diag(t) == INF):
            raise ValueError("diagonal must be +infinity")
        off = t[~np.eye(n, dtype=bool)]
        if np.any(off >= INF // 2):
            raise ValueError("off-diagonal values must be finite")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    @classmethod
    def from_function(cls, points: Sequence[Hashable], fn) -> LogScale:
        pts = tuple(points)
        n = len(pts)
        t = np.full((n, n), INF, dtype=np.int64)
        for i, j in itertools.combinations(range(n), 2):
            v = int(fn(pts[i], pts[j]))
            t[i, j] = t[j, i] = v
        return cls(pts, t)

    @classmethod
    def from_pairs(cls, points: Sequence[Hashable], values: dict) -> LogScale:
        """``values`` maps unordered pairs ``(p, q)`` (either order) to integers."""
        def lookup(p, q):
            if (p, q) in values:
                return values[(p, q)]
            if (q, p) in values:
                return values[(q, p)]
            raise ValueError(f"missing log-scale value for pair {(p, q)!r}")

        return cls.from_function(points, lookup)

    def index(self, p) -> int:
        return self._index[p]

    def __call__(self, p, q) -> int | float:
        v = int(self.table[self._index[p], self._index[q]])
        return float("inf") if v == INF else v

    def __len__(self) -> int:
        return len(self.points)

    def pairs(self):
        """Unordered off-diagonal index pairs with their values."""
        n = len(self.points)
        for i, j in itertools.combinations(range(n), 2):
            yield i, j, int(self.table[i, j])

    def restrict(self, subset: Sequence[Hashable]) -> LogScale:
        idx = [self._index[p] for p in subset]
        return LogScale(tuple(subset), self.table[np.ix_(idx, idx)].copy())

    def shifted(self, k: int) -> LogScale:
        t = self.table.copy()
        mask = ~np.eye(len(self.points), dtype=bool)
        t[mask] += k
        return LogScale(self.points, t)

    def to_json(self) -> dict:
        return {
            "points": list(self.points),
            "values": [[i, j, v] for i, j, v in self.pairs()]
            + [[i, i, None] for i in range(len(self.points))],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> LogScale:
        if isinstance(data, str):
            data = json.loads(data)
        pts = tuple(_freeze(p) for p in data["points"])
        n = len(pts)
        t = np.full((n, n), INF, dtype=np.int64)
        seen = np.eye(n, dtype=bool)
        for i, j, v in data["values"]:
            if v is None:
                if i != j:
                    raise ValueError("infinity is only allowed on the diagonal")
                continue
            if i == j:
                raise ValueError("diagonal values must be null")
            t[i, j] = t[j, i] = int(v)
            seen[i, j] = seen[j, i] = True
        if not seen.all():
            raise ValueError("log-scale JSON does not list every pair")
        return cls(pts, t)


def _freeze(p):
    return tuple(_freeze(x) for x in p) if isinstance(p, list) else p


@dataclass(frozen=True)
class MetricTable:
    points: tuple
    dist: tuple  # tuple of tuples of Fraction (or real numbers for inputs)

    def __post_init__(self) -> None:
        n = len(self.points)
        rows = tuple(tuple(r) for r in self.dist)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("distance table shape mismatch")
        for i in range(n):
            if rows[i][i] != 0:
                raise ValueError("dist(x, x) must be 0")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("metric must be symmetric")
                if not rows[i][j] > 0:
                    raise ValueError("distinct points must have positive distance")
        object.__setattr__(self, "dist", rows)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    def __call__(self, p, q):
        return self.dist[self._index[p]][self._index[q]]

    def triangle_violations(self) -> list[tuple[int, int, int]]:
        n = len(self.points)
        d = self.dist
        return [
            (i, j, k)
            for i, j, k in itertools.product(range(n), repeat=3)
            if d[i][k] > d[i][j] + d[j][k]
        ]

    def to_json(self) -> dict:
        n = len(self.points)
        return {
            "points": list(self.points),
            "values": [
                [i, j, str(self.dist[i][j])] for i in range(n) for j in range(i + 1, n)
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> MetricTable:
        if isinstance(data, str):
            data = json.loads(data)
        pts = tuple(_freeze(p) for p in data["points"])
        n = len(pts)
        d: list[list[Any]] = [[Fraction(0)] * n for _ in range(n)]
        for i, j, v in data["values"]:
            if i == j:
                continue
            val = Fraction(v) if isinstance(v, (str, int)) else v
            d[i][j] = d[j][i] = val
        return cls(pts, tuple(tuple(r) for r in d))


def delta_of(ls: LogScale) -> int:
    """Least ``delta >= 0`` with ``l(x,z) >= min(l(x,y), l(y,z)) - delta`` everywhere."""
    return _kernels.logscale_delta(ls.table)


def _dyadic(n: int) -> Fraction:
    return Fraction(1, 2**n) if n >= 0 else Fraction(2 ** (-n))


def metric_from_logscale(ls: LogScale, delta: int) -> MetricTable:
    """Frink chain metric for the uniformity ``E_{2 delta n} = {l >= 2 delta n}``.

    The pair weight is ``2^-floor(l / (2 delta))``; the metric is the infimum of
    weight sums over chains, which is exact on a finite set.
    """
    if delta < 1:
        raise ValueError("delta must be >= 1 (clamp with max(delta, 1))")
    actual = delta_of(ls)
    if delta < actual:
        raise ValueError(f"delta={delta} is below the log-scale's delta {actual}")
    n = len(ls.points)
    w = [[Fraction(0)] * n for _ in range(n)]
    for i, j, v in ls.pairs():
        w[i][j] = w[j][i] = _dyadic(v // (2 * delta))
    # chain infimum
    for k in range(n):
        wk = w[k]
        for i in range(n):
            wik = w[i][k]
            wi = w[i]
            for j in range(n):
                c = wik + wk[j]
                if c < wi[j]:
                    wi[j] = c
    return MetricTable(ls.points, tuple(tuple(r) for r in w))


def frink_bounds_hold(ls: LogScale, m: MetricTable, delta: int) -> list[tuple]:
    """Pairs violating ``(1/4) a^l <= d <= 2 a^l`` with ``a = 2^(-1/(2 delta))``.

    Checked exactly: ``a^l = 2^(-l/(2 delta))`` so both sides are raised to the
    power ``2 delta``.  Returns the list of violating point pairs.
    """
    bad = []
    e = 2 * delta
    for i, j, v in ls.pairs():
        d = Fraction(m.dist[i][j])
        target = _dyadic(v)  # 2^-l
        if (4 * d) ** e < target or (d / 2) ** e > target:
            bad.append((ls.points[i], ls.points[j]))
    return bad


def _floor_ln(x) -> int:
    with mpmath.workdps(60):
        if isinstance(x, Fraction):
            val = mpmath.log(mpmath.mpf(x.numerator)) - mpmath.log(mpmath.mpf(x.denominator))
        else:
            val = mpmath.log(mpmath.mpf(x))
        r = int(mpmath.nint(val))
        # inputs given as floats approximating e^k land within rounding of k
        if abs(val - r) < mpmath.mpf("1e-12"):
            return r
        return int(mpmath.floor(val))


def logscale_from_metric(m: MetricTable) -> LogScale:
    """``l(x, y) = -floor(ln |x - y|)``."""
    n = len(m.points)
    t = np.full((n, n), INF, dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        t[i, j] = t[j, i] = -_floor_ln(m.dist[i][j])
    return LogScale(m.points, t)


def product_logscale(ls1: LogScale, ls2: LogScale) -> LogScale:
    """``l((a1,b1),(a2,b2)) = min(l1(a1,a2), l2(b1,b2))`` on the product set."""
    n1, n2 = len(ls1.points), len(ls2.points)
    pts = tuple((a, b) for a in ls1.points for b in ls2.points)
    t1 = np.repeat(np.repeat(ls1.table, n2, axis=0), n2, axis=1)
    t2 = np.tile(ls2.table, (n1, n1))
    return LogScale(pts, np.minimum(t1, t2))


def _overlap_discrepancy(cover: list[list], locals_: list[LogScale]) -> int:
    worst = 0
    for i, j in itertools.combinations(range(len(cover)), 2):
        common = [p for p in cover[i] if p in set(cover[j])]
        for p, q in itertools.combinations(common, 2):
            worst = max(worst, abs(locals_[i](p, q) - locals_[j](p, q)))
    return worst


def _home_charts(points, cover) -> dict:
    home = {}
    for p in points:
        for i, chart in enumerate(cover):
            if p in chart:
                home[p] = i
                break
        else:
            raise ValueError(f"point {p!r} is not covered")
    return home


def _neighborhood(points, cover, home):
    members = [set(c) for c in cover]

    def in_e(p, q):
        return p == q or (q in members[home[p]] and p in members[home[q]])

    return in_e


def pasting_level(cover: Sequence[Sequence], locals_: Sequence[LogScale]) -> int:
    """The clamp level ``n``: above it, close pairs of every chart lie in ``E``."""
    cover = [list(c) for c in cover]
    points = list(dict.fromkeys(p for c in cover for p in c))
    home = _home_charts(points, cover)
    in_e = _neighborhood(points, cover, home)
    level = 1
    for chart, loc in zip(cover, locals_):
        for p, q in itertools.combinations(chart, 2):
            if not in_e(p, q):
                level = max(level, loc(p, q) + 1)
    return level


def paste_logscales(
    cover: Sequence[Sequence], locals_: Sequence[LogScale], overlap_bound: int
) -> LogScale:
    """Global log-scale Lipschitz-equivalent to each positive local scale on its chart.

    ``E`` is the symmetric neighborhood of the diagonal of pairs lying in each
    other's home chart; pairs in ``E`` take ``max(l_home, n)``, all other pairs
    take the clamp level ``n``.
    """
    cover = [list(c) for c in cover]
    if len(cover) != len(locals_):
        raise ValueError("one local scale per chart is required")
    for chart, loc in zip(cover, locals_):
        if set(chart) != set(loc.points):
            raise ValueError("local scale must live on its chart")
        if any(v <= 0 for _, _, v in loc.pairs()):
            raise ValueError("local scales must be positive")
    disc = _overlap_discrepancy(cover, list(locals_))
    if disc > overlap_bound:
        raise ValueError(f"locals differ by {disc} on an overlap (bound {overlap_bound})")
    points = list(dict.fromkeys(p for c in cover for p in c))
    home = _home_charts(points, cover)
    in_e = _neighborhood(points, cover, home)
    n = pasting_level(cover, locals_)

    def value(p, q):
        if in_e(p, q):
            chart = min(home[p], home[q])
            return max(locals_[chart](p, q), n)
        return n

    return LogScale.from_function(points, value)


@dataclass(frozen=True)
class EquivalenceBounds:
    lipschitz_k: int | None
    holder: tuple[Fraction, Fraction] | None

    def to_json(self) -> dict:
        return {
            "lipschitz_k": self.lipschitz_k,
            "holder": None if self.holder is None else [str(self.holder[0]), str(self.holder[1])],
        }


def equivalence_bounds(ls1: LogScale, ls2: LogScale) -> EquivalenceBounds:
    """Lipschitz and Hölder envelopes of ``ls2`` against ``ls1`` on a common point set.

    On a finite set ``max |l1 - l2|`` is always finite, so the Lipschitz constant
    is reported as ``None`` when the discrepancy grows with scale: its maximum on
    the upper half of the ``l1`` values exceeds its maximum on the lower half.
    The Hölder slope ``c`` is the largest ratio ``l2/l1`` (or its inverse) on the
    upper half of scales; ``k`` is the least intercept making the envelope hold
    on every pair.
    """
    if set(ls1.points) != set(ls2.points):
        raise ValueError("log-scales live on different point sets")
    rows = [(v, ls2(ls1.points[i], ls1.points[j])) for i, j, v in ls1.pairs()]
    if not rows:
        return EquivalenceBounds(0, (Fraction(1), Fraction(0)))
    scales = sorted({a for a, _ in rows})
    median = scales[len(scales) // 2]
    diffs = [abs(a - b) for a, b in rows]
    lip: int | None = max(diffs)
    if len(scales) > 1:
        hi = max(d for (a, _), d in zip(rows, diffs) if a >= median)
        lo = max(d for (a, _), d in zip(rows, diffs) if a < median)
        if hi > lo:
            lip = None
    top = [(a, b) for a, b in rows if a >= median and a > 0 and b > 0]
    if not top:
        return EquivalenceBounds(lip, None)
    c = max(max(Fraction(b, a), Fraction(a, b)) for a, b in top)
    k = max(
        [Fraction(0)]
        + [b - c * a for a, b in rows]
        + [Fraction(a) / c - b for a, b in rows]
    )
    return EquivalenceBounds(lip, (c, k))
