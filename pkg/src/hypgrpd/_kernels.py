"""Numeric inner loops shared by the log-scale and graph modules.

Every kernel has two implementations: a numba ``@njit`` version and a plain
numpy version.  The numba path is used unless ``HYPGRPD_KERNELS=numpy`` is set
in the environment (or numba fails to import).  Both paths operate on integer
arrays only, so they return identical results.

Integer conventions:

* distance matrices use ``UNREACHED`` (-1) for disconnected pairs;
* log-scale tables use ``INF`` for the diagonal (+infinity);
* Gromov products are passed doubled so that they stay integral.
"""

from __future__ import annotations

import os

import numpy as np

INF = np.iinfo(np.int64).max // 4
UNREACHED = -1

_requested = os.environ.get("HYPGRPD_KERNELS", "numba").strip().lower()

try:
    if _requested == "numpy":
        raise ImportError("numba disabled by HYPGRPD_KERNELS")
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

if HAVE_NUMBA:
    _threads = os.environ.get("HYPGRPD_THREADS")
    if _threads:
        try:
            numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))
        except ValueError:
            pass


# ---------------------------------------------------------------- numpy paths


def _bfs_all_pairs_np(indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    n = len(indptr) - 1
    dist = np.full((n, n), UNREACHED, dtype=np.int64)
    # frontier expansion on a sparse boolean adjacency, one source row block at a time
    src = np.repeat(np.arange(n), np.diff(indptr))
    for s in range(n):
        row = dist[s]
        row[s] = 0
        frontier = np.array([s])
        d = 0
        while frontier.size:
            d += 1
            mask = np.isin(src, frontier)
            nxt = np.unique(indices[mask])
            nxt = nxt[row[nxt] == UNREACHED]
            row[nxt] = d
            frontier = nxt
    return dist


def _four_point_delta2_np(dist: np.ndarray, base: int, members: np.ndarray) -> int:
    # doubled Gromov products w.r.t. base restricted to members
    d = dist[np.ix_(members, members)]
    r = dist[base, members]
    prod2 = r[:, None] + r[None, :] - d
    # (x,z) >= min((x,y),(y,z)) - delta  for all x,y,z; thresholds on the small value range
    values = np.unique(prod2)
    best = 0
    mf = prod2.astype(np.float64)
    for t in values[::-1]:
        if t <= best:
            break
        b = (mf >= t).astype(np.float64)
        reach = (b @ b) > 0.5
        # pairs with min-path >= t but direct product < t - best
        viol = reach & (prod2 < t - best)
        if viol.any():
            best = max(best, int(t - prod2[viol].min()))
    return best


def _logscale_delta_np(table: np.ndarray) -> int:
    n = table.shape[0]
    best = 0
    for y in range(n):
        m = np.minimum(table[:, y][:, None], table[y, :][None, :])
        gap = m - table
        np.fill_diagonal(gap, 0)
        gap[y, :] = 0
        gap[:, y] = 0
        best = max(best, int(gap.max()))
    return best


def _max_min_violation_np(prod2: np.ndarray) -> int:
    n = prod2.shape[0]
    best = 0
    for y in range(n):
        m = np.minimum(prod2[:, y][:, None], prod2[y, :][None, :])
        best = max(best, int((m - prod2).max()))
    return best


def _geodesic_patterns_np(indptr, indices, etype, dist, max_run):
    n = len(indptr) - 1
    bad_order = 0
    bad_run = 0
    witness = np.full(4, -1, dtype=np.int64)
    for s in range(n):
        states = np.zeros(n, dtype=np.int64)
        states[s] = 1
        for v in np.argsort(dist[s], kind="stable"):
            dv = dist[s, v]
            if dv < 0 or states[v] == 0:
                continue
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[s, w] != dv + 1:
                    continue
                new, o, r = _transition(int(states[v]), int(etype[k]), max_run)
                if o and witness[0] < 0:
                    witness[:2] = (s, w)
                if r and witness[2] < 0:
                    witness[2:] = (s, w)
                bad_order += o
                bad_run += r
                states[w] |= new
    return bad_order, bad_run, witness


def _transition(mask, et, max_run):
    width = max_run + 1
    new = 0
    bad_order = 0
    bad_run = 0
    for st in range(2 * width):
        if not (mask >> st) & 1:
            continue
        asc, run = divmod(st, width)
        if et == 0:
            if run + 1 > max_run:
                bad_run = 1
                continue
            new |= 1 << (asc * width + run + 1)
        elif et == 1:
            if asc:
                bad_order = 1
                continue
            new |= 1
        else:
            new |= 1 << width
    return new, bad_order, bad_run


def _widest_geodesics(dist, indptr, indices, orders, weight, out, a=-1, b=-1):
    # out[y, z] = max over geodesics y..z of the min weight along the path;
    # a path through the edge a-b passes the midpoint itself and scores 0
    n = dist.shape[0]
    for y in range(n):
        for z in orders[y]:
            if z == y:
                out[y, y] = weight[y]
                continue
            dz = dist[y, z]
            m = -1
            for k in range(indptr[z], indptr[z + 1]):
                u = indices[k]
                if dist[y, u] == dz - 1:
                    c = 0 if (u == a and z == b) or (u == b and z == a) else out[y, u]
                    if c > m:
                        m = c
            out[y, z] = weight[z] if weight[z] < m else m


def _thin_triangle2_np(dist, indptr, indices, pa, pb):
    n = dist.shape[0]
    orders = np.argsort(dist, axis=1, kind="stable")
    wide = np.empty((n, n), dtype=np.int64)
    best = 0
    for k in range(len(pa)):
        a, b = pa[k], pb[k]
        weight = 2 * np.minimum(dist[a], dist[b]) + (a != b)
        if weight.max() <= best:
            continue
        if a == b:
            _widest_geodesics(dist, indptr, indices, orders, weight, wide)
        else:
            _widest_geodesics(dist, indptr, indices, orders, weight, wide, a, b)
        if a == b:
            on = dist[:, a][:, None] + dist[a][None, :] == dist
        else:
            on = (dist[:, a][:, None] + 1 + dist[b][None, :] == dist) | (
                dist[:, b][:, None] + 1 + dist[a][None, :] == dist
            )
        xs, ys = np.nonzero(on)
        for x, y in zip(xs, ys):
            if min(weight[x], weight[y]) <= best:
                continue
            best = max(best, int(np.minimum(wide[x], wide[y]).max()))
    return best


# ---------------------------------------------------------------- numba paths

if HAVE_NUMBA:

    @njit(cache=True)
    def _bfs_all_pairs_nb(indptr, indices):
        n = len(indptr) - 1
        dist = np.full((n, n), -1, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        for s in range(n):
            dist[s, s] = 0
            head = 0
            tail = 1
            queue[0] = s
            while head < tail:
                u = queue[head]
                head += 1
                du = dist[s, u]
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    if dist[s, v] < 0:
                        dist[s, v] = du + 1
                        queue[tail] = v
                        tail += 1
        return dist

    @njit(cache=True)
    def _max_min_violation_nb(prod2):
        n = prod2.shape[0]
        best = 0
        for x in range(n):
            for y in range(n):
                pxy = prod2[x, y]
                if pxy - best <= 0:
                    continue
                for z in range(n):
                    m = pxy if pxy < prod2[y, z] else prod2[y, z]
                    gap = m - prod2[x, z]
                    if gap > best:
                        best = gap
        return best

    @njit(cache=True)
    def _logscale_delta_nb(table):
        n = table.shape[0]
        best = 0
        for x in range(n):
            for y in range(n):
                if y == x:
                    continue
                for z in range(n):
                    if z == x or z == y:
                        continue
                    a = table[x, y]
                    b = table[y, z]
                    m = a if a < b else b
                    gap = m - table[x, z]
                    if gap > best:
                        best = gap
        return best

    @njit(cache=True)
    def _transition_nb(mask, et, max_run):
        width = max_run + 1
        new = 0
        bad_order = 0
        bad_run = 0
        for st in range(2 * width):
            if not (mask >> st) & 1:
                continue
            asc = st // width
            run = st % width
            if et == 0:
                if run + 1 > max_run:
                    bad_run = 1
                    continue
                new |= 1 << (asc * width + run + 1)
            elif et == 1:
                if asc:
                    bad_order = 1
                    continue
                new |= 1
            else:
                new |= 1 << width
        return new, bad_order, bad_run

    @njit(cache=True)
    def _geodesic_patterns_nb(indptr, indices, etype, dist, max_run):
        n = len(indptr) - 1
        bad_order = 0
        bad_run = 0
        witness = np.full(4, -1, dtype=np.int64)
        states = np.zeros(n, dtype=np.int64)
        for s in range(n):
            states[:] = 0
            states[s] = 1
            order = np.argsort(dist[s], kind="mergesort")
            for v in order:
                dv = dist[s, v]
                if dv < 0 or states[v] == 0:
                    continue
                for k in range(indptr[v], indptr[v + 1]):
                    w = indices[k]
                    if dist[s, w] != dv + 1:
                        continue
                    new, o, r = _transition_nb(states[v], etype[k], max_run)
                    if o and witness[0] < 0:
                        witness[0] = s
                        witness[1] = w
                    if r and witness[2] < 0:
                        witness[2] = s
                        witness[3] = w
                    bad_order += o
                    bad_run += r
                    states[w] |= new
        return bad_order, bad_run, witness

    @njit(cache=True)
    def _thin_triangle2_nb(dist, indptr, indices, pa, pb):
        n = dist.shape[0]
        orders = np.empty((n, n), dtype=np.int64)
        for y in range(n):
            orders[y] = np.argsort(dist[y], kind="mergesort")
        wide = np.empty((n, n), dtype=np.int64)
        weight = np.empty(n, dtype=np.int64)
        best = 0
        for k in range(len(pa)):
            a = pa[k]
            b = pb[k]
            mid = 1 if a != b else 0
            top = 0
            for w in range(n):
                da = dist[a, w]
                db = dist[b, w]
                weight[w] = 2 * (da if da < db else db) + mid
                if weight[w] > top:
                    top = weight[w]
            if top <= best:
                continue
            for y in range(n):
                for z in orders[y]:
                    if z == y:
                        wide[y, y] = weight[y]
                        continue
                    dz = dist[y, z]
                    m = -1
                    for kk in range(indptr[z], indptr[z + 1]):
                        u = indices[kk]
                        if dist[y, u] == dz - 1:
                            c = wide[y, u]
                            if mid and ((u == a and z == b) or (u == b and z == a)):
                                c = 0
                            if c > m:
                                m = c
                    wide[y, z] = weight[z] if weight[z] < m else m
            for x in range(n):
                if weight[x] <= best:
                    continue
                for y in range(n):
                    if weight[y] <= best:
                        continue
                    if mid:
                        on = (dist[x, a] + 1 + dist[b, y] == dist[x, y]) or (
                            dist[x, b] + 1 + dist[a, y] == dist[x, y]
                        )
                    else:
                        on = dist[x, a] + dist[a, y] == dist[x, y]
                    if not on:
                        continue
                    for z in range(n):
                        v = wide[x, z] if wide[x, z] < wide[y, z] else wide[y, z]
                        if v > best:
                            best = v
        return best


# ---------------------------------------------------------------- public API


def bfs_all_pairs(indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Unweighted all-pairs distances of a CSR graph; ``UNREACHED`` when disconnected."""
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int64)
    if HAVE_NUMBA:
        return _bfs_all_pairs_nb(indptr, indices)
    return _bfs_all_pairs_np(indptr, indices)


def gromov_products2(dist: np.ndarray, base: int, members: np.ndarray) -> np.ndarray:
    """Doubled Gromov products ``2 (x, y)_base`` for all pairs of ``members``."""
    d = dist[np.ix_(members, members)]
    r = dist[base, members]
    return r[:, None] + r[None, :] - d


def max_min_violation(prod2: np.ndarray) -> int:
    """Least ``D >= 0`` with ``P[x,z] >= min(P[x,y], P[y,z]) - D`` for all triples."""
    prod2 = np.ascontiguousarray(prod2, dtype=np.int64)
    if prod2.shape[0] == 0:
        return 0
    if HAVE_NUMBA:
        return int(_max_min_violation_nb(prod2))
    return _max_min_violation_np(prod2)


def four_point_delta2(dist: np.ndarray, base: int, members: np.ndarray) -> int:
    """Twice the minimal four-point delta with respect to ``base`` over ``members``."""
    members = np.asarray(members, dtype=np.int64)
    if members.size == 0:
        return 0
    if HAVE_NUMBA:
        return int(_max_min_violation_nb(gromov_products2(dist, base, members)))
    return _four_point_delta2_np(dist, base, members)


def logscale_delta(table: np.ndarray) -> int:
    """Minimal delta for an integer log-scale table (``INF`` on the diagonal)."""
    table = np.ascontiguousarray(table, dtype=np.int64)
    if table.shape[0] < 3:
        return 0
    if HAVE_NUMBA:
        return int(_logscale_delta_nb(table))
    return _logscale_delta_np(table)


def geodesic_patterns(
    indptr: np.ndarray, indices: np.ndarray, etype: np.ndarray, dist: np.ndarray, max_run: int
) -> tuple[int, int, np.ndarray]:
    """Scan every geodesic of a graph for edge-type patterns.

    ``etype[k]`` classifies CSR entry ``k`` (traversed from its row vertex):
    0 horizontal, 1 descending, 2 ascending.  Returns the number of geodesic
    extensions that put a descending edge after an ascending one, the number
    that exceed ``max_run`` consecutive horizontal edges, and witnesses
    ``(s, t)`` for each kind (``-1`` when none).
    """
    args = (
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(etype, dtype=np.int64),
        np.ascontiguousarray(dist, dtype=np.int64),
        int(max_run),
    )
    if 2 * (max_run + 1) > 62:
        raise ValueError("max_run too large")
    if HAVE_NUMBA:
        o, r, w = _geodesic_patterns_nb(*args)
    else:
        o, r, w = _geodesic_patterns_np(*args)
    return int(o), int(r), w


def thin_triangle2(
    dist: np.ndarray, indptr: np.ndarray, indices: np.ndarray, pa: np.ndarray, pb: np.ndarray
) -> int:
    """Twice the thinness of the worst geodesic triangle of a connected graph.

    Points on sides are the vertices (``pa == pb``) and edge midpoints listed
    by ``pa, pb``; the maximum over all geodesic selections is exact.
    """
    args = (
        np.ascontiguousarray(dist, dtype=np.int64),
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(pa, dtype=np.int64),
        np.ascontiguousarray(pb, dtype=np.int64),
    )
    if HAVE_NUMBA:
        return int(_thin_triangle2_nb(*args))
    return _thin_triangle2_np(*args)
