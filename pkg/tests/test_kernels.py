import networkx as nx
import numpy as np
import pytest

from hypgrpd import _kernels
from hypgrpd.hypgraph import Graph

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba backend not active")


def random_graphs():
    rng = np.random.default_rng(0)
    for k in range(6):
        g = nx.connected_watts_strogatz_graph(14, 4, 0.3, seed=int(rng.integers(10**6)))
        yield Graph(g.nodes, g.edges)
    yield Graph(nx.grid_2d_graph(3, 4).nodes, nx.grid_2d_graph(3, 4).edges)
    t = nx.random_labeled_tree(15, seed=4)
    yield Graph(t.nodes, t.edges)


def test_bfs_backends_agree():
    for g in random_graphs():
        indptr, indices = g.csr
        a = _kernels._bfs_all_pairs_np(indptr, indices)
        b = _kernels._bfs_all_pairs_nb(indptr, indices)
        assert np.array_equal(a, b)


def test_delta_backends_agree():
    for g in random_graphs():
        members = np.arange(len(g), dtype=np.int64)
        for base in (0, len(g) // 2):
            prod = _kernels.gromov_products2(g.distances, base, members)
            assert _kernels._four_point_delta2_np(g.distances, base, members) == _kernels._max_min_violation_nb(prod)
            assert _kernels._max_min_violation_np(prod) == _kernels._max_min_violation_nb(prod)


def test_logscale_backends_agree():
    rng = np.random.default_rng(1)
    for n in range(3, 10):
        t = rng.integers(-3, 12, size=(n, n))
        t = np.triu(t, 1)
        t = t + t.T
        np.fill_diagonal(t, _kernels.INF)
        assert _kernels._logscale_delta_np(t) == _kernels._logscale_delta_nb(t)


def test_pattern_and_thin_triangle_backends_agree():
    rng = np.random.default_rng(2)
    for g in random_graphs():
        indptr, indices = g.csr
        dist = np.ascontiguousarray(g.distances, dtype=np.int64)
        et = rng.integers(0, 3, size=len(indices)).astype(np.int64)
        a = _kernels._geodesic_patterns_np(indptr, indices, et, dist, 6)
        b = _kernels._geodesic_patterns_nb(indptr, indices, et, dist, 6)
        assert a[0] == b[0] and a[1] == b[1] and np.array_equal(a[2], b[2])
        pa = np.array(list(range(len(g))) + [i for i, _ in g.edge_pairs], dtype=np.int64)
        pb = np.array(list(range(len(g))) + [j for _, j in g.edge_pairs], dtype=np.int64)
        assert _kernels._thin_triangle2_np(dist, indptr, indices, pa, pb) == _kernels._thin_triangle2_nb(
            dist, indptr, indices, pa, pb
        )
