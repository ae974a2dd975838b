import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypgrpd import logscale
from hypgrpd._kernels import INF
from hypgrpd.hypgraph import Graph, gromov_product
from hypgrpd.logscale import LogScale, MetricTable

import oracles


def random_scale(rng: random.Random, n: int, lo: int = 0, hi: int = 8) -> LogScale:
    return LogScale.from_function(range(n), lambda p, q: rng.randint(lo, hi))


@st.composite
def scales(draw, max_points=7):
    n = draw(st.integers(2, max_points))
    vals = draw(st.lists(st.integers(-3, 10), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    it = iter(vals)
    table = {pair: next(it) for pair in itertools.combinations(range(n), 2)}
    return LogScale.from_pairs(range(n), table)


def test_validation():
    with pytest.raises(ValueError):
        LogScale((0, 1), np.array([[INF, 1], [2, INF]]))
    with pytest.raises(ValueError):
        LogScale((0, 1), np.array([[0, 1], [1, INF]]))
    with pytest.raises(ValueError):
        LogScale.from_pairs((0, 1, 2), {(0, 1): 1})


def test_delta_small_cases():
    ultra = LogScale.from_pairs("abc", {("a", "b"): 2, ("b", "c"): 2, ("a", "c"): 2})
    assert logscale.delta_of(ultra) == 0
    assert logscale.delta_of(LogScale.from_pairs("ab", {("a", "b"): 5})) == 0


def test_delta_on_cycle_products_matches_triple_scan():
    n = 6
    g = Graph(range(n), [(i, (i + 1) % n) for i in range(n)])
    # Gromov products at vertex 0 are half-integers; doubling keeps them integral
    ls = LogScale.from_function(range(1, n), lambda p, q: int(2 * gromov_product(g, 0, p, q)))
    assert logscale.delta_of(ls) == oracles.logscale_delta(ls.table)


@settings(max_examples=60, deadline=None)
@given(scales())
def test_delta_matches_oracle(ls):
    assert logscale.delta_of(ls) == oracles.logscale_delta(ls.table)


@pytest.mark.parametrize("value,delta,lo,hi", [(0, 1, Fraction(1, 4), 2), (4, 1, Fraction(1, 16), Fraction(1, 2))])
def test_frink_bounds_two_points(value, delta, lo, hi):
    ls = LogScale.from_pairs("xy", {("x", "y"): value})
    m = logscale.metric_from_logscale(ls, delta)
    assert lo <= m("x", "y") <= hi
    assert logscale.frink_bounds_hold(ls, m, delta) == []


def test_metric_on_chain_satisfies_triangle_inequality():
    ls = LogScale.from_pairs(
        "abcd",
        {("a", "b"): 5, ("b", "c"): 1, ("c", "d"): 3, ("a", "c"): 1, ("b", "d"): 1, ("a", "d"): 1},
    )
    d = max(1, logscale.delta_of(ls))
    m = logscale.metric_from_logscale(ls, d)
    assert m.triangle_violations() == []
    assert logscale.frink_bounds_hold(ls, m, d) == []


def test_metric_rejects_small_delta():
    ls = LogScale.from_pairs("abc", {("a", "b"): 10, ("b", "c"): 10, ("a", "c"): 0})
    assert logscale.delta_of(ls) == 10
    with pytest.raises(ValueError):
        logscale.metric_from_logscale(ls, 3)
    with pytest.raises(ValueError):
        logscale.metric_from_logscale(ls, 0)


@settings(max_examples=40, deadline=None)
@given(scales(max_points=6))
def test_frink_bounds_property(ls):
    d = max(1, logscale.delta_of(ls))
    m = logscale.metric_from_logscale(ls, d)
    assert m.triangle_violations() == []
    assert logscale.frink_bounds_hold(ls, m, d) == []
    # float cross-check of the exact inequality with alpha = 2^(-1/(2 delta))
    alpha = 2 ** (-1 / (2 * d))
    for i, j, v in ls.pairs():
        x = float(m.dist[i][j])
        assert alpha**v / 4 <= x * (1 + 1e-12) and x <= 2 * alpha**v * (1 + 1e-12)


def test_logscale_from_metric_exact_powers():
    m = MetricTable("xy", [[0, 1], [1, 0]])
    assert logscale.logscale_from_metric(m)("x", "y") == 0
    e2 = math.exp(-2)
    m = MetricTable("xy", [[0, e2], [e2, 0]])
    assert logscale.logscale_from_metric(m)("x", "y") == 2
    m = MetricTable("xy", [[0, Fraction(1, 3)], [Fraction(1, 3), 0]])
    assert logscale.logscale_from_metric(m)("x", "y") == 2  # ln 3 = 1.0986


def test_round_trip_is_bi_lipschitz():
    rng = random.Random(3)
    for _ in range(10):
        n = 5
        # rational metric: shortest paths of random positive weights
        w = [[Fraction(0)] * n for _ in range(n)]
        for i, j in itertools.combinations(range(n), 2):
            w[i][j] = w[j][i] = Fraction(rng.randint(1, 40), rng.randint(1, 40))
        for k, i, j in itertools.product(range(n), repeat=3):
            w[i][j] = min(w[i][j], w[i][k] + w[k][j])
        m = MetricTable(range(n), w)
        ls = logscale.logscale_from_metric(m)
        d = max(1, logscale.delta_of(ls))
        back = logscale.metric_from_logscale(ls, d)
        ratios = [float(back.dist[i][j] / m.dist[i][j]) for i, j in itertools.combinations(range(n), 2)]
        # both are comparable to alpha^l, alpha = 2^(-1/(2d)), and |x-y| ~ e^-l within factor e
        c = 2 * math.e * 4
        assert max(ratios) / min(ratios) <= c * c


def test_product_logscale_pointwise():
    rng = random.Random(7)
    a, b = random_scale(rng, 3), random_scale(rng, 3)
    p = logscale.product_logscale(a, b)
    for (x1, y1), (x2, y2) in itertools.product(p.points, repeat=2):
        expect = math.inf if (x1, y1) == (x2, y2) else min(
            a(x1, x2) if x1 != x2 else math.inf, b(y1, y2) if y1 != y2 else math.inf
        )
        assert p((x1, y1), (x2, y2)) == expect


def test_product_with_point():
    rng = random.Random(1)
    a = random_scale(rng, 4)
    one = LogScale(("*",), np.array([[INF]]))
    p = logscale.product_logscale(a, one)
    assert np.array_equal(p.table, a.table)


def test_paste_single_chart():
    rng = random.Random(2)
    ls = random_scale(rng, 5, 1, 9)
    out = logscale.paste_logscales([list(range(5))], [ls], 0)
    n = logscale.pasting_level([list(range(5))], [ls])
    for i, j, v in ls.pairs():
        assert out(i, j) == max(v, n)
    assert logscale.equivalence_bounds(ls, out).lipschitz_k is not None


def test_paste_identical_charts():
    rng = random.Random(4)
    ls = random_scale(rng, 4, 1, 9)
    pts = list(range(4))
    out = logscale.paste_logscales([pts, pts], [ls, ls], 0)
    n = logscale.pasting_level([pts, pts], [ls, ls])
    assert all(out(i, j) == v for i, j, v in ls.pairs() if v >= n)


def test_paste_shifted_intervals():
    pts = list(range(10))
    base = LogScale.from_function(pts, lambda p, q: 10 - abs(p - q))
    left, right = pts[:6], pts[4:]
    l1 = base.restrict(left)
    l2 = base.restrict(right).shifted(1)
    out = logscale.paste_logscales([left, right], [l1, l2], 1)
    for chart, loc in ((left, l1), (right, l2)):
        eb = logscale.equivalence_bounds(loc, out.restrict(chart))
        k = max(abs(loc(p, q) - out(p, q)) for p, q in itertools.combinations(chart, 2))
        assert eb.lipschitz_k in (k, None)
        assert k <= logscale.pasting_level([left, right], [l1, l2]) + 1
    with pytest.raises(ValueError):
        logscale.paste_logscales([left, right], [l1, l2.shifted(5)], 1)


def test_equivalence_bounds():
    rng = random.Random(5)
    ls = random_scale(rng, 6, 1, 9)
    assert logscale.equivalence_bounds(ls, ls).lipschitz_k == 0
    assert logscale.equivalence_bounds(ls, ls.shifted(3)).lipschitz_k == 3
    line = LogScale.from_function(range(6), lambda p, q: 6 - abs(p - q))
    doubled = LogScale(line.points, np.where(line.table == INF, INF, 2 * line.table))
    eb = logscale.equivalence_bounds(line, doubled)
    assert eb.lipschitz_k is None
    assert eb.holder == (Fraction(2), Fraction(0))


def test_json_round_trip():
    rng = random.Random(6)
    ls = random_scale(rng, 4)
    assert np.array_equal(LogScale.from_json(ls.to_json()).table, ls.table)
    m = logscale.metric_from_logscale(ls, max(1, logscale.delta_of(ls)))
    assert MetricTable.from_json(m.to_json()).dist == m.dist
