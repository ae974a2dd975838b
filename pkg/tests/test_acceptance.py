"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run under pytest (the lines are repeated in the terminal summary) or as a
script: ``python tests/test_acceptance.py``.
"""

import itertools
import math
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import networkx as nx

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from hypgrpd import germs, hypgraph, logscale, selfsim, smale  # noqa: E402
from hypgrpd.hypgraph import Graph  # noqa: E402
from hypgrpd.logscale import LogScale  # noqa: E402
from hypgrpd.quadratic import QuadSurd  # noqa: E402

RESULTS: list[str] = []


@contextmanager
def criterion(number: int, title: str, limit: float):
    start = time.perf_counter()
    detail = ""
    try:
        yield
    except AssertionError as exc:
        detail = f" ({exc})" if str(exc) else ""
        elapsed = time.perf_counter() - start
        line = f"FAIL C{number:<2} {title} [{elapsed:.2f}s / {limit:g}s]{detail}"
        RESULTS.append(line)
        print(line)
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    line = f"{'PASS' if ok else 'FAIL'} C{number:<2} {title} [{elapsed:.2f}s / {limit:g}s]"
    RESULTS.append(line)
    print(line)
    assert ok, f"runtime {elapsed:.2f}s exceeds {limit}s"


def test_c01_rectangle_axioms():
    with criterion(1, "rectangle axioms on the golden-mean shift", 1.0):
        s = smale.golden_mean_shift()
        seqs = smale.enumerate_biseqs(s, 1, 2)
        charts = {}
        for x in seqs:
            charts.setdefault(x.window(0, s.memory), []).append(x)
        triples = 0
        for group in charts.values():
            for x, y, z in itertools.product(group, repeat=3):
                assert smale.splice(s, x, x) == x
                assert smale.splice(s, x, smale.splice(s, y, z)) == smale.splice(s, x, z)
                assert smale.splice(s, smale.splice(s, x, y), z) == smale.splice(s, x, z)
                triples += 1
        assert triples >= 100, f"only {triples} triples"


def test_c02_tree_hyperbolicity():
    with criterion(2, "trees and the doubling ball are 0-hyperbolic", 30.0):
        count = 0
        # the single vertex is trivially 0-hyperbolic; nx starts at two vertices
        for n in range(2, 13):
            for t in nx.nonisomorphic_trees(n):
                g = Graph(t.nodes, t.edges)
                assert hypgraph.four_point_delta_all(g) == 0
                count += 1
        assert count == 986  # 1 + 1 + 2 + 3 + 6 + 11 + 23 + 47 + 106 + 235 + 551
        ball = germs.preset_ball("doubling", 6)
        assert hypgraph.four_point_delta(ball.graph, 0) == 0


def test_c03_frink_bounds():
    with criterion(3, "metrics from log-scales meet the two-sided bounds", 5.0):
        rng = random.Random(2024)
        for _ in range(50):
            n = rng.randint(2, 8)
            ls = LogScale.from_function(range(n), lambda p, q: rng.randint(-2, 12))
            delta = max(1, logscale.delta_of(ls))
            assert delta == max(1, oracles.logscale_delta(ls.table))
            m = logscale.metric_from_logscale(ls, delta)
            assert m.triangle_violations() == []
            assert logscale.frink_bounds_hold(ls, m, delta) == []
            alpha = 2 ** (-1 / (2 * delta))
            for i, j, v in ls.pairs():
                x = float(m.dist[i][j])
                assert alpha**v / 4 <= x * (1 + 1e-12) and x <= 2 * alpha**v * (1 + 1e-12)


def test_c04_adding_machine():
    with criterion(4, "adding machine is binary increment; nucleus {1, t, t^-1}", 5.0):
        rec = selfsim.adding_machine()
        t = rec.element("t")
        for w in itertools.product("01", repeat=12):
            w = "".join(w)
            assert selfsim.act(t, w) == oracles.increment(w)
        nuc = selfsim.nucleus(rec)
        assert nuc.ok and len(nuc.elements) == 3
        store = selfsim.ElementSet(rec)
        for g in nuc.elements:
            store.add(g)
        for g in (rec.identity(), t, t.inverse()):
            assert g in store


def test_c05_basilica():
    with criterion(5, "basilica recurrences and connected Schreier graphs", 30.0):
        rec = selfsim.basilica()
        a, b = rec.element("a"), rec.element("b")
        for n in range(0, 11):
            for w in itertools.product("01", repeat=n):
                w = "".join(w)
                assert selfsim.act(a, w) == oracles.basilica("a", w)
                assert selfsim.act(b, w) == oracles.basilica("b", w)
        for n in range(1, 9):
            sg = selfsim.schreier_graph(rec, n)
            g = nx.MultiGraph([(u, v) for u, v, _ in sg.edges])
            assert g.number_of_nodes() == 2**n and nx.is_connected(g)


def test_c06_duality_certificate():
    with criterion(6, "duality witness for three shifts; dual is an involution", 10.0):
        cases = [smale.full_shift(), smale.golden_mean_shift(), smale.SftSystem(("1", "2", "3"), ["12", "23"])]
        for s in cases:
            rep = smale.duality_witness(s, 10)
            assert rep.ok and rep.projected_prohibited == rep.dual_prohibited
            dual = smale.dual_sft(s)
            for n in range(1, 11):
                assert dual.language(n) == {tuple(reversed(w)) for w in s.language(n)}
        rng = random.Random(6)
        for _ in range(100):
            k = rng.randint(2, 4)
            alphabet = tuple("abcd"[:k])
            words = {"".join(rng.choice(alphabet) for _ in range(rng.randint(1, 4))) for _ in range(rng.randint(0, 6))}
            s = smale.SftSystem(alphabet, words)
            assert smale.dual_sft(smale.dual_sft(s)) == s


def test_c07_free_group_self_duality():
    with criterion(7, "free-group shift is reversal invariant and self-dual", 5.0):
        s = smale.free_group_sft()
        assert {"".join(w) for w in s.prohibited} == {"aA", "Aa", "bB", "Bb"}
        assert smale.reversal_invariant(s) and smale.dual_sft(s) == s
        assert smale.duality_witness(s, 10).ok


def test_c08_limit_space_circle():
    with criterion(8, "adding-machine gluing gives 4-, 8-, 16-cycles", 5.0):
        rec = selfsim.adding_machine()
        for n in (2, 3, 4):
            gl = smale.limit_space_gluing(rec, n)
            g = nx.Graph([(u, v) for u, v, _ in gl.edges])
            g.add_nodes_from(gl.vertices)
            assert nx.is_isomorphic(g, nx.cycle_graph(2**n))


def test_c09_vershik_example():
    with criterion(9, "Vershik recurrences, substitution, tile lengths, itineraries", 10.0):
        adic = smale.golden_adic()
        checked = 0
        for n in range(1, 9):
            for p in adic.prefixes(n):
                w = "".join(p)
                expect = oracles.vershik_recurrences(w)
                if expect is not None:
                    assert "".join(smale.vershik_map(adic, w)) == expect
                    checked += 1
        assert checked > 1000
        assert "".join(smale.substitution_expand(adic, "A", 1)) == "AAB"
        assert "".join(smale.substitution_expand(adic, "A", 2)) == "AABAABAB"
        sqrt5 = QuadSurd.sqrt_of(5)
        data = smale.tile_lengths(adic)
        assert data.eigenvalue == (sqrt5 + 3) / 2
        assert data.lengths == (QuadSurd.rational(1, 5), (sqrt5 - 1) / 2)
        rules = {"A": "AAB", "B": "AB"}
        start = adic.extreme_prefix(9, "min")
        assert oracles.factor_of_some_iterate("".join(smale.leaf_itinerary(adic, start, 8)), rules, "A")
        rng = random.Random(9)
        long_prefixes = adic.prefixes(12)
        for _ in range(50):
            p = rng.choice(long_prefixes)
            if all(adic.is_max(e) for e in p[1:9]):
                continue
            word = "".join(smale.leaf_itinerary(adic, p, 8))
            assert oracles.factor_of_some_iterate(word, rules, "A")


def test_c10_level_graph_geodesics():
    with criterion(10, "level graphs: down-before-up, short horizontal runs, bi-Lipschitz", 60.0):
        graphs = []
        for seed in (1, 2):
            t = nx.random_labeled_tree(40, seed=seed)
            graphs.append(hypgraph.tree_cocycle_graph(hypgraph.bfs_tree_parents(Graph(t.nodes, t.edges), 0)))
        graphs += [germs.preset_ball("dyadic-affine", r).graph for r in (4, 5, 6)]
        r = 8
        built = 0
        for cg in graphs:
            for rho1, k in ((1, 0), (2, 1)):
                lg = hypgraph.build_level_graph(cg, k + 2, r, rho1, k)
                checks = lg.check_geodesics(max_run=6)
                assert checks["descending_after_ascending"] == 0, checks
                assert checks["long_horizontal_runs"] == 0, checks
                a, b = lg.distortion()
                assert max(a, b) <= r * rho1
                built += 1
        assert built >= 10


def test_c11_criterion_round_trip():
    with criterion(11, "criterion on the dyadic ball; delta stable from radius 6 to 8", 60.0):
        ball = germs.preset_ball("dyadic-affine", 8)
        rep = hypgraph.convergence_criterion(ball.graph, 1, 1, 8)
        assert rep.ok and rep.violation is None
        assert rep.rho0 is not None and rep.k_m is not None
        d8 = hypgraph.four_point_delta(ball.graph, 0)
        d6 = hypgraph.four_point_delta(germs.preset_ball("dyadic-affine", 6).graph, 0)
        assert abs(d8 - d6) <= Fraction(1, 2) and math.isfinite(d8)


def test_c12_degree_cocycle():
    with criterion(12, "degree cocycle is exact on every preset ball of radius 6", 10.0):
        for name in sorted(germs.PRESETS):
            ball = germs.preset_ball(name, 6)
            rep = germs.composable_pairs_check(ball)
            assert rep["violations"] == [], name
            assert rep["pairs"] == len(ball.germs) ** 2


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c") and callable(fn):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
