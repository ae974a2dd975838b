import itertools
import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from hypgrpd import hypgraph, selfsim, smale
from hypgrpd.quadratic import QuadSurd
from hypgrpd.smale import BiSeq, SftSystem

import oracles

SFTS = {
    "full": smale.full_shift(),
    "golden": smale.golden_mean_shift(),
    "three": SftSystem(("1", "2", "3"), ["12", "23"]),
    "long": SftSystem(("0", "1"), ["111", "010"]),
}


def chart_triples(s, seqs):
    m = s.memory
    by_chart = {}
    for x in seqs:
        by_chart.setdefault(x.window(0, m), []).append(x)
    for group in by_chart.values():
        yield from itertools.product(group, repeat=3)


# ------------------------------------------------------------ splice


def test_biseq_text_round_trip():
    for text in ["(0)101.0(1)", "(01).(1)", "(1)0.1(0)"]:
        assert str(BiSeq.parse(text)) == text
    x = BiSeq.parse("(0)1.0(1)")
    assert x.window(-3, 3) == ("0", "0", "1", "0", "1", "1")
    with pytest.raises(ValueError):
        BiSeq.parse("0101")


def test_splice_example():
    s = smale.full_shift()
    x = BiSeq.parse("(0).0(1)")
    y = BiSeq.parse("(0)101.0(0)")
    assert str(smale.splice(s, x, y)) == "(0)101.0(1)"
    with pytest.raises(smale.SpliceError):
        smale.splice(s, x, BiSeq.parse("(0).1(0)"))


@pytest.mark.parametrize("name", sorted(SFTS))
def test_rectangle_axioms_on_enumerated_sequences(name):
    s = SFTS[name]
    seqs = smale.enumerate_biseqs(s, 1, 2)
    assert all(s.admits(x) for x in seqs)
    for x, y, z in chart_triples(s, seqs):
        xy = smale.splice(s, x, y)
        assert s.admits(xy)
        assert smale.splice(s, x, x) == x
        assert smale.splice(s, x, smale.splice(s, y, z)) == smale.splice(s, x, z)
        assert smale.splice(s, xy, z) == smale.splice(s, x, z)


def test_rectangle_axioms_on_random_sequences():
    rng = random.Random(0)
    s = SFTS["golden"]
    sample = [smale.random_biseq(s, rng) for _ in range(20)]
    assert all(s.admits(x) for x in sample)
    checked = 0
    for x, y, z in chart_triples(s, sample):
        assert smale.splice(s, x, smale.splice(s, y, z)) == smale.splice(s, x, z)
        assert smale.splice(s, smale.splice(s, x, y), z) == smale.splice(s, x, z)
        checked += 1
    assert checked > 100


def test_plaques_share_the_past():
    s = SFTS["golden"]
    seqs = smale.enumerate_biseqs(s)
    x = seqs[0]
    for y in seqs:
        if y.future[0] == x.future[0]:
            assert smale.in_plaque(s, x, y) == (y.past == x.past)


# ------------------------------------------------------------ Fried log-scale


def agreement_oracle(x, y, horizon):
    n = 0
    while n < horizon and all(x[k] == y[k] for k in range(-n, n + 1)):
        n += 1
    return n


def test_fried_examples():
    s = smale.full_shift()
    x = BiSeq.parse("(01)0.1(10)")
    assert smale.fried_logscale(s, x, x, 40) == 40
    y = BiSeq.parse("(0)1111.00000(1)")
    z = BiSeq.parse("(1)1111.00000(0)")
    # agree on -4..4 and differ at -5 and +5
    assert smale.fried_logscale(s, y, z, 40) == 5
    assert smale.fried_logscale(s, y, BiSeq.parse("(1).1(1)"), 40) == 0


def test_fried_against_oracle_and_splice_compatibility():
    rng = random.Random(1)
    s = SFTS["golden"]
    pairs = 0
    while pairs < 50:
        x, y = smale.random_biseq(s, rng), smale.random_biseq(s, rng)
        if x[0] != y[0]:
            continue
        pairs += 1
        h = 30
        l_xy = smale.fried_logscale(s, x, y, h)
        assert l_xy == agreement_oracle(x, y, h)
        w = smale.splice(s, x, y)
        assert l_xy == min(smale.fried_logscale(s, x, w, h), smale.fried_logscale(s, y, w, h))
        # the shift moves the window by one coordinate
        sx, sy = x.shift(), y.shift()
        if sx[0] == sy[0] and l_xy < h - 1:
            assert abs(smale.fried_logscale(s, sx, sy, h) - l_xy) <= 1


# ------------------------------------------------------------ duality


def test_dual_examples():
    assert smale.dual_sft(SftSystem(("1", "2"), ["12"])).prohibited == {("2", "1")}
    m = ((1, 1, 0), (0, 1, 1), (1, 0, 0))
    s = SftSystem.from_matrix(m)
    assert smale.dual_sft(s).matrix == tuple(zip(*m))
    assert smale.dual_sft(SFTS["golden"]) == SFTS["golden"]
    fg = smale.free_group_sft()
    assert smale.reversal_invariant(fg) and smale.dual_sft(fg) == fg


def test_dual_is_an_involution_on_random_sfts():
    rng = random.Random(2)
    for _ in range(100):
        k = rng.randint(2, 4)
        alphabet = tuple("abcd"[:k])
        words = {"".join(rng.choice(alphabet) for _ in range(rng.randint(1, 4))) for _ in range(rng.randint(0, 5))}
        s = SftSystem(alphabet, words)
        assert smale.dual_sft(smale.dual_sft(s)) == s
        m = rng.choices([0, 1], k=k * k)
        sm = SftSystem.from_matrix([m[i * k : (i + 1) * k] for i in range(k)])
        assert smale.dual_sft(smale.dual_sft(sm)) == sm


@pytest.mark.parametrize("name", sorted(SFTS))
def test_language_against_padded_word_oracle(name):
    s = SFTS[name]
    for n in range(1, 7):
        # padding by the number of blocks covers every path to a cycle
        pad = len(s.alphabet) ** s.memory + 1
        assert s.language(n) == oracles.sft_language(s.alphabet, s.prohibited, n, pad)


@pytest.mark.parametrize("name", sorted(SFTS))
def test_dual_language_is_reversed_language(name):
    s = SFTS[name]
    d = smale.dual_sft(s)
    for n in range(1, 9):
        assert d.language(n) == {tuple(reversed(w)) for w in s.language(n)}


def test_duality_witness_cases():
    full = smale.duality_witness(SFTS["full"], 10)
    assert full.ok and full.counts == [2**n for n in range(1, 11)] and full.projected_prohibited == []
    golden = smale.duality_witness(SFTS["golden"], 10)
    fib = [2, 3]
    while len(fib) < 10:
        fib.append(fib[-1] + fib[-2])
    assert golden.ok and golden.counts == fib
    three = smale.duality_witness(SFTS["three"], 10)
    assert three.ok and three.projected_prohibited == ["21", "32"] == three.dual_prohibited
    fg = smale.duality_witness(smale.free_group_sft(), 10)
    assert fg.ok and fg.counts[-1] == 4 * 3**9


# ------------------------------------------------------------ limit space gluing


@pytest.mark.parametrize("n", [2, 3, 4])
def test_adding_machine_gluing_is_a_cycle(n):
    gl = smale.limit_space_gluing(selfsim.adding_machine(), n)
    g = nx.Graph([(u, v) for u, v, _ in gl.edges])
    g.add_nodes_from(gl.vertices)
    assert gl.is_cycle()
    assert nx.is_isomorphic(g, nx.cycle_graph(2**n))


def brute_gluing_pairs(rec, n):
    # v ~ w when some nucleus element moves v to w
    found = set()
    nuc = selfsim.nucleus(rec).elements
    words = list(itertools.product(rec.alphabet, repeat=n))
    for g in nuc:
        for v in words:
            w = selfsim.act(g, v)
            if w != v:
                found.add((min(v, w), max(v, w)))
    return found


@pytest.mark.parametrize("preset", ["adding-machine", "basilica"])
def test_gluing_matches_pair_scan_and_restricts(preset):
    rec = selfsim.PRESETS[preset]()
    levels = {n: smale.limit_space_gluing(rec, n) for n in range(1, 6)}
    for n, gl in levels.items():
        assert {(u, v) for u, v, _ in gl.edges} == brute_gluing_pairs(rec, n)
    for n in range(1, 5):
        lower = {(u, v) for u, v, _ in levels[n].edges}
        for u, v, _ in levels[n + 1].edges:
            a, b = u[:n], v[:n]
            assert a == b or (min(a, b), max(a, b)) in lower


def test_basilica_gluing_is_stable_under_budget():
    rec = selfsim.basilica()
    small = smale.limit_space_gluing(rec, 3)
    big = smale.limit_space_gluing(rec, 3, budget=20_000)
    assert small.to_json() == big.to_json()
    assert small.to_json()["identifications"] == len(small.edges) > 0


def test_trivial_group_gluing_is_discrete():
    gl = smale.limit_space_gluing(selfsim.trivial_group(), 3)
    assert gl.edges == () and len(gl.vertices) == 8


def test_gluing_rejects_non_contracting():
    rec = selfsim.WreathRecursion(("0", "1"), {"a": {"0": ("1", ["a"]), "1": ("0", ["a", "a"])}})
    with pytest.raises(smale.NotContracting):
        smale.limit_space_gluing(rec, 2, budget=50)


# ------------------------------------------------------------ self-similarity graph


def test_gamma_graph_level_one():
    cg = smale.gamma_graph(selfsim.adding_machine(), 1)
    assert set(cg.vertices) == {(), ("0",), ("1",)}
    assert set(cg.arrows) == {(("0",), ()), (("1",), ())}
    assert set(cg.links) == {(("0",), ("1",))}


@pytest.mark.parametrize("preset", ["adding-machine", "basilica"])
def test_gamma_prepend_edges_form_a_tree(preset):
    rec = selfsim.PRESETS[preset]()
    cg = smale.gamma_graph(rec, 5)
    tree = hypgraph.Graph(cg.vertices, cg.arrows)
    assert tree.is_tree()
    children = {}
    for u, v in cg.arrows:
        children.setdefault(v, []).append(u)
    assert all(len(c) == 2 for v, c in children.items() if len(v) < 5)


def test_basilica_gamma_delta_stabilizes():
    rec = selfsim.basilica()
    cg = smale.gamma_graph(rec, 6)
    by_radius = [hypgraph.four_point_delta(cg, (), radius=r) for r in range(1, 9)]
    assert by_radius == sorted(by_radius) and by_radius[-3:] == [Fraction(5, 2)] * 3
    # deeper truncations settle as well
    by_depth = [hypgraph.four_point_delta(smale.gamma_graph(rec, n), ()) for n in range(7, 10)]
    assert by_depth == [3, 3, 3]


# ------------------------------------------------------------ Vershik systems


def all_prefixes(adic, n):
    return ["".join(p) for p in adic.prefixes(n)]


def test_vershik_examples():
    adic = smale.golden_adic()
    assert "".join(smale.vershik_map(adic, "1")) == "2"
    assert "".join(smale.vershik_map(adic, "2")) == "3"
    assert "".join(smale.vershik_map(adic, "124")) == "224"
    assert "".join(smale.vershik_map(adic, "31")) == "1" + "".join(smale.vershik_map(adic, "1"))
    assert "".join(smale.vershik_map(adic, "555")) == "111"
    with pytest.raises(smale.AdicError):
        smale.vershik_map(adic, "41")
    with pytest.raises(smale.AdicError):
        smale.vershik_map(adic, "53")


def test_vershik_matches_recurrences():
    adic = smale.golden_adic()
    for n in range(1, 9):
        for w in all_prefixes(adic, n):
            expect = oracles.vershik_recurrences(w)
            if expect is None:
                continue
            assert "".join(smale.vershik_map(adic, w)) == expect


def test_vershik_is_a_bijection_on_each_level():
    adic = smale.golden_adic()
    for n in range(1, 9):
        prefixes = adic.prefixes(n)
        non_max = [p for p in prefixes if not all(adic.is_max(e) for e in p)]
        non_min = {p for p in prefixes if not all(adic.is_min(e) for e in p)}
        images = [smale.vershik_map(adic, p) for p in non_max]
        assert len(set(images)) == len(images) and set(images) == non_min


def test_substitution():
    adic = smale.golden_adic()
    assert "".join(smale.substitution_expand(adic, "A", 1)) == "AAB"
    assert "".join(smale.substitution_expand(adic, "A", 2)) == "AABAABAB"
    m = adic.substitution_matrix()
    assert m.tolist() == [[2, 1], [1, 1]]
    for n in range(10):
        word = smale.substitution_expand(adic, "A", n)
        counts = oracles.substitution_counts(m.tolist(), n)
        assert [word.count("A"), word.count("B")] == list(counts)
        nxt = smale.substitution_expand(adic, "A", n + 1)
        assert nxt[: len(word)] == word
    ident = smale.AdicSystem(("A",), {"1": ("A", "A")}, {"A": ["1"]})
    assert smale.substitution_expand(ident, "AAA", 5) == ("A", "A", "A")


def test_tile_lengths_exact():
    sqrt5 = QuadSurd.sqrt_of(5)
    data = smale.tile_lengths(smale.golden_adic())
    assert data.eigenvalue == (sqrt5 + 3) / 2
    assert data.lengths == (QuadSurd.rational(1, 5), (sqrt5 - 1) / 2)
    lo, hi = data.interval
    assert not data.eigenvalue < QuadSurd.rational(lo, 5)
    assert not QuadSurd.rational(hi, 5) < data.eigenvalue
    assert hi - lo < Fraction(1, 10**6)
    fib = smale.perron_data([[1, 1], [1, 0]])
    assert fib.eigenvalue == (sqrt5 + 1) / 2
    assert fib.lengths[1] == (sqrt5 - 1) / 2
    with pytest.raises(ValueError):
        smale.perron_data([[1, 0], [0, 1]])
    big = smale.perron_data([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert big.eigenvalue is None and big.interval[0] <= 2 <= big.interval[1]


def test_tile_lengths_are_a_left_eigenvector():
    # the characteristic polynomial oracle: x^2 - tr x + det at the eigenvalue
    for m in ([[2, 1], [1, 1]], [[1, 1], [1, 0]], [[3, 1], [2, 1]], [[1, 2], [3, 1]]):
        d = smale.perron_data(m)
        lam = d.eigenvalue
        tr, det = m[0][0] + m[1][1], m[0][0] * m[1][1] - m[0][1] * m[1][0]
        assert lam * lam - lam * tr + det == 0
        l1, l2 = d.lengths
        assert l1 * m[0][0] + l2 * m[1][0] == lam * l1
        assert l1 * m[0][1] + l2 * m[1][1] == lam * l2
        assert float(l2) > 0


def test_itinerary():
    adic = smale.golden_adic()
    rules = {"A": "AAB", "B": "AB"}
    start = adic.extreme_prefix(9, "min")
    it = "".join(smale.leaf_itinerary(adic, start, 8))
    assert it == "AABAABAB"
    assert oracles.factor_of_some_iterate(it, rules, "A")
    assert smale.leaf_itinerary(adic, start, 1) == (adic.tile_type[start[0]],)
    rng = random.Random(3)
    pool = adic.prefixes(10)
    for _ in range(20):
        p = rng.choice(pool)
        if all(adic.is_max(e) for e in p[1:7]):
            continue
        word = "".join(smale.leaf_itinerary(adic, p, 6))
        assert smale.is_factor(word, adic) is not None
        assert oracles.factor_of_some_iterate(word, rules, "A")


def test_itinerary_frequencies_approach_perron_ratio():
    adic = smale.golden_adic()
    start = adic.extreme_prefix(14, "min")
    word = smale.leaf_itinerary(adic, start, 400)
    freq = word.count("A") / len(word)
    golden = (1 + 5**0.5) / 2
    expect = golden / (1 + golden)  # A-share of the right Perron eigenvector (phi, 1)
    assert abs(freq - expect) / expect <= 0.1
    with pytest.raises(smale.AdicError):
        smale.leaf_itinerary(adic, adic.extreme_prefix(3, "min"), 50)


def test_adic_json_round_trip_and_validation():
    adic = smale.golden_adic()
    back = smale.AdicSystem.from_json(adic.to_json())
    assert back.to_json() == adic.to_json()
    assert adic.is_proper()
    assert np.array_equal(back.matrix(), adic.matrix())
    with pytest.raises(ValueError):
        smale.AdicSystem(("A",), {"1": ("A", "A"), "2": ("A", "A")}, {"A": ["1"]})
