"""Groupoids of germs for the worked examples, and their Cayley graphs.

Each groupoid specification knows how to multiply germs, invert them, read
off the degree cocycle, and list the moves ``g -> s g`` for its generating
set.  :func:`cayley_ball` runs a BFS over these moves and returns a
:class:`~hypgrpd.hypgraph.CocycleGraph` whose potential is the degree.

Degree convention: generators that are germs of contractions have degree
``+1``.  Arrows of a Cayley ball run from ``s g`` to ``g`` and so descend the
degree, pointing toward the boundary point fixed by the cocycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .hypgraph import CocycleGraph, Graph, RaySpec, vertex_label
from .quadratic import QuadInt, QuadSurd, golden_ring
from .selfsim import (
    GroupElement,
    Verdict,
    WreathRecursion,
    _act_periodic,
    act,
    basilica,
    adding_machine,
    is_trivial,
    section,
)
from .words import EvPeriodicWord, word_str


class GermError(ValueError):
    pass


# ------------------------------------------------------------ shifts of finite type (one-sided)


class ExpandingShift:
    """Groupoid generated by the one-sided shift of a topological Markov chain.

    ``allowed[(a, b)]`` says whether ``b`` may follow ``a``.  A germ is stored
    as ``(target, degree, origin)``: the germ of ``sigma^-n1 sigma^n2`` with
    ``degree = n1 - n2`` (the number of inverse-branch steps).
    """

    name = "expanding-shift"

    def __init__(self, alphabet: Sequence[str], prohibited: Iterable[str] = ()):
        self.alphabet = tuple(alphabet)
        bad = {tuple(w) for w in prohibited}
        if any(len(w) != 2 for w in bad):
            raise GermError("prohibited words must have length 2")
        self.allowed = {(a, b): (a, b) not in bad for a in self.alphabet for b in self.alphabet}

    def admissible(self, w: EvPeriodicWord) -> bool:
        n = len(w.preperiod) + 2 * len(w.period) + 1
        p = w.prefix(n)
        return all(self.allowed[(p[i], p[i + 1])] for i in range(n - 1))

    def unit(self, base: EvPeriodicWord) -> ShiftGerm:
        if not self.admissible(base):
            raise GermError(f"{base} is not admissible")
        return ShiftGerm(base, 0, base)

    def preimage_letters(self, y: EvPeriodicWord) -> list[str]:
        return [a for a in self.alphabet if self.allowed[(a, y[0])]]

    def moves(self, g: ShiftGerm):
        # s g for the inverse branches s of the shift, then s^-1 g (the shift itself)
        for a in self.preimage_letters(g.target):
            yield f"s{a}", +1, ShiftGerm(g.target.prepend((a,)), g.degree + 1, g.origin)
        yield f"s{g.target[0]}", -1, ShiftGerm(g.target.tail(), g.degree - 1, g.origin)

    @staticmethod
    def degree(g: ShiftGerm) -> int:
        return g.degree

    @staticmethod
    def key(g: ShiftGerm):
        return g

    @staticmethod
    def compose(g: ShiftGerm, h: ShiftGerm) -> ShiftGerm:
        if g.origin != h.target:
            raise GermError("germs are not composable")
        return ShiftGerm(g.target, g.degree + h.degree, h.origin)

    @staticmethod
    def inverse(g: ShiftGerm) -> ShiftGerm:
        return ShiftGerm(g.origin, -g.degree, g.target)

    def equal(self, g: ShiftGerm, h: ShiftGerm, budget: int = 0) -> Verdict:
        return Verdict("yes" if g == h else "no")

    def from_powers(self, y: EvPeriodicWord, n1: int, n2: int, x: EvPeriodicWord) -> ShiftGerm:
        """Germ of ``(sigma^n1, y)^-1 (sigma^n2, x)``; requires ``sigma^n1 y = sigma^n2 x``."""
        if n1 < 0 or n2 < 0 or y.tail(n1) != x.tail(n2):
            raise GermError("sigma^n1(y) must equal sigma^n2(x)")
        return ShiftGerm(y, n1 - n2, x)

    def is_valid(self, g: ShiftGerm, search: int = 64) -> bool:
        for n2 in range(search):
            n1 = g.degree + n2
            if n1 >= 0 and g.target.tail(n1) == g.origin.tail(n2):
                return True
        return False


@dataclass(frozen=True)
class ShiftGerm:
    target: EvPeriodicWord
    degree: int
    origin: EvPeriodicWord

    def label(self) -> str:
        return f"({self.target},{self.degree})"


# ------------------------------------------------------------ dyadic affine


class DyadicAffine:
    """Germs at ``0`` of ``x -> 2^n x + b`` on the dyadic integers.

    Generators ``x -> 2x + c`` for ``c`` in ``{0, 1, -1}`` have degree ``+1``.
    """

    name = "dyadic-affine"
    offsets = (0, 1, -1)

    def unit(self, base=0) -> AffineGerm:
        if base != 0:
            raise GermError("dyadic-affine germs are taken at 0")
        return AffineGerm(0, Fraction(0))

    def moves(self, g: AffineGerm):
        for c in self.offsets:
            yield f"s{c:+d}", +1, AffineGerm(g.scale + 1, 2 * g.shift + c)
        for c in self.offsets:
            if (g.shift - c) % 2 == 0:
                yield f"s{c:+d}", -1, AffineGerm(g.scale - 1, (g.shift - c) / 2)

    @staticmethod
    def degree(g: AffineGerm) -> int:
        return g.scale

    @staticmethod
    def key(g: AffineGerm):
        return g

    @staticmethod
    def compose(g: AffineGerm, h: AffineGerm) -> AffineGerm:
        return AffineGerm(g.scale + h.scale, _pow2(g.scale) * h.shift + g.shift)

    @staticmethod
    def inverse(g: AffineGerm) -> AffineGerm:
        return AffineGerm(-g.scale, -g.shift * _pow2(-g.scale))

    def equal(self, g, h, budget: int = 0) -> Verdict:
        return Verdict("yes" if g == h else "no")


@lru_cache(maxsize=None)
def _pow2(n: int) -> Fraction:
    return Fraction(2**n) if n >= 0 else Fraction(1, 2**-n)


@dataclass(frozen=True)
class AffineGerm:
    scale: int
    shift: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "shift", Fraction(self.shift))

    def label(self) -> str:
        return f"({self.scale},{self.shift})"


# ------------------------------------------------------------ quadratic affine


class QuadraticAffine:
    """Germs of ``x -> theta^-n x + alpha`` with ``alpha`` in ``Z[theta]``.

    ``theta > 1`` is the root of ``x^2 + b x + 1``; ``b > 2`` is replaced by
    ``-b`` (the ring is the same).  The transversal is ``[0, theta]`` and the
    generators are ``x -> x / theta + c`` with ``c`` in ``offsets``, chosen so
    that their images ``[c, c + 1]`` cover the transversal.
    """

    name = "quadratic-affine"

    def __init__(self, b: int = golden_ring()):
        if abs(b) <= 2:
            raise GermError("|b| must exceed 2")
        self.b = -abs(b)
        self.theta = QuadInt.theta(self.b)
        self.zero = QuadInt.of(0, self.b)
        self.one = QuadInt.of(1, self.b)
        self.theta_inv = self.theta.inverse()
        self._powers: dict = {}
        top = self.theta.to_surd()
        offsets = [QuadInt.of(k, self.b) for k in range(int(float(top)) + 1) if QuadSurd.rational(k + 1, top.d) <= top]
        last = self.theta - 1
        if last not in offsets:
            offsets.append(last)
        self.offsets = tuple(offsets)

    def in_transversal(self, a: QuadInt) -> bool:
        return self.zero <= a <= self.theta

    def unit(self, base=None) -> QuadGerm:
        base = self.zero if base is None else base
        if not self.in_transversal(base):
            raise GermError("base point outside the transversal")
        return QuadGerm(0, self.zero, base)

    def scale_power(self, n: int) -> QuadInt:
        hit = self._powers.get(n)
        if hit is None:
            hit = self._powers[n] = self.theta_inv**n
        return hit

    def moves(self, g: QuadGerm):
        t = g.target
        for c in self.offsets:
            yield f"s[{c}]", +1, QuadGerm(g.scale + 1, self.theta_inv * g.shift + c, g.origin)
        for c in self.offsets:
            if c <= t <= c + 1:
                yield f"s[{c}]", -1, QuadGerm(g.scale - 1, self.theta * (g.shift - c), g.origin)

    @staticmethod
    def degree(g: QuadGerm) -> int:
        return g.scale

    @staticmethod
    def key(g: QuadGerm):
        return g

    def compose(self, g: QuadGerm, h: QuadGerm) -> QuadGerm:
        if g.origin != h.target:
            raise GermError("germs are not composable")
        return QuadGerm(g.scale + h.scale, self.scale_power(g.scale) * h.shift + g.shift, h.origin)

    def inverse(self, g: QuadGerm) -> QuadGerm:
        inv = self.scale_power(-g.scale)
        return QuadGerm(-g.scale, -(inv * g.shift), g.target)

    def equal(self, g, h, budget: int = 0) -> Verdict:
        return Verdict("yes" if g == h else "no")


@dataclass(frozen=True)
class QuadGerm:
    """``x -> theta^-scale x + shift`` at ``origin``."""

    scale: int
    shift: QuadInt
    origin: QuadInt

    @cached_property
    def target(self) -> QuadInt:
        if self.origin.a == 0 and self.origin.c == 0:
            return self.shift
        b = self.shift.b
        return QuadInt.theta(b).inverse() ** self.scale * self.origin + self.shift

    def label(self) -> str:
        return f"({self.scale},{self.shift})"


# ------------------------------------------------------------ self-similar group with the shift


@dataclass(frozen=True)
class SelfSimGerm:
    """Germ of ``S_u g S_v^-1`` at ``origin`` (which starts with ``v``)."""

    u: tuple
    g: tuple
    v: tuple
    origin: EvPeriodicWord

    def label(self) -> str:
        gl = "*".join(n if e == 1 else f"{n}^-1" for n, e in self.g) or "1"
        return f"S{word_str(self.u)}.{gl}.S{word_str(self.v)}^-1"


class SelfSimilarShift:
    """Groupoid generated by a self-similar group and the maps ``S_x: w -> x w``.

    Generators are ``S_x`` (degree ``+1``) and the group generators (degree
    ``0``).  Germs have no canonical form, so Cayley balls bucket germs by
    degree and target and compare within a bucket with :meth:`equal`.
    """

    name = "self-similar-shift"

    def __init__(self, rec: WreathRecursion, budget: int = 10_000):
        self.rec = rec
        self.budget = budget
        self._targets: dict = {}

    def unit(self, base: EvPeriodicWord) -> SelfSimGerm:
        return SelfSimGerm((), (), (), base)

    def _elem(self, word) -> GroupElement:
        return GroupElement(self.rec, word)

    def inner(self, g: SelfSimGerm) -> EvPeriodicWord:
        if g.origin.prefix(len(g.v)) != g.v:
            raise GermError("origin does not start with v")
        return g.origin.tail(len(g.v))

    def target(self, g: SelfSimGerm) -> EvPeriodicWord:
        hit = self._targets.get(g)
        if hit is None:
            img = _act_periodic(self._elem(g.g), self.inner(g), self.budget)
            if not isinstance(img, EvPeriodicWord):
                raise GermError("target could not be computed within budget")
            hit = self._targets[g] = img.prepend(g.u)
        return hit

    def extend(self, g: SelfSimGerm, k: int = 1) -> SelfSimGerm:
        """Rewrite ``S_u g S_v^-1`` as ``S_{u g(y)} g|_y S_{v y}^-1`` along the origin."""
        for _ in range(k):
            y = g.origin[len(g.v)]
            out, sec = self.rec.step(g.g, y)
            g = SelfSimGerm(g.u + (out,), sec, g.v + (y,), g.origin)
        return g

    @staticmethod
    def degree(g: SelfSimGerm) -> int:
        return len(g.u) - len(g.v)

    def moves(self, g: SelfSimGerm):
        for x in self.rec.alphabet:
            yield f"S{x}", +1, SelfSimGerm((x,) + g.u, g.g, g.v, g.origin)
        t0 = g.u[0] if g.u else act(self._elem(g.g), (g.origin[len(g.v)],))[0]
        h = g if g.u else self.extend(g)
        yield f"S{t0}", -1, SelfSimGerm(h.u[1:], h.g, h.v, h.origin)
        for s in self.rec.generators(inverses=True):
            out = act(s, g.u)
            sec = section(s, g.u)
            word = (sec * self._elem(g.g)).word
            yield s.label(), 0, SelfSimGerm(out, word, g.v, g.origin)

    def key(self, g: SelfSimGerm):
        return (self.degree(g), self.target(g))

    def compose(self, g: SelfSimGerm, h: SelfSimGerm) -> SelfSimGerm:
        if g.origin != self.target(h):
            raise GermError("germs are not composable")
        if len(h.u) < len(g.v):
            h = self.extend(h, len(g.v) - len(h.u))
        r = h.u[len(g.v) :]
        ge = self._elem(g.g)
        out = act(ge, r)
        word = (section(ge, r) * self._elem(h.g)).word
        return SelfSimGerm(g.u + out, word, h.v, h.origin)

    def inverse(self, g: SelfSimGerm) -> SelfSimGerm:
        return SelfSimGerm(g.v, self._elem(g.g).inverse().word, g.u, self.target(g))

    def equal(self, g1: SelfSimGerm, g2: SelfSimGerm, budget: int | None = None) -> Verdict:
        """Germ equality; ``no`` carries a witness word near the origin moved differently."""
        budget = self.budget if budget is None else budget
        if g1.origin != g2.origin:
            return Verdict("no", ("different origins",))
        t1, t2 = self.target(g1), self.target(g2)
        if t1 != t2:
            return Verdict("no", ("targets", str(t1), str(t2)))
        L = max(len(g1.v), len(g2.v))
        a = self.extend(g1, L - len(g1.v))
        b = self.extend(g2, L - len(g2.v))
        if len(a.u) != len(b.u):
            return Verdict("no", ("degrees",))
        tail = g1.origin.tail(L)
        h = self._elem(a.g).inverse() * self._elem(b.g)
        seen = set()
        pos = 0
        explored = 0
        while True:
            v = is_trivial(h, budget)
            explored += v.explored
            if v.status == "yes":
                return Verdict("yes", None, explored)
            if v.status == "unknown" or explored > budget:
                return Verdict("unknown", None, explored)
            state = (h.word, tail.phase(pos))
            if state in seen:
                witness = a.v + tail.prefix(pos) + v.witness
                return Verdict("no", witness, explored)
            seen.add(state)
            _, sec = self.rec.step(h.word, tail[pos])
            h = self._elem(sec)
            pos += 1


# ------------------------------------------------------------ Cayley balls


@dataclass
class CayleyBall:
    spec: object
    basepoint: object
    radius: int
    germs: tuple
    graph: CocycleGraph
    depth: dict = field(default_factory=dict)

    def germ_index(self, g) -> int | None:
        key = self.spec.key(g)
        for i in self._buckets.get(key, ()):
            if self.spec.equal(self.germs[i], g):
                return i
        return None

    @property
    def _buckets(self) -> dict:
        if not hasattr(self, "_bk"):
            bk: dict = {}
            for i, g in enumerate(self.germs):
                bk.setdefault(self.spec.key(g), []).append(i)
            self._bk = bk
        return self._bk

    def to_json(self) -> dict:
        data = self.graph.to_json()
        data["germs"] = [vertex_label(g) for g in self.germs]
        data["radius"] = self.radius
        data["basepoint"] = str(self.basepoint)
        data["truncated_radius"] = True
        return data


def cayley_ball(spec, basepoint, radius: int, max_vertices: int = 200_000) -> CayleyBall:
    """BFS ball of the Cayley graph at ``basepoint`` with the spec's generating set.

    Positive-degree moves become arrows ``s g -> g``; degree-zero moves
    become links.  Vertices on the outer sphere are marked truncated.
    """
    if radius < 0:
        raise GermError("radius must be non-negative")
    unit = spec.unit(basepoint)
    germs = [unit]
    depth = {0: 0}
    buckets: dict = {spec.key(unit): [0]}

    def lookup(g):
        for i in buckets.get(spec.key(g), ()):
            v = spec.equal(germs[i], g)
            if v.status == "unknown":
                raise GermError("germ equality undecided within budget")
            if v:
                return i
        return None

    frontier = [0]
    arrows = set()
    links = set()
    for r in range(1, radius + 1):
        nxt = []
        for i in frontier:
            for _, sign, h in spec.moves(germs[i]):
                j = lookup(h)
                if j is None:
                    if len(germs) >= max_vertices:
                        raise GermError("ball exceeds max_vertices")
                    j = len(germs)
                    germs.append(h)
                    depth[j] = r
                    buckets.setdefault(spec.key(h), []).append(j)
                    nxt.append(j)
        frontier = nxt
    # edges among all ball vertices
    for i, g in enumerate(germs):
        for _, sign, h in spec.moves(g):
            j = lookup(h)
            if j is None or j == i:
                continue
            if sign > 0:
                arrows.add((j, i))
            elif sign < 0:
                arrows.add((i, j))
            else:
                links.add((min(i, j), max(i, j)))
    lam = {i: spec.degree(g) for i, g in enumerate(germs)}
    outer = [i for i in depth if depth[i] == radius]
    cg = CocycleGraph(
        range(len(germs)),
        sorted(arrows),
        lam,
        links=sorted(links),
        truncated=outer,
        meta={"spec": spec.name, "radius": radius},
    )
    cg.label = lambda i: vertex_label(germs[i])  # type: ignore[method-assign]
    return CayleyBall(spec, basepoint, radius, tuple(germs), cg, depth)


def composable_pairs_check(ball: CayleyBall, verify_products: bool = False) -> dict:
    """Check the degree cocycle on the pairs ``(g, h^-1)`` for all vertices ``g, h``.

    Every such pair is composable because all vertices share the origin.
    With ``verify_products`` the product ``(g h^-1) h`` is also compared with
    ``g`` by germ equality.
    """
    spec = ball.spec
    germs = ball.germs
    degs = [spec.degree(g) for g in germs]
    invs = [spec.inverse(h) for h in germs]
    bad = []
    count = 0
    for h, hinv, dh in zip(germs, invs, degs):
        if spec.degree(hinv) != -dh:
            bad.append(("inverse", vertex_label(h)))
        for g, dg in zip(germs, degs):
            k = spec.compose(g, hinv)
            count += 1
            ok = spec.degree(k) == dg - dh
            if ok and verify_products:
                ok = bool(spec.equal(spec.compose(k, h), g))
            if not ok:
                bad.append((vertex_label(g), vertex_label(h)))
                if len(bad) > 10:
                    return {"pairs": count, "violations": bad}
    return {"pairs": count, "violations": bad}


# ------------------------------------------------------------ tree of preimages


def tree_of_preimages(spec: ExpandingShift, t: EvPeriodicWord, depth: int) -> Graph:
    """Vertices ``(n, y)`` with ``sigma^n y = t``; each joined to ``(n - 1, sigma y)``."""
    if not spec.admissible(t):
        raise GermError(f"{t} is not admissible")
    layer = [t]
    verts = [(0, t)]
    edges = []
    for n in range(1, depth + 1):
        nxt = []
        for y in layer:
            for a in spec.preimage_letters(y):
                z = y.prepend((a,))
                nxt.append(z)
                verts.append((n, z))
                edges.append(((n, z), (n - 1, y)))
        layer = nxt
    g = Graph(verts, edges)
    g.label = lambda v: f"{v[0]}:{v[1]}"  # type: ignore[method-assign]
    return g


def leaf_count(tree: Graph) -> int:
    top = max(v[0] for v in tree.vertices)
    return sum(1 for v in tree.vertices if v[0] == top)


# ------------------------------------------------------------ boundary scale


@dataclass(frozen=True)
class BoundaryScale:
    value: int | None
    lower_bound: bool

    def to_json(self) -> dict:
        return {"value": self.value, "lower_bound": self.lower_bound}


def _descendants(cg: CocycleGraph, i: int) -> set:
    seen = {i}
    stack = [i]
    while stack:
        v = stack.pop()
        for w in cg.successors[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def boundary_scale(ball: CayleyBall, ray1: RaySpec, ray2: RaySpec) -> BoundaryScale:
    """Largest degree of a vertex from which both rays' ends ascend.

    Rays are given as ascending vertex sequences (each step goes against an
    arrow).  The value is a lower bound when a ray reaches the ball boundary.
    """
    cg = ball.graph
    for ray in (ray1, ray2):
        rev = RaySpec(tuple(reversed(ray.vertices)))
        rev.check(cg)
    e1, e2 = ray1.vertices[-1], ray2.vertices[-1]
    common = _descendants(cg, cg.index[e1]) & _descendants(cg, cg.index[e2])
    touched = any(v in cg.truncated for v in ray1.vertices + ray2.vertices)
    if not common:
        return BoundaryScale(None, True)
    return BoundaryScale(max(cg.lam[cg.vertices[i]] for i in common), touched)


def ascending_ray(ball: CayleyBall, letters: str | Sequence[str], start: int = 0) -> RaySpec:
    """Ascending ray in an expanding-shift ball: prepend the given letters one at a time."""
    spec = ball.spec
    g = ball.germs[start]
    verts = [start]
    for a in letters:
        g = ShiftGerm(g.target.prepend((a,)), g.degree + 1, g.origin)
        j = ball.germ_index(g)
        if j is None:
            raise GermError("ray leaves the ball")
        verts.append(j)
    del spec
    return RaySpec(tuple(verts))


# ------------------------------------------------------------ rotation orbital graph


def _sums(R: Sequence[QuadInt], k: int) -> set:
    gens = list(R) + [-r for r in R]
    out = {R[0] * 0}
    for _ in range(k):
        out |= {a + g for a in out for g in gens}
    return out


def rotation_orbital_graph(
    spec: QuadraticAffine,
    interval: tuple,
    word_bound: int,
    translations: Sequence | None = None,
    scaling: bool = False,
    edge_span: int = 1,
) -> CocycleGraph:
    """Orbital graph of translations (and optionally the scaling) on an interval.

    Vertices are germs ``(n, alpha)`` at base ``0`` whose target lies in the
    closed interval and which are reached by words of length ``<= word_bound``
    in the translations ``x -> x +- t`` (and ``x -> theta^+-1 x`` when
    ``scaling``).  Intermediate points may leave the interval.  Two vertices
    of equal degree are linked when their targets differ by a sum of at most
    ``edge_span`` translations; scaling edges are arrows of degree one.
    With translations ``{1, phi}`` a span of 3 contains both branches of the
    rotation by ``phi - 1`` modulo 1.
    """
    lo, hi = (QuadSurd.rational(Fraction(x), spec.theta.to_surd().d) if not isinstance(x, QuadInt) else x.to_surd() for x in interval)
    if hi < lo:
        raise GermError("empty interval")
    b = spec.b
    if translations is None:
        translations = [QuadInt.of(1, b)]
    R = [t if isinstance(t, QuadInt) else QuadInt.of(int(t), b) for t in translations]

    def inside(a: QuadInt) -> bool:
        s = a.to_surd()
        return lo <= s <= hi

    start = (0, QuadInt.of(0, b))
    seen = {start}
    frontier = [start]
    steps = [(0, r) for r in R] + [(0, -r) for r in R]
    if scaling:
        steps += [(1, None), (-1, None)]
    for _ in range(word_bound):
        nxt = []
        for n, a in frontier:
            for dn, t in steps:
                if t is None:
                    w = (n + dn, spec.scale_power(dn) * a)
                else:
                    w = (n, a + t)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    verts = sorted((v for v in seen if inside(v[1])), key=lambda v: (v[0], float(v[1])))
    span = _sums(R, edge_span) - {QuadInt.of(0, b)}
    by_level: dict = {}
    for v in verts:
        by_level.setdefault(v[0], []).append(v)
    links = []
    for level in by_level.values():
        present = set(level)
        for v in level:
            for t in span:
                w = (v[0], v[1] + t)
                if w in present and (v[0], float(v[1])) < (w[0], float(w[1])):
                    links.append((v, w))
    arrows = []
    if scaling:
        present = set(verts)
        for n, a in verts:
            w = (n + 1, spec.theta_inv * a)
            if w in present:
                arrows.append((w, (n, a)))
    cg = CocycleGraph(verts, arrows, {v: v[0] for v in verts}, links=links)
    cg.label = lambda v: f"{v[0]}:{v[1]}"  # type: ignore[method-assign]
    return cg


def graph_diameter(g: Graph) -> int:
    d = g.distances
    if (d < 0).any():
        raise GermError("graph is disconnected")
    return int(d.max()) if len(g) else 0


# ------------------------------------------------------------ presets


def doubling() -> tuple[ExpandingShift, EvPeriodicWord]:
    return ExpandingShift(("0", "1")), EvPeriodicWord.parse("(0)")


def dyadic_affine() -> tuple[DyadicAffine, int]:
    return DyadicAffine(), 0


def golden_rotation() -> tuple[QuadraticAffine, QuadInt]:
    spec = QuadraticAffine(golden_ring())
    return spec, spec.zero


def basilica_shift() -> tuple[SelfSimilarShift, EvPeriodicWord]:
    return SelfSimilarShift(basilica()), EvPeriodicWord.parse("(0)")


def adding_machine_shift() -> tuple[SelfSimilarShift, EvPeriodicWord]:
    return SelfSimilarShift(adding_machine()), EvPeriodicWord.parse("(0)")


PRESETS = {
    "doubling": doubling,
    "dyadic-affine": dyadic_affine,
    "golden-rotation": golden_rotation,
    "basilica-shift": basilica_shift,
    "adding-machine-shift": adding_machine_shift,
}


def preset_ball(name: str, radius: int) -> CayleyBall:
    if name not in PRESETS:
        raise GermError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    spec, base = PRESETS[name]()
    return cayley_ball(spec, base, radius)
