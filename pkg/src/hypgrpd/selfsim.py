"""Self-similar groups given by wreath recursions.

An element is a freely reduced word in the generators and their inverses,
stored as a tuple of ``(name, exponent)`` with exponent ``+1`` or ``-1``.
Products compose like maps: ``(g * h)(w) = g(h(w))``, so the rightmost
factor acts first.  Equality of elements is semantic and decided by
bisimulation on the section closure, under a budget.
"""

from __future__ import annotations

import itertools
import json
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .words import EvPeriodicWord, word_str

Letter = str
Syllable = tuple[str, int]


class BudgetExceeded(RuntimeError):
    pass


def _reduce(word: Iterable[Syllable]) -> tuple:
    out: list[Syllable] = []
    for s in word:
        if out and out[-1][0] == s[0] and out[-1][1] == -s[1]:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def _inverse_word(word: Sequence[Syllable]) -> tuple:
    return tuple((n, -e) for n, e in reversed(word))


class WreathRecursion:
    """Generators with, per letter, an output letter and a section word.

    ``rules[g][x] = (y, section)`` encodes ``g(x w) = y section(w)`` where
    ``section`` is a sequence of generator names (``"b^-1"`` for inverses).
    """

    def __init__(self, alphabet: Sequence[Letter], rules: dict):
        self.alphabet: tuple = tuple(alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("repeated letters in the alphabet")
        self.names: tuple = tuple(rules)
        for name in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in {"e", "id"}:
                raise ValueError(f"bad generator name {name!r}")
        self._out: dict = {}
        self._sec: dict = {}
        for name, table in rules.items():
            if set(table) != set(self.alphabet):
                raise ValueError(f"generator {name} must have one rule per letter")
            outs = [table[x][0] for x in self.alphabet]
            if sorted(outs) != sorted(self.alphabet):
                raise ValueError(f"generator {name} does not permute the letters")
            for x in self.alphabet:
                y, sec = table[x]
                word = _reduce(self.parse_syllables(sec))
                self._out[(name, 1, x)] = y
                self._sec[(name, 1, x)] = word
                self._out[(name, -1, y)] = x
                self._sec[(name, -1, y)] = _inverse_word(word)
        self._cache: dict = {}

    # -- parsing

    def parse_syllables(self, tokens) -> list[Syllable]:
        if isinstance(tokens, str):
            tokens = self._tokenize(tokens)
        out = []
        for t in tokens:
            if t in ("", "1", "e", "id"):
                continue
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(\^-1)?", t)
            if not m or m.group(1) not in self.names:
                raise ValueError(f"unknown generator {t!r}")
            out.append((m.group(1), -1 if m.group(2) else 1))
        return out

    def _tokenize(self, text: str) -> list[str]:
        text = text.strip()
        if any(c in text for c in " *."):
            return [t for t in re.split(r"[ *.]+", text) if t]
        if all(len(n) == 1 for n in self.names):
            return re.findall(r"[A-Za-z_](?:\^-1)?|1", text)
        return [text]

    def element(self, spec="") -> GroupElement:
        if isinstance(spec, GroupElement):
            return spec
        if isinstance(spec, tuple) and all(isinstance(s, tuple) for s in spec):
            return GroupElement(self, _reduce(spec))
        return GroupElement(self, _reduce(self.parse_syllables(spec)))

    def identity(self) -> GroupElement:
        return GroupElement(self, ())

    def generators(self, inverses: bool = False) -> list[GroupElement]:
        out = [GroupElement(self, ((n, 1),)) for n in self.names]
        if inverses:
            out += [GroupElement(self, ((n, -1),)) for n in self.names]
        return out

    # -- core recursion on words

    def step(self, word: tuple, x: Letter) -> tuple[Letter, tuple]:
        """Output letter and reduced section of the element ``word`` at letter ``x``."""
        key = (word, x)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        sections = []
        y = x
        for name, e in reversed(word):
            sections.append(self._sec[(name, e, y)])
            y = self._out[(name, e, y)]
        sec = _reduce(s for part in reversed(sections) for s in part)
        self._cache[key] = (y, sec)
        return y, sec

    # -- serialization

    def to_json(self) -> dict:
        gens = {}
        for n in self.names:
            gens[n] = {
                x: [self._out[(n, 1, x)], [_syl_str(s) for s in self._sec[(n, 1, x)]]]
                for x in self.alphabet
            }
        return {"alphabet": list(self.alphabet), "generators": gens}

    @classmethod
    def from_json(cls, data: dict | str) -> WreathRecursion:
        if isinstance(data, str):
            data = json.loads(data)
        alphabet = [str(x) for x in data["alphabet"]]
        rules = {
            name: {str(x): (str(v[0]), list(v[1])) for x, v in table.items()}
            for name, table in data["generators"].items()
        }
        return cls(alphabet, rules)


def _syl_str(s: Syllable) -> str:
    return s[0] if s[1] == 1 else f"{s[0]}^-1"


@dataclass(frozen=True)
class GroupElement:
    rec: WreathRecursion = field(compare=False, hash=False, repr=False)
    word: tuple

    def __mul__(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.rec, _reduce(self.word + other.word))

    def inverse(self) -> GroupElement:
        return GroupElement(self.rec, _inverse_word(self.word))

    def __pow__(self, k: int) -> GroupElement:
        base = self if k >= 0 else self.inverse()
        out = self.rec.identity()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __len__(self) -> int:
        return len(self.word)

    def letter_map(self) -> dict:
        return {x: self.rec.step(self.word, x)[0] for x in self.rec.alphabet}

    def section(self, v: Sequence[Letter]) -> GroupElement:
        return section(self, v)

    def __call__(self, w):
        return act(self, w)

    def label(self) -> str:
        return "*".join(_syl_str(s) for s in self.word) or "1"

    def __str__(self) -> str:
        return self.label()


# ------------------------------------------------------------ action


@dataclass(frozen=True)
class TruncatedWord:
    """Prefix of an image that could not be closed up within the budget."""

    prefix: tuple
    truncated: bool = True

    def __str__(self) -> str:
        return word_str(self.prefix) + "..."


def act(g: GroupElement, w, budget: int = 10_000):
    """Image of a finite word (tuple or string) or an :class:`EvPeriodicWord`."""
    rec = g.rec
    if isinstance(w, EvPeriodicWord):
        return _act_periodic(g, w, budget)
    state = g.word
    out = []
    for x in w:
        if x not in rec.alphabet:
            raise ValueError(f"letter {x!r} is not in the alphabet")
        y, state = rec.step(state, x)
        out.append(y)
    return "".join(out) if isinstance(w, str) else tuple(out)


def _act_periodic(g: GroupElement, w: EvPeriodicWord, budget: int):
    rec = g.rec
    state = g.word
    out = []
    for x in w.preperiod:
        y, state = rec.step(state, x)
        out.append(y)
    head = len(out)
    seen = {}
    for k in range(budget):
        if state in seen:
            start = head + seen[state] * len(w.period)
            return EvPeriodicWord(tuple(out[:start]), tuple(out[start:]))
        seen[state] = k
        for x in w.period:
            y, state = rec.step(state, x)
            out.append(y)
    return TruncatedWord(tuple(out))


def section(g: GroupElement, v: Sequence[Letter]) -> GroupElement:
    state = g.word
    for x in v:
        _, state = g.rec.step(state, x)
    return GroupElement(g.rec, state)


# ------------------------------------------------------------ triviality


@dataclass(frozen=True)
class Verdict:
    status: str  # "yes", "no" or "unknown"
    witness: tuple | None = None
    explored: int = 0

    def __bool__(self) -> bool:
        return self.status == "yes"


def is_trivial(g: GroupElement, budget: int = 10_000) -> Verdict:
    """Bisimulation: ``g`` is trivial iff every section fixes every letter.

    On ``no`` the witness is a word moved by ``g``.
    """
    rec = g.rec
    parent: dict = {g.word: None}
    queue = deque([g.word])
    while queue:
        word = queue.popleft()
        for x in rec.alphabet:
            y, sec = rec.step(word, x)
            if y != x:
                path = [x]
                cur = word
                while parent[cur] is not None:
                    cur, letter = parent[cur]
                    path.append(letter)
                return Verdict("no", tuple(reversed(path)), len(parent))
            if sec not in parent:
                if len(parent) >= budget:
                    return Verdict("unknown", None, len(parent))
                parent[sec] = (word, x)
                queue.append(sec)
    return Verdict("yes", None, len(parent))


def equal(g: GroupElement, h: GroupElement, budget: int = 10_000) -> Verdict:
    return is_trivial(g.inverse() * h, budget)


class ElementSet:
    """Elements up to semantic equality, bucketed by their action on short words."""

    def __init__(self, rec: WreathRecursion, depth: int = 3, budget: int = 10_000):
        self.rec = rec
        self.depth = depth
        self.budget = budget
        self._probe = [
            tuple(p) for n in range(1, depth + 1) for p in itertools.product(rec.alphabet, repeat=n)
        ]
        self._buckets: dict = {}
        self.items: list[GroupElement] = []

    def _signature(self, g: GroupElement) -> tuple:
        return tuple(act(g, p) for p in self._probe)

    def find(self, g: GroupElement) -> GroupElement | None:
        for h in self._buckets.get(self._signature(g), ()):
            if h.word == g.word:
                return h
            v = equal(h, g, self.budget)
            if v.status == "unknown":
                raise BudgetExceeded("equality undecided within budget")
            if v:
                return h
        return None

    def add(self, g: GroupElement) -> tuple[GroupElement, bool]:
        found = self.find(g)
        if found is not None:
            return found, False
        self._buckets.setdefault(self._signature(g), []).append(g)
        self.items.append(g)
        return g, True

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __contains__(self, g: GroupElement) -> bool:
        return self.find(g) is not None


# ------------------------------------------------------------ nucleus


@dataclass(frozen=True)
class NucleusResult:
    status: str  # "ok" or "not contracting within budget"
    elements: tuple = ()

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_json(self) -> dict:
        return {"status": self.status, "size": len(self.elements), "elements": sorted(e.label() for e in self.elements)}


def _section_digraph(seed: Iterable[GroupElement], store: ElementSet, budget: int):
    """Section closure of ``seed``; returns (nodes, successor index lists)."""
    nodes: list[GroupElement] = []
    index: dict = {}
    succ: list[list[int]] = []

    def intern(g):
        rep, _ = store.add(g)
        key = rep.word
        if key not in index:
            if len(index) >= budget:
                raise BudgetExceeded("section closure exceeds budget")
            index[key] = len(nodes)
            nodes.append(rep)
            succ.append([])
            queue.append(rep)
        return index[key]

    queue: deque = deque()
    roots = [intern(g) for g in seed]
    while queue:
        g = queue.popleft()
        i = index[g.word]
        succ[i] = sorted({intern(section(g, (x,))) for x in g.rec.alphabet})
    return nodes, succ, roots


def _recurrent_closure(nodes, succ) -> list[int]:
    """Vertices on cycles together with everything reachable from them."""
    n = len(nodes)
    # Tarjan-free: a vertex lies on a cycle iff it can reach itself
    reach_self = []
    for s in range(n):
        seen = set()
        stack = list(succ[s])
        found = False
        while stack:
            v = stack.pop()
            if v == s:
                found = True
                break
            if v not in seen:
                seen.add(v)
                stack.extend(succ[v])
        if found:
            reach_self.append(s)
    out = set(reach_self)
    stack = list(reach_self)
    while stack:
        v = stack.pop()
        for w in succ[v]:
            if w not in out:
                out.add(w)
                stack.append(w)
    return sorted(out)


def nucleus(rec: WreathRecursion, budget: int = 2_000) -> NucleusResult:
    """Nucleus of a contracting recursion, or a non-verdict when the budget runs out.

    Starts from the recurrent sections of the generators and repeatedly adds
    the recurrent sections of pairwise products until nothing new appears.
    """
    store = ElementSet(rec, budget=budget * 10)
    try:
        seed = [rec.identity()] + rec.generators(inverses=True)
        nodes, succ, _ = _section_digraph(seed, store, budget)
        current = {nodes[i].word: nodes[i] for i in _recurrent_closure(nodes, succ)}
        while True:
            prods = [a * b for a in current.values() for b in current.values()]
            nodes, succ, _ = _section_digraph(prods, store, budget)
            grown = dict(current)
            for i in _recurrent_closure(nodes, succ):
                grown.setdefault(nodes[i].word, nodes[i])
            if len(grown) > budget:
                return NucleusResult("not contracting within budget")
            if len(grown) == len(current):
                return NucleusResult("ok", tuple(sorted(current.values(), key=lambda g: (len(g), g.label()))))
            current = grown
    except BudgetExceeded:
        return NucleusResult("not contracting within budget")


# ------------------------------------------------------------ orbits and Schreier graphs


def orbit(elements: Sequence[GroupElement], w) -> set:
    moves = list(elements) + [g.inverse() for g in elements]
    start = tuple(w)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for g in moves:
            u = act(g, v)
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


@dataclass
class SchreierGraph:
    level: int
    vertices: tuple
    edges: tuple  # (u, v, label) with u, v words; loops kept

    def simple_graph(self):
        from .hypgraph import Graph

        return Graph(self.vertices, [(u, v) for u, v, _ in self.edges])

    def is_connected(self) -> bool:
        return self.simple_graph().is_connected()

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "vertices": [word_str(v) for v in self.vertices],
            "edges": [[word_str(u), word_str(v), lab] for u, v, lab in self.edges],
        }

    def to_dot(self, name: str = "Schreier") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f'  "{word_str(v)}";' for v in self.vertices]
        lines += [f'  "{word_str(u)}" -> "{word_str(v)}" [label="{lab}"];' for u, v, lab in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"


def schreier_graph(rec: WreathRecursion, n: int, max_vertices: int = 1 << 20) -> SchreierGraph:
    """Vertices ``X^n``; one edge ``v -- s(v)`` labeled ``s`` per generator ``s``."""
    if len(rec.alphabet) ** n > max_vertices:
        raise BudgetExceeded(f"|X|^{n} exceeds {max_vertices}")
    verts = tuple(itertools.product(rec.alphabet, repeat=n))
    edges = []
    for s in rec.generators():
        for v in verts:
            edges.append((v, act(s, v), s.label()))
    return SchreierGraph(n, verts, tuple(edges))


def hausdorff_heuristic(rec: WreathRecursion, budget: int = 2_000) -> dict:
    """Search the nucleus for a witness of a non-Hausdorff groupoid of germs.

    A witness is a nontrivial nucleus element ``g`` and a word ``v`` with
    ``g(v) = v`` and ``g|_v = g`` such that, along the cycle, some letter is
    fixed with a trivial section.  Then ``g`` has a nontrivial germ at
    ``v v v ...`` that is a limit of trivial germs.  Finding no witness is
    not a proof of Hausdorffness, so ``complete`` is always false.
    """
    nuc = nucleus(rec, budget)
    if not nuc.ok:
        return {"status": nuc.status, "witness": None, "complete": False}
    store = ElementSet(rec)
    for g in nuc.elements:
        store.add(g)
    trivial = [g for g in nuc.elements if is_trivial(g)]
    for g in nuc.elements:
        if g in trivial:
            continue
        # DFS over fixed letters, remembering whether a trivial branch was passed
        stack = [(g, (), False)]
        seen = set()
        while stack:
            h, path, branched = stack.pop()
            key = (h.word, branched, len(path) > 0)
            if key in seen:
                continue
            seen.add(key)
            for x in rec.alphabet:
                y, _ = rec.step(h.word, x)
                if y != x:
                    continue
                sec = store.find(section(h, (x,))) or section(h, (x,))
                if is_trivial(sec):
                    if not branched:
                        stack.append((h, path, True))
                    continue
                if sec.word == g.word and (branched or any(
                    rec.step(sec.word, z)[0] == z and is_trivial(section(sec, (z,)))
                    for z in rec.alphabet
                )):
                    return {
                        "status": "ok",
                        "witness": {"element": g.label(), "cycle": word_str(path + (x,))},
                        "complete": False,
                    }
                if len(path) < len(nuc.elements):
                    stack.append((sec, path + (x,), branched))
    return {"status": "ok", "witness": None, "complete": False}


# ------------------------------------------------------------ presets


def adding_machine() -> WreathRecursion:
    return WreathRecursion(("0", "1"), {"t": {"0": ("1", []), "1": ("0", ["t"])}})


def basilica() -> WreathRecursion:
    return WreathRecursion(
        ("0", "1"),
        {
            "a": {"0": ("1", []), "1": ("0", ["b"])},
            "b": {"0": ("0", []), "1": ("1", ["a"])},
        },
    )


def trivial_group() -> WreathRecursion:
    return WreathRecursion(("0", "1"), {"e1": {"0": ("0", ["e1"]), "1": ("1", [])}})


PRESETS = {"adding-machine": adding_machine, "basilica": basilica, "trivial": trivial_group}
