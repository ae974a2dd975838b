"""Finite and eventually periodic words over a finite alphabet.

Letters are arbitrary hashable values, usually one-character strings.  The
text form ``"01(10)"`` means the preperiod ``01`` followed by ``10`` repeated
forever; text forms only work for one-character letters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterator, Sequence

Letter = Hashable


def _primitive_root(w: tuple) -> tuple:
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w


@dataclass(frozen=True)
class EvPeriodicWord:
    """Right-infinite word ``preperiod + period + period + ...``.

    Instances are kept canonical: the period is primitive and the preperiod is
    as short as possible, so ``==`` is equality of infinite words.
    """

    preperiod: tuple
    period: tuple

    def __post_init__(self) -> None:
        pre, per = tuple(self.preperiod), tuple(self.period)
        if not per:
            raise ValueError("period must be nonempty")
        per = _primitive_root(per)
        # rotate the period leftward to absorb the end of the preperiod
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def parse(cls, text: str) -> EvPeriodicWord:
        if "(" not in text or not text.endswith(")"):
            raise ValueError(f"expected 'pre(period)', got {text!r}")
        head, _, rest = text.partition("(")
        return cls(tuple(head), tuple(rest[:-1]))

    @classmethod
    def constant(cls, letter: Letter) -> EvPeriodicWord:
        return cls((), (letter,))

    def __getitem__(self, i: int) -> Letter:
        if i < 0:
            raise IndexError("negative index into a right-infinite word")
        k = len(self.preperiod)
        if i < k:
            return self.preperiod[i]
        return self.period[(i - k) % len(self.period)]

    def prefix(self, n: int) -> tuple:
        return tuple(self[i] for i in range(n))

    def __iter__(self) -> Iterator[Letter]:
        i = 0
        while True:
            yield self[i]
            i += 1

    def tail(self, k: int = 1) -> EvPeriodicWord:
        """Drop the first ``k`` letters (the one-sided shift applied ``k`` times)."""
        pre = self.preperiod
        if k <= len(pre):
            return EvPeriodicWord(pre[k:], self.period)
        r = (k - len(pre)) % len(self.period)
        return EvPeriodicWord((), self.period[r:] + self.period[:r])

    def prepend(self, letters: Sequence[Letter]) -> EvPeriodicWord:
        return EvPeriodicWord(tuple(letters) + self.preperiod, self.period)

    @property
    def cycle_start(self) -> int:
        return len(self.preperiod)

    def phase(self, i: int) -> int:
        """Index of position ``i`` in the finite automaton ``pre -> period loop``."""
        k = len(self.preperiod)
        return i if i < k else k + (i - k) % len(self.period)

    def agreement(self, other: EvPeriodicWord) -> int | None:
        """Length of the longest common prefix, ``None`` if the words are equal."""
        if self == other:
            return None
        bound = (
            max(len(self.preperiod), len(other.preperiod))
            + len(self.period) * len(other.period)
        )
        for i in range(bound + 1):
            if self[i] != other[i]:
                return i
        raise AssertionError("distinct eventually periodic words must differ early")

    def __str__(self) -> str:
        return "".join(map(str, self.preperiod)) + "(" + "".join(map(str, self.period)) + ")"

    def to_json(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period)}

    @classmethod
    def from_json(cls, data) -> EvPeriodicWord:
        if isinstance(data, str):
            return cls.parse(data)
        return cls(tuple(data["preperiod"]), tuple(data["period"]))


def as_word(w) -> tuple | EvPeriodicWord:
    """Normalize user input: strings with parentheses become infinite words."""
    if isinstance(w, EvPeriodicWord):
        return w
    if isinstance(w, str):
        return EvPeriodicWord.parse(w) if "(" in w else tuple(w)
    return tuple(w)


def word_str(w) -> str:
    return str(w) if isinstance(w, EvPeriodicWord) else "".join(map(str, w))
