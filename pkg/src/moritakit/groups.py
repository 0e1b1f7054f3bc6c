"""Grading groups: free groups over tagged letters and finite table groups.

Letters come in three flavours: ``a``-letters (the source alphabet, indexed
from 1), ``b``-letters (the unbounded chain alphabet added by
desingularization, also 1-based) and plain named symbols (graph edges,
generators of abstract free groups).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import InvalidInputError


@dataclass(frozen=True, order=True)
class Letter:
    kind: str
    index: int = 0
    name: str = ""

    def __post_init__(self):
        if self.kind in ("a", "b"):
            if self.index < 1:
                raise InvalidInputError(f"{self.kind}-letters are indexed from 1")
        elif self.kind == "sym":
            if not self.name:
                raise InvalidInputError("symbol letters need a name")
        else:
            raise InvalidInputError(f"unknown letter kind {self.kind!r}")

    def __str__(self):
        return self.name if self.kind == "sym" else f"{self.kind}{self.index}"

    __repr__ = __str__


def A(n: int) -> Letter:
    return Letter("a", n)


def B(n: int) -> Letter:
    return Letter("b", n)


def sym(name: str) -> Letter:
    return Letter("sym", 0, str(name))


_TAGGED = re.compile(r"^([ab])([1-9][0-9]*)$")


def parse_letter(text: str) -> Letter:
    m = _TAGGED.match(text)
    if m:
        return Letter(m.group(1), int(m.group(2)))
    if not text or not re.match(r"^[A-Za-z_][A-Za-z0-9_.']*$", text):
        raise InvalidInputError(f"bad letter {text!r}")
    return sym(text)


def _reduce(seq: Iterable[tuple]) -> tuple:
    out: list = []
    for letter, sign in seq:
        if sign not in (1, -1):
            raise InvalidInputError(f"sign must be +1 or -1, got {sign!r}")
        if out and out[-1][0] == letter and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((letter, sign))
    return tuple(out)


@dataclass(frozen=True, order=True)
class GroupWord:
    """A reduced word in a free group; the empty word is the identity."""

    letters: tuple = ()

    @classmethod
    def of(cls, seq: Iterable[tuple]) -> "GroupWord":
        return cls(_reduce(seq))

    @classmethod
    def positive(cls, letters: Iterable[Letter]) -> "GroupWord":
        return cls(_reduce((x, 1) for x in letters))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(_reduce(self.letters + other.letters))

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((x, -s) for x, s in reversed(self.letters)))

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    @property
    def is_positive(self) -> bool:
        return all(s == 1 for _, s in self.letters)

    def positive_letters(self) -> tuple:
        if not self.is_positive:
            raise InvalidInputError(f"{self} is not a positive word")
        return tuple(x for x, _ in self.letters)

    def __str__(self):
        if not self.letters:
            return "e"
        return " ".join(str(x) if s == 1 else f"{x}^-1" for x, s in self.letters)

    __repr__ = __str__


IDENTITY = GroupWord(())


def reduce(raw: Iterable[tuple]) -> GroupWord:
    """Free-group normal form of a sequence of ``(letter, ±1)`` pairs."""
    return GroupWord.of(raw)


def is_reduced(seq: Sequence[tuple]) -> bool:
    return all(
        not (seq[i][0] == seq[i + 1][0] and seq[i][1] == -seq[i + 1][1])
        for i in range(len(seq) - 1)
    )


def parse_word(text: str) -> GroupWord:
    """Parse ``"b1 b2 a2"`` / ``"a1^-1 b1"``; ``""``, ``"e"`` and ``"ω"`` are the identity."""
    text = text.strip()
    if text in ("", "e", "ω", "1"):
        return IDENTITY
    seq = []
    for tok in text.split():
        m = re.match(r"^(.+?)(?:\^(-?1))?$", tok)
        if not m:
            raise InvalidInputError(f"bad word token {tok!r}")
        sign = int(m.group(2)) if m.group(2) else 1
        seq.append((parse_letter(m.group(1)), sign))
    return GroupWord.of(seq)


def hom_image(letter_map: Mapping[Letter, GroupWord] | Callable, w: GroupWord) -> GroupWord:
    """Image of ``w`` under the homomorphism determined by ``letter_map``."""
    lookup = letter_map if callable(letter_map) else letter_map.get
    seq: list = []
    for x, s in w.letters:
        img = lookup(x)
        if img is None:
            raise InvalidInputError(f"letter {x} is not mapped")
        seq.extend(img.letters if s == 1 else img.inverse().letters)
    return GroupWord.of(seq)


def chain_word(n: int) -> GroupWord:
    """``b_1 b_2 ... b_n a_n``: the image of ``a_n`` under the desingularization map."""
    return GroupWord.positive([B(i) for i in range(1, n + 1)] + [A(n)])


def chain_map(letter: Letter) -> GroupWord | None:
    if letter.kind != "a":
        return None
    return chain_word(letter.index)


def h(w: GroupWord) -> GroupWord:
    return hom_image(chain_map, w)


def h_letters(word: Sequence[Letter]) -> tuple:
    """Positive-word version of :func:`h` on tuples of letters."""
    out: list = []
    for x in word:
        if x.kind != "a":
            raise InvalidInputError(f"h is only defined on a-letters, got {x}")
        out.extend(B(i) for i in range(1, x.index + 1))
        out.append(x)
    return tuple(out)


PREFIX, EXTENDS, SUFFIX, EQUAL, NONE = "prefix", "extends", "suffix", "equal", "none"


def _letters(u) -> tuple:
    if isinstance(u, GroupWord):
        return u.positive_letters()
    return tuple(u)


def prefix_relation(u, v) -> str:
    """Combinatorial relation of positive word ``u`` to ``v``.

    ``prefix``: u is a proper prefix of v; ``extends``: v is a proper prefix
    of u; ``suffix``: u is a proper suffix of v (and not a prefix);
    ``equal``; otherwise ``none``.
    """
    u, v = _letters(u), _letters(v)
    if u == v:
        return EQUAL
    if len(u) < len(v) and v[: len(u)] == u:
        return PREFIX
    if len(v) < len(u) and u[: len(v)] == v:
        return EXTENDS
    if len(u) < len(v) and v[len(v) - len(u):] == u:
        return SUFFIX
    return NONE


def positive_words(alphabet: Sequence[Letter], max_len: int) -> Iterator[tuple]:
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


class FreeGroup:
    """Free group on ``generators``; elements are :class:`GroupWord`."""

    kind = "free"

    def __init__(self, generators: Sequence[Letter] = ()):
        self.generators = tuple(generators)

    def __repr__(self):
        return f"FreeGroup({list(map(str, self.generators))})"

    @property
    def identity(self) -> GroupWord:
        return IDENTITY

    def mul(self, a: GroupWord, b: GroupWord) -> GroupWord:
        return a * b

    def inv(self, a: GroupWord) -> GroupWord:
        return a.inverse()

    def length(self, a: GroupWord) -> int:
        return len(a)

    def within(self, a: GroupWord, bound: int | None) -> bool:
        return bound is None or len(a) <= bound

    def elements(self, bound: int) -> list:
        """All reduced words of length at most ``bound``."""
        gens = [(g, s) for g in self.generators for s in (1, -1)]
        out = [IDENTITY]
        layer = [IDENTITY]
        for _ in range(bound):
            nxt = []
            for w in layer:
                for g, s in gens:
                    if w.letters and w.letters[-1] == (g, -s):
                        continue
                    nxt.append(GroupWord(w.letters + ((g, s),)))
            out += nxt
            layer = nxt
        return out

    def parse(self, text: str) -> GroupWord:
        w = parse_word(text)
        if self.generators:
            for x, _ in w.letters:
                if x not in self.generators:
                    raise InvalidInputError(f"{x} is not a generator of {self}")
        return w

    def format(self, a: GroupWord) -> str:
        return str(a)


class FiniteGroup:
    """A finite group given by a multiplication table over ``0..n-1``."""

    kind = "finite"

    def __init__(self, table: Sequence[Sequence[int]], names: Sequence[str] | None = None):
        n = len(table)
        self.table = tuple(tuple(row) for row in table)
        if any(len(row) != n for row in self.table):
            raise InvalidInputError("group table must be square")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise InvalidInputError("group table entries out of range")
        self.names = tuple(names) if names else tuple(str(i) for i in range(n))
        if len(self.names) != n:
            raise InvalidInputError("wrong number of element names")
        self.n = n
        ids = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if len(ids) != 1:
            raise InvalidInputError("group table has no two-sided identity")
        self._identity = ids[0]
        self._inv = {}
        for x in range(n):
            inv = [y for y in range(n) if self.table[x][y] == self._identity]
            if len(inv) != 1 or self.table[inv[0]][x] != self._identity:
                raise InvalidInputError(f"element {self.names[x]} has no inverse")
            self._inv[x] = inv[0]
        for x, y, z in product(range(n), repeat=3):
            if self.table[self.table[x][y]][z] != self.table[x][self.table[y][z]]:
                raise InvalidInputError("group table is not associative")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls([[(i + j) % n for j in range(n)] for i in range(n)])

    def __repr__(self):
        return f"FiniteGroup(order={self.n})"

    @property
    def identity(self) -> int:
        return self._identity

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def length(self, a: int) -> int:
        return 0

    def within(self, a: int, bound: int | None) -> bool:
        return True

    def elements(self, bound: int | None = None) -> list:
        return list(range(self.n))

    def parse(self, text: str) -> int:
        text = text.strip()
        if text == "e":
            return self._identity
        if text in self.names:
            return self.names.index(text)
        raise InvalidInputError(f"unknown group element {text!r}")

    def format(self, a: int) -> str:
        return self.names[a]


class ProductGroup:
    """Direct product of two group handles; elements are pairs."""

    kind = "product"

    def __init__(self, left, right):
        self.left, self.right = left, right

    @property
    def identity(self):
        return (self.left.identity, self.right.identity)

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a):
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    def length(self, a):
        return self.left.length(a[0]) + self.right.length(a[1])

    def within(self, a, bound):
        return bound is None or self.length(a) <= bound

    def format(self, a):
        return f"({self.left.format(a[0])}, {self.right.format(a[1])})"


def group_from_json(data: dict):
    kind = data.get("kind")
    if kind == "free":
        if "generators" in data:
            gens = [parse_letter(g) for g in data["generators"]]
        else:
            rank = int(data.get("rank", 1))
            gens = [sym("t")] if rank == 1 else [sym(f"t{i}") for i in range(1, rank + 1)]
        return FreeGroup(gens)
    if kind == "finite":
        if "cyclic" in data:
            return FiniteGroup.cyclic(int(data["cyclic"]))
        return FiniteGroup(data["table"], data.get("names"))
    raise InvalidInputError(f"unknown group kind {kind!r}")
