"""Labelled spaces and their inverse semigroups of triples ``(alpha, A, beta)``.

Vertex sets are bitmasks over the vertex :class:`~moritakit.gba.Universe`;
the accommodating family is a :class:`~moritakit.gba.Gba` on the same
universe.  Words are tuples of :class:`~moritakit.groups.Letter`; the empty
tuple is the empty word.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .errors import InvalidInputError
from .gba import Gba, Universe, iter_submasks_of_blocks, make_gba
from .graph_alg import DirectedGraph, graph_from_json
from .groups import FreeGroup, GroupWord, Letter, parse_letter
from .inv_semigroup import Grading, InverseSemigroup

ZERO = "0"


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


class LabelledSpace:
    """A labelled graph with an accommodating family of vertex sets.

    ``labels`` maps edge ids to a-letters.  ``declared`` keeps the family
    exactly as supplied (before closure) so validation can report when the
    input was not already closed.
    """

    def __init__(self, graph: DirectedGraph, labels: dict, family: Gba | Iterable | None = None,
                 alphabet: Sequence[Letter] | None = None):
        self.graph = graph
        self.universe = Universe(graph.vertices)
        self.labels = {}
        for e in graph.edges:
            if e.id not in labels:
                raise InvalidInputError(f"edge {e.id} has no label")
            lab = labels[e.id]
            lab = parse_letter(lab) if isinstance(lab, str) else lab
            if lab.kind != "a":
                raise InvalidInputError(f"edge {e.id}: labels must be a-letters, got {lab}")
            self.labels[e.id] = lab
        extra = set(labels) - set(self.labels)
        if extra:
            raise InvalidInputError(f"labels for unknown edges {sorted(extra)}")
        used = sorted(set(self.labels.values()))
        if alphabet is None:
            alphabet = used
        else:
            alphabet = sorted(parse_letter(a) if isinstance(a, str) else a for a in alphabet)
            missing = [a for a in used if a not in alphabet]
            if missing:
                raise InvalidInputError(f"labels {missing} are outside the declared alphabet")
        self.alphabet = tuple(alphabet)
        self._bit = {v: 1 << i for i, v in enumerate(graph.vertices)}
        # succ[a][bit] = range mask of the a-edges leaving that vertex
        self._succ = {a: {} for a in self.alphabet}
        for e in graph.edges:
            a = self.labels[e.id]
            s = self._bit[e.src]
            self._succ[a][s] = self._succ[a].get(s, 0) | self._bit[e.dst]
        self.declared = None
        if family is None:
            family = make_gba(self.universe, [[v] for v in graph.vertices])
        elif not isinstance(family, Gba):
            sets = [list(s) for s in family]
            self.declared = tuple(sorted({self.universe.mask_of(s) for s in sets} | {0}))
            family = make_gba(self.universe, sets)
        if family.universe != self.universe:
            raise InvalidInputError("family lives on a different vertex universe")
        self.family = family

    def __repr__(self):
        return (f"LabelledSpace({len(self.graph.vertices)} vertices, {len(self.graph.edges)} edges, "
                f"{len(self.family.block_masks)} blocks)")

    @property
    def k(self) -> int:
        """Largest a-index in the alphabet."""
        return max((a.index for a in self.alphabet), default=0)

    @property
    def full_mask(self) -> int:
        return self.universe.full_mask

    def mask(self, vertices) -> int:
        if isinstance(vertices, int):
            return vertices
        return self.universe.mask_of(vertices)

    def vertices_of(self, mask: int) -> list:
        return [v for v in self.graph.vertices if mask & self._bit[v]]

    def _letter(self, a) -> Letter:
        a = parse_letter(a) if isinstance(a, str) else a
        if a not in self._succ:
            raise InvalidInputError(f"letter {a} is outside the alphabet")
        return a

    def range1(self, mask: int, a) -> int:
        succ = self._succ[self._letter(a)]
        out = 0
        for b in _bits(mask):
            out |= succ.get(b, 0)
        return out

    def letter_range(self, a) -> int:
        """``r(a)``: ranges of all edges labelled ``a``."""
        return self.range1(self.full_mask, a)

    def relative_range(self, B, word) -> int:
        m = self.mask(B)
        for a in word:
            if not m:
                return 0
            m = self.range1(m, a)
        return m

    def word_range(self, word) -> int | None:
        """``r(alpha)``; ``None`` stands for the whole vertex set at the empty word."""
        if not word:
            return None
        return self.relative_range(self.letter_range(word[0]), word[1:])

    def delta(self, B) -> tuple:
        """Letters with nonempty range from ``B``."""
        m = self.mask(B)
        return tuple(a for a in self.alphabet if self.range1(m, a))

    def labelled_paths(self, max_len: int) -> list:
        """Words of length ``≤ max_len`` with nonempty range (empty word first)."""
        out = [()]
        layer = [((), self.full_mask)]
        for _ in range(max_len):
            nxt = []
            for w, m in layer:
                for a in self.alphabet:
                    r = self.range1(m, a)
                    if r:
                        nxt.append((w + (a,), r))
            out += [w for w, _ in nxt]
            layer = nxt
        return out

    def to_json(self) -> dict:
        return {
            **self.graph.to_json(),
            "labels": {eid: str(a) for eid, a in self.labels.items()},
            "alphabet": [str(a) for a in self.alphabet],
            "family": [self.vertices_of(b) for b in self.family.block_masks],
        }


def space_from_json(data: dict) -> LabelledSpace:
    try:
        graph = graph_from_json(data)
        labels = data["labels"]
        family = data.get("family")
        alphabet = data.get("alphabet")
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidInputError(f"malformed labelled-space JSON: {exc}") from None
    if not isinstance(labels, dict):
        raise InvalidInputError("labels must map edge ids to letters")
    return LabelledSpace(graph, labels, family, alphabet)


def load_space(path: str) -> LabelledSpace:
    with open(path) as fh:
        return space_from_json(json.load(fh))


def relative_range(L: LabelledSpace, B, word) -> int:
    if isinstance(word, GroupWord):
        if not word.is_positive:
            raise InvalidInputError("relative ranges take positive words")
        word = word.positive_letters()
    return L.relative_range(B, tuple(L._letter(a) for a in word))


@dataclass
class SpaceReport:
    ok: bool
    failures: list = field(default_factory=list)
    checked: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self, L: LabelledSpace | None = None) -> dict:
        def fmt(x):
            if isinstance(x, int) and L is not None:
                return L.vertices_of(x)
            if isinstance(x, Letter):
                return str(x)
            if isinstance(x, tuple):
                return [fmt(y) for y in x]
            return x

        return {
            "ok": self.ok,
            "failures": [{"clause": c, "witness": fmt(w)} for c, w in self.failures],
            "checked": self.checked,
        }


def validate_space(L: LabelledSpace) -> SpaceReport:
    """Accommodating, normal and weakly left-resolving.

    Ranges are unions over blocks, so the family is closed under relative
    ranges iff each block's range is a member, and ``r(A ∩ B, a) =
    r(A, a) ∩ r(B, a)`` holds everywhere iff distinct blocks have disjoint
    ``a``-ranges.  A declared family is read as generators: unions are
    filled in, but it must already be closed under meets and relative
    complements.
    """
    F = L.family
    failures = []
    if L.declared is not None:
        declared = set(L.declared)
        gaps = None
        for x, y in product(L.declared, repeat=2):
            for op, m in (("intersection", x & y), ("complement", x & ~y)):
                if m not in declared:
                    gaps = (op, x, y)
                    break
            if gaps:
                break
        if gaps:
            failures.append(("normal", gaps))
    for a in L.alphabet:
        r = L.letter_range(a)
        if not F.contains_mask(r):
            failures.append(("letter-range-in-family", (a, r)))
    for b in F.block_masks:
        for a in L.alphabet:
            r = L.range1(b, a)
            if not F.contains_mask(r):
                failures.append(("closed-under-ranges", (b, a, r)))
    blocks = F.block_masks
    for a in L.alphabet:
        ranges = [L.range1(b, a) for b in blocks]
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                if ranges[i] & ranges[j]:
                    failures.append(("weakly-left-resolving", (blocks[i], blocks[j], a)))
    checked = {"blocks": len(blocks), "letters": len(L.alphabet),
               "vertex-set-in-family": F.contains_mask(L.full_mask)}
    return SpaceReport(not failures, failures, checked)


def true_sinks(L: LabelledSpace) -> int:
    """Mask of vertices lying in a member ``B`` with empty ``Δ_B``.

    Such a ``B`` consists of sinks, so the set is the union of the blocks
    made only of sinks.
    """
    sinks = L.mask(L.graph.sinks)
    out = 0
    for b in L.family.block_masks:
        if b & ~sinks == 0:
            out |= b
    return out


class TripleSemigroup(InverseSemigroup):
    """Shared arithmetic of ``(alpha, A, beta)`` triples.

    Subclasses supply the set operations: ``_meet``, ``_empty``, ``_range``
    (relative range along a word), ``_within(A, word)`` (``A ⊆ r(word)``)
    and ``_fmt_set``.
    """

    zero = ZERO

    def multiply(self, x, y):
        if x == ZERO or y == ZERO:
            return ZERO
        alpha, A, beta = x
        gamma, B, delta = y
        n, m = len(beta), len(gamma)
        if n <= m and gamma[:n] == beta:
            rest = gamma[n:]
            mid = self._meet(self._range(A, rest), B) if rest else self._meet(A, B)
            return ZERO if self._empty(mid) else (alpha + rest, mid, delta)
        if m < n and beta[:m] == gamma:
            rest = beta[m:]
            mid = self._meet(A, self._range(B, rest))
            return ZERO if self._empty(mid) else (alpha, mid, delta + rest)
        return ZERO

    def star(self, x):
        if x == ZERO:
            return ZERO
        return (x[2], x[1], x[0])

    def sort_key(self, x):
        if x == ZERO:
            return (-1,)
        alpha, A, beta = x
        return (len(alpha) + len(beta), alpha, beta, self._set_key(A))

    def _set_key(self, A):
        return A

    def format(self, x) -> str:
        if x == ZERO:
            return "0"
        alpha, A, beta = x
        fw = lambda w: "".join(str(a) for a in w) if w else "ω"  # noqa: E731
        return f"({fw(alpha)}, {self._fmt_set(A)}, {fw(beta)})"

    def grading(self, letters: Sequence[Letter] = ()) -> Grading:
        """``(alpha, A, beta) -> alpha beta^-1`` in the free group."""

        def fn(x):
            alpha, _, beta = x
            return GroupWord.of([(a, 1) for a in alpha] + [(b, -1) for b in reversed(beta)])

        return Grading(FreeGroup(letters), fn)


class LabelledSemigroup(TripleSemigroup):
    kind = "labelled"

    def __init__(self, L: LabelledSpace):
        self.space = L

    def __repr__(self):
        return f"LabelledSemigroup({self.space!r})"

    def _meet(self, A, B):
        return A & B

    def _empty(self, A):
        return not A

    def _range(self, A, word):
        return self.space.relative_range(A, word)

    def _fmt_set(self, A):
        return "{" + ",".join(self.space.vertices_of(A)) + "}"

    def _word(self, w) -> tuple:
        if isinstance(w, str):
            w = [p for p in w.replace(",", " ").split() if p and p not in ("ω", "e")]
        return tuple(self.space._letter(a) for a in w)

    def element(self, alpha, A, beta):
        """Validated triple; ``A`` may be a vertex list or a mask."""
        L = self.space
        alpha, beta = self._word(alpha), self._word(beta)
        m = L.mask(A)
        if not m:
            return ZERO
        if not L.family.contains_mask(m):
            raise InvalidInputError(f"{L.vertices_of(m)} is not in the family")
        for w in (alpha, beta):
            r = L.word_range(w)
            if r is not None and m & ~r:
                raise InvalidInputError(f"{L.vertices_of(m)} is not inside r({''.join(map(str, w))})")
        return (alpha, m, beta)

    def contains(self, x) -> bool:
        if x == ZERO:
            return True
        try:
            return self.element(*x) == x
        except (InvalidInputError, TypeError, ValueError):
            return False

    def members_below(self, r: int | None) -> list:
        F = self.space.family
        top = self.space.full_mask if r is None else r
        blocks = [b for b in F.block_masks if b & ~top == 0]
        return [m for m in iter_submasks_of_blocks(blocks) if m]

    def ball(self, radius=2) -> list:
        """Triples whose words have length ``≤ radius``."""
        L = self.space
        words = L.labelled_paths(radius)
        ranges = {w: L.word_range(w) for w in words}
        out = []
        for alpha, beta in product(words, repeat=2):
            ra, rb = ranges[alpha], ranges[beta]
            if ra is None:
                r = rb
            elif rb is None:
                r = ra
            else:
                r = ra & rb
            if r == 0:
                continue
            for m in self.members_below(r):
                out.append((alpha, m, beta))
        return sorted(out, key=self.sort_key)

    def labelled_grading(self) -> Grading:
        return self.grading(self.space.alphabet)


def multiply_labelled(S: LabelledSemigroup, x, y):
    return S.multiply(x, y)
