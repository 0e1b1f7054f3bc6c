"""Desingularization of a labelled space over a finite alphabet ``a_1..a_k``.

The desingularized space is kept virtual.  Its vertices are copies ``v_i``
of the base vertices ``v ∈ X_i``, where ``X_0`` is every vertex, and for
``i ≥ 1``, ``X_i`` is the true sinks plus the vertices emitting some
``a_j`` with ``j ≥ i``.  The tower is constant from ``k + 1`` on, so the
infinite ``b``-chains over true sinks are handled by index arithmetic and
only materialized (up to a depth) on request.

A member of the new family is a :class:`BFElement`: a finite map from
levels ``i`` to nonempty masks inside ``X_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from .errors import InvalidInputError, PreconditionError
from .gba import Gba, iter_submasks_of_blocks
from .groups import A as ALetter, B as BLetter, Letter, h_letters, parse_letter
from .inv_semigroup import natural_leq
from .labelled_space import (
    ZERO,
    LabelledSemigroup,
    LabelledSpace,
    TripleSemigroup,
    space_from_json,
    true_sinks,
    validate_space,
)
from .semilattice import Semilattice, check_cover_preserving, check_tight_inclusion

DEFAULT_DEPTH = 6
# multi-level enumeration in verify_all_regular switches to counting beyond this
REGULAR_ENUMERATION_CAP = 400_000


@dataclass(frozen=True)
class BFElement:
    parts: tuple = ()

    @classmethod
    def of(cls, parts) -> "BFElement":
        items = parts.items() if isinstance(parts, dict) else parts
        return cls(tuple(sorted((int(i), m) for i, m in items if m)))

    @classmethod
    def at(cls, mask: int, level: int) -> "BFElement":
        return cls(((level, mask),) if mask else ())

    def part(self, level: int) -> int:
        for i, m in self.parts:
            if i == level:
                return m
        return 0

    @property
    def levels(self) -> tuple:
        return tuple(i for i, _ in self.parts)

    @property
    def single_level(self) -> bool:
        return len(self.parts) == 1

    def _zip(self, other, op) -> "BFElement":
        a, b = dict(self.parts), dict(other.parts)
        return BFElement.of({i: op(a.get(i, 0), b.get(i, 0)) for i in set(a) | set(b)})

    def __and__(self, other):
        return self._zip(other, lambda x, y: x & y)

    def __or__(self, other):
        return self._zip(other, lambda x, y: x | y)

    def __sub__(self, other):
        return self._zip(other, lambda x, y: x & ~y)

    def is_subset(self, other) -> bool:
        return not (self - other)

    def __bool__(self):
        return bool(self.parts)


EMPTY = BFElement()


class DesingSpace:
    """The virtual desingularized space over a validated base space."""

    def __init__(self, base: LabelledSpace, depth: int = DEFAULT_DEPTH, check: bool = True):
        if depth < 1:
            raise InvalidInputError("depth must be positive")
        if check:
            report = validate_space(base)
            if not report:
                raise PreconditionError(f"base space is not valid: {report.failures[0]}")
        if not base.family.contains_mask(base.full_mask):
            raise PreconditionError("the vertex set must belong to the family")
        self.base = base
        self.depth = depth
        self.k = base.k
        self.tsink = true_sinks(base)
        emits = [self._emitters(ALetter(j)) for j in range(1, self.k + 1)]
        # _X[i] for 0 <= i <= k + 1; constant afterwards
        self._X = [base.full_mask]
        for i in range(1, self.k + 2):
            m = self.tsink
            for j in range(i, self.k + 1):
                m |= emits[j - 1]
            self._X.append(m)
        self.dropped = frozenset()

    def _emitters(self, a: Letter) -> int:
        L = self.base
        if a not in L.alphabet:
            return 0
        return sum(b for b in (1 << i for i in range(len(L.universe))) if L.range1(b, a))

    def __repr__(self):
        return f"DesingSpace(k={self.k}, depth={self.depth}, tsink={self.base.vertices_of(self.tsink)})"

    @property
    def stable_index(self) -> int:
        return self.k + 1

    def X(self, i: int) -> int:
        if i < 0:
            raise InvalidInputError("tower indices start at 0")
        if i in self.dropped:
            return 0
        return self._X[min(i, self.k + 1)]

    def true_X(self, i: int) -> int:
        return self._X[min(i, self.k + 1)]

    def n_v(self, v) -> float:
        bit = self.base.mask([v])
        if bit & self.tsink:
            return float("inf")
        n = 0
        for i in range(1, self.k + 2):
            if self._X[i] & bit:
                n = i
        return n

    def with_dropped_level(self, level: int) -> "DesingSpace":
        """A corrupted copy whose ranges treat ``X_level`` as empty."""
        clone = object.__new__(DesingSpace)
        clone.__dict__.update(self.__dict__)
        clone.dropped = self.dropped | {level}
        return clone

    # family
    def level_blocks(self, i: int) -> list:
        """Blocks of ``𝓑(X_i)``: the nonempty traces of ambient blocks."""
        x = self.X(i)
        return sorted({b & x for b in self.base.family.block_masks if b & x})

    def level_gba(self, i: int) -> Gba:
        return Gba(self.base.universe, self.level_blocks(i))

    def level_members(self, i: int, within: int | None = None) -> list:
        top = self.X(i) if within is None else within & self.X(i)
        blocks = [b for b in self.level_blocks(i) if b & ~top == 0]
        return [m for m in iter_submasks_of_blocks(blocks) if m]

    def in_family(self, B: BFElement) -> bool:
        for i, m in B.parts:
            if m & ~self.X(i):
                return False
            if not self.level_gba(i).contains_mask(m):
                return False
        return True

    def lift_mask(self, mask: int, level: int) -> int:
        """Least ambient member ``B`` with ``B ∩ X_level = mask``."""
        x = self.true_X(level)
        out = 0
        for b in self.base.family.block_masks:
            if b & x and (b & x) & ~mask == 0:
                out |= b
        if out & x != mask:
            raise InvalidInputError(f"{self.base.vertices_of(mask)} is not in 𝓑(X_{level})")
        return out

    # ranges
    def letter_range(self, letter: Letter) -> BFElement:
        if letter.kind == "b":
            return BFElement.at(self.X(letter.index), letter.index)
        if letter.kind == "a":
            n = letter.index
            if n > self.k:
                return EMPTY
            return BFElement.at(self.base.range1(self.X(n), letter), 0)
        raise InvalidInputError(f"{letter} is not a letter of the desingularized alphabet")

    def range1(self, B: BFElement, letter: Letter) -> BFElement:
        if letter.kind == "b":
            i = letter.index
            return BFElement.at(B.part(i - 1) & self.X(i), i)
        if letter.kind == "a":
            n = letter.index
            if n > self.k:
                return EMPTY
            return BFElement.at(self.base.range1(B.part(n) & self.X(n), letter), 0)
        raise InvalidInputError(f"{letter} is not a letter of the desingularized alphabet")

    def relative_range(self, B: BFElement, word) -> BFElement:
        for a in word:
            if not B:
                return EMPTY
            B = self.range1(B, a)
        return B

    def word_range(self, word) -> BFElement | None:
        if not word:
            return None
        return self.relative_range(self.letter_range(word[0]), word[1:])

    def delta(self, B: BFElement, b_bound: int | None = None) -> tuple:
        top = max(B.levels, default=0) + 1
        if b_bound is not None:
            top = max(top, b_bound)
        letters = [BLetter(i) for i in range(1, top + 1)] + [ALetter(j) for j in range(1, self.k + 1)]
        return tuple(a for a in letters if self.range1(B, a))

    # materialization
    def materialize(self, depth: int | None = None) -> dict:
        """Explicit vertices ``(v, i)`` and labelled edges up to ``depth``."""
        depth = self.depth if depth is None else depth
        L = self.base
        verts = []
        for i in range(depth + 1):
            verts += [(v, i) for v in L.vertices_of(self.X(i))]
        vset = set(verts)
        edges = []
        for (v, i) in verts:
            if (v, i + 1) in vset:
                edges.append(((v, i), (v, i + 1), BLetter(i + 1)))
        for e in L.graph.edges:
            a = L.labels[e.id]
            if (e.src, a.index) in vset:
                edges.append(((e.src, a.index), (e.dst, 0), a))
        return {"vertices": verts, "edges": edges, "depth": depth}

    def to_json(self, depth: int | None = None) -> dict:
        mat = self.materialize(depth)
        L = self.base

        def vname(p):
            return f"{p[0]}_{p[1]}"

        tail = sorted(vname((v, mat["depth"])) for v in L.vertices_of(self.tsink))
        return {
            "kind": "desingularized",
            "base": L.to_json(),
            "depth": mat["depth"],
            "alphabet_size": self.k,
            "tsink": L.vertices_of(self.tsink),
            "X": {str(i): L.vertices_of(self.X(i)) for i in range(self.k + 2)},
            "stable_from": self.stable_index,
            "vertices": [vname(p) for p in mat["vertices"]],
            "edges": [
                {"src": vname(s), "dst": vname(d), "label": str(a)} for s, d, a in mat["edges"]
            ],
            "symbolic_tail": tail,
        }


def build(L: LabelledSpace, depth: int = DEFAULT_DEPTH) -> DesingSpace:
    return DesingSpace(L, depth)


def desing_from_json(data: dict) -> DesingSpace:
    """Re-ingest an emitted file: rebuild from its base and cross-check."""
    try:
        base = space_from_json(data["base"])
        depth = int(data.get("depth", DEFAULT_DEPTH))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed desingularized-space JSON: {exc}") from None
    D = DesingSpace(base, depth)
    if "vertices" in data and D.to_json()["vertices"] != data["vertices"]:
        raise InvalidInputError("stored vertices disagree with the rebuilt space")
    if "edges" in data and D.to_json()["edges"] != data["edges"]:
        raise InvalidInputError("stored edges disagree with the rebuilt space")
    return D


def load_desing(path: str) -> DesingSpace:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("kind") == "desingularized":
        return desing_from_json(data)
    return DesingSpace(space_from_json(data), DEFAULT_DEPTH)


def bf_range(D: DesingSpace, B: BFElement, letter) -> BFElement:
    letter = parse_letter(letter) if isinstance(letter, str) else letter
    return D.range1(B, letter)


@dataclass
class RegularityReport:
    ok: bool
    checked: int
    violations: list = field(default_factory=list)
    bound: int = 0
    mode: str = "exhaustive"

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "violations": self.violations,
                "bound": self.bound, "mode": self.mode}


def _delta_bits(D: DesingSpace, mask: int, level: int, letters: list) -> int:
    B = BFElement.at(mask, level)
    return sum(1 << t for t, a in enumerate(letters) if D.range1(B, a))


def verify_all_regular(D: DesingSpace, bound: int = DEFAULT_DEPTH,
                       cap: int = REGULAR_ENUMERATION_CAP) -> RegularityReport:
    """``0 < |Δ_B| < ∞`` for every nonempty member with part indices ``≤ bound``.

    Δ is taken over ``b_1..b_{bound+1}`` and the a-letters, so it is finite
    by construction; the test is nonemptiness.  Ranges act part by part, so
    ``Δ_B`` is the union of the Δ-sets of the parts.  Each part's Δ is
    computed once; members are enumerated as combinations of parts, or
    counted per level when there are more than ``cap`` of them.
    """
    letters = [BLetter(i) for i in range(1, bound + 2)] + [ALetter(j) for j in range(1, D.k + 1)]
    per_level = []
    for i in range(bound + 1):
        per_level.append([(m, _delta_bits(D, m, i, letters)) for m in D.level_members(i)])
    total = 1
    for opts in per_level:
        total *= len(opts) + 1
    total -= 1
    if total > cap:
        # a combination has empty Δ iff every one of its parts does
        violations = [{"parts": {str(i): D.base.vertices_of(m)}}
                      for i, opts in enumerate(per_level) for m, d in opts if d == 0]
        return RegularityReport(not violations, total, violations, bound, "factorized")
    violations = []
    checked = 0
    choices = [[(None, 0)] + opts for opts in per_level]
    for combo in product(*choices):
        acc = 0
        nonempty = False
        for m, d in combo:
            if m is not None:
                nonempty = True
                acc |= d
        if not nonempty:
            continue
        checked += 1
        if acc == 0:
            violations.append({"parts": {str(i): D.base.vertices_of(m)
                                         for i, (m, _) in enumerate(combo) if m is not None}})
    return RegularityReport(not violations, checked, violations, bound, "exhaustive")


class DesingSemigroup(TripleSemigroup):
    """Triples over the desingularized space; sets are :class:`BFElement`."""

    kind = "desingularized"

    def __init__(self, D: DesingSpace):
        self.space = D

    def __repr__(self):
        return f"DesingSemigroup({self.space!r})"

    def _meet(self, A, B):
        return A & B

    def _empty(self, A):
        return not A

    def _range(self, A, word):
        return self.space.relative_range(A, word)

    def _set_key(self, A):
        return A.parts

    def _fmt_set(self, A):
        L = self.space.base
        return " ⊔ ".join("{" + ",".join(L.vertices_of(m)) + f"}}@{i}" for i, m in A.parts) or "∅"

    def element(self, alpha, A: BFElement, beta):
        D = self.space
        alpha = tuple(parse_letter(a) if isinstance(a, str) else a for a in alpha)
        beta = tuple(parse_letter(a) if isinstance(a, str) else a for a in beta)
        if not A:
            return ZERO
        if not D.in_family(A):
            raise InvalidInputError(f"{self._fmt_set(A)} is not in the desingularized family")
        for w in (alpha, beta):
            r = D.word_range(w)
            if r is not None and not A.is_subset(r):
                raise InvalidInputError(f"{self._fmt_set(A)} is not inside r({''.join(map(str, w))})")
        return (alpha, A, beta)

    def labelled_paths(self, radius: int, b_bound: int) -> list:
        D = self.space
        letters = [BLetter(i) for i in range(1, b_bound + 1)] + [ALetter(j) for j in range(1, D.k + 1)]
        out = [()]
        layer = [((), None)]
        for _ in range(radius):
            nxt = []
            for w, r in layer:
                for a in letters:
                    rr = D.letter_range(a) if r is None else D.range1(r, a)
                    if rr:
                        nxt.append((w + (a,), rr))
            out += [w for w, _ in nxt]
            layer = nxt
        return out

    def single_level_members(self, r: BFElement | None, max_level: int) -> list:
        D = self.space
        out = []
        for i in range(max_level + 1):
            within = None if r is None else r.part(i)
            if within == 0:
                continue
            out += [BFElement.at(m, i) for m in D.level_members(i, within)]
        return out

    def ball(self, radius=2, b_bound: int | None = None) -> list:
        """Triples with words of length ``≤ radius`` over ``b_1..b_{b_bound}``
        and single-level sets."""
        D = self.space
        N = D.depth if b_bound is None else b_bound
        words = self.labelled_paths(radius, N)
        ranges = {w: D.word_range(w) for w in words}
        out = []
        for alpha, beta in product(words, repeat=2):
            ra, rb = ranges[alpha], ranges[beta]
            if ra is None:
                r = rb
            elif rb is None:
                r = ra
            else:
                r = ra & rb
                if not r:
                    continue
            for A in self.single_level_members(r, N):
                out.append((alpha, A, beta))
        return sorted(out, key=self.sort_key)

    def desing_grading(self, b_bound: int | None = None):
        D = self.space
        N = D.depth if b_bound is None else b_bound
        return self.grading([BLetter(i) for i in range(1, N + 1)] + list(D.base.alphabet))


def embed(D: DesingSpace, x):
    """``(alpha, A, beta) -> (h(alpha), A ∩ X_0, h(beta))``."""
    if x == ZERO:
        return ZERO
    alpha, A, beta = x
    return (h_letters(alpha), BFElement.at(A & D.X(0), 0), h_letters(beta))


def _strip_h(word) -> tuple | None:
    """Invert ``h`` on a positive word, or None when it is not an image."""
    out = []
    i = 0
    while i < len(word):
        n = 0
        while i < len(word) and word[i].kind == "b" and word[i].index == n + 1:
            n += 1
            i += 1
        if i == len(word) or word[i] != ALetter(n) or n == 0:
            return None
        out.append(word[i])
        i += 1
    return tuple(out)


def membership_in_S1(D: DesingSpace, y) -> tuple:
    """Decide whether ``y`` lies in the image of :func:`embed`.

    Returns ``(True, preimage)`` or ``(False, reason)``.
    """
    if y == ZERO:
        return True, ZERO
    alpha, A, beta = y
    if A.levels != (0,):
        return False, "set is not in 𝓑(X_0)"
    for w in (alpha, beta):
        if w and w[0] != BLetter(1):
            return False, f"word {''.join(map(str, w))} starts with {w[0]}"
    a, b = _strip_h(alpha), _strip_h(beta)
    if a is None or b is None:
        return False, "word is not an image of h"
    pre = (a, A.part(0), b)
    S1 = LabelledSemigroup(D.base)
    if not S1.contains(pre):
        return False, "preimage is not a valid triple"
    return True, pre


def lift_above(D: DesingSpace, s):
    """Strip trailing ``b``-letters until the element lies in ``S_1``.

    Each step replaces ``(alpha' b_n, A, beta' b_n)`` by ``(alpha', A', beta')``
    with ``A'`` the least member of ``𝓑(X_{n-1})`` whose ``b_n``-range
    contains ``A``.  Returns the final element (an ``S_2`` element that
    dominates ``s`` and lies in ``S_1``) or None when the hypotheses fail.
    """
    if s == ZERO:
        return ZERO
    alpha, A, beta = s
    for w in (alpha, beta):
        if w and w[0] != BLetter(1):
            return None
    if (not alpha or not beta) and A.levels != (0,):
        return None
    base_blocks = D.base.family.block_masks
    while alpha and alpha[-1].kind == "b":
        n = alpha[-1].index
        if not beta or beta[-1] != alpha[-1] or A.levels != (n,):
            return None
        need = A.part(n)
        xn, xp = D.X(n), D.X(n - 1)
        lifted = 0
        for b in base_blocks:
            if b & xn & need:
                lifted |= b & xp
        if (lifted & xn) & need != need:
            return None
        alpha, beta, A = alpha[:-1], beta[:-1], BFElement.at(lifted, n - 1)
    out = (alpha, A, beta)
    ok, _ = membership_in_S1(D, out)
    return out if ok else None


@dataclass
class ConditionsReport:
    clauses: list
    bounds: dict

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.clauses)

    def __bool__(self):
        return self.ok

    def clause(self, name: str) -> dict:
        for c in self.clauses:
            if c["name"] == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"ok": self.ok, "clauses": self.clauses, "bounds": self.bounds}


def truncated_E1(D: DesingSpace, radius: int) -> list:
    S1 = LabelledSemigroup(D.base)
    words = D.base.labelled_paths(radius)
    out = []
    for w in words:
        for m in S1.members_below(D.base.word_range(w)):
            out.append(embed(D, (w, m, w)))
    return out


def truncated_E2(D: DesingSpace, radius: int, index_bound: int) -> list:
    """Idempotents on words ``h(alpha)`` (``|alpha| ≤ radius``) and
    ``h(alpha') b_1..b_n`` (``|alpha'| < radius``, ``n ≤ index_bound``)."""
    S2 = DesingSemigroup(D)
    out = []
    for w in D.base.labelled_paths(radius):
        hw = h_letters(w)
        r = D.word_range(hw)
        for A in S2.single_level_members(r, index_bound):
            out.append((hw, A, hw))
        if len(w) < radius:
            ext = hw
            for n in range(1, index_bound + 1):
                ext = ext + (BLetter(n),)
                r = D.word_range(ext)
                if not r:
                    break
                for A in S2.single_level_members(r, index_bound):
                    out.append((ext, A, ext))
    return out


def _fmt(S, x):
    return S.format(x)


def verify_conditions(D: DesingSpace, radius: int = 2, index_bound: int = 4,
                      tower: DesingSpace | None = None) -> ConditionsReport:
    """The four sufficient conditions for the inclusion ``S_1 ⊆ S_2``.

    (1) cover preservation and (2) tightness of ``E_1 ⊆ E_2`` on truncated
    idempotent semilattices; (3) ``x s y`` lies below an element of ``S_1``
    for ``x, y ∈ E_1`` and ``s`` in the ``S_2`` ball, found by
    :func:`lift_above`; (4) for every ``A ∈ 𝓑(X_n)``, ``n ≤ index_bound``,
    with ``u = b_1..b_n``: ``s_u^* p_{A'} s_u = p_{A@n}`` where ``A'`` is the
    least ambient lift of ``A``.  ``tower`` supplies the level generators for
    (4); it defaults to ``D`` and differs only for corrupted copies.
    """
    S2 = DesingSemigroup(D)
    tower = tower or D
    bounds = {"radius": radius, "index_bound": index_bound}
    clauses = []
    if radius < 1 or index_bound < 1:
        raise InvalidInputError("bounds must be positive")

    E1 = truncated_E1(D, radius)
    E2 = truncated_E2(D, radius, index_bound)
    sizes = dict(bounds, E1=len(E1), E2=len(E2))
    try:
        P2 = Semilattice([ZERO] + E2, S2.multiply, ZERO, sort_key=S2.sort_key)
        P1 = P2.restrict(E1)
    except InvalidInputError as exc:
        # happens only when the range data is inconsistent (corrupted copies)
        msg = f"truncated idempotents are not a subsemilattice: {exc}"
        clauses.append({"name": "cover-preserving", "passed": False, "witness": msg, "bound": sizes})
        clauses.append({"name": "tight", "passed": False, "witness": msg, "bound": sizes})
    else:
        cov = check_cover_preserving(P1, P2)
        clauses.append({
            "name": "cover-preserving", "passed": bool(cov), "bound": sizes,
            "witness": None if cov else {
                "x": _fmt(S2, cov.witness[0]), "cover": [_fmt(S2, c) for c in cov.witness[1]],
                "y": _fmt(S2, cov.witness[2]),
            },
        })
        if cov:
            tight = check_tight_inclusion(P1, P2)
            witness = None
            if not tight:
                witness = {"image_block": [_fmt(S2, p) for p in tight.witness[0]],
                           "smaller": [_fmt(S2, p) for p in tight.witness[1]]}
            clauses.append({"name": "tight", "passed": bool(tight), "witness": witness, "bound": sizes})
        else:
            clauses.append({"name": "tight", "passed": False, "witness": "covers not preserved",
                            "bound": sizes})

    ball = S2.ball(radius, index_bound)
    sandwich_fail = None
    checked = 0
    for x in E1:
        for s in ball:
            xs = S2.multiply(x, s)
            if xs == ZERO:
                continue
            for y in E1:
                t = S2.multiply(xs, y)
                if t == ZERO:
                    continue
                checked += 1
                up = lift_above(D, t)
                if up is None or not natural_leq(S2, t, up):
                    sandwich_fail = {"x": _fmt(S2, x), "s": _fmt(S2, s), "y": _fmt(S2, y),
                                     "xsy": _fmt(S2, t)}
                    break
            if sandwich_fail:
                break
        if sandwich_fail:
            break
    clauses.append({"name": "sandwich", "passed": sandwich_fail is None, "witness": sandwich_fail,
                    "bound": dict(bounds, ball=len(ball), checked=checked)})

    full_fail = None
    generators = 0
    for n in range(1, index_bound + 1):
        u = tuple(BLetter(i) for i in range(1, n + 1))
        ru = D.word_range(u)
        if not ru:
            ru = EMPTY
        for m in tower.level_members(n):
            generators += 1
            lift = tower.lift_mask(m, n)
            target = (((), BFElement.at(m, n), ()))
            left = ((), ru, u) if ru else ZERO
            right = (u, ru, ()) if ru else ZERO
            got = S2.multiply(S2.multiply(left, ((), BFElement.at(lift & D.X(0), 0), ())), right)
            if got != target:
                full_fail = {"level": n, "set": D.base.vertices_of(m), "word": "".join(map(str, u)),
                             "got": _fmt(S2, got), "expected": _fmt(S2, target)}
                break
        if full_fail:
            break
    clauses.append({"name": "fullness", "passed": full_fail is None, "witness": full_fail,
                    "bound": dict(bounds, generators=generators)})
    return ConditionsReport(clauses, bounds)


def corrupted_copy(D: DesingSpace, level: int = 1) -> DesingSpace:
    return D.with_dropped_level(level)


def verify_corrupted(D: DesingSpace, level: int = 1, radius: int = 2, index_bound: int = 4) -> ConditionsReport:
    """Negative control: ranges ignore ``X_level``; fullness must fail."""
    return verify_conditions(D.with_dropped_level(level), radius, index_bound, tower=D)


def materialized_range(D: DesingSpace, sources: Iterable, letter: Letter, depth: int | None = None) -> set:
    """Edge-walk range over the materialized vertices ``(v, i)``."""
    mat = D.materialize(depth)
    src = set(sources)
    return {d for s, d, a in mat["edges"] if s in src and a == letter}
