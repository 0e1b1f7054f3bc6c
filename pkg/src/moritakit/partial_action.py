"""Partial group actions on finite generalized Boolean algebras.

An isomorphism between ideals of a finite Gba is determined by where it
sends blocks, so ``phi[g]`` is a block map from the blocks of
``I_{g^-1}`` to masks of the base.  The ideal ``I_g`` is stored by its top
element.  Group elements missing from the support carry the zero ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from ._check import Check
from .errors import InvalidInputError, PreconditionError
from .gba import Gba, GbaElement, is_cover, is_ideal
from .groups import FreeGroup, group_from_json

DEFAULT_WORD_BOUND = 4


@dataclass
class AxiomReport:
    ok: bool
    failures: list = field(default_factory=list)
    bound: Any = None
    checked_pairs: int = 0

    def __bool__(self):
        return self.ok

    def to_json(self, fmt=str) -> dict:
        return {
            "ok": self.ok,
            "bound": self.bound,
            "checked_pairs": self.checked_pairs,
            "failures": [
                {"axiom": a, "s": fmt(s), "t": fmt(t) if t is not None else None, "x": str(x)}
                for a, s, t, x in self.failures
            ],
        }


class PartialAction:
    """``({I_g}, {phi_g})`` for a group handle acting on ``base``.

    ``ideals`` maps group elements to top masks; ``maps`` maps each group
    element ``g`` to a dict ``{block of I_{g^-1}: image mask}``.  Problems
    that stop some ``phi_g`` from being an isomorphism are collected in
    ``iso_failures`` and surfaced by :func:`validate_axioms`.
    """

    def __init__(self, group, base: Gba, ideals: Mapping, maps: Mapping, bound=DEFAULT_WORD_BOUND):
        self.group = group
        self.base = base
        self.bound = bound
        e = group.identity
        self.ideals = {g: m for g, m in ideals.items() if m}
        self.ideals[e] = base.top_mask
        self.maps = {g: dict(mp) for g, mp in maps.items() if g in self.ideals}
        self.maps[e] = {b: b for b in base.block_masks}
        for g in list(self.ideals):
            if g not in self.maps:
                self.maps[g] = {}
        self.iso_failures = []
        for g in self.support:
            if not group.within(g, bound):
                raise InvalidInputError(f"{group.format(g)} lies outside the word bound {bound}")
            self._check_iso(g)

    @classmethod
    def trivial(cls, group, base: Gba, bound=DEFAULT_WORD_BOUND) -> "PartialAction":
        return cls(group, base, {}, {}, bound)

    @classmethod
    def from_generators(cls, group: FreeGroup, base: Gba, gen_maps: Mapping, bound=DEFAULT_WORD_BOUND):
        """Extend block bijections on free generators to all reduced words.

        ``gen_maps[x]`` sends blocks of the domain of ``x`` to blocks of its
        range.  A reduced word acts by composing its letters right to left,
        which is the unique semi-saturated partial action with these
        generators.
        """
        letter_maps = {}
        problems = []
        for x, mp in gen_maps.items():
            w = _word_of(x)
            if len(w) != 1:
                raise InvalidInputError(f"{w} is not a generator")
            letter, sign = w.letters[0]
            seen = 0
            for b, v in sorted(mp.items()):
                if v & seen or v not in base.block_masks:
                    kind = "iso:not-injective" if v & seen else "iso:not-atom-preserving"
                    problems.append((kind, w, None, base.element(b)))
                seen |= v
            inv = {}
            for b, v in sorted(mp.items()):
                inv.setdefault(v, b)
            if sign == -1:
                mp, inv = inv, mp
            letter_maps[(letter, 1)] = dict(mp)
            letter_maps[(letter, -1)] = inv
        ideals, maps = {}, {}
        for w in group.elements(bound):
            if not w.letters:
                continue
            mp = None
            for letter in reversed(w.letters):
                step = letter_maps.get(letter)
                if step is None:
                    mp = {}
                    break
                if mp is None:
                    mp = dict(step)
                else:
                    mp = {b: step[c] for b, c in mp.items() if c in step}
            if mp:
                maps[w] = mp
                top = 0
                for v in mp.values():
                    top |= v
                ideals[w] = top
        act = cls(group, base, ideals, maps, bound)
        act.iso_failures[:0] = problems
        return act

    def __repr__(self):
        return f"PartialAction(support={len(self.ideals)}, bound={self.bound})"

    @property
    def support(self) -> list:
        return sorted(self.ideals, key=_sort_key)

    def ideal(self, g) -> int:
        return self.ideals.get(g, 0)

    def ideal_gba(self, g) -> Gba:
        return self.base.ideal_below(self.ideal(g))

    def phi(self, g, x) -> int:
        """Apply ``phi_g`` to a member ``x`` (mask or element) of ``I_{g^-1}``."""
        mask = x.mask if isinstance(x, GbaElement) else x
        ginv = self.group.inv(g)
        if mask & ~self.ideal(ginv):
            raise InvalidInputError(
                f"{self.base.element(mask)!r} is not in the domain of phi_{self.group.format(g)}"
            )
        mp = self.maps.get(g, {})
        out = 0
        for b in self.base.blocks_in(mask):
            out |= mp.get(b, 0)
        return out

    def phi_element(self, g, x) -> GbaElement:
        return self.base.element(self.phi(g, x))

    def _check_iso(self, g):
        ginv = self.group.inv(g)
        dom = self.ideal(ginv)
        rng = self.ideal(g)
        mp = self.maps.get(g, {})
        seen = 0
        for b in self.base.blocks_in(dom):
            if b not in mp:
                self.iso_failures.append(("iso:not-total", g, None, self.base.element(b)))
                continue
            img = mp[b]
            if img not in self.base.block_masks:
                self.iso_failures.append(("iso:not-atom-preserving", g, None, self.base.element(b)))
            elif img & ~rng:
                self.iso_failures.append(("iso:outside-range", g, None, self.base.element(b)))
            elif img & seen:
                self.iso_failures.append(("iso:not-injective", g, None, self.base.element(b)))
            seen |= img
        for b in mp:
            if b & ~dom:
                self.iso_failures.append(("iso:outside-domain", g, None, self.base.element(b)))
        if rng & ~seen:
            missing = min(c for c in self.base.blocks_in(rng) if c & ~seen)
            self.iso_failures.append(("iso:not-surjective", g, None, self.base.element(missing)))

    def restrict_to(self, top: int) -> "PartialAction":
        """Restriction to the ideal below ``top`` (assumed invariant)."""
        ideals, maps = {}, {}
        for g in self.support:
            ideals[g] = self.ideal(g) & top
            maps[g] = {b: v for b, v in self.maps[g].items() if b & top == b and v & top == v}
        base = self.base.ideal_below(top)
        return PartialAction(self.group, base, ideals, maps, self.bound)


def _word_of(x):
    from .groups import GroupWord, parse_word

    if isinstance(x, GroupWord):
        return x
    return parse_word(str(x))


def _sort_key(g):
    if hasattr(g, "letters"):
        return (len(g.letters), g.letters)
    return (0, g)


def validate_axioms(a: PartialAction) -> AxiomReport:
    """Check the identity, intertwining and composition axioms.

    Pairs ``(s, t)`` range over the stored support with ``st`` inside the
    word bound.  Each failure is ``(axiom, s, t, x)``.
    """
    G = a.group
    base = a.base
    failures = list(a.iso_failures)
    e = G.identity
    if a.ideal(e) != base.top_mask or any(a.maps[e].get(b) != b for b in base.block_masks):
        failures.append(("identity", e, None, base.top))
    pairs = 0
    supp = a.support
    for s in supp:
        sinv = G.inv(s)
        for t in supp:
            st = G.mul(s, t)
            if not G.within(st, a.bound):
                continue
            pairs += 1
            inter = a.ideal(sinv) & a.ideal(t)
            lhs = 0
            for b in base.blocks_in(inter):
                lhs |= a.maps[s].get(b, 0)
            rhs = a.ideal(s) & a.ideal(st)
            if lhs != rhs:
                diff = lhs ^ rhs
                x = min(c for c in base.block_masks if c & diff)
                failures.append(("intertwining", s, t, base.element(x)))
            tinv = G.inv(t)
            dom = a.ideal(tinv) & a.ideal(G.inv(st))
            for b in base.blocks_in(dom):
                mid = a.maps[t].get(b, 0)
                if mid & ~a.ideal(sinv):
                    failures.append(("composition", s, t, base.element(b)))
                    continue
                left = 0
                for c in base.blocks_in(mid):
                    left |= a.maps[s].get(c, 0)
                if left != a.maps.get(st, {}).get(b, 0):
                    failures.append(("composition", s, t, base.element(b)))
    return AxiomReport(not failures, failures, a.bound, pairs)


class SubactionMap:
    """An injective Gba morphism ``f`` from ``source.base`` into ``target.base``
    intertwining the two actions.

    ``f`` is given on blocks of the source; images are masks in the target.
    """

    def __init__(self, source: PartialAction, target: PartialAction, f: Mapping[int, int]):
        self.source = source
        self.target = target
        self.f = dict(f)
        self.problems = []
        seen = 0
        for b in source.base.block_masks:
            img = self.f.get(b, 0)
            if not img:
                self.problems.append(("not-injective", None, source.base.element(b)))
            elif img & seen:
                self.problems.append(("not-injective", None, source.base.element(b)))
            elif not target.base.contains_mask(img):
                self.problems.append(("image-outside-target", None, source.base.element(b)))
            seen |= img
        G = target.group
        for g in source.support:
            if self.apply(source.ideal(g)) & ~target.ideal(g):
                self.problems.append(("ideal-not-preserved", g, source.base.top))
            for b in source.base.blocks_in(source.ideal(G.inv(g))):
                lhs = self.apply(source.maps[g].get(b, 0))
                fb = self.apply(b)
                if fb & ~target.ideal(G.inv(g)):
                    self.problems.append(("not-commuting", g, source.base.element(b)))
                    continue
                if lhs != target.phi(g, fb):
                    self.problems.append(("not-commuting", g, source.base.element(b)))

    @property
    def valid(self) -> bool:
        return not self.problems

    def apply(self, mask: int) -> int:
        out = 0
        for b in self.source.base.blocks_in(mask):
            out |= self.f.get(b, 0)
        return out

    def image_gba(self) -> Gba:
        return Gba.from_masks(self.target.base.universe, (self.f[b] for b in self.source.base.block_masks if b in self.f))

    def image_of_ideal(self, g) -> int:
        return self.apply(self.source.ideal(g))

    @classmethod
    def inclusion(cls, b1: Gba, action2: PartialAction) -> "SubactionMap":
        """The largest subaction of ``action2`` living on the subalgebra ``b1``.

        A block ``c`` of ``b1`` stays in the domain of ``phi_g`` when it lies
        in ``I_{2,g^-1}`` and its image is again a block of ``b1``.
        """
        if not b1.is_subalgebra_of(action2.base):
            raise InvalidInputError("b1 is not a subalgebra of the acting algebra")
        G = action2.group
        blocks1 = set(b1.block_masks)
        ideals, maps = {}, {}
        for g in action2.support:
            dom2 = action2.ideal(G.inv(g))
            mp = {}
            for c in b1.block_masks:
                if c & ~dom2:
                    continue
                img = action2.phi(g, c)
                if img in blocks1:
                    mp[c] = img
            if mp:
                maps[g] = mp
                top = 0
                for v in mp.values():
                    top |= v
                ideals[g] = top
        source = PartialAction(G, b1, ideals, maps, action2.bound)
        return cls(source, action2, {c: c for c in b1.block_masks})


def _require_valid(s: SubactionMap):
    if not s.valid:
        raise PreconditionError(f"not a partial subaction: {s.problems[0]!r}")


def check_ideal_condition(s: SubactionMap) -> Check:
    """The image of the source algebra is an ideal of the target algebra."""
    return is_ideal(s.image_gba(), s.target.base)


def _verify_cover(family, target: Gba, what: str):
    for m in family:
        if not target.contains_mask(m):
            raise PreconditionError(f"{what}: {target.element(m)!r} is not a member")
    res = is_cover([target.element(m) for m in family], target)
    if not res:
        raise PreconditionError(f"{what} is not a cover; {res.witness!r} is missed")


def check_cover_condition(s: SubactionMap, C1: Iterable | None = None, Cg: Mapping | None = None) -> Check:
    """For supported ``g``, ``X, Y ∈ C1`` and ``V ∈ C_{g^-1}`` the element
    ``X ∩ phi_{2,g}(Y ∩ V)`` lies below some member of ``I_{1,g}``.

    ``C1`` is a cover of the source algebra (default: its blocks), ``Cg``
    maps group elements to covers of the target ideals (default: blocks).
    Covers are given as masks of the respective algebras.  The witness is
    ``(g, X, Y, V)`` with sets reported in the target algebra.
    """
    _require_valid(s)
    src, tgt = s.source, s.target
    G = tgt.group
    C1 = list(C1) if C1 is not None else list(src.base.block_masks)
    _verify_cover(C1, src.base, "C1")
    fC1 = [s.apply(x) for x in C1]
    for g in tgt.support:
        ginv = G.inv(g)
        dom = tgt.ideal(ginv)
        if Cg is not None and ginv in Cg:
            cover = list(Cg[ginv])
            _verify_cover(cover, tgt.base.ideal_below(dom), f"cover of I_{G.format(ginv)}")
        else:
            cover = tgt.base.blocks_in(dom)
        allowed = s.image_of_ideal(g) if g in src.ideals else 0
        for Y in fC1:
            for V in cover:
                moved = tgt.phi(g, Y & V)
                if not moved:
                    continue
                for X in fC1:
                    w = X & moved
                    if w & ~allowed:
                        el = tgt.base.element
                        return Check(False, (G.format(g), el(X), el(Y), el(V)))
    return Check(True)


def _orbit_closure(action: PartialAction, start: int) -> int:
    base = action.base
    G = action.group
    reached = 0
    frontier = list(base.blocks_in(start))
    while frontier:
        b = frontier.pop()
        if b & reached:
            continue
        reached |= b
        for g in action.support:
            if b & ~action.ideal(G.inv(g)):
                continue
            img = action.maps[g].get(b, 0)
            for c in base.blocks_in(img):
                if not c & reached:
                    frontier.append(c)
    return reached


def intermediate_closure(s: SubactionMap):
    """Smallest ideal of the target containing the image and stable under
    every ``phi_{2,g}``, together with the restricted action on it.

    Computed as the orbit closure of the image blocks, iterated until no
    new block appears.
    """
    _require_valid(s)
    ideal = check_ideal_condition(s)
    if not ideal:
        raise PreconditionError(f"ideal condition fails: {ideal.witness!r}")
    top = _orbit_closure(s.target, s.apply(s.source.base.top_mask))
    closure = s.target.base.ideal_below(top)
    return closure, s.target.restrict_to(top)


@dataclass
class FullnessResult:
    full: bool
    closure: Gba
    bound: Any = None

    def __bool__(self):
        return self.full

    @property
    def witness(self):
        """The proper intermediate algebra, a candidate proper two-sided ideal."""
        return None if self.full else self.closure


def check_fullness_via_closure(s: SubactionMap) -> FullnessResult:
    closure, _ = intermediate_closure(s)
    return FullnessResult(closure.top_mask == s.target.base.top_mask, closure, s.target.bound)


def _parse_group_key(group, key: str):
    return group.parse(key)


def _atoms_mentioned(data: dict) -> list:
    """Atom names used by ``ideals`` and ``phi`` when no universe is given."""
    seen = set()

    def visit(x):
        if isinstance(x, list):
            for y in x:
                visit(y)
        else:
            seen.add(str(x))

    for v in data.get("ideals", {}).values():
        visit(v)
    for mp in data.get("phi", {}).values():
        for src, dst in (mp.items() if isinstance(mp, dict) else mp):
            visit(src)
            visit(dst)
    return sorted(seen, key=lambda a: (len(a), a))


def action_from_json(data: dict, max_atoms=None) -> PartialAction:
    """Ingest ``{"group", "base", "ideals", "phi", "bound"}``.

    Without ``base`` or ``universe`` the algebra is the powerset of the
    atoms mentioned in ``ideals`` and ``phi``.

    ``phi`` maps a group element to an atom map ``{"1": "2"}`` (for bases
    whose blocks are single atoms) or to a list of ``[src, dst]`` atom-list
    pairs.  For free groups only generators (or their inverses) need to be
    given; longer words are generated by composition.
    """
    from .gba import gba_from_json, powerset

    try:
        group = group_from_json(data["group"])
        if "base" in data:
            base = gba_from_json(data["base"])
        elif "universe" in data:
            base = powerset(data["universe"])
        else:
            base = powerset(_atoms_mentioned(data))
        bound = int(data.get("bound", DEFAULT_WORD_BOUND))
        raw_phi = data.get("phi", {})
        raw_ideals = data.get("ideals", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed action JSON: {exc}") from None
    U = base.universe
    by_name = {str(a): a for a in U.atoms}

    def atom(name):
        if name not in by_name:
            raise InvalidInputError(f"atom {name!r} is not in the universe")
        return by_name[name]

    def to_map(mp) -> dict:
        out = {}
        items = mp.items() if isinstance(mp, dict) else mp
        for src, dst in items:
            src = [src] if not isinstance(src, list) else src
            dst = [dst] if not isinstance(dst, list) else dst
            out[U.mask_of(atom(str(x)) for x in src)] = U.mask_of(atom(str(x)) for x in dst)
        return out

    maps = {_parse_group_key(group, k): to_map(v) for k, v in raw_phi.items()}
    ideals = {}
    for k, v in raw_ideals.items():
        ideals[_parse_group_key(group, k)] = U.mask_of(atom(str(x)) for x in v)
    if isinstance(group, FreeGroup):
        act = PartialAction.from_generators(group, base, maps, bound)
        for g, top in ideals.items():
            if act.ideal(g) != top:
                act.iso_failures.append(("declared-ideal-mismatch", g, None, base.element(top)))
        return act
    for g, mp in list(maps.items()):
        gi = group.inv(g)
        if gi not in maps:
            maps[gi] = {v: k for k, v in mp.items()}
    for g, mp in maps.items():
        if g not in ideals:
            top = 0
            for v in mp.values():
                top |= v
            ideals[g] = top
    return PartialAction(group, base, ideals, maps, bound)


__all__ = [
    "AxiomReport",
    "FullnessResult",
    "PartialAction",
    "SubactionMap",
    "action_from_json",
    "check_cover_condition",
    "check_fullness_via_closure",
    "check_ideal_condition",
    "intermediate_closure",
    "validate_axioms",
]
