"""Symbolic arithmetic in the partial skew group ring of a finite partial action.

An element is a finite sum of terms ``r * U d[g]``.  Internally each
component ``g`` is a step function on the blocks of the base algebra,
``{block: coefficient}`` with no zero entries; this is the coarsest common
refinement, so equality is dictionary equality.  :meth:`SkewElement.terms`
merges cells of equal coefficient back into disjoint supports.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import CapacityError, ClosureViolationError, InvalidInputError
from .gba import GbaElement
from .partial_action import PartialAction


class IntegerRing:
    name = "ZZ"
    zero, one = 0, 1

    def coerce(self, x):
        if isinstance(x, bool) or not isinstance(x, int):
            if isinstance(x, Fraction) and x.denominator == 1:
                return int(x)
            raise InvalidInputError(f"{x!r} is not an integer")
        return x

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def parse(self, text: str):
        return int(text)

    def __eq__(self, other):
        return type(other) is type(self)

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class ModularRing(IntegerRing):
    def __init__(self, n: int):
        if n < 2:
            raise InvalidInputError("modulus must be at least 2")
        self.n = n
        self.name = f"ZZ/{n}"

    def coerce(self, x):
        return super().coerce(x) % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def parse(self, text: str):
        return int(text) % self.n

    def __eq__(self, other):
        return isinstance(other, ModularRing) and other.n == self.n

    def __hash__(self):
        return hash(self.name)


class RationalRing(IntegerRing):
    name = "QQ"
    zero, one = Fraction(0), Fraction(1)

    def coerce(self, x):
        if isinstance(x, bool):
            raise InvalidInputError(f"{x!r} is not a rational")
        return Fraction(x)

    def parse(self, text: str):
        return Fraction(text)


ZZ = IntegerRing()
QQ = RationalRing()


class SkewRing:
    """The R-algebra spanned by ``U d[g]`` with ``U`` in ``I_g``."""

    def __init__(self, action: PartialAction, ring=ZZ):
        self.action = action
        self.ring = ring
        self.base = action.base
        self.group = action.group

    def __repr__(self):
        return f"SkewRing({self.ring!r}, {self.action!r})"

    def _mask(self, U) -> int:
        if isinstance(U, GbaElement):
            return U.mask
        if isinstance(U, int):
            return U
        return self.base.universe.mask_of(U)

    @property
    def zero(self) -> "SkewElement":
        return SkewElement(self, {})

    def generator(self, U, g=None, coef=1) -> "SkewElement":
        """``coef * U d[g]``; ``U`` must be a member of ``I_g``."""
        if g is None:
            g = self.group.identity
        mask = self._mask(U)
        if not self.base.contains_mask(mask):
            raise InvalidInputError(f"{self.base.element(mask)!r} is not in the base algebra")
        if mask & ~self.action.ideal(g):
            raise InvalidInputError(
                f"{self.base.element(mask)!r} is not in I_{self.group.format(g)}"
            )
        c = self.ring.coerce(coef)
        if c == self.ring.zero or not mask:
            return self.zero
        return SkewElement(self, {g: {b: c for b in self.base.blocks_in(mask)}})

    def unit(self, U) -> "LocalUnit":
        return LocalUnit(self, self._mask(U))

    def parse(self, text: str) -> "SkewElement":
        """Parse ``"2*{1,2}d[e] + 1*{2,3}d[t] - {3}d[t^-1]"``."""
        names = {str(a): a for a in self.base.universe.atoms}
        src = text.strip()
        if src in ("", "0"):
            return self.zero
        term = re.compile(
            r"\s*([+-])?\s*(?:([0-9/]+)\s*\*\s*)?\{([^}]*)\}\s*d\[([^\]]*)\]\s*"
        )
        pos = 0
        out = self.zero
        first = True
        while pos < len(src):
            m = term.match(src, pos)
            if not m or (not first and m.group(1) is None):
                raise InvalidInputError(f"cannot parse skew element at position {pos}: {src[pos:]!r}")
            sign, coef, atoms, g = m.groups()
            coef = self.ring.parse(coef) if coef else self.ring.one
            if sign == "-":
                coef = self.ring.neg(coef)
            atom_names = [a.strip() for a in atoms.split(",") if a.strip()]
            for a in atom_names:
                if a not in names:
                    raise InvalidInputError(f"unknown atom {a!r}")
            U = [names[a] for a in atom_names]
            out = out + self.generator(U, self.group.parse(g), coef)
            pos = m.end()
            first = False
        return out


class SkewElement:
    __slots__ = ("ring", "components")

    def __init__(self, ring: SkewRing, components: dict):
        self.ring = ring
        zero = ring.ring.zero
        clean = {}
        for g, cells in components.items():
            cells = {b: c for b, c in cells.items() if c != zero}
            if cells:
                clean[g] = cells
        self.components = clean

    def _coerce(self, other) -> "SkewElement":
        if not isinstance(other, SkewElement):
            return NotImplemented
        if other.ring is not self.ring:
            raise InvalidInputError("elements belong to different skew rings")
        return other

    def __eq__(self, other):
        if not isinstance(other, SkewElement):
            return NotImplemented
        return self.ring is other.ring and self.components == other.components

    def __hash__(self):
        return hash(tuple(sorted((str(g), tuple(sorted(c.items()))) for g, c in self.components.items())))

    def __bool__(self):
        return bool(self.components)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        R = self.ring.ring
        comps = {g: dict(c) for g, c in self.components.items()}
        for g, cells in other.components.items():
            tgt = comps.setdefault(g, {})
            for b, c in cells.items():
                tgt[b] = R.add(tgt[b], c) if b in tgt else c
        return SkewElement(self.ring, comps)

    def __neg__(self):
        R = self.ring.ring
        return SkewElement(
            self.ring, {g: {b: R.neg(c) for b, c in cells.items()} for g, cells in self.components.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r) -> "SkewElement":
        R = self.ring.ring
        r = R.coerce(r)
        return SkewElement(
            self.ring, {g: {b: R.mul(r, c) for b, c in cells.items()} for g, cells in self.components.items()}
        )

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    def component(self, g) -> dict:
        return dict(self.components.get(g, {}))

    def support(self, g) -> int:
        m = 0
        for b in self.components.get(g, {}):
            m |= b
        return m

    def terms(self) -> list:
        """Normal form: ``[(g, U, coef)]`` with disjoint ``U`` per component,
        one term per distinct coefficient, sorted deterministically."""
        out = []
        for g in sorted(self.components, key=lambda g: (self.ring.group.length(g), str(g))):
            merged = {}
            for b in sorted(self.components[g]):
                c = self.components[g][b]
                merged[c] = merged.get(c, 0) | b
            for c, m in sorted(merged.items(), key=lambda kv: kv[1]):
                out.append((g, self.ring.base.element(m), c))
        return out

    def __repr__(self):
        if not self.components:
            return "0"
        fmt = self.ring.group.format
        return " + ".join(f"{c}*{U!r}d[{fmt(g)}]" for g, U, c in self.terms())


def add(x: SkewElement, y: SkewElement) -> SkewElement:
    return x + y


def negate(x: SkewElement) -> SkewElement:
    return -x


def multiply(x: SkewElement, y: SkewElement) -> SkewElement:
    """Bilinear extension of ``(U d[g])(V d[h]) = phi_g(phi_{g^-1}(U) ∩ V) d[gh]``.

    On blocks: a block ``b`` of ``U`` contributes at ``b`` exactly when
    ``phi_{g^-1}(b)`` is a block of ``V``.
    """
    S = x.ring
    if y.ring is not S:
        raise InvalidInputError("elements belong to different skew rings")
    act = S.action
    G = S.group
    R = S.ring
    out: dict = {}
    for g, fcells in x.components.items():
        back = act.maps.get(G.inv(g), {})
        for h, kcells in y.components.items():
            gh = None
            for b, fb in fcells.items():
                c = back.get(b)
                if c is None or c not in kcells:
                    continue
                if gh is None:
                    gh = G.mul(g, h)
                    if not G.within(gh, act.bound):
                        raise CapacityError(
                            f"product lands in degree {G.format(gh)} beyond the word bound {act.bound}",
                            bound=act.bound,
                        )
                if b & ~act.ideal(gh):
                    raise ClosureViolationError(
                        f"{S.base.element(b)!r} is not in I_{G.format(gh)}; the action is not a partial action"
                    )
                tgt = out.setdefault(gh, {})
                val = R.mul(fb, kcells[c])
                tgt[b] = R.add(tgt[b], val) if b in tgt else val
    return SkewElement(S, out)


@dataclass(frozen=True)
class LocalUnit:
    ring: SkewRing
    mask: int

    @property
    def U(self) -> GbaElement:
        return self.ring.base.element(self.mask)

    def element(self) -> SkewElement:
        return self.ring.generator(self.mask, self.ring.group.identity)

    def __repr__(self):
        return f"{self.U!r}d[e]"


def unit_join(e1: LocalUnit, e2: LocalUnit) -> LocalUnit:
    if e1.ring is not e2.ring:
        raise InvalidInputError("units belong to different skew rings")
    return LocalUnit(e1.ring, e1.mask | e2.mask)


def unit_join_identity(e1: LocalUnit, e2: LocalUnit) -> bool:
    """``e1 + e2 - e1 e2`` equals the join computed on supports."""
    a, b = e1.element(), e2.element()
    return a + b - a * b == unit_join(e1, e2).element()


def absorbing_unit(x: SkewElement) -> LocalUnit:
    """A unit ``U d[e]`` with ``(U d[e]) x = x = x (U d[e])``.

    ``U`` collects every component support together with its pull-back
    ``phi_{g^-1}(supp)``.
    """
    S = x.ring
    G = S.group
    m = 0
    for g, cells in x.components.items():
        back = S.action.maps.get(G.inv(g), {})
        for b in cells:
            m |= b | back.get(b, 0)
    return LocalUnit(S, m)


def generators_over(S: SkewRing, max_atoms: int | None = None) -> Iterable[SkewElement]:
    """All ``U d[g]`` with ``U`` a nonzero member of ``I_g`` (coefficient 1)."""
    from .gba import iter_submasks_of_blocks

    for g in S.action.support:
        blocks = S.base.blocks_in(S.action.ideal(g))
        for m in iter_submasks_of_blocks(blocks):
            if m and (max_atoms is None or bin(m).count("1") <= max_atoms):
                yield S.generator(m, g)
