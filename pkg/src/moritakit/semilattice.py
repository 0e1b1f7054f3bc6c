"""Finite meet-semilattices with zero, covers, tight filters and inclusions.

Elements are arbitrary hashables.  Internally each element gets an index and
the order is kept as bitsets (``down[i]`` = indices below ``i``) so that the
cover and tightness tests are cheap set arithmetic.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, Hashable, Iterable, Sequence

from ._check import Check
from .errors import CapacityError, InvalidInputError, PreconditionError
from .gba import Gba, Universe, is_ideal

DEFAULT_FILTER_BOUND = 20


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Semilattice:
    """A finite meet-semilattice with zero.

    ``meet`` is evaluated once per pair at construction; pass
    ``validate=True`` to check the semilattice laws exhaustively (cubic).
    """

    def __init__(self, elements: Sequence[Hashable], meet: Callable, zero: Hashable,
                 validate: bool = False, sort_key: Callable | None = None):
        elements = list(dict.fromkeys(elements))
        if zero not in elements:
            elements.insert(0, zero)
        if sort_key is not None:
            elements.sort(key=sort_key)
        self.elements = tuple(elements)
        self.zero = zero
        self.index = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        table = [[0] * n for _ in range(n)]
        for i, x in enumerate(self.elements):
            for j in range(i, n):
                m = meet(x, self.elements[j])
                if m not in self.index:
                    raise InvalidInputError(
                        f"meet of {x!r} and {self.elements[j]!r} is {m!r}, not an element"
                    )
                table[i][j] = table[j][i] = self.index[m]
        self._table = table
        z = self.index[zero]
        self._zero_index = z
        self.down = [0] * n
        for i in range(n):
            for j in range(n):
                if table[i][j] == j:
                    self.down[i] |= 1 << j
        self.up = [0] * n
        for i in range(n):
            for j in _bits(self.down[i]):
                self.up[j] |= 1 << i
        if validate:
            self._validate()

    @classmethod
    def from_table(cls, elements: Sequence[Hashable], table: Sequence[Sequence], zero=None,
                   validate: bool = True) -> "Semilattice":
        """Build from a meet table given as a matrix of element names."""
        elements = list(elements)
        if len(table) != len(elements) or any(len(r) != len(elements) for r in table):
            raise InvalidInputError("meet table must be square and match the element list")
        pos = {x: i for i, x in enumerate(elements)}
        if zero is None:
            zero = elements[0]
        if zero not in pos:
            raise InvalidInputError(f"zero {zero!r} is not an element")

        def meet(x, y):
            return table[pos[x]][pos[y]]

        return cls(elements, meet, zero, validate=validate)

    def _validate(self):
        n = len(self.elements)
        t = self._table
        z = self._zero_index
        for i in range(n):
            if t[i][i] != i:
                raise InvalidInputError(f"meet is not idempotent at {self.elements[i]!r}")
            if t[z][i] != z:
                raise InvalidInputError(f"zero does not absorb {self.elements[i]!r}")
        for i, j, k in product(range(n), repeat=3):
            if t[t[i][j]][k] != t[i][t[j][k]]:
                raise InvalidInputError("meet is not associative")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return f"Semilattice({len(self.elements)} elements)"

    def meet(self, x, y):
        return self.elements[self._table[self.index[x]][self.index[y]]]

    def leq(self, x, y) -> bool:
        return self._table[self.index[x]][self.index[y]] == self.index[x]

    def below(self, x) -> list:
        return [self.elements[j] for j in _bits(self.down[self.index[x]])]

    def above(self, x) -> list:
        return [self.elements[j] for j in _bits(self.up[self.index[x]])]

    @property
    def nonzero(self) -> list:
        return [x for x in self.elements if x != self.zero]

    def atoms(self) -> list:
        """Minimal nonzero elements."""
        z = 1 << self._zero_index
        return [
            x for i, x in enumerate(self.elements)
            if i != self._zero_index and self.down[i] == z | (1 << i)
        ]

    def _mask(self, xs: Iterable) -> int:
        m = 0
        for x in xs:
            m |= 1 << self.index[x]
        return m

    def _meets_some(self, i: int, cover_mask: int) -> bool:
        z = self._zero_index
        row = self._table[i]
        return any(row[j] != z for j in _bits(cover_mask))

    def _cover_witness(self, xi: int, cover_mask: int):
        """A minimal nonzero y ≤ x disjoint from every cover member, else None."""
        z = self._zero_index
        best = None
        for j in _bits(self.down[xi]):
            if j != z and not self._meets_some(j, cover_mask):
                if best is None or bin(self.down[j]).count("1") < bin(self.down[best]).count("1"):
                    best = j
        return best

    def is_cover_of(self, x, c: Iterable) -> Check:
        """``c`` covers ``x``: every nonzero ``y ≤ x`` meets some member of ``c``."""
        xi = self.index[x]
        c = list(c)
        for ci in c:
            if ci not in self.index:
                raise InvalidInputError(f"{ci!r} is not an element")
            if not self.leq(ci, x):
                raise InvalidInputError(f"{ci!r} is not below {x!r}")
        j = self._cover_witness(xi, self._mask(c))
        if j is None:
            return Check(True)
        return Check(False, self.elements[j])

    def principal_filter(self, p) -> frozenset:
        return frozenset(self.above(p))

    def is_tight_principal(self, p) -> bool:
        """Decide tightness of the filter above ``p`` (``p`` nonzero).

        For each ``x`` in the filter the largest candidate cover avoiding
        the filter is everything below ``x`` that is not above ``p``; the
        filter is tight iff none of these is a cover.
        """
        pi = self.index[p]
        up_p = self.up[pi]
        for xi in _bits(up_p):
            avoid = self.down[xi] & ~up_p
            if self._cover_witness(xi, avoid) is None:
                return False
        return True

    def tight_filters(self, bound: int | None = DEFAULT_FILTER_BOUND) -> list:
        """All tight filters, each as a frozenset of elements.

        In a finite semilattice every filter is principal, generated by its
        least element, so the enumeration runs over nonzero generators.
        """
        if bound is not None and len(self.elements) > bound:
            raise CapacityError(
                f"semilattice has {len(self.elements)} elements (bound {bound})", bound=bound
            )
        return [self.principal_filter(p) for p in self.nonzero if self.is_tight_principal(p)]

    def tight_generators(self, bound: int | None = None) -> list:
        """Least elements of the tight filters."""
        if bound is not None and len(self.elements) > bound:
            raise CapacityError(
                f"semilattice has {len(self.elements)} elements (bound {bound})", bound=bound
            )
        return [p for p in self.nonzero if self.is_tight_principal(p)]

    def restrict(self, subset: Iterable) -> "Semilattice":
        subset = list(dict.fromkeys(subset))
        if self.zero not in subset:
            subset.insert(0, self.zero)
        for x in subset:
            if x not in self.index:
                raise InvalidInputError(f"{x!r} is not an element")
        members = set(subset)
        for x, y in product(subset, repeat=2):
            if self.meet(x, y) not in members:
                raise InvalidInputError(
                    f"not a subsemilattice: {x!r} ∧ {y!r} = {self.meet(x, y)!r} is missing"
                )
        order = sorted(subset, key=self.index.__getitem__)
        return Semilattice(order, self.meet, self.zero)

    def is_downward_closed(self, subset: Iterable) -> Check:
        members = set(subset)
        for x in self.elements:
            if x not in members:
                continue
            for y in self.below(x):
                if y not in members:
                    return Check(False, (x, y))
        return Check(True)


class CompactOpens:
    """The algebra generated by the sets ``V_x`` over the tight-filter space.

    Tight filters are labelled by their least element, so the universe of
    the underlying :class:`Gba` is the list of those generators.
    """

    def __init__(self, P: Semilattice, bound: int | None = None):
        self.P = P
        self.points = tuple(P.tight_generators(bound))
        self.universe = Universe(self.points)
        self._v = {}
        for x in P.elements:
            self._v[x] = self.universe.mask_of(p for p in self.points if P.leq(p, x))
        self.gba = Gba.from_masks(self.universe, self._v.values())

    def V(self, x) -> int:
        """Mask of the tight filters containing ``x``."""
        return self._v[x]

    def element(self, x):
        return self.gba.element(self._v[x])

    def filter_of(self, point) -> frozenset:
        return self.P.principal_filter(point)


def _as_sub(P1, P2: Semilattice) -> Semilattice:
    if isinstance(P1, Semilattice):
        for x in P1.elements:
            if x not in P2:
                raise InvalidInputError(f"{x!r} is not in the ambient semilattice")
        for x, y in product(P1.elements, repeat=2):
            if P1.meet(x, y) != P2.meet(x, y):
                raise InvalidInputError(f"meets of {x!r} and {y!r} disagree")
        return P1
    return P2.restrict(P1)


def check_cover_preserving(P1, P2: Semilattice) -> Check:
    """Every finite cover in ``P1`` stays a cover in ``P2``.

    It fails exactly when for some ``x ∈ P1`` and nonzero ``y ≤ x`` in
    ``P2`` the ``P1``-elements below ``x`` that miss ``y`` still cover
    ``x`` in ``P1``.  The witness is ``(x, cover, y)``.
    """
    P1 = _as_sub(P1, P2)
    n1 = len(P1.elements)
    z1 = P1.index[P1.zero]
    nz1 = ((1 << n1) - 1) & ~(1 << z1)
    # meets1[j]: P1-indices whose meet with element j is nonzero
    meets1 = []
    for j in range(n1):
        row = P1._table[j]
        meets1.append(sum(1 << k for k in range(n1) if row[k] != z1))
    pos2 = [P2.index[x] for x in P1.elements]
    z2 = P2.index[P2.zero]
    for xi in range(n1):
        if xi == z1:
            continue
        below1 = P1.down[xi] & nz1
        lower = list(_bits(below1))
        xi2 = pos2[xi]
        for yj in _bits(P2.down[xi2]):
            if yj == z2:
                continue
            row = P2._table[yj]
            avoiding = 0
            for k in lower:
                if row[pos2[k]] == z2:
                    avoiding |= 1 << k
            if all(meets1[j] & avoiding for j in lower):
                cover = tuple(P1.elements[k] for k in _bits(avoiding))
                return Check(False, (P1.elements[xi], cover, P2.elements[yj]))
    return Check(True)


def inclusion_image(P1: Semilattice, opens2: CompactOpens) -> Gba:
    """The subalgebra of ``T_c(P2)`` generated by ``V_x`` for ``x ∈ P1``."""
    return Gba.from_masks(opens2.universe, [opens2.V(x) for x in P1.elements])


def check_tight_inclusion(P1, P2: Semilattice, opens2: CompactOpens | None = None) -> Check:
    """The image of ``T_c(P1)`` in ``T_c(P2)`` is an ideal.

    Raises :class:`PreconditionError` when covers are not preserved.  The
    witness is a pair ``(V, W)``: an image block ``V`` and a strictly
    smaller tight-open ``W`` below it, both as lists of tight-filter
    generators.
    """
    P1 = _as_sub(P1, P2)
    pre = check_cover_preserving(P1, P2)
    if not pre:
        raise PreconditionError(f"inclusion does not preserve covers: {pre.witness!r}")
    opens2 = opens2 or CompactOpens(P2)
    image = inclusion_image(P1, opens2)
    res = is_ideal(image, opens2.gba)
    if res:
        return res
    a, b = res.witness
    return Check(False, (a.sorted_atoms(), b.sorted_atoms()))


def semilattice_from_json(data: dict) -> Semilattice:
    try:
        elements = [str(x) for x in data["elements"]]
        table = [[str(x) for x in row] for row in data["meet"]]
        zero = str(data.get("zero", elements[0]))
    except (KeyError, TypeError, IndexError) as exc:
        raise InvalidInputError(f"malformed semilattice JSON: {exc}") from None
    return Semilattice.from_table(elements, table, zero)


def semilattice_to_json(P: Semilattice) -> dict:
    names = [str(x) for x in P.elements]
    return {
        "elements": names,
        "zero": str(P.zero),
        "meet": [[str(P.meet(x, y)) for y in P.elements] for x in P.elements],
    }
