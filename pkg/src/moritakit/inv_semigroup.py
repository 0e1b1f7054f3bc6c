"""Inverse semigroups with zero behind one small interface.

Concrete kinds (finite tables here, graph and labelled semigroups in their
own modules) provide ``multiply``, ``star``, ``zero``, ``ball(radius)`` and a
``sort_key``.  Infinite semigroups are explored through balls; every
universally quantified result computed from a ball is bounded verification
and says so through the ``bound`` field of its report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Hashable, Iterable, Sequence

from ._check import Check
from .errors import CapacityError, InvalidInputError
from .groups import FiniteGroup, FreeGroup, GroupWord, ProductGroup, sym
from .partial_action import PartialAction, SubactionMap
from .semilattice import CompactOpens, Semilattice

DEFAULT_BALL_BOUND = 5000


class InverseSemigroup:
    kind = "abstract"
    zero: Hashable = None

    def multiply(self, x, y):
        raise NotImplementedError

    def star(self, x):
        raise NotImplementedError

    def ball(self, radius: int | None = None) -> list:
        """Nonzero elements generated up to ``radius`` (all of them if finite)."""
        raise NotImplementedError

    def sort_key(self, x):
        return str(x)

    def format(self, x) -> str:
        return str(x)

    def is_idempotent(self, x) -> bool:
        return x != self.zero and self.multiply(x, x) == x

    def source_idempotent(self, x):
        """``x* x``."""
        return self.multiply(self.star(x), x)

    def range_idempotent(self, x):
        """``x x*``."""
        return self.multiply(x, self.star(x))


class FiniteInverseSemigroup(InverseSemigroup):
    """An inverse semigroup with zero given by a multiplication table.

    Elements are names; ``table[x][y]`` is the name of ``xy``.  The
    constructor checks associativity, that ``zero`` absorbs, that every
    element has a unique inverse and that idempotents commute.
    """

    kind = "finite-table"

    def __init__(self, names: Sequence[str], table: dict, zero: str, validate: bool = True):
        self.names = tuple(names)
        self.zero = zero
        self.table = {x: dict(table[x]) for x in self.names}
        if zero not in self.names:
            raise InvalidInputError(f"zero {zero!r} is not an element")
        if validate:
            self._validate()
        self._star = {}
        for x in self.names:
            invs = [y for y in self.names if self._m(self._m(x, y), x) == x and self._m(self._m(y, x), y) == y]
            if len(invs) != 1:
                raise InvalidInputError(f"{x!r} has {len(invs)} inverses")
            self._star[x] = invs[0]
        if validate:
            idem = [x for x in self.names if self._m(x, x) == x]
            for e, f in product(idem, repeat=2):
                if self._m(e, f) != self._m(f, e):
                    raise InvalidInputError(f"idempotents {e!r} and {f!r} do not commute")
        self._order = {x: i for i, x in enumerate(self.names)}

    def _m(self, x, y):
        return self.table[x][y]

    def _validate(self):
        for x, y in product(self.names, repeat=2):
            if self.table[x][y] not in self.table:
                raise InvalidInputError(f"{x!r}{y!r} is not an element")
        for x in self.names:
            if self.table[x][self.zero] != self.zero or self.table[self.zero][x] != self.zero:
                raise InvalidInputError(f"zero does not absorb {x!r}")
        for x, y, z in product(self.names, repeat=3):
            if self.table[self.table[x][y]][z] != self.table[x][self.table[y][z]]:
                raise InvalidInputError(f"not associative at ({x!r}, {y!r}, {z!r})")

    def __repr__(self):
        return f"FiniteInverseSemigroup({len(self.names)} elements)"

    def __contains__(self, x):
        return x in self.table

    def multiply(self, x, y):
        return self.table[x][y]

    def star(self, x):
        return self._star[x]

    def ball(self, radius=None) -> list:
        return [x for x in self.names if x != self.zero]

    def sort_key(self, x):
        return self._order[x]

    def subsemigroup(self, elements: Iterable[str]) -> "FiniteInverseSemigroup":
        elems = list(dict.fromkeys(elements))
        if self.zero not in elems:
            elems.insert(0, self.zero)
        members = set(elems)
        for x in elems:
            if x not in self.table:
                raise InvalidInputError(f"{x!r} is not an element")
            if self._star[x] not in members:
                raise InvalidInputError(f"not closed under inverses at {x!r}")
        for x, y in product(elems, repeat=2):
            if self.table[x][y] not in members:
                raise InvalidInputError(f"not closed under products at ({x!r}, {y!r})")
        elems.sort(key=self._order.__getitem__)
        table = {x: {y: self.table[x][y] for y in elems} for x in elems}
        return FiniteInverseSemigroup(elems, table, self.zero, validate=False)

    def to_json(self) -> dict:
        return {
            "kind": "table",
            "elements": list(self.names),
            "zero": self.zero,
            "table": [[self.table[x][y] for y in self.names] for x in self.names],
        }


def finite_from_json(data: dict) -> FiniteInverseSemigroup:
    try:
        names = [str(x) for x in data["elements"]]
        rows = data["table"]
        zero = str(data.get("zero", names[0]))
        table = {x: {y: str(rows[i][j]) for j, y in enumerate(names)} for i, x in enumerate(names)}
    except (KeyError, IndexError, TypeError) as exc:
        raise InvalidInputError(f"malformed semigroup table: {exc}") from None
    return FiniteInverseSemigroup(names, table, zero)


def brandt(n: int) -> FiniteInverseSemigroup:
    """The Brandt semigroup ``B_n``: matrix units ``e_ij`` and zero."""
    names = ["0"] + [f"e{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    table = {}
    for x in names:
        row = {}
        for y in names:
            if x == "0" or y == "0" or x[2] != y[1]:
                row[y] = "0"
            else:
                row[y] = f"e{x[1]}{y[2]}"
        table[x] = row
    return FiniteInverseSemigroup(names, table, "0")


def brandt_over_group(G: FiniteGroup, n: int) -> FiniteInverseSemigroup:
    """``B(G, n)``: triples ``(i, g, j)`` with ``(i,g,j)(j,h,k) = (i,gh,k)``."""
    cells = [(i, g, j) for i in range(1, n + 1) for g in range(G.n) for j in range(1, n + 1)]
    name = {c: f"({c[0]},{G.format(c[1])},{c[2]})" for c in cells}
    names = ["0"] + [name[c] for c in cells]
    table = {"0": {y: "0" for y in names}}
    for c in cells:
        row = {"0": "0"}
        for d in cells:
            row[name[d]] = name[(c[0], G.mul(c[1], d[1]), d[2])] if c[2] == d[0] else "0"
        table[name[c]] = row
    return FiniteInverseSemigroup(names, table, "0")


def from_semilattice(P: Semilattice) -> FiniteInverseSemigroup:
    """A semilattice viewed as an inverse semigroup (every element idempotent)."""
    names = [str(x) for x in P.elements]
    back = dict(zip(names, P.elements))
    table = {x: {y: str(P.meet(back[x], back[y])) for y in names} for x in names}
    return FiniteInverseSemigroup(names, table, str(P.zero))


def chain(length: int) -> FiniteInverseSemigroup:
    """The chain ``0 < c1 < ... < c_length`` as a semilattice semigroup."""
    names = ["0"] + [f"c{i}" for i in range(1, length + 1)]
    rank = {x: i for i, x in enumerate(names)}
    table = {x: {y: names[min(rank[x], rank[y])] for y in names} for x in names}
    return FiniteInverseSemigroup(names, table, "0")


def natural_leq(S: InverseSemigroup, x, y) -> bool:
    """``x ≤ y`` in the natural partial order, tested as ``x = (x x*) y``."""
    if x == S.zero:
        return True
    if y == S.zero:
        return False
    return S.multiply(S.range_idempotent(x), y) == x


def _ball(S: InverseSemigroup, radius, limit=DEFAULT_BALL_BOUND) -> list:
    elems = S.ball(radius)
    if limit is not None and len(elems) > limit:
        raise CapacityError(f"ball of radius {radius} has {len(elems)} elements (cap {limit})", bound=limit)
    return sorted(elems, key=S.sort_key)


def idempotents(S: InverseSemigroup, radius=None, limit=DEFAULT_BALL_BOUND) -> list:
    return [x for x in _ball(S, radius, limit) if S.is_idempotent(x)]


def idempotent_semilattice(S: InverseSemigroup, radius=None, limit=DEFAULT_BALL_BOUND,
                           elements: Iterable | None = None) -> Semilattice:
    """The idempotents (of the ball, or the given ones) with meet = product."""
    E = list(elements) if elements is not None else idempotents(S, radius, limit)
    return Semilattice([S.zero] + E, S.multiply, S.zero)


@dataclass
class Grading:
    """A map from nonzero elements into a group handle."""

    group: Any
    fn: Callable

    def __call__(self, x):
        return self.fn(x)


@dataclass
class GradingReport:
    ok: bool
    failures: list = field(default_factory=list)
    bound: Any = None
    checked: int = 0

    def __bool__(self):
        return self.ok


def verify_grading(S: InverseSemigroup, grading: Grading, radius=None, limit=DEFAULT_BALL_BOUND) -> GradingReport:
    """Multiplicativity on nonzero products and kernel = nonzero idempotents,
    over the ball of the given radius."""
    G = grading.group
    elems = _ball(S, radius, limit)
    failures = []
    values = {x: grading(x) for x in elems}
    for x in elems:
        if (values[x] == G.identity) != S.is_idempotent(x):
            failures.append(("kernel", x, None))
    checked = 0
    for x, y in product(elems, repeat=2):
        xy = S.multiply(x, y)
        if xy == S.zero:
            continue
        checked += 1
        gxy = values[xy] if xy in values else grading(xy)
        if gxy != G.mul(values[x], values[y]):
            failures.append(("multiplicative", x, y))
    return GradingReport(not failures, failures, radius, checked)


def e_g_set(S: InverseSemigroup, grading: Grading, g, radius=None, limit=DEFAULT_BALL_BOUND) -> list:
    """Idempotents below ``s s*`` for some ``s`` in the ball with degree ``g``."""
    elems = _ball(S, radius, limit)
    E = [x for x in elems if S.is_idempotent(x)]
    tops = [S.range_idempotent(s) for s in elems if grading(s) == g]
    return [x for x in E if any(S.multiply(x, t) == x for t in tops)]


class InducedAction(PartialAction):
    """The partial action on the tight-filter algebra of the idempotents.

    Points of the tight-filter space are the minimal idempotents ``p`` of
    the (truncated) semilattice.  Each ``s`` of degree ``g`` with ``p ≤ s*s``
    relates ``p`` to ``s p s*``; the relations are closed under inverses and
    composition within the word bound.  Conflicting images are recorded in
    ``conflicts`` rather than silently overwritten.
    """

    def __init__(self, S: InverseSemigroup, grading: Grading, radius=None, bound=None,
                 limit=DEFAULT_BALL_BOUND, E: Semilattice | None = None, elements: Iterable | None = None):
        G = grading.group
        self.semigroup = S
        self.grading = grading
        self.radius = radius
        elems = list(elements) if elements is not None else _ball(S, radius, limit)
        if E is None:
            E = idempotent_semilattice(S, elements=[x for x in elems if S.is_idempotent(x)])
        self.E = E
        self.opens = CompactOpens(E)
        points = list(self.opens.points)
        pset = set(points)
        U = self.opens.universe
        degrees = {s: grading(s) for s in elems}
        if bound is None:
            bound = max((G.length(d) for d in degrees.values()), default=0)
        rel: dict = {G.identity: {p: p for p in points}}
        conflicts = []

        def put(g, p, q):
            tgt = rel.setdefault(g, {})
            old = tgt.get(p)
            if old is None:
                tgt[p] = q
                return True
            if old != q:
                conflicts.append((g, p, old, q))
            return False

        for s in elems:
            g = degrees[s]
            if not G.within(g, bound):
                continue
            src = S.source_idempotent(s)
            for p in points:
                if S.multiply(p, src) != p:
                    continue
                q = S.multiply(S.multiply(s, p), S.star(s))
                if q in pset:
                    put(g, p, q)
        changed = True
        while changed:
            changed = False
            for g in list(rel):
                gi = G.inv(g)
                for p, q in list(rel[g].items()):
                    if put(gi, q, p):
                        changed = True
            keys = list(rel)
            for g in keys:
                for h in keys:
                    gh = G.mul(g, h)
                    if not G.within(gh, bound):
                        continue
                    rg = rel[g]
                    for p, q in list(rel[h].items()):
                        r = rg.get(q)
                        if r is not None and put(gh, p, r):
                            changed = True
        self.conflicts = conflicts
        self.relations = rel
        base = self.opens.gba
        ideals, maps = {}, {}
        for g, mp in rel.items():
            if not mp:
                continue
            maps[g] = {U.mask_of([p]): U.mask_of([q]) for p, q in mp.items()}
            ideals[g] = U.mask_of(mp.values())
        super().__init__(G, base, ideals, maps, bound)
        for g, p, old, new in conflicts:
            self.iso_failures.append(("witness-conflict", g, None, base.element(U.mask_of([p]))))


def induced_action(S: InverseSemigroup, grading: Grading, radius=None, bound=None, **kw) -> InducedAction:
    return InducedAction(S, grading, radius, bound, **kw)


def induced_inclusion(a1: InducedAction, a2: InducedAction) -> SubactionMap:
    """The subaction map ``V_x -> V_x`` between induced actions of ``S1 ⊆ S2``.

    A point ``p1`` of the first tight-filter space is the atom of
    ``T_c(E1)`` cut out by the ``V_x`` (``x ∈ E1``) containing it, so it
    maps to the corresponding Boolean combination of ``V_x`` in ``T_c(E2)``.
    """
    E1, E2 = a1.E, a2.E
    o2 = a2.opens
    for x in E1.elements:
        if x not in E2:
            raise InvalidInputError(f"{x!r} is an idempotent of S1 missing from S2")
    full = o2.universe.full_mask
    f = {}
    for p in a1.opens.points:
        inside = full
        outside = 0
        for x in E1.elements:
            if E1.leq(p, x):
                inside &= o2.V(x)
            else:
                outside |= o2.V(x)
        f[a1.opens.universe.mask_of([p])] = inside & ~outside
    return SubactionMap(a1, a2, f)


def check_enlargement_products(S_elems: Iterable, T: InverseSemigroup, radius=None) -> tuple:
    """``STS = S`` and ``TST = T`` on the enumerated elements.

    Returns two :class:`Check` values; witnesses are ``(s, t, s')`` with
    ``sts'`` outside ``S``, or an element of ``T`` missing from ``TST``.
    """
    S_set = set(S_elems) | {T.zero}
    T_elems = [T.zero] + _ball(T, radius)
    S_list = sorted(S_set, key=T.sort_key)
    sts = Check(True)
    found = set()
    for s, t, u in product(S_list, T_elems, S_list):
        v = T.multiply(T.multiply(s, t), u)
        found.add(v)
        if v not in S_set and sts:
            sts = Check(False, (s, t, u))
    if sts and found != S_set:
        sts = Check(False, min(S_set - found, key=T.sort_key))
    tst_found = set()
    for t, s in product(T_elems, S_list):
        ts = T.multiply(t, s)
        if ts == T.zero:
            tst_found.add(T.zero)
            continue
        for u in T_elems:
            tst_found.add(T.multiply(ts, u))
    missing = [t for t in T_elems if t not in tst_found]
    tst = Check(True) if not missing else Check(False, missing[0])
    return sts, tst


def brandt_grading(T: FiniteInverseSemigroup, n: int, group: FiniteGroup | None = None) -> Grading:
    """Grade ``e_ij`` (or ``(i,g,j)``) by ``x_i x_j^-1`` in a free group with ``x_1 = e``.

    Over a nontrivial group the grading lands in the product with that group.
    """
    gens = [sym(f"x{i}") for i in range(2, n + 1)]
    F = FreeGroup(gens)

    def x(i):
        return GroupWord(()) if i == 1 else GroupWord(((gens[i - 2], 1),))

    if group is None:
        def fn(name):
            i, j = int(name[1]), int(name[2])
            return x(i) * x(j).inverse()

        return Grading(F, fn)
    P = ProductGroup(F, group)
    by_name = {group.format(g): g for g in range(group.n)}

    def fn(name):
        i, g, j = name.strip("()").split(",")
        return (x(int(i)) * x(int(j)).inverse(), by_name[g])

    return Grading(P, fn)


def trivial_grading(S: InverseSemigroup) -> Grading:
    """All elements into the trivial group; strongly E*-unitary only for
    semilattices."""
    G = FiniteGroup([[0]])
    return Grading(G, lambda x: 0)
