"""Bundled checks of the sufficient conditions for Morita equivalence.

Every checker returns a :class:`MoritaReport`.  The verdict is
``sufficient-conditions-hold`` when every clause passes and
``inconclusive`` otherwise: failing a sufficient condition says nothing
about inequivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Iterable

from ._check import Check
from .desing import DesingSemigroup, DesingSpace, verify_conditions
from .errors import InvalidInputError, PreconditionError
from .graph_alg import DirectedGraph, GraphSemigroup, check_graph_morita, graph_grading
from .inv_semigroup import (
    FiniteInverseSemigroup,
    Grading,
    InverseSemigroup,
    _ball,
    check_enlargement_products,
    induced_action,
    induced_inclusion,
    natural_leq,
)
from .labelled_space import LabelledSemigroup
from .partial_action import (
    SubactionMap,
    check_cover_condition,
    check_fullness_via_closure,
    check_ideal_condition,
)
from .semilattice import Semilattice, check_cover_preserving, check_tight_inclusion

HOLDS = "sufficient-conditions-hold"
INCONCLUSIVE = "inconclusive"

BOOLEAN, SEMIGROUP, GRAPH, ENLARGEMENT = "boolean-algebra", "semigroup", "graph", "enlargement"


@dataclass
class Clause:
    name: str
    passed: bool
    witness: Any = None
    bound: Any = None

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": _plain(self.witness), "bound": self.bound}


def _plain(x):
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_plain(v) for v in x]
    return repr(x)


@dataclass
class MoritaReport:
    level: str
    clauses: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return HOLDS if self.clauses and all(c.passed for c in self.clauses) else INCONCLUSIVE

    @property
    def ok(self) -> bool:
        return self.verdict == HOLDS

    def __bool__(self):
        return self.ok

    def clause(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, name, check, bound=None, witness=None):
        passed = bool(check)
        if witness is None and not passed:
            witness = getattr(check, "witness", None)
        self.clauses.append(Clause(name, passed, witness, bound))

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "verdict": self.verdict,
            "clauses": [c.to_json() for c in self.clauses],
            "bounds": self.bounds,
            "notes": self.notes,
        }


def check_boolean(s: SubactionMap, C1: Iterable | None = None, Cg=None) -> MoritaReport:
    """Ideal, cover and fullness conditions for a subaction inclusion.

    The default covers are the blocks of each algebra; for actions induced
    by a semigroup those are exactly the canonical ``V_x`` atoms.
    """
    rep = MoritaReport(BOOLEAN, bounds={"word_bound": s.target.bound})
    if not s.valid:
        raise PreconditionError(f"not a subaction map: {s.problems[0]}")
    rep.add("ideal", check_ideal_condition(s))
    rep.add("cover", check_cover_condition(s, C1, Cg))
    full = check_fullness_via_closure(s)
    witness = None if full else full.closure.blocks
    rep.add("fullness", full, bound=s.target.bound, witness=witness)
    if rep.ok:
        rep.notes.append("ring-level conditions follow from the Boolean-level ones")
    return rep


def _members(S: InverseSemigroup) -> callable:
    if hasattr(S, "contains"):
        return S.contains
    if isinstance(S, FiniteInverseSemigroup):
        return S.__contains__
    return None


def _semilattice_clauses(rep: MoritaReport, S2, E1: list, E2: list, bound):
    P2 = Semilattice([S2.zero] + E2, S2.multiply, S2.zero, sort_key=S2.sort_key)
    missing = [x for x in E1 if x not in P2]
    if missing:
        raise PreconditionError(f"idempotent {S2.format(missing[0])} of S1 is not in the S2 ball")
    P1 = P2.restrict(E1)
    cov = check_cover_preserving(P1, P2)
    rep.add("cover-preserving", cov, bound=bound,
            witness=None if cov else [S2.format(cov.witness[0]), [S2.format(c) for c in cov.witness[1]],
                                      S2.format(cov.witness[2])])
    down = P2.is_downward_closed(E1)
    if down:
        rep.add("tight", Check(True), bound=bound)
        rep.notes.append("tightness from downward closure of E1 in E2")
        return
    if not cov:
        rep.add("tight", Check(False, "covers not preserved"), bound=bound)
        return
    tight = check_tight_inclusion(P1, P2)
    rep.add("tight", tight, bound=bound)


def _sandwich(S1, S2, E1: list, ball2: list, ball1: list) -> Check:
    """For ``x, y ∈ E1`` and ``s`` in the ball, ``x s y`` lies below an
    element of ``S1``: itself when it belongs to ``S1``, otherwise an
    element of the ``S1`` ball found by search."""
    member = _members(S1)
    for x, s, y in product(E1, ball2, E1):
        t = S2.multiply(S2.multiply(x, s), y)
        if t == S2.zero:
            continue
        if member is not None and member(t):
            continue
        if not any(natural_leq(S2, t, u) for u in ball1):
            return Check(False, (S2.format(x), S2.format(s), S2.format(y)))
    return Check(True)


def check_semigroup(S1: InverseSemigroup, S2: InverseSemigroup, grading: Grading | None = None,
                    radius: int | None = 2, index_bound: int = 4, H: Iterable | None = None) -> MoritaReport:
    """Cover preservation, tightness, the sandwich condition and fullness
    for an inclusion ``S1 ⊆ S2`` of strongly E*-unitary semigroups.

    Desingularization pairs are delegated to
    :func:`moritakit.desing.verify_conditions`; graph pairs decide fullness
    with the saturated hereditary closure; anything else uses the closure
    test on the induced partial actions.
    """
    bounds = {"radius": radius}
    if isinstance(S2, DesingSemigroup):
        D = S2.space
        if not isinstance(S1, LabelledSemigroup) or S1.space is not D.base:
            raise PreconditionError("S1 must be the semigroup of the base space")
        bounds["index_bound"] = index_bound
        res = verify_conditions(D, radius, index_bound)
        rep = MoritaReport(SEMIGROUP, bounds=bounds)
        for c in res.clauses:
            rep.clauses.append(Clause(c["name"], c["passed"], c["witness"], c["bound"]))
        rep.notes.append("desingularization instance")
        return rep

    rep = MoritaReport(SEMIGROUP, bounds=bounds)
    ball1 = _ball(S1, radius)
    ball2 = _ball(S2, radius)
    member2 = _members(S2)
    outside = [x for x in ball1 if (member2 is not None and not member2(x)) or
               (member2 is None and x not in set(ball2))]
    if outside:
        raise PreconditionError(f"{S1.format(outside[0])} is not an element of S2")
    E1 = [x for x in ball1 if S1.is_idempotent(x)]
    E2 = [x for x in ball2 if S2.is_idempotent(x)]
    _semilattice_clauses(rep, S2, E1, E2, bounds)
    rep.add("sandwich", _sandwich(S1, S2, E1, ball2, ball1), bound=dict(bounds, ball=len(ball2)))

    if isinstance(S2, GraphSemigroup) and isinstance(S1, GraphSemigroup):
        Hs = set(S1.graph.vertices) if H is None else set(H)
        verdict = check_graph_morita(Hs, S2.graph)
        rep.add("fullness", Check(verdict.equivalent, verdict.reason if not verdict.equivalent else None),
                bound="exact")
        rep.notes.append("fullness via saturated hereditary closure")
        return rep

    if grading is None:
        raise InvalidInputError("a grading is needed for the fullness clause")
    a2 = induced_action(S2, grading, elements=ball2)
    a1 = induced_action(S1, grading, elements=ball1, bound=a2.bound)
    s = induced_inclusion(a1, a2)
    if not s.valid:
        rep.add("fullness", Check(False, f"induced inclusion is not a subaction map: {s.problems[0]}"),
                bound=a2.bound)
        return rep
    full = check_fullness_via_closure(s)
    rep.add("fullness", full, bound=dict(bounds, word_bound=a2.bound),
            witness=None if full else [[S2.format(p) for p in sorted(b.atoms, key=S2.sort_key)]
                                       for b in full.closure.blocks])
    return rep


def check_graph_pair(H: Iterable, G: DirectedGraph, radius: int = 2) -> MoritaReport:
    """Semigroup-level check for the subgraph on a hereditary ``H``."""
    H = set(H)
    S2 = GraphSemigroup(G)
    S1 = GraphSemigroup(G.subgraph(H))
    rep = check_semigroup(S1, S2, graph_grading(S2), radius, H=H)
    rep.level = GRAPH
    return rep


def check_desing(D: DesingSpace, radius: int = 2, index_bound: int = 4) -> MoritaReport:
    return check_semigroup(LabelledSemigroup(D.base), DesingSemigroup(D), radius=radius, index_bound=index_bound)


def check_enlargement(S_elems: Iterable, T: InverseSemigroup, grading: Grading | None = None,
                      radius: int | None = None) -> MoritaReport:
    """``STS = S`` and ``TST = T``, then the consequences those laws give:
    ``E(S)`` is downward closed in ``E(T)``, ``x t y ∈ S`` for idempotents
    ``x, y`` of ``S``, and (with a grading) the full semigroup-level clause
    set as a cross-check."""
    S_set = set(S_elems) - {T.zero}
    rep = MoritaReport(ENLARGEMENT, bounds={"radius": radius})
    sts, tst = check_enlargement_products(S_set, T, radius)
    rep.add("STS=S", sts)
    rep.add("TST=T", tst)
    T_elems = _ball(T, radius)
    ES = [x for x in sorted(S_set, key=T.sort_key) if T.is_idempotent(x)]
    ET = [x for x in T_elems if T.is_idempotent(x)]
    down = None
    for x in ES:
        for y in ET:
            if T.multiply(y, x) == y and y not in S_set:
                down = (T.format(x), T.format(y))
                break
        if down:
            break
    rep.add("derived:downward-closed", Check(down is None, down))
    sand = None
    for x, t, y in product(ES, T_elems, ES):
        v = T.multiply(T.multiply(x, t), y)
        if v != T.zero and v not in S_set:
            sand = (T.format(x), T.format(t), T.format(y))
            break
    rep.add("derived:sandwich-in-S", Check(sand is None, sand))
    if grading is not None and isinstance(T, FiniteInverseSemigroup):
        try:
            S = T.subsemigroup(S_set)
        except InvalidInputError as exc:
            rep.add("derived:subsemigroup", Check(False, str(exc)))
            return rep
        sub = check_semigroup(S, T, grading, radius)
        for c in sub.clauses:
            rep.clauses.append(Clause("derived:" + c.name, c.passed, c.witness, c.bound))
        rep.notes += sub.notes
    return rep
