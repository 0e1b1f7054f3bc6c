import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moritakit import (
    CapacityError,
    CompactOpens,
    InvalidInputError,
    PreconditionError,
    Semilattice,
    check_cover_preserving,
    check_tight_inclusion,
    is_cover,
)
from moritakit.semilattice import semilattice_from_json, semilattice_to_json

import oracles
from instances import table_semilattices

E = frozenset()


def sets(*xs):
    return Semilattice([E] + [frozenset(x) for x in xs], lambda a, b: a & b, E, validate=True)


def test_cover_examples():
    P = sets({1, 2}, {1})
    x, z = frozenset({1, 2}), frozenset({1})
    assert P.is_cover_of(x, [z])
    assert P.is_cover_of(x, [x])
    res = P.is_cover_of(x, [])
    assert not res and res.witness == z


def test_cover_member_not_below():
    P = sets({1}, {2})
    with pytest.raises(InvalidInputError):
        P.is_cover_of(frozenset({1}), [frozenset({2})])


def test_tight_filter_examples():
    assert sets({1}).tight_filters() == [frozenset({frozenset({1})})]
    # the filter above b in 0 < a < b is not tight: {a} covers b
    P = sets({1, 2}, {1})
    assert P.tight_filters() == [frozenset({frozenset({1}), frozenset({1, 2})})]


def test_tight_filters_bound():
    P = sets(*[{i} for i in range(5)])
    with pytest.raises(CapacityError):
        P.tight_filters(bound=3)


@pytest.mark.parametrize("name", sorted(table_semilattices()))
def test_tight_filters_match_oracle(name):
    P = table_semilattices()[name]
    got = set(P.tight_filters())
    assert got == set(oracles.tight_filters(P.elements, P.meet, P.zero))


def test_meet_table_json():
    P = Semilattice.from_table(["0", "x", "y", "z"],
                               [["0", "0", "0", "0"], ["0", "x", "z", "z"],
                                ["0", "z", "y", "z"], ["0", "z", "z", "z"]])
    assert P.meet("x", "y") == "z"
    Q = semilattice_from_json(semilattice_to_json(P))
    assert Q.elements == P.elements
    with pytest.raises(InvalidInputError):
        Semilattice.from_table(["0", "x"], [["0", "x"], ["0", "x"]])


def test_cover_preserving_examples():
    P2 = sets({1, 2}, {1})
    assert check_cover_preserving(P2, P2)
    x = frozenset({1, 2})
    assert check_cover_preserving([E, x], P2)
    # in P1 = {0, c ≤ x}, {c} covers x; P2 adds y ≤ x missing c
    c, y = frozenset({1}), frozenset({2})
    P2 = sets({1, 2}, {1}, {2})
    res = check_cover_preserving([E, x, c], P2)
    assert not res
    assert res.witness == (x, (c,), y)


def test_not_a_subsemilattice():
    P2 = sets({1, 2}, {1, 3}, {1})
    with pytest.raises(InvalidInputError):
        check_cover_preserving([frozenset({1, 2}), frozenset({1, 3})], P2)


def test_tight_inclusion_examples():
    P2 = sets({1, 2}, {1}, {2})
    assert check_tight_inclusion(P2, P2)
    assert check_tight_inclusion([E, frozenset({1})], P2)
    res = check_tight_inclusion([E, frozenset({1, 2})], P2)
    assert not res
    block, smaller = res.witness
    assert set(block) == {frozenset({1}), frozenset({2})}
    assert len(smaller) == 1


def test_tight_inclusion_needs_cover_preservation():
    P2 = sets({1, 2}, {1}, {2})
    with pytest.raises(PreconditionError):
        check_tight_inclusion([E, frozenset({1, 2}), frozenset({1})], P2)


def test_downward_closed_inclusions_are_tight():
    for P in table_semilattices().values():
        for x in P.nonzero:
            sub = P.below(x)
            assert P.is_downward_closed(sub)
            assert check_cover_preserving(sub, P)
            assert check_tight_inclusion(sub, P)


family = st.lists(st.frozensets(st.integers(0, 3), min_size=1), min_size=1, max_size=5)


def meet_closed(fam):
    out = {E} | set(fam)
    while True:
        new = out | {a & b for a in out for b in out}
        if new == out:
            return out
        out = new


@settings(max_examples=80, deadline=None)
@given(family)
def test_tight_filters_random(fam):
    elems = sorted(meet_closed(fam), key=lambda s: (len(s), sorted(s)))
    if len(elems) > 9:
        return
    P = Semilattice(elems, lambda a, b: a & b, E)
    got = P.tight_filters()
    assert set(got) == set(oracles.tight_filters(elems, P.meet, E))
    for xi in got:
        assert E not in xi
        assert all(P.meet(a, b) in xi for a in xi for b in xi)
        assert all(y in xi for a in xi for y in P.above(a))
    opens = CompactOpens(P)
    for a in elems:
        for b in elems:
            assert opens.V(P.meet(a, b)) == opens.V(a) & opens.V(b)
    assert is_cover([opens.element(a) for a in elems], opens.gba)
