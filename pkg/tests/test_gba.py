import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moritakit import (
    ClosureViolationError,
    InvalidInputError,
    is_cover,
    is_ideal,
    make_gba,
    powerset,
    relative_complement,
)
from moritakit.gba import Gba, Universe, gba_from_json, gba_to_json

import oracles


def members(g):
    return {frozenset(x.atoms) for x in g.members}


def test_make_gba_examples():
    assert members(make_gba([1, 2, 3], [{1}, {2}])) == {frozenset(), frozenset({1}), frozenset({2}),
                                                       frozenset({1, 2})}
    assert members(make_gba([1], [])) == {frozenset()}
    assert members(make_gba([1, 2], [{1, 2}, {1}])) == members(powerset([1, 2]))


def test_atom_outside_universe():
    with pytest.raises(InvalidInputError):
        make_gba([1, 2], [{3}])


def test_is_ideal_examples():
    P = powerset([1, 2])
    assert is_ideal([{1}, set()], P)
    res = is_ideal([set(), {1, 2}], P)
    assert not res
    a, b = res.witness
    assert (a.atoms, b.atoms) == ({1, 2}, {1})
    assert is_ideal(P.members, P)
    assert is_ideal(P, P)


def test_is_cover_examples():
    assert is_cover([{1}, {2}, {3}], powerset([1, 2, 3]))
    res = is_cover([set()], powerset([1]))
    assert not res and res.witness.atoms == {1}
    assert is_cover([{1, 2}], make_gba([1, 2, 3], [{1}, {2}]))


def test_relative_complement_examples():
    U = Universe((1, 2, 3))
    assert relative_complement(U.element([1, 2]), U.element([2])).atoms == {1}
    assert relative_complement(U.element([1, 2, 3]), U.element([2])).atoms == {1, 3}
    a = U.element([1, 3])
    assert not relative_complement(a, a)


def test_relative_complement_outside_ambient():
    g = make_gba([1, 2, 3], [{1, 2}])
    U = g.universe
    with pytest.raises(ClosureViolationError):
        g.relative_complement(U.element([1, 2]), U.element([2]))


def test_json_round_trip():
    g = make_gba(["a", "b", "c"], [["a"], ["b", "c"]])
    assert gba_from_json(gba_to_json(g)) == g


def test_ideal_below():
    P = powerset([1, 2, 3])
    I = P.ideal_below(P.element([2, 3]))
    assert members(I) == {frozenset(), frozenset({2}), frozenset({3}), frozenset({2, 3})}
    assert is_ideal(I, P)


families = st.lists(st.sets(st.integers(0, 5), max_size=6), max_size=5)


@settings(max_examples=60, deadline=None)
@given(families)
def test_closure_matches_oracle(gens):
    g = make_gba(range(6), gens)
    assert members(g) == oracles.gba_closure(gens)


@settings(max_examples=60, deadline=None)
@given(families, st.data())
def test_closed_under_operations(gens, data):
    g = make_gba(range(6), gens)
    ms = g.members
    a = data.draw(st.sampled_from(ms))
    b = data.draw(st.sampled_from(ms))
    c = data.draw(st.sampled_from(ms))
    assert a | b in g and a & b in g and a - b in g
    assert a & (b | c) == (a & b) | (a & c)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sets(st.integers(0, 3), max_size=4), max_size=4),
       st.lists(st.sets(st.integers(0, 3), max_size=4), max_size=4))
def test_ideal_test_matches_oracle_and_is_downward_closed(amb_gens, sub_sets):
    amb = make_gba(range(4), amb_gens)
    amb_members = members(amb)
    sub = {frozenset()} | {frozenset(s) for s in sub_sets if frozenset(s) in amb_members}
    res = is_ideal([set(s) for s in sub], amb)
    assert bool(res) == (oracles.ideal_violation(sub, amb_members) is None)
    if res:
        for x in sub:
            for y in amb_members:
                if y <= x:
                    assert y in sub


def test_blocks_are_disjoint_and_generate():
    g = make_gba(range(5), [{0, 1, 2}, {2, 3}])
    blocks = [b.mask for b in g.blocks]
    assert all(a & b == 0 for i, a in enumerate(blocks) for b in blocks[i + 1:])
    assert Gba.from_masks(g.universe, blocks) == g
