import json
from itertools import product

import pytest

from moritakit import LabelledSemigroup, PreconditionError, natural_leq
from moritakit.desing import (
    BFElement,
    DesingSemigroup,
    DesingSpace,
    bf_range,
    desing_from_json,
    embed,
    lift_above,
    materialized_range,
    membership_in_S1,
    truncated_E1,
    verify_all_regular,
    verify_conditions,
    verify_corrupted,
)
from moritakit.groups import A, B, parse_letter

import oracles
from instances import corpus, space

DEPTH = 6


def oracle_inputs(L):
    edges = [(e.src, e.dst, str(L.labels[e.id])) for e in L.graph.edges]
    members = [frozenset(L.vertices_of(x.mask)) for x in L.family.members]
    return list(L.graph.vertices), edges, members


def as_points(D, X):
    return {(v, i) for i, m in X.parts for v in D.base.vertices_of(m)}


@pytest.fixture(scope="module")
def spaces():
    return {name: DesingSpace(L, DEPTH) for name, L in corpus().items()}


def tower(D, n=5):
    return ["".join(D.base.vertices_of(D.X(i))) for i in range(n)]


def test_towers(spaces):
    got = {name: tower(D) for name, D in spaces.items()}
    assert got == {
        "sink": ["v"] * 5,
        "uvw": ["uvw", "uvw", "uvw", "vw", "vw"],
        "loop": ["uw", "uw", "uw", "w", "w"],
        "cyc": ["uv", "uv", "", "", ""],
        "five": ["uvw", "uvw", "vw", "w", "w"],
        "six": ["uv", "u", "", "", ""],
    }


def test_tower_matches_oracle(spaces):
    for D in spaces.values():
        X, _, _ = oracles.virtual_graph(*oracle_inputs(D.base), DEPTH)
        for i in range(DEPTH + 1):
            assert set(D.base.vertices_of(D.X(i))) == X[i]


def test_stabilization(spaces):
    for D in spaces.values():
        for i in range(D.k + 1, DEPTH + 1):
            assert D.X(i) == D.tsink
        for i in range(DEPTH):
            assert D.X(i + 1) & ~D.X(i) == 0


def test_n_v(spaces):
    D = spaces["uvw"]
    assert D.n_v("u") == 2 and D.n_v("w") == float("inf")
    assert spaces["six"].n_v("u") == 1 and spaces["six"].n_v("v") == 0


def test_uvw_tail_edges(spaces):
    D = spaces["uvw"]
    a_edges = [(s, d, str(a)) for s, d, a in D.materialize(3)["edges"] if a.kind == "a"]
    assert a_edges == [(("u", 1), ("v", 0), "a1"), (("u", 2), ("w", 0), "a2")]


def test_bf_range_examples(spaces):
    D = spaces["sink"]
    v = D.base.mask(["v"])
    for i in range(4):
        assert bf_range(D, BFElement.at(v, i), B(i + 1)) == BFElement.at(v, i + 1)
    D = spaces["uvw"]
    u, w = D.base.mask(["u"]), D.base.mask(["w"])
    assert bf_range(D, BFElement.at(u, 2), "a2") == BFElement.at(w, 0)
    assert not bf_range(D, BFElement.at(u, 1), "a2")
    assert bf_range(D, BFElement.at(u, 2), parse_letter("a1")) == BFElement.at(0, 0)


@pytest.mark.parametrize("name", sorted(corpus()))
def test_bf_range_matches_walk(spaces, name):
    D = spaces[name]
    _, _, vedges = oracles.virtual_graph(*oracle_inputs(D.base), DEPTH)
    letters = [B(i) for i in range(1, DEPTH + 1)] + list(D.base.alphabet)
    n = 0
    for i in range(DEPTH):
        for m in D.level_members(i):
            X = BFElement.at(m, i)
            for a in letters:
                got = as_points(D, bf_range(D, X, a))
                assert got == oracles.walk(vedges, as_points(D, X), str(a))
                assert got == materialized_range(D, as_points(D, X), a, DEPTH)
                n += 1
    # two-level members too
    for m0, m1 in product(D.level_members(0), D.level_members(1)):
        X = BFElement.of({0: m0, 1: m1})
        for a in letters:
            assert as_points(D, bf_range(D, X, a)) == oracles.walk(vedges, as_points(D, X), str(a))
    assert n > 0


def test_regularity(spaces):
    got = {}
    for name, D in spaces.items():
        rep = verify_all_regular(D, DEPTH)
        assert rep.ok and rep.violations == []
        got[name] = rep.checked
    assert got == {"sink": 127, "uvw": 131071, "loop": 1023, "cyc": 3, "five": 4095, "six": 3}


def test_true_sink_delta(spaces):
    D = spaces["sink"]
    v = D.base.mask(["v"])
    assert D.delta(BFElement.at(v, 3)) == (B(4),)
    for D in spaces.values():
        for m in D.level_members(0, D.tsink):
            assert bf_range(D, BFElement.at(m, 0), "b1")


def test_embed_examples(spaces):
    D = spaces["uvw"]
    S1 = LabelledSemigroup(D.base)
    S2 = DesingSemigroup(D)
    x = S1.element("a2", ["w"], "ω")
    assert S2.format(embed(D, x)) == "(b1b2a2, {w}@0, ω)"
    y = S1.element("ω", ["u", "v"], "ω")
    assert embed(D, y) == ((), BFElement.at(D.base.mask(["u", "v"]), 0), ())
    assert embed(D, "0") == "0"


def test_membership_examples(spaces):
    D = spaces["uvw"]
    S2 = DesingSemigroup(D)
    v = D.base.mask(["v"])
    ok, pre = membership_in_S1(D, S2.element(["b1", "a1"], BFElement.at(v, 0), []))
    assert ok and pre == ((A(1),), v, ())
    u = D.base.mask(["u"])
    ok, why = membership_in_S1(D, S2.element(["b1"], BFElement.at(u, 1), ["b1"]))
    assert not ok and why == "set is not in 𝓑(X_0)"
    D = spaces["sink"]
    ok, _ = membership_in_S1(D, (("a1",), BFElement.at(1, 0), ()))
    assert not ok


def test_lift_examples(spaces):
    D = spaces["sink"]
    S2 = DesingSemigroup(D)
    v = D.base.mask(["v"])
    s = S2.element(["b1", "b2"], BFElement.at(v, 2), ["b1", "b2"])
    up = lift_above(D, s)
    assert S2.format(up) == "(ω, {v}@0, ω)"
    assert natural_leq(S2, s, up)
    x = embed(D, ((), v, ()))
    assert lift_above(D, x) == x
    D = spaces["uvw"]
    S2 = DesingSemigroup(D)
    assert lift_above(D, S2.element(["b1", "b2", "a2"], BFElement.at(D.base.mask(["w"]), 0), [])) is not None
    assert lift_above(D, S2.element(["b1"], BFElement.at(D.base.mask(["u"]), 1), [])) is None


@pytest.mark.parametrize("name", sorted(corpus()))
def test_embed_homomorphism_and_injective(spaces, name):
    D = spaces[name]
    S1 = LabelledSemigroup(D.base)
    S2 = DesingSemigroup(D)
    ball = S1.ball(2) + ["0"]
    images = {}
    for x in ball:
        ex = embed(D, x)
        assert images.setdefault(ex, x) == x
        ok, pre = membership_in_S1(D, ex)
        assert ok and pre == x
    for x, y in product(ball, repeat=2):
        assert embed(D, S1.multiply(x, y)) == S2.multiply(embed(D, x), embed(D, y))


@pytest.mark.parametrize("name", sorted(corpus()))
def test_lift_dominates(spaces, name):
    D = spaces[name]
    S2 = DesingSemigroup(D)
    n = 0
    for s in S2.ball(3, 4):
        up = lift_above(D, s)
        if up is None:
            continue
        n += 1
        assert natural_leq(S2, s, up)
        assert membership_in_S1(D, up)[0]
    assert n > 0


@pytest.mark.parametrize("name", sorted(corpus()))
def test_idempotent_dichotomy(spaces, name):
    D = spaces[name]
    S2 = DesingSemigroup(D)
    E1 = truncated_E1(D, 3)
    for e in S2.ball(2, 4):
        alpha, X, beta = e
        if alpha != beta:
            continue
        above = any(natural_leq(S2, e, f) for f in E1)
        expected = (not alpha and X.levels == (0,)) or (bool(alpha) and alpha[0] == B(1))
        assert above == expected, S2.format(e)


def test_conditions_hold(spaces):
    sizes = {}
    for name, D in spaces.items():
        rep = verify_conditions(D, 2, 4)
        assert rep.ok, rep.to_json()
        assert [c["name"] for c in rep.clauses] == ["cover-preserving", "tight", "sandwich", "fullness"]
        b = rep.clause("sandwich")["bound"]
        sizes[name] = (b["ball"], b["checked"])
    assert sizes == {"sink": (32, 3), "uvw": (178, 752), "loop": (86, 226), "cyc": (18, 45),
                     "five": (142, 1201), "six": (18, 45)}


def test_corrupted_fails_fullness(spaces):
    rep = verify_corrupted(spaces["sink"], level=1)
    assert not rep.ok
    c = rep.clause("fullness")
    assert not c["passed"]
    assert c["witness"] == {"level": 1, "set": ["v"], "word": "b1", "got": "0", "expected": "(ω, {v}@1, ω)"}
    for name in ("uvw", "five"):
        assert not verify_corrupted(spaces[name]).clause("fullness")["passed"]


def test_json_reingest(spaces, tmp_path):
    for D in spaces.values():
        path = tmp_path / "d.json"
        path.write_text(json.dumps(D.to_json()))
        E = desing_from_json(json.loads(path.read_text()))
        assert E.to_json() == D.to_json()
        assert verify_all_regular(E, 3).checked == verify_all_regular(D, 3).checked


def test_vertex_set_must_be_in_family():
    L = space("uv", [("u", "v", "a1")], [["u"]])
    with pytest.raises(PreconditionError):
        DesingSpace(L, 3)
