"""Shared test instances: labelled spaces, graphs, actions, semilattices."""

from moritakit import DirectedGraph, FreeGroup, LabelledSpace, PartialAction, Semilattice, powerset
from moritakit.groups import parse_word, sym


def space(vertices, edges, family=None):
    """``edges`` are ``(src, dst, letter)``; edge ids are ``e1, e2, ...``."""
    g = DirectedGraph(vertices, [(f"e{i}", s, d) for i, (s, d, _) in enumerate(edges, 1)])
    labels = {f"e{i}": a for i, (_, _, a) in enumerate(edges, 1)}
    return LabelledSpace(g, labels, family)


def corpus():
    return {
        "sink": space(["v"], []),
        "uvw": space("uvw", [("u", "v", "a1"), ("u", "w", "a2")]),
        "loop": space("uw", [("u", "u", "a1"), ("u", "w", "a2")]),
        "cyc": space("uv", [("u", "v", "a1"), ("v", "u", "a1")], [["u", "v"]]),
        "five": space("uvw", [("u", "v", "a1"), ("u", "w", "a1"), ("v", "w", "a2")]),
        "six": space("uv", [("u", "u", "a1"), ("u", "v", "a1")], [["u", "v"]]),
    }


WITH_TRUE_SINKS = ("sink", "uvw", "loop", "five")


def chain_space():
    return space("uvw", [("u", "v", "a1"), ("v", "w", "a2")])


def bad_space():
    """Two a1-edges into w from separated sources: not weakly left-resolving."""
    return space("uvw", [("u", "w", "a1"), ("v", "w", "a1")])


def chain_graph():
    return DirectedGraph.from_edges("uvw", [("u", "v"), ("v", "w")])


def loop_graph():
    return DirectedGraph.from_edges("v", [("v", "v")])


T = sym("t")
F1 = FreeGroup([T])
t = parse_word("t")
t_inv = parse_word("t^-1")


def shift_action(bound=4):
    """ℤ acting on powerset{1,2,3} by 1 ↦ 2 ↦ 3."""
    base = powerset([1, 2, 3])
    m = base.universe.mask_of
    return PartialAction.from_generators(F1, base, {t: {m([1]): m([2]), m([2]): m([3])}}, bound)


def broken_not_injective():
    base = powerset([1, 2, 3])
    m = base.universe.mask_of
    return PartialAction.from_generators(F1, base, {t: {m([1]): m([2]), m([2]): m([2])}}, 4)


def broken_not_inverse():
    """phi_t and phi_{t^-1} are bijections that do not undo each other."""
    base = powerset([1, 2, 3])
    m = base.universe.mask_of
    ideals = {t: m([2, 3]), t_inv: m([1, 2])}
    maps = {t: {m([1]): m([2]), m([2]): m([3])}, t_inv: {m([2]): m([2]), m([3]): m([1])}}
    return PartialAction(F1, base, ideals, maps, 1)


def _sets_semilattice(sets):
    sets = [frozenset(s) for s in sets]
    return Semilattice([frozenset()] + sets, lambda x, y: x & y, frozenset(), validate=True)


def table_semilattices():
    """Small semilattices with zero, as families closed under intersection."""
    out = {
        "two": _sets_semilattice([{1}]),
        "diamond": _sets_semilattice([{1, 2}, {1, 3}, {1}]),
        "chain3": _sets_semilattice([{1, 2}, {1}]),
        "chain5": _sets_semilattice([{1, 2, 3, 4}, {1, 2, 3}, {1, 2}, {1}]),
        "m3": _sets_semilattice([{1}, {2}, {3}, {1, 2, 3}]),
        "tree": _sets_semilattice([{1, 2}, {1}, {2}]),
        "fork": _sets_semilattice([{1, 2, 3}, {1, 2}, {3}, {1}]),
        "cube": _sets_semilattice([s for s in _subsets({1, 2, 3}) if s]),
        "antichain": _sets_semilattice([{1}, {2}, {3}, {4}]),
        "broom": _sets_semilattice([{1, 2, 3}, {1}, {2}, {3}, {4}, {4, 5}]),
    }
    return out


def _subsets(s):
    s = sorted(s)
    out = [set()]
    for x in s:
        out += [y | {x} for y in out]
    return out
