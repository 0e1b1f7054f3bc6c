"""Directed graphs, graph inverse semigroups and the hereditary-subgraph test.

A path is ``(source, edges)`` with ``edges`` a tuple of edge ids; the empty
path at ``v`` is ``(v, ())``.  Nonzero elements of the graph inverse
semigroup are pairs ``(alpha, beta)`` of paths with the same range.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from ._check import Check
from .errors import InvalidInputError, PreconditionError
from .groups import FreeGroup, GroupWord, sym
from .inv_semigroup import Grading, InverseSemigroup

ZERO = "0"


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str


class DirectedGraph:
    def __init__(self, vertices: Iterable, edges: Iterable):
        self.vertices = tuple(dict.fromkeys(str(v) for v in vertices))
        vset = set(self.vertices)
        self.edges = []
        ids = set()
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(str(e[0]), str(e[1]), str(e[2]))
            if e.src not in vset or e.dst not in vset:
                raise InvalidInputError(f"edge {e.id} has an endpoint outside the vertex set")
            if e.id in ids:
                raise InvalidInputError(f"duplicate edge id {e.id!r}")
            ids.add(e.id)
            self.edges.append(e)
        self.edges = tuple(self.edges)
        self.edge = {e.id: e for e in self.edges}
        self._out = {v: [] for v in self.vertices}
        for e in self.edges:
            self._out[e.src].append(e)

    @classmethod
    def from_edges(cls, vertices, pairs) -> "DirectedGraph":
        """Edges given as ``(src, dst)`` pairs get ids ``e1, e2, ...``."""
        return cls(vertices, [Edge(f"e{i}", str(s), str(d)) for i, (s, d) in enumerate(pairs, 1)])

    def __repr__(self):
        return f"DirectedGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def out_edges(self, v) -> list:
        return list(self._out[v])

    def out_degree(self, v) -> int:
        return len(self._out[v])

    @property
    def sinks(self) -> frozenset:
        return frozenset(v for v in self.vertices if not self._out[v])

    def subgraph(self, H: Iterable) -> "DirectedGraph":
        """Vertices ``H`` and every edge emitted from ``H`` (H should be hereditary)."""
        H = set(H)
        return DirectedGraph(
            [v for v in self.vertices if v in H],
            [e for e in self.edges if e.src in H and e.dst in H],
        )

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.edges:
            g.add_edge(e.src, e.dst, key=e.id)
        return g

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"src": e.src, "dst": e.dst, "id": e.id} for e in self.edges],
        }

    def to_dot(self, name="G", labels: dict | None = None) -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for e in self.edges:
            lab = labels.get(e.id, e.id) if labels else e.id
            lines.append(f'  "{e.src}" -> "{e.dst}" [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines)


def graph_from_json(data: dict) -> DirectedGraph:
    try:
        vertices = data["vertices"]
        edges = [Edge(str(e.get("id", f"e{i}")), str(e["src"]), str(e["dst"]))
                 for i, e in enumerate(data.get("edges", []), 1)]
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidInputError(f"malformed graph JSON: {exc}") from None
    return DirectedGraph(vertices, edges)


def path_range(G: DirectedGraph, p) -> str:
    v, edges = p
    return G.edge[edges[-1]].dst if edges else v


def paths(G: DirectedGraph, max_len: int) -> list:
    """All paths of length at most ``max_len``, shortest first."""
    layer = [(v, ()) for v in G.vertices]
    out = list(layer)
    for _ in range(max_len):
        nxt = []
        for v, es in layer:
            end = path_range(G, (v, es))
            for e in G.out_edges(end):
                nxt.append((v, es + (e.id,)))
        out += nxt
        layer = nxt
    return out


def _strip_prefix(p, q):
    """If ``p`` is a prefix of ``q`` return the remaining edges, else None."""
    if p[0] != q[0]:
        return None
    n = len(p[1])
    if q[1][:n] != p[1]:
        return None
    return q[1][n:]


class GraphSemigroup(InverseSemigroup):
    kind = "graph"
    zero = ZERO

    def __init__(self, G: DirectedGraph):
        self.graph = G

    def __repr__(self):
        return f"GraphSemigroup({self.graph!r})"

    def element(self, alpha, beta):
        """Build ``(alpha, beta)`` from edge-id lists or paths; checks ranges."""
        a, b = self._path(alpha), self._path(beta)
        if path_range(self.graph, a) != path_range(self.graph, b):
            raise InvalidInputError("paths of a graph semigroup element must share their range")
        return (a, b)

    def _path(self, p):
        if isinstance(p, str):
            if p not in self.graph._out:
                raise InvalidInputError(f"unknown vertex {p!r}")
            return (p, ())
        if isinstance(p, tuple) and len(p) == 2 and isinstance(p[1], tuple):
            return p
        es = tuple(p)
        if not es:
            raise InvalidInputError("use a vertex name for an empty path")
        for a, b in zip(es, es[1:]):
            if self.graph.edge[a].dst != self.graph.edge[b].src:
                raise InvalidInputError(f"edges {a} and {b} do not compose")
        return (self.graph.edge[es[0]].src, es)

    def multiply(self, x, y):
        if x == ZERO or y == ZERO:
            return ZERO
        (alpha, beta), (gamma, delta) = x, y
        rest = _strip_prefix(beta, gamma)
        if rest is not None:
            return ((alpha[0], alpha[1] + rest), delta)
        rest = _strip_prefix(gamma, beta)
        if rest is not None:
            return (alpha, (delta[0], delta[1] + rest))
        return ZERO

    def star(self, x):
        if x == ZERO:
            return ZERO
        return (x[1], x[0])

    def ball(self, radius=2) -> list:
        ps = paths(self.graph, radius)
        by_range = {}
        for p in ps:
            by_range.setdefault(path_range(self.graph, p), []).append(p)
        out = []
        for group in by_range.values():
            for a in group:
                for b in group:
                    out.append((a, b))
        return sorted(out, key=self.sort_key)

    def sort_key(self, x):
        if x == ZERO:
            return (-1,)
        (a, b) = x
        return (len(a[1]) + len(b[1]), a[0], a[1], b[0], b[1])

    def format(self, x) -> str:
        if x == ZERO:
            return "0"

        def fp(p):
            return "".join(p[1]) if p[1] else p[0]

        return f"({fp(x[0])}, {fp(x[1])})"

    def contains(self, x) -> bool:
        if x == ZERO:
            return True
        for p in x:
            if p[0] not in self.graph._out or any(e not in self.graph.edge for e in p[1]):
                return False
        return True


def graph_grading(S: GraphSemigroup) -> Grading:
    """``(alpha, beta) -> alpha beta^-1`` in the free group on the edges."""
    F = FreeGroup([sym(e.id) for e in S.graph.edges])

    def fn(x):
        a, b = x
        return GroupWord.of([(sym(e), 1) for e in a[1]] + [(sym(e), -1) for e in reversed(b[1])])

    return Grading(F, fn)


def multiply_graph(S: GraphSemigroup, x, y):
    return S.multiply(x, y)


def _vertex_set(H, G: DirectedGraph) -> frozenset:
    H = frozenset(str(v) for v in H)
    unknown = H - set(G.vertices)
    if unknown:
        raise InvalidInputError(f"vertices {sorted(unknown)} are not in the graph")
    return H


def is_hereditary(H, G: DirectedGraph) -> Check:
    """Every edge leaving ``H`` ends in ``H``; witness = first escaping edge."""
    H = _vertex_set(H, G)
    for e in G.edges:
        if e.src in H and e.dst not in H:
            return Check(False, e)
    return Check(True)


def is_saturated(H, G: DirectedGraph) -> Check:
    H = _vertex_set(H, G)
    for v in G.vertices:
        outs = G.out_edges(v)
        if v not in H and outs and all(e.dst in H for e in outs):
            return Check(False, v)
    return Check(True)


def saturated_hereditary_closure(H, G: DirectedGraph) -> frozenset:
    """Least hereditary saturated superset of the hereditary set ``H``.

    Repeatedly absorbs every regular vertex (a non-sink; finite graphs have
    no infinite emitters) whose out-edges all land in the current set.
    """
    H = _vertex_set(H, G)
    res = is_hereditary(H, G)
    if not res:
        raise PreconditionError(f"{sorted(H)} is not hereditary: edge {res.witness.id} escapes")
    cur = set(H)
    changed = True
    while changed:
        changed = False
        for v in G.vertices:
            if v in cur:
                continue
            outs = G.out_edges(v)
            if outs and all(e.dst in cur for e in outs):
                cur.add(v)
                changed = True
    return frozenset(cur)


@dataclass
class GraphVerdict:
    verdict: str
    reason: str
    clauses: list = field(default_factory=list)

    @property
    def equivalent(self) -> bool:
        return self.verdict == MORITA_EQUIVALENT

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason, "clauses": self.clauses}


MORITA_EQUIVALENT = "morita-equivalent"
INCONCLUSIVE = "inconclusive"


def check_graph_morita(H, G: DirectedGraph) -> GraphVerdict:
    """Morita equivalence of the Leavitt path algebras of ``G`` and the
    subgraph on ``H``, certified when ``H`` is hereditary and its saturated
    hereditary closure is every vertex."""
    H = _vertex_set(H, G)
    her = is_hereditary(H, G)
    clauses = [{"name": "hereditary", "passed": bool(her), "witness": her.witness.id if her.witness else None}]
    if not her:
        return GraphVerdict(INCONCLUSIVE, f"H is not hereditary: edge {her.witness.id} leaves H", clauses)
    closure = saturated_hereditary_closure(H, G)
    full = closure == frozenset(G.vertices)
    missing = sorted(set(G.vertices) - closure)
    clauses.append({"name": "saturated-closure-is-everything", "passed": full, "witness": missing or None})
    if not full:
        return GraphVerdict(INCONCLUSIVE, f"closure misses {missing}", clauses)
    return GraphVerdict(
        MORITA_EQUIVALENT,
        "H is hereditary and its saturated hereditary closure is all of the vertices",
        clauses,
    )


@dataclass
class Classification:
    ok: bool
    descriptor: dict | None = None
    reason: str = ""
    certificate: GraphVerdict | None = None

    def to_json(self) -> dict:
        out = {"ok": self.ok, "reason": self.reason}
        if self.descriptor is not None:
            out["descriptor"] = self.descriptor
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def classify_dag(G: DirectedGraph) -> Classification:
    """Finite acyclic graphs are Morita equivalent to a direct sum of copies
    of ``R``, one per sink; the certificate is the sink set."""
    if not nx.is_directed_acyclic_graph(G.to_networkx()):
        cycle = nx.find_cycle(G.to_networkx())
        return Classification(False, reason=f"graph has a cycle through {cycle[0][0]}")
    sinks = sorted(G.sinks)
    cert = check_graph_morita(sinks, G)
    if not cert.equivalent:
        return Classification(False, reason=f"sink set fails the hereditary test: {cert.reason}", certificate=cert)
    return Classification(
        True,
        {"kind": "direct-sum-of-R", "count": len(sinks), "sinks": sinks},
        "finite acyclic graph (finite graphs have no infinite emitters)",
        cert,
    )


def classify_functional(G: DirectedGraph) -> Classification:
    """Graphs where every vertex emits exactly one edge.

    Each weakly connected component with a directed cycle contributes a
    Laurent-polynomial summand ``R[x, x^-1]``, each acyclic component an
    ``R`` summand (the latter cannot occur for finite graphs).
    """
    bad = [v for v in G.vertices if G.out_degree(v) != 1]
    if bad:
        return Classification(False, reason=f"vertex {bad[0]} has out-degree {G.out_degree(bad[0])}")
    g = G.to_networkx()
    laurent = plain = 0
    for comp in nx.weakly_connected_components(g):
        sub = g.subgraph(comp)
        if nx.is_directed_acyclic_graph(sub):
            plain += 1
        else:
            laurent += 1
    return Classification(True, {"Laurent": laurent, "R": plain}, "every vertex has out-degree 1")


def load_graph(path: str) -> DirectedGraph:
    with open(path) as fh:
        return graph_from_json(json.load(fh))
