"""Brute-force reference implementations.

Nothing here calls the package's algorithms; inputs are plain Python sets,
dicts and edge lists.
"""

from itertools import combinations


def subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from combinations(items, r)


# set families ---------------------------------------------------------------

def gba_closure(generators):
    """Close a family of frozensets (plus ∅) under ∪, ∩ and \\ by iteration."""
    fam = {frozenset()} | {frozenset(g) for g in generators}
    while True:
        new = set(fam)
        for a in fam:
            for b in fam:
                new |= {a | b, a & b, a - b}
        if new == fam:
            return fam
        fam = new


def ideal_violation(sub, amb):
    for a in sorted(sub, key=sorted):
        for b in sorted(amb, key=sorted):
            if a & b not in sub or (b in sub and a | b not in sub):
                return a, b
    return None


# semilattices ---------------------------------------------------------------

def is_cover(elements, meet, zero, x, c):
    below = [y for y in elements if meet(y, x) == y and y != zero]
    return all(any(meet(y, ci) != zero for ci in c) for y in below)


def all_filters(elements, meet, zero):
    nonzero = [x for x in elements if x != zero]
    leq = lambda a, b: meet(a, b) == a  # noqa: E731
    out = []
    for sub in subsets(nonzero):
        xi = set(sub)
        if not xi:
            continue
        if any(meet(a, b) not in xi for a in xi for b in xi):
            continue
        if any(leq(a, y) and y not in xi for a in xi for y in nonzero):
            continue
        out.append(frozenset(xi))
    return out


def tight_filters(elements, meet, zero):
    """Every filter tested against every (element, cover) pair."""
    out = []
    for xi in all_filters(elements, meet, zero):
        tight = True
        for x in xi:
            lower = [y for y in elements if meet(y, x) == y and y != zero]
            for c in subsets(lower):
                if is_cover(elements, meet, zero, x, c) and not any(ci in xi for ci in c):
                    tight = False
                    break
            if not tight:
                break
        if tight:
            out.append(xi)
    return out


# partial actions --------------------------------------------------------------

def orbit_closure(start, moves):
    """Smallest family containing ``start``, closed under the partial maps
    in ``moves`` (dicts atom -> atom), under unions and downward."""
    reached = set(start)
    while True:
        new = set(reached)
        for mp in moves:
            for a in reached:
                if a in mp:
                    new.add(mp[a])
        if new == reached:
            return reached
        reached = new


# virtual desingularized graph -------------------------------------------------

def letter_index(a):
    return int(str(a)[1:])


def virtual_graph(vertices, edges, family_members, depth):
    """Independent build of the desingularized graph.

    ``edges`` are ``(src, dst, 'aN')``; ``family_members`` is every member of
    the (closed) family as a frozenset.  Returns ``(X, vertices, edges)``.
    """
    k = max((letter_index(a) for _, _, a in edges), default=0)
    outs = {}
    for s, d, a in edges:
        outs.setdefault((s, letter_index(a)), set()).add(d)
    tsink = set()
    for B in family_members:
        if B and not any((v, n) in outs for v in B for n in range(1, k + 1)):
            tsink |= B
    X = [set(vertices)]
    for i in range(1, depth + 1):
        X.append(tsink | {v for v in vertices for j in range(i, k + 1) if (v, j) in outs})
    verts = {(v, i) for i in range(depth + 1) for v in X[i]}
    vedges = []
    for (v, i) in verts:
        if (v, i + 1) in verts:
            vedges.append(((v, i), (v, i + 1), f"b{i + 1}"))
    for s, d, a in edges:
        n = letter_index(a)
        if (s, n) in verts:
            vedges.append(((s, n), (d, 0), a))
    return X, verts, vedges


def walk(vedges, sources, label):
    return {d for s, d, a in vedges if s in sources and a == label}


# graphs ---------------------------------------------------------------------

class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def functional_counts(succ):
    """``succ``: vertex -> its unique successor.  Components with a cycle
    and components without, by union-find plus successor iteration."""
    uf = UnionFind(succ)
    for v, w in succ.items():
        uf.union(v, w)
    comps = {}
    for v in succ:
        comps.setdefault(uf.find(v), []).append(v)
    cyclic = 0
    n = len(succ)
    for members in comps.values():
        v = members[0]
        for _ in range(n):
            v = succ[v]
        w = v
        on_cycle = False
        for _ in range(n):
            w = succ[w]
            if w == v:
                on_cycle = True
                break
        cyclic += on_cycle
    return cyclic, len(comps) - cyclic


def saturated_closure(H, vertices, edges):
    cur = set(H)
    while True:
        add = {v for v in vertices if v not in cur and any(s == v for s, _ in edges)
               and all(d in cur for s, d in edges if s == v)}
        if not add:
            return cur
        cur |= add
