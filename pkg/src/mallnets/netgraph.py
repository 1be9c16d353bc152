"""The jump graph of a set of linkings, and what is read off it.

Vertices are occurrence addresses ``(root, path)`` of the conclusion
forest.  Restricting to a set of linkings keeps the vertices on the
root-ward path of some linked leaf.  A with-vertex is toggled when both
of its arguments survive; a link depends on a with-vertex when some
pair of linkings, one containing the link and one not, toggles that
vertex and nothing else.  The graph joins forest edges, link edges and
jump edges from the two leaves of a link to every vertex it depends on.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

from mallnets import syntax as sx

FOREST, LINK, JUMP = "forest", "link", "jump"


class UnionFind:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra
        return ra

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return sorted(sorted(g) for g in out.values())


def _leafset(seq, linkings):
    lits = {a for a, _ in sx.leaves(seq)}
    used = set()
    for lk in linkings:
        for a, b in lk:
            for x in (a, b):
                if x not in lits:
                    raise KeyError(f"no leaf at {sx.show_addr(x)}")
                used.add(x)
    return used


def restrict(seq, linkings):
    """Vertices that lie on the root-ward path of some linked leaf."""
    out = set()
    for i, path in _leafset(seq, linkings):
        for k in range(len(path) + 1):
            out.add((i, path[:k]))
    return frozenset(out)


def with_vertices(seq):
    return [a for a, f in sx.sequent_vertices(seq) if f.op == sx.WITH]


def toggled(seq, linkings):
    """With-vertices both of whose arguments survive restriction."""
    kept = restrict(seq, linkings)
    return frozenset(w for w in with_vertices(seq)
                     if (w[0], w[1] + "L") in kept and (w[0], w[1] + "R") in kept)


class PairTable:
    """Toggle sets of every unordered pair of linkings, computed once."""

    def __init__(self, seq, linkings):
        self.seq = seq
        self.linkings = sorted(linkings, key=sorted)
        self.withs = with_vertices(seq)
        leafsets = [_leafset(seq, [lk]) for lk in self.linkings]
        self.toggles = {}
        for i, j in itertools.combinations(range(len(self.linkings)), 2):
            self.toggles[(i, j)] = self._toggle(leafsets[i] | leafsets[j])

    def _toggle(self, leaves):
        out = []
        for w in self.withs:
            i, p = w
            left = any(r == i and q.startswith(p + "L") for r, q in leaves)
            right = any(r == i and q.startswith(p + "R") for r, q in leaves)
            if left and right:
                out.append(w)
        return frozenset(out)

    def pair(self, i, j):
        return self.toggles[(min(i, j), max(i, j))]

    def dependencies(self):
        """Map each link to the with-vertices it depends on."""
        deps = {}
        for (i, j), tog in self.toggles.items():
            if len(tog) != 1:
                continue
            (w,) = tog
            li, lj = self.linkings[i], self.linkings[j]
            for a in li ^ lj:
                deps.setdefault(a, set()).add(w)
        return deps


def depends(seq, a, w, linkings):
    """Does link ``a`` depend on with-vertex ``w`` in ``linkings``?"""
    lks = list(linkings)
    for l1 in lks:
        if a not in l1:
            continue
        for l2 in lks:
            if a in l2:
                continue
            if toggled(seq, [l1, l2]) == {w}:
                return True
    return False


class JumpGraph(NamedTuple):
    seq: tuple
    vertices: frozenset
    edges: tuple           # (u, v, kind), u < v, sorted

    def adjacency(self, removed=()):
        adj = {v: set() for v in self.vertices if v not in removed}
        for u, v, _ in self.edges:
            if u in adj and v in adj:
                adj[u].add(v)
                adj[v].add(u)
        return adj

    def components(self, removed=()):
        uf = UnionFind(v for v in self.vertices if v not in removed)
        for u, v, _ in self.edges:
            if u in uf.parent and v in uf.parent:
                uf.union(u, v)
        return uf.groups()

    def component_of(self, removed=()):
        out = {}
        for k, g in enumerate(self.components(removed)):
            for v in g:
                out[v] = k
        return out

    def is_connected(self):
        return len(self.components()) <= 1

    def jump_edges(self):
        return [e for e in self.edges if e[2] == JUMP]


def build_graph(seq, linkings):
    verts = restrict(seq, linkings)
    edges = set()
    for i, path in verts:
        if path:
            edges.add(((i, path[:-1]), (i, path), FOREST))
    for lk in linkings:
        for a, b in lk:
            edges.add((a, b, LINK))
    table = PairTable(seq, linkings)
    for (a, b), ws in table.dependencies().items():
        for w in ws:
            for leaf in (a, b):
                u, v = (leaf, w) if leaf < w else (w, leaf)
                edges.add((u, v, JUMP))
    return JumpGraph(tuple(seq), verts, tuple(sorted(edges)))


def net_graph(net):
    return build_graph(net.conclusion, net.linkings)


def root_components(graph):
    """Partition of the root indices by connectivity of the graph."""
    comp = graph.component_of()
    groups = {}
    for i in range(len(graph.seq)):
        if (i, "") in comp:
            groups.setdefault(comp[(i, "")], []).append(i)
    return sorted(groups.values())


def splits_at(graph, root):
    """Components of the graph with a binary root vertex removed.

    Returns (left, right): the root indices attached to each argument,
    or None when the two arguments stay connected.
    """
    v = (root, "")
    comp = graph.component_of(removed={v})
    cl, cr = comp.get((root, "L")), comp.get((root, "R"))
    if cl is None or cr is None or cl == cr:
        return None
    left, right = [], []
    for i in range(len(graph.seq)):
        if i == root:
            continue
        c = comp.get((i, ""))
        if c == cl:
            left.append(i)
        elif c == cr:
            right.append(i)
        else:
            return None
    return left, right


def has_cycle_through(graph, v):
    """A simple cycle passes through ``v`` iff two neighbours of ``v``
    stay connected once ``v`` is removed."""
    adj = graph.adjacency()
    nbrs = sorted(adj.get(v, ()))
    if len(nbrs) < 2:
        return False
    comp = graph.component_of(removed={v})
    seen = set()
    for u in nbrs:
        if comp[u] in seen:
            return True
        seen.add(comp[u])
    return False


def separates(net, root, graph=None):
    f = net.conclusion[root] if 0 <= root < len(net.conclusion) else None
    if f is None:
        raise KeyError(f"no root {root}")
    if f.is_literal:
        return False
    if f.op in (sx.PARR, sx.WITH):
        return True
    graph = graph or net_graph(net)
    if f.op == sx.PLUS:
        return ((root, "L") in graph.vertices) != ((root, "R") in graph.vertices)
    return not has_cycle_through(graph, (root, ""))


class PropertyReport(NamedTuple):
    pairs_toggle: bool
    roots_present: bool
    root_withs_isolated: bool
    witnesses: tuple

    @property
    def ok(self):
        return self.pairs_toggle and self.roots_present and self.root_withs_isolated


def check_net_properties(net):
    """Check the three structural properties, collecting witnesses.

    (1) every pair of distinct linkings toggles a with-vertex;
    (2) every root occurs in the graph;
    (3) for each linking and each root with-vertex w, some other linking
        forms a pair toggling w alone.
    """
    seq = net.conclusion
    table = PairTable(seq, net.linkings)
    n = len(table.linkings)
    wit = []
    p1 = True
    for (i, j), tog in table.toggles.items():
        if not tog:
            p1 = False
            wit.append(("no-toggle", i, j))
    kept = restrict(seq, net.linkings)
    p2 = True
    for i in range(len(seq)):
        if (i, "") not in kept:
            p2 = False
            wit.append(("absent-root", i))
    p3 = True
    root_withs = [(i, "") for i, f in enumerate(seq) if f.op == sx.WITH]
    for w in root_withs:
        for i in range(n):
            if not any(table.pair(i, j) == {w} for j in range(n) if j != i):
                p3 = False
                wit.append(("with-not-isolated", w, i))
    return PropertyReport(p1, p2, p3, tuple(wit))


def to_dot(graph):
    """DOT text: forest edges solid, link edges dashed, jump edges dotted."""
    def name(v):
        return f'"{sx.show_addr(v)}"'

    lines = ["graph G {"]
    for v in sorted(graph.vertices):
        f = sx.resolve(graph.seq, v)
        sym = sx.show(f) if f.is_literal else sx.SYMBOL[f.op]
        lines.append(f'  {name(v)} [label="{sx.show_addr(v)} {sym}"];')
    style = {FOREST: "solid", LINK: "dashed", JUMP: "dotted"}
    for u, v, kind in graph.edges:
        lines.append(f"  {name(u)} -- {name(v)} [style={style[kind]}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
