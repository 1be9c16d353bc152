"""Independent reference implementations used as test oracles.

None of these share code with the package beyond the formula type.
"""

from __future__ import annotations

import itertools
from collections import deque

import networkx as nx

from mallnets import syntax as sx


def _dual(a, b):
    return a.is_literal and b.is_literal and a.name == b.name and a.op != b.op


def proof_counts(seq, max_nodes, mix=False, memo=None):
    """counts[k] = number of cut-free proofs of ``seq`` with exactly k rule
    nodes, for k <= max_nodes.  Derivations are told apart by the rule,
    the principal occurrence and the routing of every context occurrence;
    mix keeps the first occurrence on its left premise."""
    memo = {} if memo is None else memo
    key = (tuple(sorted(seq)), max_nodes, mix)
    if key in memo:
        return memo[key]
    seq = list(key[0])
    counts = [0] * (max_nodes + 1)
    if max_nodes < 1:
        memo[key] = counts
        return counts
    n = len(seq)

    def unary(prem):
        sub = proof_counts(prem, max_nodes - 1, mix, memo)
        for k, c in enumerate(sub):
            if c and k + 1 <= max_nodes:
                counts[k + 1] += c

    def binary(p1, p2):
        a = proof_counts(p1, max_nodes - 1, mix, memo)
        b = proof_counts(p2, max_nodes - 1, mix, memo)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y and 1 + i + j <= max_nodes:
                    counts[1 + i + j] += x * y

    if n == 2 and _dual(seq[0], seq[1]):
        counts[1] += 1
    for i, f in enumerate(seq):
        rest = seq[:i] + seq[i + 1:]
        if f.op == sx.PARR:
            unary(rest + [f.left, f.right])
        elif f.op == sx.PLUS:
            unary(rest + [f.left])
            unary(rest + [f.right])
        elif f.op == sx.WITH:
            binary(rest + [f.left], rest + [f.right])
        elif f.op == sx.TENSOR:
            for bits in itertools.product((0, 1), repeat=len(rest)):
                binary([x for x, b in zip(rest, bits) if not b] + [f.left],
                       [x for x, b in zip(rest, bits) if b] + [f.right])
    if mix and n >= 2:
        for bits in itertools.product((0, 1), repeat=n - 1):
            if not any(bits):
                continue
            left = [seq[0]] + [x for x, b in zip(seq[1:], bits) if not b]
            right = [x for x, b in zip(seq[1:], bits) if b]
            binary(left, right)
    memo[key] = counts
    return counts


def count_proofs(seq, max_nodes, mix=False, memo=None):
    return sum(proof_counts(seq, max_nodes, mix, memo))


def resolution_count(p):
    """Number of with-resolutions, computed on the proof tree."""
    kind = p.rule.kind
    if kind == "ax":
        return 1
    subs = [resolution_count(q) for q in p.premises]
    if kind == "with":
        return subs[0] + subs[1]
    out = 1
    for s in subs:
        out *= s
    return out


def bfs_components(items, neighbours):
    """Components of the graph reachable from ``items`` under ``neighbours``;
    returns {item: component index} for every visited node."""
    comp = {}
    for start in items:
        if start in comp:
            continue
        cid = len(set(comp.values()))
        comp[start] = cid
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in neighbours(x):
                if y not in comp:
                    comp[y] = cid
                    queue.append(y)
    return comp


def count_classes(labels):
    """Number of classes of a labelling, by plain set construction."""
    return len(set(labels))


def nx_graph(graph):
    g = nx.Graph()
    g.add_nodes_from(graph.vertices)
    g.add_edges_from((u, v) for u, v, _ in graph.edges)
    return g


def nx_connected(graph):
    g = nx_graph(graph)
    return g.number_of_nodes() > 0 and nx.is_connected(g)


def nx_components(graph, removed=()):
    g = nx_graph(graph)
    g.remove_nodes_from(removed)
    return [set(c) for c in nx.connected_components(g)]


def nx_on_cycle(graph, v):
    """v lies on a simple cycle iff its biconnected block has >= 3 nodes."""
    g = nx_graph(graph)
    return any(v in block and len(block) >= 3 for block in nx.biconnected_components(g))
