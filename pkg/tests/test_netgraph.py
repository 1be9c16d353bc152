from __future__ import annotations

import networkx as nx
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import proofs_of
from mallnets import corpus as cp
from mallnets import netgraph as ng
from mallnets import nets
from mallnets import samples

PROOFS = proofs_of(cp.proof_corpus(cp.CorpusSpec(max_leaves=4, mix=True)))
STARS = cp.star_corpus(cp.CutCorpusSpec(max_leaves=3))
NETS = sorted({nets.translate(p) for p in PROOFS + STARS}, key=nets.dumps)


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20))))
def test_union_find_matches_networkx(case):
    n, edges = case
    uf = ng.UnionFind(range(n))
    for a, b in edges:
        uf.union(a, b)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    assert uf.groups() == sorted(sorted(c) for c in nx.connected_components(g))


@settings(max_examples=150)
@given(st.sampled_from(NETS))
def test_connectivity_matches_networkx(net):
    g = ng.net_graph(net)
    assert g.is_connected() == oracles.nx_connected(g)
    assert sorted(map(sorted, g.components())) == sorted(map(sorted, oracles.nx_components(g)))


@settings(max_examples=150)
@given(st.sampled_from(NETS))
def test_vertex_removal_matches_networkx(net):
    g = ng.net_graph(net)
    for v in g.vertices:
        mine = sorted(map(sorted, g.components(removed={v})))
        assert mine == sorted(map(sorted, oracles.nx_components(g, removed=[v])))


@settings(max_examples=150)
@given(st.sampled_from(NETS))
def test_cycle_detection_matches_networkx(net):
    g = ng.net_graph(net)
    for v in g.vertices:
        assert ng.has_cycle_through(g, v) == oracles.nx_on_cycle(g, v)


def test_corpus_nets_have_the_structural_properties():
    for net in NETS:
        assert ng.check_net_properties(net).ok


def test_single_linking_has_no_jumps():
    for net in NETS:
        if len(net) == 1:
            assert not ng.net_graph(net).jump_edges()


def test_two_linkings_graph():
    net = nets.translate(samples.two_linkings())
    g = ng.net_graph(net)
    assert g.is_connected()
    assert g.jump_edges()
    # the unlinked Q leaf does not occur in the graph
    assert (1, "RR") not in g.vertices
    assert ng.separates(net, 0)
    assert ng.separates(net, 1)


def test_splits_match_vertex_removal():
    for net in NETS:
        g = ng.net_graph(net)
        for i, f in enumerate(net.conclusion):
            if f.is_literal or (i, "") not in g.vertices:
                continue
            s = ng.splits_at(g, i)
            comps = oracles.nx_components(g, removed=[(i, "")])
            if s is None:
                continue
            left, right = s
            assert sorted(left + right + [i]) == list(range(len(net.conclusion)))
            cl = next(c for c in comps if (i, "L") in c)
            cr = next(c for c in comps if (i, "R") in c)
            assert cl is not cr
            assert all((j, "") in cl for j in left)
            assert all((j, "") in cr for j in right)


def test_dot_lists_every_vertex_and_edge():
    g = ng.net_graph(nets.translate(samples.two_linkings()))
    dot = ng.to_dot(g)
    assert dot.startswith("graph G {") and dot.rstrip().endswith("}")
    assert dot.count("[label=") == len(g.vertices)
    assert dot.count(" -- ") == len(g.edges)
