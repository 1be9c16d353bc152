from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import proofs_of
from mallnets import corpus as cp
from mallnets import nets
from mallnets import proofs as pf
from mallnets import samples
from mallnets import syntax as sx

PROOFS = proofs_of(cp.proof_corpus(cp.CorpusSpec(max_leaves=4, mix=True)))
STARS = cp.star_corpus(cp.CutCorpusSpec(max_leaves=3))


@given(st.sampled_from(PROOFS + STARS))
def test_translations_agree(p):
    assert nets.translate_resolution(p) == nets.translate_inductive(p)


@given(st.sampled_from(PROOFS + STARS))
def test_translation_shape(p):
    net = nets.check_net(nets.translate(p))
    assert net.conclusion == p.conclusion
    # one linking per with-resolution, unless two resolutions coincide
    assert 1 <= len(net) <= oracles.resolution_count(p)
    n_leaves = len(sx.leaves(p.conclusion))
    for lk in net.linkings:
        assert 2 * len(lk) <= n_leaves


@given(st.sampled_from(PROOFS + STARS))
def test_file_round_trip(p):
    net = nets.translate(p)
    assert nets.loads(nets.dumps(net)) == net


def test_two_linkings_golden(golden):
    net = nets.translate(samples.two_linkings())
    assert nets.dumps(net) == (golden / "two_linkings.net").read_text()


def test_net_eq():
    a, b = samples.tensor_over_plus()
    assert nets.net_eq(nets.translate(a), nets.translate(b))
    c, d = samples.crossed_plus()
    assert not nets.net_eq(nets.translate(c), nets.translate(d))
    with pytest.raises(nets.NetError):
        nets.net_eq(nets.translate(a), nets.translate(c))


@given(st.sampled_from(PROOFS), st.randoms(use_true_random=False))
def test_permute_commutes_with_translation(p, rnd):
    perm = list(range(len(p.conclusion)))
    rnd.shuffle(perm)
    assert nets.permute_net(nets.translate(p), perm) == nets.translate(pf.permute(p, perm))


def test_canonical_net_ignores_order_of_equal_cuts():
    star = [p for p in STARS if sum(f.op == sx.CUT for f in p.conclusion) == 2
            and p.conclusion[-1] == p.conclusion[-2]]
    assert star
    for p in star:
        n = len(p.conclusion)
        swap = list(range(n - 2)) + [n - 1, n - 2]
        net = nets.translate(p)
        assert nets.canonical_net(net) == nets.canonical_net(nets.permute_net(net, swap))


def test_check_net_rejects_bad_links():
    seq = sx.parse_sequent("P, ~P, Q, ~P")
    ok = nets.LinkingSet(seq, frozenset([frozenset([nets.link((0, ""), (1, ""))])]))
    nets.check_net(ok)
    for lk in ([nets.link((0, ""), (2, ""))],
               [nets.link((0, ""), (5, ""))],
               [nets.link((0, ""), (1, "")), nets.link((0, ""), (3, ""))]):
        bad = nets.LinkingSet(seq, frozenset([frozenset(lk)]))
        with pytest.raises(nets.NetError):
            nets.check_net(bad)


def test_mall_cut_rule_has_no_direct_translation():
    with pytest.raises(nets.NetError):
        nets.translate(samples.mall_cut())


def test_loads_rejects_garbage():
    with pytest.raises(nets.NetError):
        nets.loads("{not json")
    rec = {"sequent": "P, ~P", "linkings": [[["0:-", "0:-"]]]}
    with pytest.raises(nets.NetError):
        nets.loads(json.dumps(rec))


def test_mutate_replaces_one_link():
    net = nets.translate(samples.two_linkings())
    lk = min(net.linkings, key=sorted)
    old = min(lk)
    new = nets.link((9, ""), (9, "L"))
    m = nets.mutate(net, lk, old, new)
    assert len(m) == len(net)
    changed = (m.linkings - net.linkings) | (net.linkings - m.linkings)
    assert changed == {lk, (lk - {old}) | {new}}
