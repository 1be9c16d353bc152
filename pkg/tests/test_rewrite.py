from __future__ import annotations

import itertools
from collections import defaultdict

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import proofs_of
from mallnets import commute as cm
from mallnets import corpus as cp
from mallnets import netgraph as ng
from mallnets import nets
from mallnets import proofs as pf
from mallnets import rewrite as rw
from mallnets import samples
from mallnets import syntax as sx

MIX = pf.Config(mix=True)
STAR = pf.Config(pf.MALL_STAR)
MALL = pf.Config(pf.MALL)
SMALL = cp.proof_corpus(cp.CorpusSpec(max_leaves=4, mix=True))
CUT_SMALL = cp.cut_corpus(cp.CutCorpusSpec(max_leaves=3))
STARS = cp.star_corpus(cp.CutCorpusSpec(max_leaves=3))


def _same_net_pairs():
    out = []
    for _, ps in SMALL:
        by_net = defaultdict(list)
        for p in ps:
            by_net[nets.translate(p)].append(p)
        for group in by_net.values():
            out.extend(itertools.combinations(group, 2))
    return out


PAIRS = _same_net_pairs()


@settings(max_examples=300)
@given(st.sampled_from(PAIRS))
def test_convert_reaches_the_target(pair):
    p, q = pair
    trace = rw.convert(p, q, MIX)
    assert cm.replay(p, trace, MIX)[-1] == q
    rec = rw.trace_record(p, trace, q)
    assert rw.replay_record(p, rec, MIX) == q


def test_convert_rejects_different_nets():
    a, b = samples.crossed_plus()
    with pytest.raises(rw.ConversionError):
        rw.convert(a, b)
    with pytest.raises(rw.ConversionError):
        rw.convert(a, samples.two_linkings())


@settings(max_examples=300)
@given(st.sampled_from([(p, MIX) for p in proofs_of(SMALL)] + [(p, STAR) for p in STARS]))
def test_sequentialize_inverts_translation(case):
    p, config = case
    net = nets.translate(p)
    q = rw.sequentialize(net, config)
    assert not isinstance(q, rw.NotANet)
    assert pf.is_valid(q, config)
    assert nets.translate(q) == net


def test_sequentialize_rejects_mutated_file(data):
    net = nets.loads((data / "mutated.net").read_text())
    r = rw.sequentialize(net)
    assert isinstance(r, rw.NotANet) and not r
    assert r.reason


def test_sequentialize_mutations_against_enumeration():
    # a mutated net is accepted iff some enumerated proof has exactly that net
    checked = 0
    for goal, ps in SMALL:
        known = {nets.translate(p) for p in pf.enumerate_proofs(goal, MIX, 10)}
        for net in {nets.translate(p) for p in ps}:
            lits = dict(sx.leaves(goal))
            for lk in net.linkings:
                for old in lk:
                    used = {x for l in lk if l != old for x in l}
                    free = [a for a in lits if a not in used]
                    for a, b in itertools.combinations(free, 2):
                        new = nets.link(a, b)
                        if new == old or not sx.dual_literals(lits[a], lits[b]):
                            continue
                        m = nets.mutate(net, lk, old, new)
                        r = rw.sequentialize(m, MIX)
                        assert (not isinstance(r, rw.NotANet)) == (m in known)
                        checked += 1
    assert checked > 0


def test_make_last_rejects_non_separating_roots():
    p = samples.two_linkings()
    net = nets.translate(p)
    with pytest.raises(rw.ConversionError):
        rw.make_last_split(p, 0, [])
    with pytest.raises(rw.ConversionError):
        rw.make_last_mix(samples.tensor_over_plus()[0], [0])
    q, _ = rw.make_last_generate(p, 1, MIX)
    assert q.rule.principal == 1 and nets.translate(q) == net


@pytest.mark.parametrize("p", [samples.tensor_over_plus()[0], samples.two_linkings()])
def test_make_last_generate_for_every_separating_root(p):
    net = nets.translate(p)
    for i in range(len(p.conclusion)):
        if ng.separates(net, i):
            q, trace = rw.make_last_generate(p, i)
            assert q.rule.principal == i
            assert cm.replay(p, trace)[-1] == q


def test_cut_linkings_invariant_under_moves():
    for p in proofs_of(CUT_SMALL):
        before = rw.cut_linkings(p)
        for _, q in cm.neighbours(p, MALL):
            assert rw.cut_linkings(q) == before


def test_cut_linking_count_bounded_by_resolutions():
    for p in proofs_of(CUT_SMALL):
        assert 1 <= len(rw.cut_linkings(p).members) <= oracles.resolution_count(p)


def test_equivalence_classes_match_search():
    for goal, ps in CUT_SMALL:
        classes, truncated = rw.equivalence_classes(ps)
        assert not truncated
        label = {i: k for k, c in enumerate(classes) for i in c}
        for i, j in itertools.combinations(range(len(ps)), 2):
            same = label[i] == label[j]
            assert isinstance(rw.decide_equiv_mall(ps[i], ps[j]),
                              rw.Equivalent if same else rw.NotEquivalent)


def test_decide_equiv_on_samples():
    a, b = samples.tensor_over_plus()
    r = rw.decide_equiv_mall(a, b)
    assert isinstance(r, rw.Equivalent) and cm.replay(a, r.trace)[-1] == b
    c, d = samples.crossed_plus()
    assert isinstance(rw.decide_equiv_mall(c, d), rw.NotEquivalent)
    p = samples.mall_cut()
    assert isinstance(rw.decide_equiv_mall(p, p), rw.Equivalent)


def test_conjecture_harness_small():
    report = rw.conjecture_harness(CUT_SMALL)
    assert report.proofs == sum(len(ps) for _, ps in CUT_SMALL)
    assert not report.violations
    assert report.summary().startswith(f"proofs={report.proofs} ")
    for goal, (cut_cls, comm_cls) in report.class_counts.items():
        assert cut_cls <= comm_cls
