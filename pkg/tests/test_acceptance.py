"""One test per acceptance criterion; each prints a single verdict line."""

from __future__ import annotations

import itertools
import random
from collections import Counter, defaultdict

import oracles
from conftest import proofs_of, verdict
from mallnets import abstract as ab
from mallnets import commute as cm
from mallnets import corpus as cp
from mallnets import netgraph as ng
from mallnets import nets
from mallnets import proofs as pf
from mallnets import rewrite as rw
from mallnets import samples
from mallnets import syntax as sx

PLAIN, MIX = pf.Config(), pf.Config(mix=True)
STAR = pf.Config(pf.MALL_STAR)


def test_c01_two_linkings_figure(data):
    p = pf.loads((data / "two_linkings.proof").read_text())
    assert p == samples.two_linkings()
    net = nets.translate(p)
    sizes = sorted(len(lk) for lk in net.linkings)
    q_leaf = [a for a, f in sx.leaves(p.conclusion) if f == sx.atom("Q")]
    untouched = all(q_leaf[0] not in l for lk in net.linkings for l in lk)
    ok = sizes == [2, 2] and len(q_leaf) == 1 and untouched
    verdict(1, ok, f"linkings={len(net.linkings)} links={sizes} Q untouched={untouched}")
    assert ok


def test_c02_translation_agreement(corpus_plain, corpus_mix):
    total = bad = 0
    for c in (corpus_plain, corpus_mix):
        for p in proofs_of(c):
            total += 1
            if nets.translate_resolution(p) != nets.translate_inductive(p):
                bad += 1
    ok = bad == 0 and total >= 10 ** 4
    verdict(2, ok, f"proofs={total} disagreements={bad}")
    assert total == 38691 + 95590
    assert ok


def _commutation_components(ps, config):
    def step(q):
        return [r for _, r in cm.neighbours(q, config)]
    return oracles.bfs_components(ps, step)


def test_c03_net_equality_is_commutation_connectivity(corpus_plain, corpus_mix):
    bad = classes = 0
    for c, cfg in ((corpus_plain, PLAIN), (corpus_mix, MIX)):
        for goal, ps in c:
            comp = _commutation_components(ps, cfg)
            by_net = defaultdict(set)
            by_comp = defaultdict(set)
            for p in ps:
                net = nets.translate(p).linkings
                by_net[net].add(comp[p])
                by_comp[comp[p]].add(net)
            classes += len(by_net)
            bad += sum(1 for s in by_net.values() if len(s) > 1)
            bad += sum(1 for s in by_comp.values() if len(s) > 1)
    ok = bad == 0
    verdict(3, ok, f"net classes={classes} discrepancies={bad}")
    assert classes == 19518 + 28872
    assert ok


def test_c04_counting_laws(corpus_plain, corpus_mix):
    seen = {}
    bad = fired = checked = 0

    def size(q):
        nonlocal bad, fired, checked
        if q in seen:
            return seen[q]
        try:
            n = len(nets.translate(q))
        except AssertionError:
            fired += 1
            n = -1
        subs = [size(r) for r in q.premises]
        kind = q.rule.kind
        if kind == pf.AX:
            want = 1
        elif kind == pf.WITH:
            want = subs[0] + subs[1]
        elif kind in pf.UNARY:
            want = subs[0]
        else:
            want = subs[0] * subs[1]
        checked += 1
        if n != want or n != oracles.resolution_count(q):
            bad += 1
        seen[q] = n
        return n

    for c in (corpus_plain, corpus_mix):
        for p in proofs_of(c):
            size(p)
    ok = bad == 0 and fired == 0
    verdict(4, ok, f"subproofs={checked} law violations={bad} disjointness fired={fired}")
    assert ok


def _all_proofs(corpus_plain, corpus_mix, star_corpus):
    yield from ((p, PLAIN) for p in proofs_of(corpus_plain))
    yield from ((p, MIX) for p in proofs_of(corpus_mix))
    yield from ((p, STAR) for p in star_corpus)


def test_c05_net_properties_and_last_rule_separates(corpus_plain, corpus_mix, star_corpus):
    nets_seen = set()
    bad_props = bad_last = checked = 0
    for p, _ in _all_proofs(corpus_plain, corpus_mix, star_corpus):
        net = nets.translate(p)
        if net not in nets_seen:
            nets_seen.add(net)
            if not ng.check_net_properties(net).ok:
                bad_props += 1
        root = pf.generated_root(p)
        if root is not None:
            checked += 1
            if not ng.separates(net, root):
                bad_last += 1
    ok = bad_props == 0 and bad_last == 0
    verdict(5, ok, f"nets={len(nets_seen)} property violations={bad_props} "
                   f"last roots={checked} non-separating={bad_last}")
    assert ok


def _checked_trace(p, q, trace, config):
    return cm.replay(p, trace, config)[-1] == q and nets.translate(q) == nets.translate(p)


def test_c06_last_rule_algorithms(corpus_plain, corpus_mix, star_corpus):
    counts, fails = Counter(), Counter()
    for p, cfg in _all_proofs(corpus_plain, corpus_mix, star_corpus):
        net = nets.translate(p)
        graph = ng.net_graph(net)
        seq = p.conclusion
        n = len(seq)
        for r in range(n):
            f = seq[r]
            if f.is_literal:
                continue
            if ng.separates(net, r, graph):
                counts["generate"] += 1
                try:
                    q, tr = rw.make_last_generate(p, r, cfg)
                    if not (_checked_trace(p, q, tr, cfg) and q.rule.principal == r):
                        fails["generate"] += 1
                except (rw.ConversionError, rw.Stuck, cm.MoveError):
                    fails["generate"] += 1
            if f.op in (sx.TENSOR, sx.CUT):
                others = [i for i in range(n) if i != r]
                for bits in itertools.product((0, 1), repeat=len(others)):
                    left = {i for i, b in zip(others, bits) if not b}
                    if not rw.split_ok(net, r, left, graph):
                        continue
                    counts["split"] += 1
                    try:
                        q, tr = rw.make_last_split(p, r, sorted(left), cfg)
                        good = (_checked_trace(p, q, tr, cfg) and q.rule.principal == r
                                and all(q.rule.sides[i] == (1 if i in left else 2) for i in others))
                        fails["split"] += not good
                    except (rw.ConversionError, rw.Stuck, cm.MoveError):
                        fails["split"] += 1
        if cfg.mix:
            for bits in itertools.product((0, 1), repeat=n - 1):
                left = {0} | {i + 1 for i, b in enumerate(bits) if not b}
                if len(left) == n or not rw.mix_ok(net, left, graph):
                    continue
                counts["mix"] += 1
                try:
                    q, tr = rw.make_last_mix(p, sorted(left), cfg)
                    good = (_checked_trace(p, q, tr, cfg) and q.rule.kind == pf.MIX
                            and {i for i in range(n) if q.rule.sides[i] == 1} in (left, set(range(n)) - left))
                    fails["mix"] += not good
                except (rw.ConversionError, rw.Stuck, cm.MoveError):
                    fails["mix"] += 1
    ok = not sum(fails.values()) and all(counts[k] for k in ("generate", "split", "mix"))
    verdict(6, ok, f"targets={dict(counts)} failures={sum(fails.values())}")
    assert ok


def test_c07_sequentializer(corpus_plain, corpus_mix):
    roundtrip_bad = nnets = 0
    pool = []
    for c, cfg in ((corpus_plain, PLAIN), (corpus_mix, MIX)):
        for goal, ps in c:
            for net in sorted({nets.translate(p) for p in ps}, key=nets.dumps):
                nnets += 1
                r = rw.sequentialize(net, cfg)
                if isinstance(r, rw.NotANet) or nets.translate(r) != net:
                    roundtrip_bad += 1
                if cfg is PLAIN and any(len(lk) >= 2 for lk in net.linkings):
                    pool.append(net)
    rng = random.Random(20261017)
    members = {}

    def member(net):
        if net.conclusion not in members:
            members[net.conclusion] = {nets.translate(p) for p in
                                       pf.enumerate_proofs(net.conclusion, PLAIN, 12)}
        return net in members[net.conclusion]

    outcome = Counter()
    while sum(outcome.values()) < 1500:
        net = rng.choice(pool)
        lk = rng.choice(sorted(net.linkings, key=sorted))
        old = rng.choice(sorted(lk))
        used = {x for l in lk if l != old for x in l}
        lits = dict(sx.leaves(net.conclusion))
        free = [a for a in lits if a not in used]
        new = [nets.link(a, b) for a, b in itertools.combinations(free, 2)
               if sx.dual_literals(lits[a], lits[b]) and nets.link(a, b) != old]
        if not new:
            continue
        m = nets.mutate(net, lk, old, rng.choice(new))
        r = rw.sequentialize(m, PLAIN)
        if isinstance(r, rw.NotANet):
            outcome["not a net"] += 1
            outcome["REJECTED MEMBER"] += member(m)
        else:
            outcome["accepted"] += 1
            outcome["SAME AS INPUT"] += nets.translate(r) == net
            outcome["WRONG NET"] += nets.translate(r) != m
            outcome["OUTSIDE ENUMERATION"] += not member(m)
    bad = sum(v for k, v in outcome.items() if k.isupper())
    mutations = outcome["not a net"] + outcome["accepted"]
    ok = roundtrip_bad == 0 and bad == 0 and mutations >= 1000
    verdict(7, ok, f"round-trip nets={nnets} failures={roundtrip_bad} mutations={mutations} "
                   f"accepted={outcome['accepted']} rejected={outcome['not a net']} oracle mismatches={bad}")
    assert ok


def test_c08_generated_catalogue_matches_tables():
    v = ab.validate_against_tables()
    detail = "; ".join(f"{d.system}{'+mix' if d.mix else ''} missing={len(d.missing)} "
                       f"extra={len(d.extra)}" for d in v.diffs)
    verdict(8, v.ok, f"{detail}; engine diff={len(v.engine_missing) + len(v.engine_extra)}; "
                     f"omega={v.omega_count}")
    assert v.ok and v.omega_count == 14


def test_c09_commutation_matrix():
    matrix = cm.commutation_matrix(cp.matrix_corpus(), pf.Config(pf.MALL_STAR, mix=True))
    wrong = [k for k in cm.EXPECTED_MATRIX if matrix.get(k) != cm.EXPECTED_MATRIX[k]]
    ok = not wrong
    verdict(9, ok, f"cells={len(cm.EXPECTED_MATRIX)} mismatches={len(wrong)}")
    assert ok


def _mall_components(ps, config, limit):
    def step(q):
        return [r for _, r in cm.neighbours(q, config) if pf.size(r) <= limit]
    return oracles.bfs_components(ps, step)


def test_c10_cut_equivalence_matches_commutation(cut_corpus):
    cfg = pf.Config(pf.MALL)
    bad = goals = 0
    for goal, ps in cut_corpus:
        goals += 1
        lifted, truncated = rw.equivalence_classes(ps)
        comp = _mall_components(ps, cfg, max(pf.size(p) for p in ps) + 2)
        a = sorted(sorted(g) for g in lifted)
        groups = defaultdict(list)
        for i, p in enumerate(ps):
            groups[comp[p]].append(i)
        b = sorted(groups.values())
        bad += a != b or truncated
    left, right = samples.crossed_plus()
    counter = rw.decide_equiv_mall(left, right)
    ok = bad == 0 and isinstance(counter, rw.NotEquivalent)
    verdict(10, ok, f"goals={goals} proofs={len(proofs_of(cut_corpus))} discrepancies={bad} "
                    f"counterexample={type(counter).__name__}")
    assert len(proofs_of(cut_corpus)) == 17055
    assert ok


def test_c11_conjecture_harness(cut_corpus):
    rep = rw.conjecture_harness(cut_corpus, pf.Config(pf.MALL))
    ok = not rep.violations
    verdict(11, ok, f"{rep.summary()} (candidates reported, not asserted)")
    for goal, group in rep.candidates:
        print(f"  candidate: {sx.show_sequent(goal)} ({len(group)} proofs)")
    assert ok


def test_c12_separated_cuts_lose_with_star():
    p = samples.cut_under_with()
    free = pf.Config(pf.MALL_STAR, superimpose=True)
    sep = pf.Config(pf.MALL_STAR, superimpose=False)
    with_free = [m for m in cm.applicable_moves(p, free) if m.comm == "with/star"]
    with_sep = [m for m in cm.applicable_moves(p, sep) if m.comm == "with/star"]
    moved = cm.apply_move(p, with_free[0], free) if with_free else None
    shares = moved is not None and not pf.is_valid(moved, sep)
    ok = pf.is_valid(p, sep) and bool(with_free) and not with_sep and shares
    verdict(12, ok, f"with/star moves: superimposed={len(with_free)} separated={len(with_sep)}")
    assert ok
