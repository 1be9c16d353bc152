"""Linkings, linking sets and the translation of proofs into nets.

A link is a sorted pair of leaf addresses, a linking a frozenset of
links, and a net (``LinkingSet``) a conclusion together with a frozenset
of linkings.  Everything is expressed in the coordinates of the stored
root order of the conclusion.
"""

from __future__ import annotations

import itertools
import json
from typing import NamedTuple

from mallnets import syntax as sx
from mallnets import proofs as pf


class NetError(ValueError):
    pass


def link(a, b):
    return (a, b) if a <= b else (b, a)


class LinkingSet(NamedTuple):
    conclusion: tuple
    linkings: frozenset

    def __len__(self):
        return len(self.linkings)

    def sorted(self):
        return sorted(sorted(lk) for lk in self.linkings)

    def links(self):
        """Union of all linkings."""
        return frozenset().union(*self.linkings) if self.linkings else frozenset()

    def __str__(self):
        return dumps(self)


def check_net(net):
    """Raise unless every link joins two dual leaves of the conclusion."""
    lits = dict(sx.leaves(net.conclusion))
    for lk in net.linkings:
        used = set()
        for a, b in lk:
            if a not in lits or b not in lits:
                raise NetError(f"link {sx.show_addr(a)} {sx.show_addr(b)} names a missing leaf")
            if not sx.dual_literals(lits[a], lits[b]):
                raise NetError(f"link {sx.show_addr(a)} {sx.show_addr(b)} joins non-dual leaves")
            if a in used or b in used:
                raise NetError(f"leaf linked twice in one linking")
            used |= {a, b}
    return net


def _no_cut_rule(p):
    if pf.count_kind(p, (pf.CUT,)):
        raise NetError("MALL proofs with cut rules translate through their liftings")


def translate_resolution(p):
    """One linking per with-resolution, by tracking axioms to the root."""
    _no_cut_rule(p)
    out = set()
    for _, axs in pf.and_resolutions(p):
        lk = []
        for pos in axs:
            a = pf.track_down(p, pos, (0, ""))
            b = pf.track_down(p, pos, (1, ""))
            lk.append(link(a, b))
        out.add(frozenset(lk))
    return LinkingSet(tuple(p.conclusion), frozenset(out))


def _readdress(linkings, m):
    return {frozenset(link(m[a], m[b]) for a, b in lk) for lk in linkings}


def translate_inductive(p):
    """Bottom-up translation: products at splitting rules, unions at with."""
    _no_cut_rule(p)
    return LinkingSet(tuple(p.conclusion), frozenset(_inductive(p)))


def _inductive(p):
    kind = p.rule.kind
    if kind == pf.AX:
        return {frozenset([((0, ""), (1, ""))])}
    maps = [pf.tracking_map(p.conclusion, p.rule, k) for k in range(len(p.premises))]
    subs = [_readdress(_inductive(q), m) for q, m in zip(p.premises, maps)]
    if kind in pf.UNARY:
        return subs[0]
    if kind == pf.WITH:
        if subs[0] & subs[1]:
            raise AssertionError("with-rule premises share a linking")
        return subs[0] | subs[1]
    return {a | b for a in subs[0] for b in subs[1]}


translate = translate_inductive


def net_eq(a, b):
    if tuple(a.conclusion) != tuple(b.conclusion):
        raise NetError("nets on different conclusions: "
                       f"{sx.show_sequent(a.conclusion)} vs {sx.show_sequent(b.conclusion)}")
    return a.linkings == b.linkings


def permute_net(net, perm):
    """Reorder roots: new root j is old root ``perm[j]``."""
    inv = {old: new for new, old in enumerate(perm)}
    conclusion = tuple(net.conclusion[o] for o in perm)
    lks = frozenset(frozenset(link((inv[a[0]], a[1]), (inv[b[0]], b[1])) for a, b in lk)
                    for lk in net.linkings)
    return LinkingSet(conclusion, lks)


def canonical_net(net):
    """Least rendering over the permutations of identical cut pairs."""
    c = net.conclusion
    cuts = [i for i, f in enumerate(c) if f.op == sx.CUT]
    if len(cuts) < 2:
        return net
    groups = {}
    for i in cuts:
        groups.setdefault(c[i], []).append(i)
    best = None
    for choice in itertools.product(*(itertools.permutations(g) for g in groups.values())):
        m = list(range(len(c)))
        for g, ch in zip(groups.values(), choice):
            for old, new in zip(g, ch):
                m[old] = new
        cand = permute_net(net, m)
        key = cand.sorted()
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def mutate(net, linking, old, new):
    """Replace link ``old`` by ``new`` inside one linking."""
    lks = set(net.linkings)
    lks.discard(linking)
    lks.add(frozenset((set(linking) - {old}) | {new}))
    return LinkingSet(net.conclusion, frozenset(lks))


# -- file format ------------------------------------------------------------

def to_record(net):
    return {"sequent": sx.show_sequent(net.conclusion),
            "linkings": [[[sx.show_addr(a), sx.show_addr(b)] for a, b in lk]
                         for lk in net.sorted()]}


def dumps(net):
    return json.dumps(to_record(net)) + "\n"


def loads(text):
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as e:
        raise NetError(f"bad net file: {e}") from None
    seq = sx.parse_sequent(rec["sequent"])
    lks = set()
    for lk in rec["linkings"]:
        links = [link(sx.parse_addr(a), sx.parse_addr(b)) for a, b in lk]
        if len(set(links)) != len(links):
            raise NetError("duplicate link")
        lks.add(frozenset(links))
    return check_net(LinkingSet(seq, frozenset(lks)))
