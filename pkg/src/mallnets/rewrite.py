"""Rewriting proofs by commutations: forcing a last rule, converting
between proofs with the same net, sequentializing nets, and comparing
MALL proofs with cuts through their liftings.

``bring_down`` is the workhorse.  It rewrites a proof until its last
rule has a prescribed kind, principal root and (for the splitting rules)
partition of the context.  When the last rule is something else, the
target is first pushed into the premise(s) holding the principal root,
then the two bottom rules are swapped.  A with-rule needs both premises
to end with the same rule; splitting rules below it must moreover have
identical subproofs on the side away from the with, which is arranged by
converting one into the other.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from collections import deque
from typing import NamedTuple

from mallnets import commute as cm
from mallnets import nets
from mallnets import netgraph as ng
from mallnets import proofs as pf
from mallnets import syntax as sx
from mallnets.commute import Move
from mallnets.nets import LinkingSet
from mallnets.proofs import (AX, CUT, MIX, PARR, PLUS1, PLUS2, STAR, TENSOR, WITH,
                             SHARED, SPLITTING, UNARY, Config, Proof, Rule)


class Target(NamedTuple):
    kind: str                 # rule kind; "plus" accepts either plus rule
    principal: "int | None"
    sides: dict               # root -> required side (1, 2 or SHARED)


class ConversionError(ValueError):
    """A precondition of a conversion does not hold."""


class Stuck(RuntimeError):
    """A conversion made no progress where one was guaranteed."""


def _kind_ok(kind, want):
    return kind == want or (want == "plus" and kind in (PLUS1, PLUS2))


def generates(p, T):
    return _kind_ok(p.rule.kind, T.kind) and p.rule.principal == T.principal


def matches(p, T):
    if not generates(p, T):
        return False
    s = p.rule.sides
    if all(s[i] == v for i, v in T.sides.items()):
        return True
    return p.rule.kind == MIX and all(s[i] == 3 - v for i, v in T.sides.items())


def _shift(trace, k):
    return [m._replace(position=(k,) + m.position) for m in trace]


def _on_premise(p, k, fn):
    q, tr = fn(p.premises[k])
    prem = list(p.premises)
    prem[k] = q
    return Proof(p.conclusion, p.rule, tuple(prem)), _shift(tr, k)


def _swap_to(p, want, config):
    for comm, d, k, j, new in cm.swaps(p, config):
        if want(new):
            return new, [Move((), comm, d, k, j)]
    return None


def _origins(p, k):
    return pf.layout(p.conclusion, p.rule)[k][1]


def _premise_target(p, k, T, travel, kind=None):
    principal, sides = None, {}
    for j, o in enumerate(_origins(p, k)):
        if o[0] == "c":
            if o[1] == T.principal:
                principal = j
            elif o[1] in T.sides:
                sides[j] = T.sides[o[1]]
        elif travel is not None:
            sides[j] = travel
    return Target(kind or T.kind, principal, sides)


def _travel(p, k, T):
    """Side the lower rule must land on, seen from premise ``k``.

    The lower rule travels up together with its principal root and,
    for a splitting rule, the roots of its other premise.
    """
    rule = p.rule
    group = [rule.principal] if rule.principal is not None else []
    if rule.kind in SPLITTING:
        group += [i for i, s in enumerate(rule.sides) if s not in (0, k + 1)]
    vals = {T.sides[i] for i in group if i in T.sides}
    if len(vals) > 1:
        raise ConversionError("the lower rule straddles the required partition")
    return vals.pop() if vals else None


def _side_of(p, k, T):
    """Required sides of the conclusion roots of premise ``k`` (None if free)."""
    return {T.sides.get(o[1]) for o in _origins(p, k) if o[0] == "c"}


def bring_down(p, T, config=Config()):
    """Rewrite ``p`` until its last rule matches ``T``; returns (proof, moves)."""
    if matches(p, T):
        return p, []
    kind = p.rule.kind
    if kind == AX:
        raise ConversionError("an axiom cannot be rewritten")
    if generates(p, T):
        if kind == MIX:
            return _regroup(p, T, config)
        return _fix_split(p, T, config)
    if kind == MIX and T.kind == MIX:
        return _regroup(p, T, config)
    if kind == WITH:
        return _down_with(p, T, config)
    trace = []
    if kind in UNARY:
        k = 0
    elif T.principal is not None:
        k = p.rule.sides[T.principal] - 1
        if kind == MIX:
            p, tr = _gather(p, k, T, config)
            trace += tr
            k = p.rule.sides[T.principal] - 1
    else:
        k = _mix_premise(p, T)
    travel = _travel(p, k, T)
    p, tr = _on_premise(p, k, lambda q: bring_down(q, _premise_target(p, k, T, travel), config))
    trace += tr
    hit = _swap_to(p, lambda n: matches(n, T), config)
    if hit is None and kind == PARR and travel is None:
        p, tr = _on_premise(p, 0, lambda q: _join_extras(p, q, T, config))
        trace += tr
        hit = _swap_to(p, lambda n: matches(n, T), config)
    if hit is None:
        hit = _swap_to(p, lambda n: generates(n, T), config)
        if hit is None:
            raise Stuck(f"no commutation brings {T.kind} below {kind}")
        p, tr = hit
        q, tr2 = bring_down(p, T, config)
        return q, trace + tr + tr2
    return hit[0], trace + hit[1]


def _join_extras(p, q, T, config):
    """Bring both par arguments into the same premise of the split ``q``."""
    extras = [j for j, o in enumerate(_origins(p, 0)) if o[0] != "c"]
    failure = None
    for j in extras:
        try:
            return bring_down(q, _premise_target(p, 0, T, q.rule.sides[j]), config)
        except (ConversionError, Stuck) as e:
            failure = e
    raise failure


def _mix_premise(p, T):
    """Premise of a splitting rule from which a mix target can be lifted."""
    for k in range(len(p.premises)):
        try:
            travel = _travel(p, k, T)
        except ConversionError:
            continue
        sides = _side_of(p, k, T)
        if travel is not None and (sides - {travel, None}):
            return k
    raise ConversionError("no premise separates the required partition")


def _down_with(p, T, config):
    travel = T.sides.get(p.rule.principal)
    p, trace = _on_premise(p, 0, lambda q: bring_down(q, _premise_target(p, 0, T, travel), config))
    first = p.premises[0].rule
    T2 = _premise_target(p, 1, T, travel, kind=first.kind)
    if first.kind in SPLITTING:
        T2 = T2._replace(sides=_mirror_sides(p, T2))
    p, tr = _on_premise(p, 1, lambda q: bring_down(q, T2, config))
    trace += tr
    hit = _swap_to(p, lambda n: matches(n, T), config)
    if hit is None and first.kind in SPLITTING:
        p, tr = _equalize(p, config)
        trace += tr
        hit = _swap_to(p, lambda n: matches(n, T), config)
    if hit is None:
        raise Stuck(f"no commutation brings {T.kind} below with")
    return hit[0], trace + hit[1]


def _tokens(p, k):
    """Identity of each root of premise ``k``: ('c', i) or the extra origin."""
    return [o if o[0] == "c" else ("e",) for o in _origins(p, k)]


def _mirror_sides(p, T2):
    """Premise-2 constraints copying the partition realised in premise 1."""
    t1, t2 = _tokens(p, 0), _tokens(p, 1)
    realised = {t: s for t, s in zip(t1, p.premises[0].rule.sides)}
    sides = dict(T2.sides)
    for j, t in enumerate(t2):
        if j != T2.principal and t in realised:
            sides[j] = realised[t]
    return sides


def _equalize(p, config):
    """Make the non-with sides of two splitting premises identical."""
    s1, s2 = p.premises
    t1, t2 = _tokens(p, 0), _tokens(p, 1)
    b1 = t1.index(("e",))
    b2 = t2.index(("e",))
    o1 = 2 - s1.rule.sides[b1]
    o2 = 2 - s2.rule.sides[b2]

    def names(s, tok, o):
        sub_tok = []
        for og in _origins(s, o):
            sub_tok.append(tok[og[1]] if og[0] == "c" else og)
        return sub_tok

    n1, n2 = names(s1, t1, o1), names(s2, t2, o2)
    if sorted(n1) != sorted(n2):
        raise Stuck("subproofs beside the with differ in conclusion")
    perm = [n1.index(t) for t in n2]
    want = pf.permute(s1.premises[o1], perm)
    have = s2.premises[o2]
    q, tr = _convert(have, want, config)
    new2 = pf.replace_at(s2, (o2,), q)
    p = Proof(p.conclusion, p.rule, (s1, new2))
    return p, _shift(_shift(tr, o2), 1)


def _fix_split(p, T, config):
    """The last rule generates the target root with the wrong partition."""
    if p.rule.kind not in (TENSOR, STAR):
        raise ConversionError("the last rule generates the root differently")
    trace = []
    for _ in range(2 * len(p.conclusion) + 2):
        if matches(p, T):
            return p, trace
        s = p.rule.sides
        bad = [i for i, v in T.sides.items() if s[i] != v]
        k = s[bad[0]]
        sub = _carried(p, k - 1, [i for i in bad if s[i] == k], T)
        moved = [o[1] for j, o in enumerate(_origins(p, k - 1)) if sub[j] == 2]
        p, tr = _on_premise(p, k - 1, lambda q: bring_down(q, Target(MIX, None, sub), config))
        trace += tr
        hit = _swap_to(p, lambda n: n.rule.kind == MIX, config)
        if hit is None:
            raise Stuck("split rule does not commute below mix")
        p, tr = hit
        trace += tr
        hit = _swap_to(p, lambda n: generates(n, T)
                       and all(n.rule.sides[i] != k for i in moved), config)
        if hit is None:
            raise Stuck("mix does not commute into the other premise")
        p, tr = hit
        trace += tr
    if not matches(p, T):
        raise Stuck("partition did not converge")
    return p, trace


def _carried(p, k, roots, T):
    """Mix partition of premise ``k`` moving ``roots`` with everything
    connected to them in the premise's own net."""
    q = p.premises[k]
    origins = _origins(p, k)
    comp = ng.net_graph(nets.translate(q)).component_of()
    hit = {comp[(j, "")] for j, o in enumerate(origins) if o[0] == "c" and o[1] in roots}
    sub = {}
    for j, o in enumerate(origins):
        go = comp[(j, "")] in hit
        if go and (o[0] != "c" or T.sides.get(o[1]) == k + 1):
            raise ConversionError("a moved root is tied to its premise")
        sub[j] = 2 if go else 1
    return sub


def _skeleton_search(p, want, config, depth=4):
    """Breadth-first search over mix/mix moves among the top mix rules."""
    if want(p):
        return p, []
    seen = {p}
    queue = deque([(p, [])])
    while queue:
        q, tr = queue.popleft()
        if len(tr) >= depth:
            continue
        for pos in pf.positions(q):
            if not all(pf.node_at(q, pos[:i]).rule.kind == MIX for i in range(len(pos) + 1)):
                continue
            node = pf.node_at(q, pos)
            for comm, d, k, j, new in cm.swaps(node, config):
                if comm != "mix/mix":
                    continue
                r = pf.replace_at(q, pos, new)
                if r in seen:
                    continue
                seen.add(r)
                t = tr + [Move(pos, comm, d, k, j)]
                if want(r):
                    return r, t
                queue.append((r, t))
    raise Stuck("mix rules cannot be regrouped")


def _split_straddling(p, k, T, config):
    """Make premise ``k`` of a mix end with a mix along the partition."""
    sub = {}
    for j, o in enumerate(_origins(p, k)):
        v = T.sides.get(o[1])
        if v is None:
            raise ConversionError("partition leaves a root unconstrained")
        sub[j] = v
    if len(set(sub.values())) < 2:
        return p, []
    return _on_premise(p, k, lambda q: bring_down(q, Target(MIX, None, sub), config))


def _regroup(p, T, config):
    trace = []
    for k in range(2):
        p, tr = _split_straddling(p, k, T, config)
        trace += tr
    q, tr = _skeleton_search(p, lambda n: matches(n, T), config)
    return q, trace + tr


def _gather(p, k, T, config):
    """Below a mix, make the premise away from the target root one-sided."""
    o = 1 - k
    if len(_side_of(p, o, T) - {None}) <= 1:
        return p, []
    p, trace = _split_straddling(p, o, T, config)
    r = T.principal

    def want(n):
        kk = n.rule.sides[r] - 1
        return len(_side_of(n, 1 - kk, T) - {None}) <= 1

    q, tr = _skeleton_search(p, want, config)
    return q, trace + tr


# -- making a rule last --------------------------------------------------------

def _kind_for_root(f):
    return {sx.PARR: PARR, sx.PLUS: "plus", sx.WITH: WITH,
            sx.TENSOR: TENSOR, sx.CUT: STAR}[f.op]


def _checked(p, trace, q, config):
    seen = cm.replay(p, trace, config)
    if seen[-1] != q:
        raise Stuck("trace does not replay to the result")
    return q, trace


def make_last_generate(p, root, config=Config()):
    """Rewrite ``p`` to generate the separating root ``root`` last."""
    net = nets.translate(p)
    if not ng.separates(net, root):
        raise ConversionError(f"root {root} does not separate")
    T = Target(_kind_for_root(p.conclusion[root]), root, {})
    q, tr = bring_down(p, T, config)
    return _checked(p, tr, q, config)


def split_ok(net, root, left, graph=None):
    """Every path between the two sides of the split passes through ``root``."""
    graph = graph or ng.net_graph(net)
    comp = graph.component_of(removed={(root, "")})
    right = [i for i in range(len(net.conclusion)) if i != root and i not in left]
    a = {comp.get((i, "")) for i in left} | {comp.get((root, "L"))}
    b = {comp.get((i, "")) for i in right} | {comp.get((root, "R"))}
    return None not in a and None not in b and not (a & b)


def make_last_split(p, root, left, config=Config()):
    """Rewrite ``p`` to end with the split of ``root`` sending ``left`` to
    the first premise and every other context root to the second."""
    f = p.conclusion[root]
    if f.op not in (sx.TENSOR, sx.CUT):
        raise ConversionError(f"root {root} is not a tensor or cut pair")
    if not split_ok(nets.translate(p), root, set(left)):
        raise ConversionError("some path avoids the split root")
    sides = {i: (1 if i in left else 2) for i in range(len(p.conclusion)) if i != root}
    q, tr = bring_down(p, Target(_kind_for_root(f), root, sides), config)
    return _checked(p, tr, q, config)


def mix_ok(net, left, graph=None):
    graph = graph or ng.net_graph(net)
    comp = graph.component_of()
    right = [i for i in range(len(net.conclusion)) if i not in left]
    a = {comp[(i, "")] for i in left}
    b = {comp[(i, "")] for i in right}
    return bool(left) and bool(right) and not (a & b)


def make_last_mix(p, left, config=Config(mix=True)):
    """Rewrite ``p`` to end with a mix of the roots ``left`` and the rest."""
    if not mix_ok(nets.translate(p), set(left)):
        raise ConversionError("a path joins the two sides")
    sides = {i: (1 if i in left else 2) for i in range(len(p.conclusion))}
    q, tr = bring_down(p, Target(MIX, None, sides), config)
    return _checked(p, tr, q, config)


def convert(p, q, config=Config()):
    """Moves rewriting ``p`` into ``q``; both must have the same net."""
    if tuple(p.conclusion) != tuple(q.conclusion):
        raise ConversionError("different conclusions")
    if nets.translate(p) != nets.translate(q):
        raise ConversionError("the nets differ")
    r, tr = _convert(p, q, config)
    if r != q:
        raise Stuck("conversion ended elsewhere")
    return _checked(p, tr, q, config)[1]


def _convert(p, q, config):
    if p == q:
        return p, []
    rule = q.rule
    if rule.kind == AX:
        raise Stuck("axiom against a compound proof")
    sides = {i: s for i, s in enumerate(rule.sides) if i != rule.principal}
    p, trace = bring_down(p, Target(rule.kind, rule.principal, sides), config)
    if p.rule != rule:
        raise Stuck("last rules disagree after bringing down")
    for k in range(len(q.premises)):
        p, tr = _on_premise(p, k, lambda s, k=k: _convert(s, q.premises[k], config))
        trace += tr
    return p, trace


def trace_record(p, trace, q):
    return {"sequent": sx.show_sequent(p.conclusion),
            "moves": [m.record() for m in trace],
            "final": hashlib.sha256(pf.dumps(q).encode()).hexdigest()}


def replay_record(p, rec, config=Config()):
    trace = [Move.from_record(r) for r in rec["moves"]]
    q = cm.replay(p, trace, config)[-1]
    if hashlib.sha256(pf.dumps(q).encode()).hexdigest() != rec["final"]:
        raise cm.MoveError("replay ends on a different proof")
    return q


# -- sequentialization ------------------------------------------------------

class NotANet(NamedTuple):
    reason: str

    def __bool__(self):
        return False


class _Fail(Exception):
    pass


def sequentialize(net, config=Config()):
    """A proof whose net is ``net``, or NotANet with the reason."""
    try:
        nets.check_net(net)
        p = _sequentialize(tuple(net.conclusion), frozenset(net.linkings), config)
    except (_Fail, nets.NetError) as e:
        return NotANet(str(e))
    if pf.check_proof(p, config):
        return NotANet("reconstruction is not a valid proof")
    if nets.translate(p).linkings != net.linkings:
        return NotANet("retranslation mismatch")
    return p


def _restrict_roots(linkings, roots):
    roots = set(roots)
    out = set()
    for lk in linkings:
        part = frozenset(l for l in lk if l[0][0] in roots)
        if any((a[0] in roots) != (b[0] in roots) for a, b in lk):
            raise _Fail("a link crosses the split")
        out.add(part)
    return out


def _to_premise(seq, rule, k, linkings):
    back = {v: a for a, v in pf.tracking_map(seq, rule, k).items() if v is not None}
    try:
        return frozenset(frozenset(nets.link(back[a], back[b]) for a, b in lk)
                         for lk in linkings)
    except KeyError:
        raise _Fail("a link leaves the premise") from None


def _binary(seq, rule, parts, config):
    prems = []
    for k, lks in enumerate(parts):
        prem = pf.layout(seq, rule)[k][0]
        prems.append(_sequentialize(prem, _to_premise(seq, rule, k, lks), config))
    return pf.make(seq, rule, prems)


def _product(seq, rule, linkings, config):
    """Split every linking along the premises of a splitting rule."""
    roots = [[i for i, s in enumerate(rule.sides) if s == k] for k in (1, 2)]
    if rule.principal is not None:
        r = rule.principal
        halves = []
        for lk in linkings:
            left = frozenset(l for l in lk if _on_side(l[0], r, roots[0], "L"))
            right = frozenset(lk - left)
            for a, b in left:
                if not _on_side(b, r, roots[0], "L"):
                    raise _Fail("a link crosses the split")
            for a, b in right:
                if not (_on_side(a, r, roots[1], "R") and _on_side(b, r, roots[1], "R")):
                    raise _Fail("a link crosses the split")
            halves.append((left, right))
    else:
        halves = [(frozenset(l for l in lk if l[0][0] in roots[0]),
                   frozenset(l for l in lk if l[0][0] in roots[1])) for lk in linkings]
        _restrict_roots(linkings, roots[0])
    one = {h[0] for h in halves}
    two = {h[1] for h in halves}
    if len(one) * len(two) != len(linkings):
        raise _Fail("the linkings are not a product")
    return _binary(seq, rule, (one, two), config)


def _on_side(addr, r, roots, side):
    i, path = addr
    return i in roots or (i == r and path[:1] == side)


def _sequentialize(seq, linkings, config):
    if not linkings:
        raise _Fail("empty linking set")
    if (len(seq) == 2 and sx.dual_literals(seq[0], seq[1])
            and linkings == {frozenset([((0, ""), (1, ""))])}):
        return Proof(seq, Rule(AX, None, (0, 0)), ())
    graph = ng.build_graph(seq, linkings)
    groups = ng.root_components(graph)
    if len(groups) > 1:
        if not config.mix:
            raise _Fail("the graph is disconnected and mix is off")
        left = set(groups[0])
        sides = tuple(1 if i in left else 2 for i in range(len(seq)))
        return _product(seq, Rule(MIX, None, sides), linkings, config)
    net = LinkingSet(seq, linkings)
    failure = "no separating root"
    for r, f in enumerate(seq):
        if f.is_literal or not ng.separates(net, r, graph):
            continue
        try:
            return _last_rule(seq, linkings, r, graph, config)
        except _Fail as e:
            failure = str(e)
    raise _Fail(failure)


def _last_rule(seq, linkings, r, graph, config):
    f = seq[r]
    n = len(seq)
    ones = tuple(0 if i == r else 1 for i in range(n))
    if f.op == sx.PARR:
        rule = Rule(PARR, r, ones)
        return _binary(seq, rule, (linkings,), config)
    if f.op == sx.PLUS:
        kind = PLUS1 if (r, "L") in graph.vertices else PLUS2
        return _binary(seq, Rule(kind, r, ones), (linkings,), config)
    if f.op == sx.WITH:
        one = {lk for lk in linkings if any(_under(x, r, "L") for l in lk for x in l)}
        two = {lk for lk in linkings if any(_under(x, r, "R") for l in lk for x in l)}
        if one & two or (one | two) != set(linkings) or not one or not two:
            raise _Fail(f"the linkings do not split at the with-root {r}")
        sides = []
        for i, g in enumerate(seq):
            if i == r:
                sides.append(0)
            elif g.op != sx.CUT:
                sides.append(SHARED)
            else:
                in1 = any(x[0] == i for lk in one for l in lk for x in l)
                in2 = any(x[0] == i for lk in two for l in lk for x in l)
                sides.append(SHARED if in1 and in2 else 1 if in1 else 2)
        return _binary(seq, Rule(WITH, r, tuple(sides)), (one, two), config)
    split = ng.splits_at(graph, r)
    if split is None:
        raise _Fail(f"root {r} does not split the graph")
    left = set(split[0])
    sides = tuple(0 if i == r else 1 if i in left else 2 for i in range(n))
    kind = TENSOR if f.op == sx.TENSOR else STAR
    return _product(seq, Rule(kind, r, sides), linkings, config)


def _under(addr, r, side):
    return addr[0] == r and addr[1][:1] == side


# -- MALL proofs with cuts --------------------------------------------------

def lifting_nets(p, budget=10000):
    """Canonical nets of every lifting of a MALL proof; (set, truncated)."""
    ls, truncated = pf.liftings(p, Config(pf.MALL_STAR), budget)
    return {nets.canonical_net(nets.translate(l)) for l in ls}, truncated


class Equivalent(NamedTuple):
    trace: list


class NotEquivalent(NamedTuple):
    nets: tuple


class Unknown(NamedTuple):
    reason: str


def equivalence_classes(proofs, budget=10000):
    """Union-find over MALL proofs sharing a lifting net.

    Returns (classes as lists of indices, truncated).
    """
    uf = ng.UnionFind(range(len(proofs)))
    owner = {}
    truncated = False
    for i, p in enumerate(proofs):
        ns, t = lifting_nets(p, budget)
        truncated |= t
        for n in ns:
            key = nets.dumps(n)
            if key in owner:
                uf.union(owner[key], i)
            else:
                owner[key] = i
    return uf.groups(), truncated


def decide_equiv_mall(p, q, budget=10000, max_nodes=None, cut_formulas=None):
    """Decide proof-net equivalence of two MALL proofs with cuts.

    Cut-free proofs are compared by their nets directly.  Otherwise the
    comparison runs over every MALL proof of the conclusion within the
    node budget, using as cut formulas those of the two proofs.
    """
    if tuple(p.conclusion) != tuple(q.conclusion):
        raise ConversionError("different conclusions")
    cfg = Config(pf.MALL)
    if not (pf.count_kind(p, (CUT,)) or pf.count_kind(q, (CUT,))):
        a, b = nets.translate(p), nets.translate(q)
        if a != b:
            return NotEquivalent((a, b))
        return Equivalent(convert(p, q, Config(mix=False)))
    if p == q:
        return Equivalent([])
    ncuts = max(pf.count_kind(p, (CUT,)), pf.count_kind(q, (CUT,)))
    if cut_formulas is None:
        cut_formulas = sorted({r.rule.cutf for x in (p, q) for r in _nodes(x)
                               if r.rule.kind == CUT})
    if max_nodes is None:
        max_nodes = max(pf.size(p), pf.size(q))
    pool = pf.enumerate_proofs(p.conclusion, cfg, max_nodes, ncuts, cut_formulas)
    pool = list(dict.fromkeys([p, q] + pool))
    classes, truncated = equivalence_classes(pool, budget)
    where = {i: c for c, g in enumerate(classes) for i in g}
    if where[0] == where[1]:
        return Equivalent(_mall_path(pool, 0, 1, budget))
    if truncated:
        return Unknown("lifting budget exhausted")
    return NotEquivalent((frozenset(lifting_nets(p, budget)[0]),
                          frozenset(lifting_nets(q, budget)[0])))


def _nodes(p):
    yield p
    for s in p.premises:
        yield from _nodes(s)


def _matching_liftings(a, b, budget):
    """Liftings of ``a`` and ``b`` with a common net, cut pairs aligned."""
    la, _ = pf.liftings(a, Config(pf.MALL_STAR), budget)
    lb, _ = pf.liftings(b, Config(pf.MALL_STAR), budget)
    for x in la:
        nx = nets.translate(x)
        for y in lb:
            if x.conclusion != y.conclusion and sorted(x.conclusion) != sorted(y.conclusion):
                continue
            for perm in _cut_perms(y.conclusion, x.conclusion):
                z = pf.permute(y, perm)
                if nets.translate(z) == nx:
                    return x, z
    return None


def _cut_perms(have, want):
    n = len(want)
    opts = [[j for j in range(n) if have[j] == want[i]] for i in range(n)]
    for choice in itertools.product(*opts):
        if len(set(choice)) == n:
            yield list(choice)


def _mall_path(pool, i, j, budget):
    """MALL moves from pool[i] to pool[j] through shared lifting nets.

    Consecutive proofs on the path share a net; the MALL* conversion
    between the two liftings is projected move by move.
    """
    n = len(pool)
    nets_of = [lifting_nets(p, budget)[0] for p in pool]
    prev = {i: None}
    queue = deque([i])
    while queue:
        a = queue.popleft()
        if a == j:
            break
        for b in range(n):
            if b not in prev and nets_of[a] & nets_of[b]:
                prev[b] = a
                queue.append(b)
    chain = [j]
    while prev[chain[-1]] is not None:
        chain.append(prev[chain[-1]])
    chain.reverse()
    trace = []
    cfg = Config(pf.MALL)
    for a, b in zip(chain, chain[1:]):
        x, y = _matching_liftings(pool[a], pool[b], budget)
        moves = convert(x, y, Config(pf.MALL_STAR))
        seen = cm.replay(x, moves, Config(pf.MALL_STAR))
        cur = pool[a]
        for s in seen[1:]:
            nxt = pf.project(s)
            if nxt == cur:
                continue
            step = [m for m, r in cm.neighbours(cur, cfg) if r == nxt]
            if not step:
                raise Stuck("a projected step is not a MALL commutation")
            trace.append(step[0])
            cur = nxt
        if cur != pool[b]:
            raise Stuck("projection does not reach the next proof")
    return trace


class CutLinkingSet(NamedTuple):
    conclusion: tuple
    members: frozenset        # of (cut pairs, linking on cut pairs then conclusion)


def cut_linkings(p):
    """One cut linking per with-resolution of a MALL proof.

    Each surviving cut rule contributes a cut pair; links are addressed
    with the conclusion roots first and the cut pairs after them, and the
    cut pairs are put in canonical order.
    """
    n = len(p.conclusion)
    out = set()
    for _, axs in pf.and_resolutions(p):
        cuts = {}
        links = []
        for pos in axs:
            ends = [_track_cut(p, pos, (k, ""), cuts, n) for k in (0, 1)]
            links.append(nets.link(*ends))
        omega = [None] * len(cuts)
        for cpos, (idx, f) in cuts.items():
            omega[idx - n] = sx.cut(f)
        out.add(_canonical_member(p.conclusion, tuple(omega), frozenset(links)))
    return CutLinkingSet(tuple(p.conclusion), frozenset(out))


def _track_cut(p, pos, addr, cuts, n):
    chain = []
    q = p
    for k in pos:
        chain.append((q, k))
        q = q.premises[k]
    for depth in range(len(chain) - 1, -1, -1):
        q, k = chain[depth]
        roots, origins = pf.layout(q.conclusion, q.rule)[k]
        o = origins[addr[0]]
        if o[0] == "k":
            where = pos[:depth]
            if where not in cuts:
                cuts[where] = (n + len(cuts), q.rule.cutf)
            side = "L" if sx.cut(q.rule.cutf).left == roots[addr[0]] else "R"
            return cuts[where][0], side + addr[1]
        addr = pf.track(q.conclusion, q.rule, k, addr)
    return addr


def _canonical_member(conclusion, omega, links):
    n = len(conclusion)
    best = None
    order = sorted(range(len(omega)), key=lambda i: omega[i])
    groups = [list(g) for _, g in itertools.groupby(order, key=lambda i: omega[i])]
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = [i for g in choice for i in g]
        new = {old + n: new + n for new, old in enumerate(perm)}
        lk = sorted(nets.link((new.get(a[0], a[0]), a[1]), (new.get(b[0], b[0]), b[1]))
                    for a, b in links)
        if best is None or lk < best:
            best = lk
    cuts = tuple(sorted(omega))
    return cuts, frozenset(best)


class HarnessReport(NamedTuple):
    proofs: int
    moves: int
    violations: list          # direction (a): (proof, move, rewritten)
    candidates: list          # direction (b): (sequent, proofs) groups
    class_counts: dict        # sequent -> (cut-linking classes, commutation classes)

    def summary(self):
        return (f"proofs={self.proofs} moves={self.moves} "
                f"violations={len(self.violations)} candidates={len(self.candidates)}")


def conjecture_harness(corpus, config=Config(pf.MALL), max_extra=2):
    """Compare cut-linking sets with commutation connectivity.

    ``corpus`` is a list of (goal, proofs).  Commutation classes are
    computed by search over moves, allowing proofs at most ``max_extra``
    nodes larger than the largest corpus proof of the goal.
    """
    violations, candidates, counts = [], [], {}
    nproofs = nmoves = 0
    for goal, ps in corpus:
        nproofs += len(ps)
        limit = max(pf.size(p) for p in ps) + max_extra
        index = {p: i for i, p in enumerate(ps)}
        uf = ng.UnionFind(range(len(ps)))
        seen = {}
        for i, p in enumerate(ps):
            if p in seen:
                uf.union(seen[p], i)
                continue
            stack = [p]
            seen[p] = i
            while stack:
                a = stack.pop()
                ca = cut_linkings(a)
                for m, b in cm.neighbours(a, config):
                    nmoves += 1
                    if cut_linkings(b) != ca:
                        violations.append((a, m, b))
                    if pf.size(b) > limit:
                        continue
                    if b in seen:
                        uf.union(seen[b], i)
                        continue
                    seen[b] = i
                    if b in index:
                        uf.union(index[b], i)
                    stack.append(b)
        by_links = {}
        for i, p in enumerate(ps):
            by_links.setdefault(cut_linkings(p).members, []).append(i)
        comm = uf.groups()
        where = {i: c for c, g in enumerate(comm) for i in g}
        for group in by_links.values():
            if len({where[i] for i in group}) > 1:
                candidates.append((goal, [ps[i] for i in group]))
        counts[sx.show_sequent(goal)] = (len(by_links), len(comm))
    return HarnessReport(nproofs, nmoves, violations, candidates, counts)
