"""Proof trees for MALL-, MALL and the cut-retaining system MALL*.

Proofs are stored conclusion-down.  A node records its conclusion, the
rule it applies and its premise subproofs.  Premise sequents are never
stored: they are recomputed from the conclusion and the rule by
``layout``, and a subproof must prove exactly that (ordered) premise.

Premise layout convention: the context roots a premise receives keep
their relative order from the conclusion, and the new roots (children
of the principal formula, or the cut formula) are appended at the end.

The ``sides`` field of a rule gives, for every conclusion root, where it
goes: 0 for the principal root, 1 or 2 for one premise, 3 for both
premises of a with-rule (the shared context).  In MALL* only cut pairs
may be sent to one side of a with-rule.
"""

from __future__ import annotations

import itertools
import json
from typing import NamedTuple

from mallnets import syntax as sx
from mallnets.syntax import Formula, negate

AX, TENSOR, PARR, WITH, PLUS1, PLUS2 = "ax", "tensor", "parr", "with", "plus1", "plus2"
MIX, CUT, STAR = "mix", "cut", "star"
KINDS = (AX, TENSOR, PARR, WITH, PLUS1, PLUS2, MIX, CUT, STAR)

UNARY = (PARR, PLUS1, PLUS2)
SPLITTING = (TENSOR, STAR, MIX, CUT)
CONNECTIVE_OF = {TENSOR: sx.TENSOR, PARR: sx.PARR, WITH: sx.WITH,
                 PLUS1: sx.PLUS, PLUS2: sx.PLUS, STAR: sx.CUT}

MALL_MINUS, MALL, MALL_STAR = "mall-minus", "mall", "mall-star"
SHARED = 3


class Config(NamedTuple):
    system: str = MALL_MINUS
    mix: bool = False
    superimpose: bool = True     # False: the with-rule shares no cut pairs


class Rule(NamedTuple):
    kind: str
    principal: "int | None"
    sides: tuple
    cutf: "Formula | None" = None


class Proof(NamedTuple):
    conclusion: tuple
    rule: Rule
    premises: tuple = ()

    def __str__(self):
        return dumps(self)


class ProofError(ValueError):
    pass


def family(kind):
    """Rule family used by the commutation tables (plus1/plus2 fold)."""
    return "plus" if kind in (PLUS1, PLUS2) else kind


def layout(conclusion, rule):
    """Premise sequents of a rule application, with root origins.

    Returns a list with one ``(roots, origins)`` pair per premise.  An
    origin is ``('c', i)`` for conclusion root ``i``, ``('x', 'L'|'R')``
    for a child of the principal formula, or ``('k', 1|2)`` for the two
    sides of a MALL cut.
    """
    kind, pr, sides = rule.kind, rule.principal, rule.sides
    if kind == AX:
        return []
    f = conclusion[pr] if pr is not None else None
    nprem = 1 if kind in UNARY else 2
    out = []
    for k in range(1, nprem + 1):
        roots, origins = [], []
        for i, s in enumerate(sides):
            if s == k or s == SHARED:
                roots.append(conclusion[i])
                origins.append(("c", i))
        if kind == PARR:
            roots += [f.left, f.right]
            origins += [("x", "L"), ("x", "R")]
        elif kind == PLUS1 or (kind in (TENSOR, WITH, STAR) and k == 1):
            roots.append(f.left)
            origins.append(("x", "L"))
        elif kind == PLUS2 or (kind in (TENSOR, WITH, STAR) and k == 2):
            roots.append(f.right)
            origins.append(("x", "R"))
        elif kind == CUT:
            roots.append(rule.cutf if k == 1 else negate(rule.cutf))
            origins.append(("k", k))
        out.append((tuple(roots), tuple(origins)))
    return out


def premise_sequents(p):
    return [roots for roots, _ in layout(p.conclusion, p.rule)]


def track(conclusion, rule, k, addr):
    """Map a vertex of premise ``k`` (0-based) to the conclusion.

    Returns None for vertices of a MALL cut formula, which have no image.
    """
    roots, origins = layout(conclusion, rule)[k]
    i, path = addr
    if not 0 <= i < len(roots):
        raise KeyError(addr)
    sx.subformula(roots[i], path)
    kind, where = origins[i]
    if kind == "c":
        return where, path
    if kind == "x":
        return rule.principal, where + path
    return None


def track_leaf(p, k, addr):
    return track(p.conclusion, p.rule, k, addr)


def tracking_map(conclusion, rule, k):
    """Full vertex map of premise ``k`` as a dict."""
    roots, origins = layout(conclusion, rule)[k]
    out = {}
    for j, f in enumerate(roots):
        for path, _ in sx.vertices(f):
            out[(j, path)] = track(conclusion, rule, k, (j, path))
    return out


def size(p):
    return 1 + sum(size(q) for q in p.premises)


def count_kind(p, kinds):
    n = 1 if p.rule.kind in kinds else 0
    return n + sum(count_kind(q, kinds) for q in p.premises)


def node_at(p, pos):
    for k in pos:
        p = p.premises[k]
    return p


def positions(p, prefix=()):
    """All node positions, root first, depth first."""
    yield prefix
    for k, q in enumerate(p.premises):
        yield from positions(q, prefix + (k,))


def replace_at(p, pos, new):
    if not pos:
        return new
    k = pos[0]
    prem = list(p.premises)
    prem[k] = replace_at(prem[k], pos[1:], new)
    return Proof(p.conclusion, p.rule, tuple(prem))


def generated_root(p):
    """Conclusion root generated by the last rule, if any."""
    return p.rule.principal


# -- construction helpers ---------------------------------------------------

def make(conclusion, rule, premises):
    """Node constructor normalising the symmetric rules.

    A mix keeps conclusion root 0 in its first premise; a MALL cut puts
    the structurally smaller of the two cut formulas in premise 1.
    """
    conclusion = tuple(conclusion)
    if rule.kind == MIX and rule.sides and rule.sides[0] == 2:
        sides = tuple(3 - s for s in rule.sides)
        rule = rule._replace(sides=sides)
        premises = (premises[1], premises[0])
    if rule.kind == CUT and negate(rule.cutf) < rule.cutf:
        sides = tuple(3 - s for s in rule.sides)
        rule = rule._replace(sides=sides, cutf=negate(rule.cutf))
        premises = (premises[1], premises[0])
    return Proof(conclusion, rule, tuple(premises))


def permute(p, perm):
    """Reorder the conclusion: new root j is old root ``perm[j]``."""
    perm = tuple(perm)
    if perm == tuple(range(len(perm))):
        return p
    inv = {old: new for new, old in enumerate(perm)}
    conclusion = tuple(p.conclusion[o] for o in perm)
    rule = p.rule
    pr = inv[rule.principal] if rule.principal is not None else None
    sides = tuple(rule.sides[o] for o in perm)
    new_rule = rule._replace(principal=pr, sides=sides)
    old_layout = layout(p.conclusion, rule)
    new_layout = layout(conclusion, new_rule)
    prems = []
    for k, q in enumerate(p.premises):
        old_orig = old_layout[k][1]
        pos = {}
        for j, o in enumerate(old_orig):
            pos[o if o[0] != "c" else ("c", inv[o[1]])] = j
        sub = [pos[o] for o in new_layout[k][1]]
        prems.append(permute(q, sub))
    return make(conclusion, new_rule, prems)


def assemble(kind, roots, principal, parts, cutf=None):
    """Build a node from identified pieces.

    ``roots`` is the conclusion as a list of ``(id, formula)``;
    ``principal`` the id of the principal root (or None); ``parts`` a list
    of ``(proof, ids)`` pairs where ``ids`` names every conclusion root of
    that subproof, either by a conclusion id or by one of the extra
    tokens ``('x','L')``, ``('x','R')``, ``('k',1)``, ``('k',2)``.
    Subproofs are permuted to fit the premise layout.
    """
    conclusion = tuple(f for _, f in roots)
    idx = {rid: i for i, (rid, _) in enumerate(roots)}
    if len(idx) != len(roots):
        raise ProofError("duplicate root identities")
    sides = [0] * len(roots)
    seen = [set() for _ in roots]
    for k, (_, ids) in enumerate(parts, start=1):
        for rid in ids:
            if rid in idx:
                seen[idx[rid]].add(k)
    pr = idx[principal] if principal is not None else None
    for i in range(len(roots)):
        if i == pr:
            if seen[i]:
                raise ProofError("principal root reaches a premise")
            continue
        s = seen[i]
        if s == {1}:
            sides[i] = 1
        elif s == {2}:
            sides[i] = 2
        elif s == {1, 2} and kind == WITH:
            sides[i] = SHARED
        else:
            raise ProofError(f"root {i} is routed to premises {sorted(s)}")
    rule = Rule(kind, pr, tuple(sides), cutf)
    lay = layout(conclusion, rule)
    if len(lay) != len(parts):
        raise ProofError("wrong number of premises")
    prems = []
    for (q, ids), (proots, porig) in zip(parts, lay):
        want = [("c", o[1]) if o[0] == "c" else o for o in porig]
        have = {}
        for j, rid in enumerate(ids):
            key = ("c", idx[rid]) if rid in idx else rid
            have[key] = j
        try:
            perm = [have[w] for w in want]
        except KeyError as e:
            raise ProofError(f"premise does not fit: missing {e}") from None
        if len(perm) != len(ids):
            raise ProofError("premise has extra roots")
        prems.append(permute(q, perm))
    return make(conclusion, rule, prems)


def root_ids(p, prefix):
    return [(prefix, i) for i in range(len(p.conclusion))]


# -- checking ---------------------------------------------------------------

def check_proof(p, config=Config()):
    """Return a list of violations; empty means the proof is valid."""
    errors = []
    _check(p, config, (), errors)
    return errors


def is_valid(p, config=Config()):
    return not check_proof(p, config)


def validate(p, config=Config()):
    errs = check_proof(p, config)
    if errs:
        raise ProofError("; ".join(errs))
    return p


def _where(pos):
    return "node " + (".".join(str(k) for k in pos) or "root")


def _check(p, config, pos, errors):
    n0 = len(errors)
    where = _where(pos)
    c, rule = p.conclusion, p.rule
    kind = rule.kind
    try:
        for f in c:
            sx.check_formula(f)
    except ValueError as e:
        errors.append(f"{where}: {e}")
        return
    if config.system != MALL_STAR and any(f.op == sx.CUT for f in c):
        errors.append(f"{where}: cut pair outside MALL*")
        return
    if kind not in KINDS:
        errors.append(f"{where}: unknown rule {kind!r}")
        return
    if kind == MIX and not config.mix:
        errors.append(f"{where}: mix is disabled")
    if kind == CUT and config.system != MALL:
        errors.append(f"{where}: cut rule only exists in MALL")
    if kind == STAR and config.system != MALL_STAR:
        errors.append(f"{where}: cut-pair rule only exists in MALL*")
    if len(rule.sides) != len(c):
        errors.append(f"{where}: split has {len(rule.sides)} entries for {len(c)} roots")
        return
    if kind == AX:
        if not (len(c) == 2 and sx.dual_literals(c[0], c[1])):
            errors.append(f"{where}: axiom must conclude P, ~P; found {sx.show_sequent(c)}")
        if p.premises:
            errors.append(f"{where}: axiom with premises")
        return
    pr = rule.principal
    if kind in (MIX, CUT):
        if pr is not None:
            errors.append(f"{where}: {kind} has no principal formula")
            return
    else:
        if pr is None or not 0 <= pr < len(c):
            errors.append(f"{where}: missing principal formula")
            return
        if c[pr].op != CONNECTIVE_OF[kind]:
            errors.append(f"{where}: {kind} cannot generate {sx.show(c[pr])}")
            return
        if rule.sides[pr] != 0:
            errors.append(f"{where}: principal root is also routed to a premise")
    for i, s in enumerate(rule.sides):
        if i == pr:
            continue
        if kind in UNARY:
            ok = s == 1
        elif kind == WITH:
            ok = s == SHARED or (s in (1, 2) and c[i].op == sx.CUT)
            if ok and s == SHARED and c[i].op == sx.CUT and not config.superimpose:
                errors.append(f"{where}: with-rule superimposes a cut pair")
        else:
            ok = s in (1, 2)
        if not ok:
            errors.append(f"{where}: root {i} has invalid side {s}")
    if kind == MIX:
        if not (1 in rule.sides and 2 in rule.sides):
            errors.append(f"{where}: mix premises must be nonempty")
    if kind == CUT:
        if rule.cutf is None or not sx.is_cut_free(rule.cutf):
            errors.append(f"{where}: cut rule needs a cut-free cut formula")
            return
    if len(errors) > n0:
        return
    lay = layout(c, rule)
    if len(p.premises) != len(lay):
        errors.append(f"{where}: expected {len(lay)} premises, found {len(p.premises)}")
        return
    for k, ((roots, _), q) in enumerate(zip(lay, p.premises)):
        if tuple(q.conclusion) != roots:
            errors.append(f"{where}: premise {k + 1} expected {sx.show_sequent(roots)}; "
                          f"found {sx.show_sequent(q.conclusion)}")
            continue
        _check(q, config, pos + (k,), errors)


# -- with-resolutions -------------------------------------------------------

def and_resolutions(p):
    """Every with-resolution: (choices, surviving axiom positions).

    ``choices`` maps each surviving with-node position to 'L' or 'R'.
    """
    def walk(q, pos):
        kind = q.rule.kind
        if kind == AX:
            return [((), (pos,))]
        if kind == WITH:
            out = []
            for k, side in ((0, "L"), (1, "R")):
                for ch, axs in walk(q.premises[k], pos + (k,)):
                    out.append((((pos, side),) + ch, axs))
            return out
        acc = [((), ())]
        for k, sub in enumerate(q.premises):
            rs = walk(sub, pos + (k,))
            acc = [(c1 + c2, a1 + a2) for c1, a1 in acc for c2, a2 in rs]
        return acc

    return [(dict(ch), axs) for ch, axs in walk(p, ())]


def track_down(p, pos, addr):
    """Track a vertex of the node at ``pos`` to the root conclusion."""
    chain = []
    q = p
    for k in pos:
        chain.append((q, k))
        q = q.premises[k]
    for q, k in reversed(chain):
        addr = track(q.conclusion, q.rule, k, addr)
        if addr is None:
            return None
    return addr


# -- projection and liftings ------------------------------------------------

def project(p):
    """Erase every cut pair; cut-pair rules become MALL cuts."""
    c, rule = p.conclusion, p.rule
    keep = [i for i, f in enumerate(c) if f.op != sx.CUT]
    remap = {o: n for n, o in enumerate(keep)}
    prems = tuple(project(q) for q in p.premises)
    if rule.kind == STAR:
        sides = tuple(rule.sides[i] for i in keep)
        cutf = c[rule.principal].left
        return make(tuple(c[i] for i in keep), Rule(CUT, None, sides, cutf), prems)
    pr = remap[rule.principal] if rule.principal is not None else None
    sides = tuple(rule.sides[i] for i in keep)
    return make(tuple(c[i] for i in keep), rule._replace(principal=pr, sides=sides), prems)


def canonical_cut_order(p):
    """Sort the cut pairs of the conclusion after the cut-free roots.

    Identical cut pairs are interchangeable, so among the orders that
    sort them the one with the least serialization is chosen.
    """
    c = p.conclusion
    plain = [i for i, f in enumerate(c) if f.op != sx.CUT]
    cuts = sorted((i for i, f in enumerate(c) if f.op == sx.CUT), key=lambda i: c[i])
    groups = [list(g) for _, g in itertools.groupby(cuts, key=lambda i: c[i])]
    best = None
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = plain + [i for g in choice for i in g]
        q = permute(p, perm)
        if best is None or dumps(q) < dumps(best):
            best = q
    return best


def liftings(p, config=Config(MALL_STAR), budget=10000):
    """All MALL* proofs projecting to the MALL proof ``p``.

    The conclusion of a lifting lists the cut-free roots in the order of
    ``p`` followed by its cut pairs.  Returns (list, truncated).
    """
    state = {"n": 0, "truncated": False}

    def bump():
        state["n"] += 1
        if state["n"] > budget:
            state["truncated"] = True
            raise _Budget()

    def lift(q):
        c, rule = q.conclusion, q.rule
        kind = rule.kind
        if kind == AX:
            return [q]
        lay = layout(c, rule)
        subs = [lift(s) for s in q.premises]
        out = []
        roots_c = [(("c", i), f) for i, f in enumerate(c)]

        def part_ids(k, lq, tag):
            origins = lay[k][1]
            ids = []
            for j in range(len(lq.conclusion)):
                if j < len(origins):
                    o = origins[j]
                    ids.append(o if o[0] != "k" else ("x", "L" if o[1] == 1 else "R"))
                else:
                    ids.append((tag, j))
            return ids

        if kind in UNARY:
            for l1 in subs[0]:
                ids = part_ids(0, l1, "u")
                extra = [(rid, l1.conclusion[j]) for j, rid in enumerate(ids) if rid[0] == "u"]
                out.append(assemble(kind, roots_c + extra, ("c", rule.principal),
                                    [(l1, ids)]))
                bump()
        elif kind in (TENSOR, MIX, CUT):
            for l1 in subs[0]:
                for l2 in subs[1]:
                    ids1, ids2 = part_ids(0, l1, "a"), part_ids(1, l2, "b")
                    extra = [(rid, l1.conclusion[j]) for j, rid in enumerate(ids1) if rid[0] == "a"]
                    extra += [(rid, l2.conclusion[j]) for j, rid in enumerate(ids2) if rid[0] == "b"]
                    if kind == CUT:
                        newcut = ("new", 0)
                        r = assemble(STAR, roots_c + [(newcut, sx.cut(rule.cutf))] + extra,
                                     newcut, [(l1, ids1), (l2, ids2)])
                    else:
                        pr = ("c", rule.principal) if rule.principal is not None else None
                        r = assemble(kind, roots_c + extra, pr, [(l1, ids1), (l2, ids2)])
                    out.append(r)
                    bump()
        elif kind == WITH:
            for l1 in subs[0]:
                for l2 in subs[1]:
                    ids1, ids2 = part_ids(0, l1, "a"), part_ids(1, l2, "b")
                    cuts1 = [j for j, rid in enumerate(ids1) if rid[0] == "a"]
                    cuts2 = [j for j, rid in enumerate(ids2) if rid[0] == "b"]
                    for match in _matchings(cuts1, cuts2, l1.conclusion, l2.conclusion,
                                            config.superimpose):
                        i1, i2 = list(ids1), list(ids2)
                        for j1, j2 in match:
                            i2[j2] = i1[j1]
                        extra = [(i1[j], l1.conclusion[j]) for j in cuts1]
                        matched2 = {j2 for _, j2 in match}
                        extra += [(i2[j], l2.conclusion[j]) for j in cuts2 if j not in matched2]
                        out.append(assemble(WITH, roots_c + extra, ("c", rule.principal),
                                            [(l1, i1), (l2, i2)]))
                        bump()
        return out

    try:
        raw = lift(p)
    except _Budget:
        raw = []
    seen = {}
    for q in raw:
        q = canonical_cut_order(q)
        seen.setdefault(dumps(q), q)
    return [seen[k] for k in sorted(seen)], state["truncated"]


class _Budget(Exception):
    pass


def _matchings(cuts1, cuts2, c1, c2, allow):
    """Partial matchings pairing identical cut pairs of two premises."""
    if not allow:
        yield []
        return

    def rec(i, used):
        if i == len(cuts1):
            yield []
            return
        yield from rec(i + 1, used)
        for j in cuts2:
            if j not in used and c1[cuts1[i]] == c2[j]:
                for rest in rec(i + 1, used | {j}):
                    yield [(cuts1[i], j)] + rest

    yield from rec(0, frozenset())


# -- enumeration ------------------------------------------------------------

def formulas_up_to(atoms, max_leaves):
    """All cut-free formulas over ``atoms`` with at most ``max_leaves`` leaves."""
    by_size = {1: [f(a) for a in atoms for f in (sx.atom, sx.natom)]}
    for n in range(2, max_leaves + 1):
        acc = []
        for k in range(1, n):
            for a in by_size[k]:
                for b in by_size[n - k]:
                    for op in (sx.TENSOR, sx.PARR, sx.WITH, sx.PLUS):
                        acc.append(Formula(op, "", a, b))
        by_size[n] = acc
    return [f for n in sorted(by_size) for f in by_size[n]]


def _splits(idx, require_both=False, pin_first=False):
    n = len(idx)
    for bits in itertools.product((1, 2), repeat=n):
        if pin_first and n and bits[0] != 1:
            continue
        if require_both and not (1 in bits and 2 in bits):
            continue
        yield dict(zip(idx, bits))


class Enumerator:
    """Bounded exhaustive backward proof search with memoisation."""

    def __init__(self, config=Config(), max_cuts=0, cut_formulas=()):
        self.config = config
        self.max_cuts = max_cuts if config.system == MALL else 0
        self.cut_formulas = [f for f in cut_formulas if not negate(f) < f]
        self.memo = {}

    def proofs(self, goal, max_nodes):
        """All proofs of ``goal`` with at most ``max_nodes`` rule nodes."""
        res = self._search(tuple(goal), max_nodes, self.max_cuts)
        return [p for _, _, p in res]

    def _search(self, seq, budget, cuts):
        key = (seq, budget, cuts)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = []
        if budget >= 1 and sx.sequent_lower_bound(seq) <= budget:
            self._expand(seq, budget, cuts, out)
        self.memo[key] = out
        return out

    def _binary(self, seq, rule, budget, cuts, out, extra_cut=0):
        lay = layout(seq, rule)
        (p1, _), (p2, _) = lay
        lb2 = sx.sequent_lower_bound(p2)
        room = cuts - extra_cut
        for s1, c1, q1 in self._search(p1, budget - 1 - lb2, room):
            for s2, c2, q2 in self._search(p2, budget - 1 - s1, room - c1):
                out.append((1 + s1 + s2, c1 + c2 + extra_cut, make(seq, rule, (q1, q2))))

    def _expand(self, seq, budget, cuts, out):
        cfg = self.config
        n = len(seq)
        if n == 2 and sx.dual_literals(seq[0], seq[1]):
            out.append((1, 0, Proof(seq, Rule(AX, None, (0, 0)), ())))
        for i, f in enumerate(seq):
            if f.is_literal:
                continue
            others = [j for j in range(n) if j != i]
            if f.op == sx.PARR or f.op == sx.PLUS:
                kinds = (PARR,) if f.op == sx.PARR else (PLUS1, PLUS2)
                sides = tuple(0 if j == i else 1 for j in range(n))
                for kind in kinds:
                    rule = Rule(kind, i, sides)
                    (prem, _), = layout(seq, rule)
                    for s, c, q in self._search(prem, budget - 1, cuts):
                        out.append((s + 1, c, Proof(seq, rule, (q,))))
            elif f.op == sx.WITH:
                cut_roots = [j for j in others if seq[j].op == sx.CUT]
                opts = (SHARED, 1, 2) if cfg.superimpose else (1, 2)
                for choice in itertools.product(opts, repeat=len(cut_roots)):
                    sides = [0 if j == i else SHARED for j in range(n)]
                    for j, s in zip(cut_roots, choice):
                        sides[j] = s
                    rule = Rule(WITH, i, tuple(sides))
                    self._binary(seq, rule, budget, cuts, out)
            elif f.op in (sx.TENSOR, sx.CUT):
                kind = TENSOR if f.op == sx.TENSOR else STAR
                for sp in _splits(others):
                    sides = tuple(0 if j == i else sp[j] for j in range(n))
                    self._binary(seq, Rule(kind, i, sides), budget, cuts, out)
        if cfg.mix and n >= 2:
            for sp in _splits(list(range(n)), require_both=True, pin_first=True):
                sides = tuple(sp[j] for j in range(n))
                self._binary(seq, Rule(MIX, None, sides), budget, cuts, out)
        if cuts > 0:
            for cf in self.cut_formulas:
                extra = sx.lower_bound(cf) + sx.lower_bound(negate(cf))
                if 2 + (extra + sum(sx.lower_bound(f) for f in seq) + 1) // 2 > budget + 1:
                    continue
                for sp in _splits(list(range(n))):
                    sides = tuple(sp[j] for j in range(n))
                    self._binary(seq, Rule(CUT, None, sides, cf), budget, cuts, out, extra_cut=1)


def enumerate_proofs(goal, config=Config(), max_nodes=8, max_cuts=0, cut_formulas=()):
    """Every proof of ``goal`` with at most ``max_nodes`` rule nodes."""
    return Enumerator(config, max_cuts, cut_formulas).proofs(goal, max_nodes)


# -- serialization ----------------------------------------------------------

def to_record(p):
    rule = p.rule
    rec = {"rule": rule.kind}
    if rule.principal is not None:
        rec["principal"] = sx.show_addr((rule.principal, ""))
    if rule.kind == CUT:
        rec["cut"] = sx.show(rule.cutf)
    if rule.kind in (TENSOR, STAR, MIX, CUT):
        rec["split"] = {str(i): s for i, s in enumerate(rule.sides) if s in (1, 2)}
    elif rule.kind == WITH:
        rec["split"] = {str(i): s for i, s in enumerate(rule.sides) if s in (1, 2)}
        rec["superimpose"] = _superimposed(p)
    if p.premises:
        rec["premises"] = [to_record(q) for q in p.premises]
    return rec


def _superimposed(p):
    (r1, o1), (r2, o2) = layout(p.conclusion, p.rule)
    pos2 = {o: j for j, o in enumerate(o2)}
    out = []
    for j, o in enumerate(o1):
        if o[0] == "c" and p.conclusion[o[1]].op == sx.CUT and o in pos2:
            out.append([j, pos2[o]])
    return out


def from_record(conclusion, rec):
    kind = rec["rule"]
    if kind not in KINDS:
        raise ProofError(f"unknown rule {kind!r}")
    n = len(conclusion)
    pr = None
    if "principal" in rec:
        i, path = sx.parse_addr(rec["principal"])
        if path:
            raise ProofError("principal must address a root")
        pr = i
    split = {int(k): int(v) for k, v in rec.get("split", {}).items()}
    if any(not 0 <= k < n for k in split):
        raise ProofError("split names a missing root")
    if kind == AX:
        sides = (0,) * n
    elif kind in UNARY:
        sides = tuple(0 if i == pr else 1 for i in range(n))
    elif kind == WITH:
        sides = tuple(0 if i == pr else split.get(i, SHARED) for i in range(n))
    else:
        sides = tuple(0 if i == pr else split.get(i, 0) for i in range(n))
    cutf = sx.parse_formula(rec["cut"]) if "cut" in rec else None
    rule = Rule(kind, pr, sides, cutf)
    if pr is not None and not 0 <= pr < n:
        raise ProofError("principal out of range")
    lay = layout(conclusion, rule) if kind != AX else []
    recs = rec.get("premises", [])
    if len(recs) != len(lay):
        raise ProofError(f"{kind}: expected {len(lay)} premises, found {len(recs)}")
    prems = tuple(from_record(roots, r) for (roots, _), r in zip(lay, recs))
    p = Proof(tuple(conclusion), rule, prems)
    if kind == WITH and "superimpose" in rec and rec["superimpose"] != _superimposed(p):
        raise ProofError("superimpose field disagrees with split")
    return p


def dumps(p):
    """Canonical text: the conclusion on a header line, then one JSON record."""
    return ("sequent: " + sx.show_sequent(p.conclusion) + "\n"
            + json.dumps(to_record(p), sort_keys=True) + "\n")


def dumps_pretty(p):
    return ("sequent: " + sx.show_sequent(p.conclusion) + "\n"
            + json.dumps(to_record(p), sort_keys=True, indent=2) + "\n")


def loads(text):
    lines = text.strip().split("\n", 1)
    head = lines[0]
    if not head.startswith("sequent:"):
        raise ProofError("proof file must start with 'sequent:'")
    seq = sx.parse_sequent(head[len("sequent:"):])
    if len(lines) < 2:
        raise ProofError("missing proof record")
    try:
        rec = json.loads(lines[1])
    except json.JSONDecodeError as e:
        raise ProofError(f"bad proof record: {e}") from None
    return from_record(seq, rec)


def render(p, indent=0):
    """Indented human-readable tree, conclusion first."""
    pad = "  " * indent
    label = p.rule.kind
    if p.rule.kind == CUT:
        label += f"[{sx.show(p.rule.cutf)}]"
    lines = [f"{pad}{label}: {sx.show_sequent(p.conclusion)}"]
    for q in p.premises:
        lines.append(render(q, indent + 1))
    return "\n".join(lines)
