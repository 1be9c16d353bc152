"""Schematic rules and the systematic generation of rule commutations.

Rules are read as abstract rules over formula variables (``A``, negated
``~A``) and sequent variables (``$G`` general, ``%O`` cut-only).  A rule
commutation is an ordered pair of two-level proofs deriving the same
pure rule: one with the lower rule at the root and applications of the
upper rule directly above it, and one the other way round.

``generate_commutations`` searches backwards from every candidate
conclusion.  Context variables are not enumerated one by one: a
context variable is characterised by the set of hypotheses it reaches,
so a proof skeleton only records which hypothesis sets a variable of
each type can be routed to, and the most general commutation keeps one
variable per set reachable on both sides.

Proof text syntax, used for the transcribed catalogue and for output:

    [A1, $G]                       hypothesis
    tensor{A1 * A2}(P; Q)          rule with its principal formula
    mix(P; Q)                      mix has no principal
    star{A # ~A}(P; Q)             cut pair rule; cut{A # ~A} for MALL cut
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from typing import NamedTuple

from mallnets import syntax as sx
from mallnets.proofs import (CUT, MIX, PARR, PLUS1, PLUS2, STAR, TENSOR, WITH,
                             MALL, MALL_MINUS, MALL_STAR, family)
from mallnets.syntax import Formula

VAR, NVAR = "var", "nvar"

CONNECTIVE = {PARR: sx.PARR, TENSOR: sx.TENSOR, PLUS1: sx.PLUS, PLUS2: sx.PLUS,
              WITH: sx.WITH, STAR: sx.CUT, CUT: sx.CUT, MIX: None}


# -- expressions -------------------------------------------------------------

class SVar(NamedTuple):
    name: str
    cut_only: bool = False

    def __str__(self):
        return ("%" if self.cut_only else "$") + self.name


def fvar(name):
    return Formula(VAR, name)


def is_var(x):
    return isinstance(x, Formula) and x.op in (VAR, NVAR)


def neg(e):
    if e.op == VAR:
        return Formula(NVAR, e.name)
    if e.op == NVAR:
        return Formula(VAR, e.name)
    if e.is_literal:
        return sx.negate(e)
    if e.op == sx.CUT:
        raise ValueError("a cut pair has no dual")
    return Formula(sx.DUAL[e.op], "", neg(e.left), neg(e.right))


def cut_of(a):
    b = neg(a)
    a, b = sorted((a, b))
    return Formula(sx.CUT, "", a, b)


def show_expr(e, top=True):
    if isinstance(e, SVar):
        return str(e)
    if e.op == VAR:
        return e.name
    if e.op == NVAR:
        return "~" + e.name
    if e.is_literal:
        return sx.show(e)
    s = f"{show_expr(e.left, False)} {sx.SYMBOL[e.op]} {show_expr(e.right, False)}"
    return s if top else f"({s})"


def _ikey(x):
    if isinstance(x, SVar):
        return (0, x.cut_only, x.name)
    return (1, show_expr(x))


def seq_expr(items):
    """A sequent expression: a sorted tuple of items (a multiset)."""
    return tuple(sorted(items, key=_ikey))


def show_seq(items):
    return ", ".join(show_expr(x) for x in items)


def _from_formula(f):
    if f.op == sx.ATOM:
        return fvar(f.name)
    if f.op == sx.NATOM:
        return Formula(NVAR, f.name)
    a, b = _from_formula(f.left), _from_formula(f.right)
    if f.op == sx.CUT:
        return cut_of(a)
    return Formula(f.op, "", a, b)


def parse_expr(text):
    """A formula expression; identifiers are formula variables."""
    return _from_formula(sx.parse_formula(text))


def _split_top(text, sep):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_seq(text):
    items = []
    for part in _split_top(text, ","):
        part = part.strip()
        if not part:
            continue
        if part[0] in "$%":
            if not re.fullmatch(r"[$%][A-Za-z_][A-Za-z0-9_]*", part):
                raise ValueError(f"bad sequent variable {part!r}")
            items.append(SVar(part[1:], part[0] == "%"))
        else:
            items.append(parse_expr(part))
    return seq_expr(items)


def _tokens(items):
    out = []

    def walk(e):
        if isinstance(e, SVar):
            out.append(("s", e.name))
        elif e.op in (VAR, NVAR):
            out.append((e.op, e.name))
        elif not e.is_literal:
            walk(e.left)
            walk(e.right)

    for x in items:
        walk(x)
    return out


def _has_literal(e):
    if isinstance(e, SVar) or e.op in (VAR, NVAR):
        return False
    if e.is_literal:
        return True
    return _has_literal(e.left) or _has_literal(e.right)


# -- rules and substitutions -------------------------------------------------

class AbstractRule(NamedTuple):
    premises: tuple          # sequent expressions, sorted; a multiset until collapsed
    conclusion: tuple

    def __str__(self):
        return " ; ".join(f"[{show_seq(p)}]" for p in self.premises) + \
            f" / {show_seq(self.conclusion)}"


def make_rule(premises, conclusion):
    prem = [seq_expr(p) for p in premises]
    return AbstractRule(tuple(sorted(prem, key=lambda p: [_ikey(x) for x in p])),
                        seq_expr(conclusion))


def collapse(r):
    """Replace the premise multiset by its set of elements."""
    return AbstractRule(tuple(sorted(set(r.premises), key=lambda p: [_ikey(x) for x in p])),
                        r.conclusion)


def is_pure(r):
    """Premises built from variables only, each occurring exactly once in
    the conclusion.  A rule mentioning literals is a template (the axiom),
    not a pure rule."""
    for p in r.premises:
        for x in p:
            if not (isinstance(x, SVar) or is_var(x)):
                return False
    if any(not isinstance(x, SVar) and _has_literal(x) for x in r.conclusion):
        return False
    counts = Counter(_tokens(r.conclusion))
    return all(counts[t] == 1 for p in r.premises for t in _tokens(p))


class SubstitutionError(ValueError):
    pass


class Substitution:
    """Formula variable names to expressions, sequent variable names to
    sequent expressions; unmapped variables stay put."""

    def __init__(self, formulas=None, sequents=None):
        self.formulas = {k: parse_expr(v) if isinstance(v, str) else v
                         for k, v in (formulas or {}).items()}
        self.sequents = {k: parse_seq(v) if isinstance(v, str) else seq_expr(v)
                         for k, v in (sequents or {}).items()}

    def is_closed(self):
        return (all(not _tokens([e]) for e in self.formulas.values())
                and all(not _tokens(s) for s in self.sequents.values()))


def _cut_item(x):
    return (isinstance(x, SVar) and x.cut_only) or (isinstance(x, Formula) and x.op == sx.CUT)


def _sub_expr(s, e):
    if e.op == VAR:
        return s.formulas.get(e.name, e)
    if e.op == NVAR:
        img = s.formulas.get(e.name)
        return e if img is None else neg(img)
    if e.is_literal:
        return e
    if e.op == sx.CUT:
        return cut_of(_sub_expr(s, e.left))
    return Formula(e.op, "", _sub_expr(s, e.left), _sub_expr(s, e.right))


def _sub_items(s, items):
    out = []
    for x in items:
        if isinstance(x, SVar):
            img = s.sequents.get(x.name)
            if img is None:
                out.append(x)
                continue
            if x.cut_only and not all(_cut_item(y) for y in img):
                raise SubstitutionError(f"cut-only {x} bound to {show_seq(img)}")
            out.extend(img)
        else:
            out.append(_sub_expr(s, x))
    return seq_expr(out)


def substitute(s, x):
    """Apply ``s`` to a formula expression, sequent expression, abstract
    rule or proof.  Rule premises come back as a multiset."""
    if isinstance(x, ABProof):
        return ABProof(x.rule, _sub_items(s, x.label),
                       tuple(substitute(s, k) for k in x.premises),
                       None if x.principal is None else _sub_expr(s, x.principal))
    if isinstance(x, AbstractRule):
        return make_rule([_sub_items(s, p) for p in x.premises], _sub_items(s, x.conclusion))
    if isinstance(x, SVar):
        return _sub_items(s, [x])
    if isinstance(x, Formula):
        return _sub_expr(s, x)
    return _sub_items(s, x)


def system_rules(system=MALL_MINUS, mix=False):
    """The rules of a system as abstract rules (the axiom as a template on P)."""
    G, D, O1, O2 = SVar("G"), SVar("D"), SVar("O1", True), SVar("O2", True)
    A, B = fvar("A"), fvar("B")
    p = sx.atom("P")
    out = {
        "ax": make_rule([], [p, sx.negate(p)]),
        PARR: make_rule([[G, A, B]], [G, Formula(sx.PARR, "", A, B)]),
        TENSOR: make_rule([[G, A], [B, D]], [G, Formula(sx.TENSOR, "", A, B), D]),
        PLUS1: make_rule([[G, A]], [G, Formula(sx.PLUS, "", A, B)]),
        PLUS2: make_rule([[G, B]], [G, Formula(sx.PLUS, "", A, B)]),
    }
    w = Formula(sx.WITH, "", A, B)
    if system == MALL_STAR:
        out[WITH] = make_rule([[O1, G, A], [O2, G, B]], [O1, O2, G, w])
        out[STAR] = make_rule([[G, A], [neg(A), D]], [G, cut_of(A), D])
    else:
        out[WITH] = make_rule([[G, A], [G, B]], [G, w])
    if system == MALL:
        out[CUT] = make_rule([[G, A], [neg(A), D]], [G, D])
    if mix:
        out[MIX] = make_rule([[G], [D]], [G, D])
    return out


# -- two-level proofs ----------------------------------------------------------

class ABProof(NamedTuple):
    rule: "str | None"        # None marks a hypothesis
    label: tuple
    premises: tuple = ()
    principal: "Formula | None" = None

    @property
    def is_hypothesis(self):
        return self.rule is None


def hyp(items):
    return ABProof(None, seq_expr(items))


def hypotheses(p):
    if p.is_hypothesis:
        return [p.label]
    return [h for k in p.premises for h in hypotheses(k)]


def derived_rule(p):
    return collapse(make_rule(hypotheses(p), p.label))


def is_ab_proof(p, alpha, beta):
    """Root an application of ``beta``, every other rule node a child of
    the root applying ``alpha``."""
    if p.rule != beta:
        return False
    return all(k.is_hypothesis or (k.rule == alpha and all(h.is_hypothesis for h in k.premises))
               for k in p.premises)


def is_instance(kind, label, children, principal, system=MALL_MINUS):
    """Is (children / label) an instance of ``kind`` with this principal?"""
    lab = Counter(label)
    kids = [Counter(c) for c in children]
    if kind == MIX:
        return len(kids) == 2 and lab == kids[0] + kids[1]
    if principal is None or principal.op != CONNECTIVE.get(kind):
        return False
    l, r = principal.left, principal.right
    if kind == CUT:
        if len(kids) != 2:
            return False
        for a, b in ((0, 1), (1, 0)):
            if kids[a][l] and kids[b][r] and \
                    lab == (kids[a] - Counter([l])) + (kids[b] - Counter([r])):
                return True
        return False
    if not lab[principal]:
        return False
    rest = lab - Counter([principal])
    if kind in (PARR, PLUS1, PLUS2):
        args = {PARR: [l, r], PLUS1: [l], PLUS2: [r]}[kind]
        return len(kids) == 1 and kids[0] == rest + Counter(args)
    if len(kids) != 2:
        return False
    for a, b in ((0, 1), (1, 0)):
        if not (kids[a][l] and kids[b][r]):
            continue
        c1, c2 = kids[a] - Counter([l]), kids[b] - Counter([r])
        if kind in (TENSOR, STAR):
            if rest == c1 + c2:
                return True
            continue
        ok = True
        for x in set(c1) | set(c2) | set(rest):
            g = c1[x] + c2[x] - rest[x]
            if g < 0 or g > min(c1[x], c2[x]):
                ok = False
            elif (c1[x] > g or c2[x] > g) and not (system == MALL_STAR and _cut_item(x)):
                ok = False
        if ok:
            return True
    return False


def check_proof(p, system=MALL_MINUS):
    if p.is_hypothesis:
        return True
    return (is_instance(p.rule, p.label, [k.label for k in p.premises], p.principal, system)
            and all(check_proof(k, system) for k in p.premises))


def _derive(kind, principal, kids, system):
    """The conclusion of ``kind`` applied to premise labels ``kids``."""
    cs = [Counter(k) for k in kids]
    if kind == MIX:
        lab = cs[0] + cs[1]
    elif kind in (PARR, PLUS1, PLUS2):
        args = {PARR: [principal.left, principal.right], PLUS1: [principal.left],
                PLUS2: [principal.right]}[kind]
        lab = cs[0] - Counter(args) + Counter([principal])
    else:
        l, r = principal.left, principal.right
        if not (cs[0][l] and cs[1][r]):
            cs.reverse()
        c1, c2 = cs[0] - Counter([l]), cs[1] - Counter([r])
        if kind == WITH:
            lab = (c1 | c2) + Counter([principal])
        elif kind == CUT:
            lab = c1 + c2
        else:
            lab = c1 + c2 + Counter([principal])
    label = seq_expr(lab.elements())
    if not is_instance(kind, label, kids, principal, system):
        raise ValueError(f"{kind} does not apply to {' ; '.join(show_seq(k) for k in kids)}")
    return label


def _match(s, i, open_, close):
    depth = 0
    for j in range(i, len(s)):
        if s[j] == open_:
            depth += 1
        elif s[j] == close:
            depth -= 1
            if depth == 0:
                return j
    raise ValueError(f"unbalanced {open_!r}")


def _parse_proof(s, system):
    s = s.lstrip()
    if s.startswith("["):
        j = _match(s, 0, "[", "]")
        return hyp(parse_seq(s[1:j])), s[j + 1:]
    m = re.match(r"[a-z0-9]+", s)
    if not m:
        raise ValueError(f"expected a rule name at {s[:20]!r}")
    kind, s = m.group(0), s[m.end():].lstrip()
    principal = None
    if s.startswith("{"):
        j = _match(s, 0, "{", "}")
        principal, s = parse_expr(s[1:j]), s[j + 1:].lstrip()
    if not s.startswith("("):
        raise ValueError(f"expected '(' after {kind}")
    s = s[1:]
    kids = []
    while True:
        kid, s = _parse_proof(s, system)
        kids.append(kid)
        s = s.lstrip()
        if s.startswith(";"):
            s = s[1:]
        elif s.startswith(")"):
            s = s[1:]
            break
        else:
            raise ValueError(f"expected ';' or ')' at {s[:20]!r}")
    label = _derive(kind, principal, [k.label for k in kids], system)
    return ABProof(kind, label, tuple(kids), principal), s


def parse_proof(text, system=MALL_MINUS):
    p, rest = _parse_proof(text, system)
    if rest.strip():
        raise ValueError(f"trailing text {rest.strip()[:20]!r}")
    return p


def show_proof(p):
    if p.is_hypothesis:
        return f"[{show_seq(p.label)}]"
    head = p.rule if p.principal is None else f"{p.rule}{{{show_expr(p.principal)}}}"
    return f"{head}({'; '.join(show_proof(k) for k in p.premises)})"


# -- commutations ------------------------------------------------------------

class Commutation(NamedTuple):
    left: ABProof      # the lower rule at the root
    right: ABProof     # the upper rule at the root

    @property
    def rule(self):
        return derived_rule(self.left)


def comm_id(c):
    from mallnets.commute import TABLE
    lo, up = family(c.left.rule), family(c.right.rule)
    if (up, lo) in TABLE:
        return f"{up}/{lo}"
    return f"{lo}/{up}"


def is_local(c):
    """Both sides non-repeating: no two hypotheses carry the same label."""
    return all(len(set(hs)) == len(hs) for hs in (hypotheses(c.left), hypotheses(c.right)))


def _shape(e):
    if e.op in (VAR, NVAR):
        return "v"
    if e.op == sx.CUT:
        return "c"
    return f"({_shape(e.left)}{sx.SYMBOL[e.op]}{_shape(e.right)})"


def _visit(e, fmap, flip=False):
    if e.op in (VAR, NVAR):
        if e.name not in fmap:
            fmap[e.name] = (f"x{len(fmap) + 1}", e.op == NVAR)
        return
    if e.op == sx.CUT:
        a, b = (e.right, e.left) if flip else (e.left, e.right)
        _visit(a, fmap)
        _visit(b, fmap)
        return
    _visit(e.left, fmap)
    _visit(e.right, fmap)


def _ren(e, fmap):
    if e.op in (VAR, NVAR):
        name, flip = fmap[e.name]
        return Formula(VAR if (e.op == VAR) != flip else NVAR, name)
    if e.op == sx.CUT:
        return cut_of(_ren(e.left, fmap))
    return Formula(e.op, "", _ren(e.left, fmap), _ren(e.right, fmap))


def _namings(c):
    """Every renaming consistent with the canonical naming order."""
    rule = derived_rule(c.left)
    forms = [x for x in rule.conclusion if not isinstance(x, SVar)]
    for p in (c.left, c.right):
        stack = [p]
        while stack:
            n = stack.pop()
            if n.rule == CUT:
                forms.append(n.principal)
            stack.extend(n.premises)
    groups = {}
    for f in forms:
        groups.setdefault(_shape(f), []).append(f)
    glist = [groups[k] for k in sorted(groups)]
    for order in itertools.product(*(itertools.permutations(g) for g in glist)):
        seq = [f for g in order for f in g]
        ncut = sum(1 for f in seq if f.op == sx.CUT)
        for flips in itertools.product((False, True), repeat=ncut):
            fmap = {}
            it = iter(flips)
            for f in seq:
                _visit(f, fmap, next(it) if f.op == sx.CUT else False)
            yield from _hyp_namings(rule, fmap)


def _hyp_namings(rule, fmap0):
    def known(h):
        return tuple(sorted(show_expr(_ren(x, fmap0)) for x in h
                            if is_var(x) and x.name in fmap0))

    def key(h):
        return (known(h), sum(1 for x in h if is_var(x) and x.name not in fmap0),
                sum(1 for x in h if isinstance(x, SVar) and not x.cut_only),
                sum(1 for x in h if isinstance(x, SVar) and x.cut_only))

    hs = sorted(rule.premises, key=key)
    groups = [list(g) for _, g in itertools.groupby(hs, key=key)]
    for order in itertools.product(*(itertools.permutations(g) for g in groups)):
        ordered = [h for g in order for h in g]
        unknown = [sorted({x.name for x in h if is_var(x) and x.name not in fmap0})
                   for h in ordered]
        for perms in itertools.product(*(itertools.permutations(u) for u in unknown)):
            fmap = dict(fmap0)
            for h, names in zip(ordered, perms):
                for n in names:
                    if n not in fmap:
                        pol = next(x.op for x in h if is_var(x) and x.name == n)
                        fmap[n] = (f"x{len(fmap) + 1}", pol == NVAR)
            smap = {}
            svars = sorted({x for h in ordered for x in h if isinstance(x, SVar)} |
                           {x for x in rule.conclusion if isinstance(x, SVar)})
            used = Counter()
            for v in sorted(svars, key=lambda v: (v.cut_only, tuple(
                    i for i, h in enumerate(ordered) if v in h), v.name)):
                sig = "".join(str(i + 1) for i, h in enumerate(ordered) if v in h)
                base = ("O" if v.cut_only else "G") + (sig or "0")
                used[base] += 1
                smap[v] = SVar(base if used[base] == 1 else f"{base}_{used[base]}", v.cut_only)
            yield fmap, smap


def _rename_proof(p, fmap, smap):
    label = seq_expr(smap[x] if isinstance(x, SVar) else _ren(x, fmap) for x in p.label)
    return ABProof(p.rule, label, tuple(_rename_proof(k, fmap, smap) for k in p.premises),
                   None if p.principal is None else _ren(p.principal, fmap))


def _render(p):
    if p.is_hypothesis:
        return ("", "", tuple(show_expr(x) for x in p.label), ())
    return (p.rule, "" if p.principal is None else show_expr(p.principal),
            tuple(show_expr(x) for x in p.label), tuple(sorted(_render(k) for k in p.premises)))


def canonical(c):
    """(key, renamed commutation): equal keys iff the two commutations
    agree up to renaming variables and reading the pair backwards."""
    best = None
    for fmap, smap in _namings(c):
        l, r = _rename_proof(c.left, fmap, smap), _rename_proof(c.right, fmap, smap)
        k1, k2 = _render(l), _render(r)
        key = (k1, k2) if k1 <= k2 else (k2, k1)
        if best is None or key < best[0]:
            best = (key, Commutation(l, r))
    return best


def key_of(c):
    return canonical(c)[0]


def same_proof(p, q):
    return _render(p) == _render(q)


# -- generation ----------------------------------------------------------------

class Bounds(NamedTuple):
    max_upper: int = 2          # applications of the upper rule above the lower
    max_connectives: int = 3    # connective occurrences in a candidate conclusion


class Generation(NamedTuple):
    pairs: tuple                # Commutation, left side an alpha-beta proof
    truncated: bool             # the bounds cut off part of the search


def _trees(kinds):
    """Formula shapes with one or two levels of connectives (None = variable)."""
    flat = [k for k in kinds if k != sx.CUT]
    one = [(k, None, None) for k in flat]
    out = [(k, 1) for k in one]
    if sx.CUT in kinds:
        out.append(((sx.CUT, None, None), 1))
    for k in flat:
        for a in [None] + one:
            for b in [None] + one:
                if a is None and b is None:
                    continue
                out.append(((k, a, b), 1 + (a is not None) + (b is not None)))
    return out


def _instantiate(shape, fresh):
    if shape is None:
        return fvar(fresh())
    k, a, b = shape
    if k == sx.CUT:
        return cut_of(fvar(fresh()))
    return Formula(k, "", _instantiate(a, fresh), _instantiate(b, fresh))


def conclusions(alpha, beta, bounds=Bounds()):
    """Candidate formula parts of a derived conclusion.

    Every connective of a pure derived conclusion is introduced by one
    of the (at most ``1 + max_upper``) rule applications, and a principal
    formula's arguments are either variables or principal formulas of
    rules directly above, so two levels of nesting suffice.
    """
    kinds = sorted({CONNECTIVE[alpha], CONNECTIVE[beta]} - {None})
    trees = _trees(kinds)
    out = []
    for n in range(bounds.max_connectives + 1):
        for combo in itertools.combinations_with_replacement(range(len(trees)), n):
            if sum(trees[i][1] for i in combo) > bounds.max_connectives:
                continue
            count = itertools.count(1)
            fresh = lambda: f"v{next(count)}"  # noqa: E731
            out.append(tuple(_instantiate(trees[i][0], fresh) for i in combo))
    return out


def _splits(items):
    for mask in itertools.product((0, 1), repeat=len(items)):
        yield ([x for x, m in zip(items, mask) if m == 0],
               [x for x, m in zip(items, mask) if m == 1])


def _backward(kind, items, system):
    """Ways to read formula ``items`` as a conclusion of ``kind``:
    (principal, premise item lists)."""
    items = list(items)
    if kind == MIX:
        for a, b in _splits(items):
            yield None, [a, b]
        return
    c = CONNECTIVE[kind]
    for i, p in enumerate(items):
        if p.op != c:
            continue
        rest = items[:i] + items[i + 1:]
        if kind == PARR:
            yield p, [rest + [p.left, p.right]]
        elif kind == PLUS1:
            yield p, [rest + [p.left]]
        elif kind == PLUS2:
            yield p, [rest + [p.right]]
        elif kind in (TENSOR, STAR):
            for a, b in _splits(rest):
                yield p, [a + [p.left], b + [p.right]]
        elif kind == WITH:
            cuts = [x for x in rest if x.op == sx.CUT] if system == MALL_STAR else []
            shared = [x for x in rest if x not in cuts]
            for sides in itertools.product((1, 2, 3), repeat=len(cuts)):
                a = shared + [x for x, s in zip(cuts, sides) if s & 1]
                b = shared + [x for x, s in zip(cuts, sides) if s & 2]
                yield p, [a + [p.left], b + [p.right]]


class _Sk(NamedTuple):
    rule: "str | None"
    principal: "Formula | None"
    items: tuple
    kids: tuple
    leaf: int = -1


def _skeletons(conclusion, lower, upper, system, max_upper):
    """Two-level skeletons over formula items only, and a truncation flag."""
    out, truncated = [], False
    for principal, prems in _backward(lower, conclusion, system):
        options = []
        for prem in prems:
            opts = []
            if all(is_var(x) for x in prem):
                opts.append(("h", tuple(prem)))
            for p2, prems2 in _backward(upper, prem, system):
                if all(all(is_var(x) for x in q) for q in prems2):
                    opts.append(("r", (p2, tuple(prem), tuple(tuple(q) for q in prems2))))
            options.append(opts)
        for choice in itertools.product(*options):
            if sum(1 for t, _ in choice if t == "r") > max_upper:
                truncated = True
                continue
            leaf = itertools.count()
            kids = []
            for t, data in choice:
                if t == "h":
                    kids.append(_Sk(None, None, data, (), next(leaf)))
                else:
                    p2, prem, qs = data
                    kids.append(_Sk(upper, p2, prem,
                                    tuple(_Sk(None, None, q, (), next(leaf)) for q in qs)))
            out.append(_Sk(lower, principal, tuple(conclusion), tuple(kids)))
    return out, truncated


def _leaves(sk):
    if sk.rule is None:
        return [sk]
    return [x for k in sk.kids for x in _leaves(k)]


def _routes(sk, cut_only, system):
    """Hypothesis sets a context variable of the given type can reach."""
    if sk.rule is None:
        return {frozenset([sk.leaf])}
    rs = [_routes(k, cut_only, system) for k in sk.kids]
    if sk.rule in (PARR, PLUS1, PLUS2):
        return rs[0]
    if sk.rule in (TENSOR, STAR, MIX, CUT):
        return rs[0] | rs[1]
    both = {a | b for a in rs[0] for b in rs[1]}
    if cut_only and system == MALL_STAR:
        return rs[0] | rs[1] | both
    return both


def _blocks(n, content):
    """Set partitions of range(n) into blocks of equal content."""
    def rec(i, blocks):
        if i == n:
            yield [tuple(b) for b in blocks]
            return
        for b in blocks:
            if content[b[0]] == content[i]:
                b.append(i)
                yield from rec(i + 1, blocks)
                b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()
    yield from rec(0, [])


def _realize(sk, leaf_vars):
    if sk.rule is None:
        return hyp(list(sk.items) + sorted(leaf_vars[sk.leaf], key=_ikey))
    kids = tuple(_realize(k, leaf_vars) for k in sk.kids)
    extra = set()
    for lf in _leaves(sk):
        extra |= leaf_vars[lf.leaf]
    return ABProof(sk.rule, seq_expr(list(sk.items) + list(extra)), kids, sk.principal)


def _pair_up(L, R, system):
    ll, rl = _leaves(L), _leaves(R)
    lc = [frozenset(x.items) for x in ll]
    rc = [frozenset(x.items) for x in rl]
    routes = {}
    for side, sk in (("L", L), ("R", R)):
        routes[side, False] = _routes(sk, False, system)
        routes[side, True] = _routes(sk, True, system) if system == MALL_STAR else routes[side, False]
    for lb in _blocks(len(ll), lc):
        for rb in _blocks(len(rl), rc):
            if len(lb) != len(rb):
                continue
            m = len(lb)
            for perm in itertools.permutations(range(m)):
                if any(lc[lb[i][0]] != rc[rb[perm[i]][0]] for i in range(m)):
                    continue
                lvars = {i: set() for i in range(len(ll))}
                rvars = {i: set() for i in range(len(rl))}
                content = [set(lc[lb[i][0]]) for i in range(m)]
                for mask in range(1, 1 << m):
                    S = [i for i in range(m) if mask >> i & 1]
                    sl = frozenset(x for i in S for x in lb[i])
                    sr = frozenset(x for i in S for x in rb[perm[i]])
                    if sl in routes["L", False] and sr in routes["R", False]:
                        v = SVar(f"g{mask}")
                    elif sl in routes["L", True] and sr in routes["R", True]:
                        v = SVar(f"o{mask}", True)
                    else:
                        continue
                    for x in sl:
                        lvars[x].add(v)
                    for x in sr:
                        rvars[x].add(v)
                    for i in S:
                        content[i].add(v)
                frozen = [frozenset(cn) for cn in content]
                if len(set(frozen)) < m:
                    continue
                yield _realize(L, lvars), _realize(R, rvars)


def _subformulas(e):
    if isinstance(e, SVar) or is_var(e):
        return set()
    return {e} | _subformulas(e.left) | _subformulas(e.right)


def _decomposed(p):
    """Every connective of the conclusion is principal somewhere; otherwise
    the pair is a substitution instance of a more general one."""
    principals = {n.principal for n in _nodes(p) if n.principal is not None}
    return set().union(*map(_subformulas, p.label)) <= principals


def generate_commutations(alpha, beta, system=MALL_MINUS, bounds=Bounds()):
    """Rule commutations (alpha-beta proof, beta-alpha proof) of two rules
    of a pure system, most general within ``bounds``, one per class up to
    renaming."""
    if system == MALL:
        raise ValueError("the MALL cut rule is not pure; project the cut-pair system")
    found = {}
    truncated = False
    for concl in conclusions(alpha, beta, bounds):
        Ls, t1 = _skeletons(concl, beta, alpha, system, bounds.max_upper)
        truncated |= t1
        if not Ls:
            continue
        Rs, t2 = _skeletons(concl, alpha, beta, system, bounds.max_upper)
        truncated |= t2
        for L in Ls:
            for R in Rs:
                for lp, rp in _pair_up(L, R, system):
                    if same_proof(lp, rp) or not (_decomposed(lp) and _decomposed(rp)):
                        continue
                    c = Commutation(lp, rp)
                    if not (check_proof(lp, system) and check_proof(rp, system)):
                        raise AssertionError(f"generated an invalid proof: {show_proof(lp)}")
                    if derived_rule(lp) != derived_rule(rp) or not is_pure(derived_rule(lp)):
                        raise AssertionError(f"sides disagree: {show_proof(lp)}")
                    key = key_of(c)
                    if key not in found:
                        found[key] = c
    return Generation(tuple(found[k] for k in sorted(found)), truncated)


def system_kinds(system, mix):
    kinds = [PARR, TENSOR, PLUS1, PLUS2, WITH]
    if system == MALL_STAR:
        kinds.append(STAR)
    if mix:
        kinds.append(MIX)
    return kinds


def project(c):
    """Delete every cut pair: cut-pair rules become MALL cuts, cut-only
    variables and cut formulas disappear from sequents."""
    def go(p):
        label = seq_expr(x for x in p.label if not _cut_item(x))
        kids = tuple(go(k) for k in p.premises)
        rule = CUT if p.rule == STAR else p.rule
        return ABProof(rule, label, kids, p.principal)
    return Commutation(go(c.left), go(c.right))


def generate_catalogue(system=MALL_MINUS, mix=False, bounds=Bounds()):
    """{canonical key: commutation} over all ordered pairs of rules."""
    base = MALL_STAR if system == MALL else system
    out = {}
    truncated = False
    for a in system_kinds(base, mix):
        for b in system_kinds(base, mix):
            gen = generate_commutations(a, b, base, bounds)
            truncated |= gen.truncated
            for c in gen.pairs:
                if system == MALL:
                    c = project(c)
                    if same_proof(c.left, c.right):
                        continue
                    if not (check_proof(c.left, MALL) and check_proof(c.right, MALL)):
                        raise AssertionError(f"projection invalid: {show_proof(c.left)}")
                k, canon = canonical(c)
                out.setdefault(k, canon)
    if truncated:
        raise ValueError("bounds too small: part of the search was cut off")
    return out


def dumps_catalogue(cat):
    """Structured text, one commutation per line: id | left | right."""
    lines = []
    for k in sorted(cat):
        c = cat[k]
        lines.append(f"{comm_id(c)} | {show_proof(c.left)} | {show_proof(c.right)}")
    return "\n".join(lines) + "\n"


# -- transcribed catalogue ---------------------------------------------------

def _plus_variants(template):
    return [template.replace("plusi", f"plus{i}").replace("Bi", f"B{i}").replace("Ai", f"A{i}")
            for i in (1, 2)]


# (group, id, left, right, declared tensor-mirror variant)
_CUT_FREE = [
    ("homogeneous", "parr/parr",
     "parr{B1|B2}(parr{A1|A2}([$G, A1, A2, B1, B2]))",
     "parr{A1|A2}(parr{B1|B2}([$G, A1, A2, B1, B2]))", False),
    ("homogeneous", "tensor/tensor",
     "tensor{A1*A2}([$G, A1]; tensor{B1*B2}([A2, $D, B1]; [B2, $S]))",
     "tensor{B1*B2}(tensor{A1*A2}([$G, A1]; [A2, $D, B1]); [B2, $S])", False),
    ("homogeneous", "with/with",
     "with{B1&B2}(with{A1&A2}([$G, A1, B1]; [$G, A2, B1]); with{A1&A2}([$G, A1, B2]; [$G, A2, B2]))",
     "with{A1&A2}(with{B1&B2}([$G, A1, B1]; [$G, A1, B2]); with{B1&B2}([$G, A2, B1]; [$G, A2, B2]))",
     False),
    ("heterogeneous", "parr/with",
     "with{B1&B2}(parr{A1|A2}([$G, A1, A2, B1]); parr{A1|A2}([$G, A1, A2, B2]))",
     "parr{A1|A2}(with{B1&B2}([$G, A1, A2, B1]; [$G, A1, A2, B2]))", False),
    ("heterogeneous", "parr/tensor",
     "tensor{A1*A2}([$G, A1]; parr{B1|B2}([A2, $D, B1, B2]))",
     "parr{B1|B2}(tensor{A1*A2}([$G, A1]; [A2, $D, B1, B2]))", True),
    ("heterogeneous", "with/tensor",
     "tensor{A1*A2}([$G, A1]; with{B1&B2}([A2, $D, B1]; [A2, $D, B2]))",
     "with{B1&B2}(tensor{A1*A2}([$G, A1]; [A2, $D, B1]); tensor{A1*A2}([$G, A1]; [A2, $D, B2]))",
     True),
    ("mix", "mix/mix", "mix([$G]; mix([$D]; [$S]))", "mix(mix([$G]; [$D]); [$S])", False),
    ("mix", "tensor/mix",
     "mix([$G]; tensor{B1*B2}([$D, B1]; [B2, $S]))",
     "tensor{B1*B2}(mix([$G]; [$D, B1]); [B2, $S])", True),
    ("mix", "parr/mix",
     "mix([$G]; parr{B1|B2}([$D, B1, B2]))", "parr{B1|B2}(mix([$G]; [$D, B1, B2]))", False),
    ("mix", "with/mix",
     "mix([$G]; with{B1&B2}([$D, B1]; [$D, B2]))",
     "with{B1&B2}(mix([$G]; [$D, B1]); mix([$G]; [$D, B2]))", False),
]

_PLUS = [
    ("heterogeneous", "plus/parr",
     "parr{B1|B2}(plusi{A1+A2}([$G, Ai, B1, B2]))", "plusi{A1+A2}(parr{B1|B2}([$G, Ai, B1, B2]))",
     False),
    ("heterogeneous", "plus/with",
     "with{B1&B2}(plusi{A1+A2}([$G, Ai, B1]); plusi{A1+A2}([$G, Ai, B2]))",
     "plusi{A1+A2}(with{B1&B2}([$G, Ai, B1]; [$G, Ai, B2]))", False),
    ("heterogeneous", "plus/tensor",
     "tensor{A1*A2}([$G, A1]; plusi{B1+B2}([A2, $D, Bi]))",
     "plusi{B1+B2}(tensor{A1*A2}([$G, A1]; [A2, $D, Bi]))", True),
    ("mix", "plus/mix", "mix([$G]; plusi{B1+B2}([$D, Bi]))",
     "plusi{B1+B2}(mix([$G]; [$D, Bi]))", False),
]

# with-rules in the cut-pair system carry cut-only contexts on each side
_WITH_CUT_CONTEXT = [
    ("with-cut-context", "parr/with",
     "with{B1&B2}(parr{A1|A2}([%O1, $G, A1, A2, B1]); parr{A1|A2}([%O2, $G, A1, A2, B2]))",
     "parr{A1|A2}(with{B1&B2}([%O1, $G, A1, A2, B1]; [%O2, $G, A1, A2, B2]))", False),
    ("with-cut-context", "with/tensor",
     "tensor{A1*A2}([$G, A1]; with{B1&B2}([A2, %O1, $D, B1]; [A2, %O2, $D, B2]))",
     "with{B1&B2}(tensor{A1*A2}([$G, A1]; [A2, %O1, $D, B1]); "
     "tensor{A1*A2}([$G, A1]; [A2, %O2, $D, B2]))", True),
    ("with-cut-context", "with/mix",
     "mix([$G]; with{B1&B2}([%O1, $D, B1]; [%O2, $D, B2]))",
     "with{B1&B2}(mix([$G]; [%O1, $D, B1]); mix([$G]; [%O2, $D, B2]))", False),
    ("with-cut-context", "with/star",
     "star{A#~A}([$G, A]; with{B1&B2}([~A, %O1, $D, B1]; [~A, %O2, $D, B2]))",
     "with{B1&B2}(star{A#~A}([$G, A]; [~A, %O1, $D, B1]); star{A#~A}([$G, A]; [~A, %O2, $D, B2]))",
     False),
]

_WITH_CUT_CONTEXT_PLUS = [
    ("with-cut-context", "plus/with",
     "with{B1&B2}(plusi{A1+A2}([%O1, $G, Ai, B1]); plusi{A1+A2}([%O2, $G, Ai, B2]))",
     "plusi{A1+A2}(with{B1&B2}([%O1, $G, Ai, B1]; [%O2, $G, Ai, B2]))", False),
]

_CUT_PAIR = [
    ("cut-pair", "star/star",
     "star{A#~A}([$G, A]; star{B#~B}([~A, $D, B]; [~B, $S]))",
     "star{B#~B}(star{A#~A}([$G, A]; [~A, $D, B]); [~B, $S])", False),
    ("cut-pair", "tensor/star",
     "star{A#~A}([$G, A]; tensor{B1*B2}([~A, $D, B1]; [B2, $S]))",
     "tensor{B1*B2}(star{A#~A}([$G, A]; [~A, $D, B1]); [B2, $S])", True),
    ("cut-pair", "parr/star",
     "star{A#~A}([$G, A]; parr{B1|B2}([~A, $D, B1, B2]))",
     "parr{B1|B2}(star{A#~A}([$G, A]; [~A, $D, B1, B2]))", False),
    ("cut-pair", "star/mix",
     "mix([$G]; star{B#~B}([$D, B]; [~B, $S]))",
     "star{B#~B}(mix([$G]; [$D, B]); [~B, $S])", False),
]

_CUT_PAIR_PLUS = [
    ("cut-pair", "plus/star",
     "star{A#~A}([$G, A]; plusi{B1+B2}([~A, $D, Bi]))",
     "plusi{B1+B2}(star{A#~A}([$G, A]; [~A, $D, Bi]))", False),
]

_CUT = [
    ("cut", "cut/cut",
     "cut{A#~A}([$G, A]; cut{B#~B}([~A, $D, B]; [~B, $S]))",
     "cut{B#~B}(cut{A#~A}([$G, A]; [~A, $D, B]); [~B, $S])", False),
    ("cut", "tensor/cut",
     "cut{A#~A}([$G, A]; tensor{B1*B2}([~A, $D, B1]; [B2, $S]))",
     "tensor{B1*B2}(cut{A#~A}([$G, A]; [~A, $D, B1]); [B2, $S])", True),
    ("cut", "parr/cut",
     "cut{A#~A}([$G, A]; parr{B1|B2}([~A, $D, B1, B2]))",
     "parr{B1|B2}(cut{A#~A}([$G, A]; [~A, $D, B1, B2]))", False),
    ("cut", "with/cut",
     "cut{A#~A}([$G, A]; with{B1&B2}([~A, $D, B1]; [~A, $D, B2]))",
     "with{B1&B2}(cut{A#~A}([$G, A]; [~A, $D, B1]); cut{A#~A}([$G, A]; [~A, $D, B2]))", False),
    ("cut", "cut/mix",
     "mix([$G]; cut{B#~B}([$D, B]; [~B, $S]))",
     "cut{B#~B}(mix([$G]; [$D, B]); [~B, $S])", False),
]

_CUT_PLUS = [
    ("cut", "plus/cut",
     "cut{A#~A}([$G, A]; plusi{B1+B2}([~A, $D, Bi]))",
     "plusi{B1+B2}(cut{A#~A}([$G, A]; [~A, $D, Bi]))", False),
]


def _with_with_cut_context():
    """The with/with commutation with one cut-only context per nonempty,
    non-full set of the four hypotheses that may produce a cut."""
    cells = [("A1", "B1"), ("A2", "B1"), ("A1", "B2"), ("A2", "B2")]
    masks = [m for m in itertools.product((0, 1), repeat=4) if 0 < sum(m) < 4]
    h = []
    for n, (a, b) in enumerate(cells):
        om = [f"%O{''.join(map(str, m))}" for m in masks if m[n]]
        h.append("[" + ", ".join(["$G", a, b] + om) + "]")
    left = (f"with{{B1&B2}}(with{{A1&A2}}({h[0]}; {h[1]}); "
            f"with{{A1&A2}}({h[2]}; {h[3]}))")
    right = (f"with{{A1&A2}}(with{{B1&B2}}({h[0]}; {h[2]}); "
             f"with{{B1&B2}}({h[1]}; {h[3]}))")
    return ("with-cut-context", "with/with", left, right, False)


def _expand(entries, plus_entries=()):
    out = list(entries)
    for g, cid, left, right, mirror in plus_entries:
        for l2, r2 in zip(_plus_variants(left), _plus_variants(right)):
            out.append((g, cid, l2, r2, mirror))
    return out


def _plus_plus():
    out = []
    for i in (1, 2):
        for j in (1, 2):
            out.append(("homogeneous", "plus/plus",
                        f"plus{j}{{B1+B2}}(plus{i}{{A1+A2}}([$G, A{i}, B{j}]))",
                        f"plus{i}{{A1+A2}}(plus{j}{{B1+B2}}([$G, A{i}, B{j}]))", False))
    return out


def transcribed(system=MALL_MINUS, mix=False):
    """The hand-transcribed catalogue for a system, generic plus indices
    expanded, as (id, group, left text, right text, mirror flag)."""
    rows = _expand(_CUT_FREE, _PLUS) + _plus_plus()
    if system == MALL_STAR:
        replaced = {"parr/with", "with/tensor", "with/mix", "plus/with", "with/with"}
        rows = [r for r in rows if r[1] not in replaced]
        rows += _expand(_WITH_CUT_CONTEXT, _WITH_CUT_CONTEXT_PLUS) + [_with_with_cut_context()]
        rows += _expand(_CUT_PAIR, _CUT_PAIR_PLUS)
    elif system == MALL:
        rows += _expand(_CUT, _CUT_PLUS)
    if not mix:
        rows = [r for r in rows if r[0] != "mix" and not r[1].endswith("mix")]
    return rows


def mirror(c, f):
    """Swap the arguments of the tensor formula ``f`` everywhere."""
    g = Formula(f.op, "", f.right, f.left)

    def go(p):
        label = seq_expr(g if x == f else x for x in p.label)
        return ABProof(p.rule, label, tuple(go(k) for k in p.premises),
                       g if p.principal == f else p.principal)
    return Commutation(go(c.left), go(c.right))


def tensor_mirrors(c):
    fs = [x for x in derived_rule(c.left).conclusion
          if isinstance(x, Formula) and x.op == sx.TENSOR]
    return [mirror(c, f) for f in fs]


def expected_catalogue(system=MALL_MINUS, mix=False):
    """{canonical key: (id, commutation)} from the transcription,
    including the declared tensor-mirror variants."""
    out = {}
    for group, cid, left, right, has_mirror in transcribed(system, mix):
        c = Commutation(parse_proof(left, system), parse_proof(right, system))
        if derived_rule(c.left) != derived_rule(c.right):
            raise ValueError(f"transcription of {cid} derives two different rules")
        if system != MALL and not is_pure(derived_rule(c.left)):
            raise ValueError(f"transcription of {cid} is not pure")
        variants = [c] + (tensor_mirrors(c) if has_mirror else [])
        for v in variants:
            out.setdefault(key_of(v), (cid, v))
    return out


def _fold_reason(c, expected_keys):
    """Why a generated commutation absent from the transcription is
    accounted for, or None."""
    for p in (c.left, c.right):
        if any(all(_cut_item(x) for x in h) for h in hypotheses(p)):
            return "vacuous: a hypothesis is empty or holds cut pairs only, so has no proof"
    if all(p.rule == MIX for p in _nodes(c.left) + _nodes(c.right) if not p.is_hypothesis):
        if len([p for p in _nodes(c.left) if not p.is_hypothesis]) == 3:
            return "ternary mix/mix: composite of binary mix/mix steps"
    if comm_id(c) == "tensor/tensor":
        for m in tensor_mirrors(c):
            if key_of(m) in expected_keys:
                return "tensor/tensor with one tensor mirrored"
    return None


def _nodes(p):
    return [p] + [x for k in p.premises for x in _nodes(k)]


class Diff(NamedTuple):
    system: str
    mix: bool
    generated: int
    expected: int
    missing: tuple      # ids transcribed but not generated
    extra: tuple        # ids generated, neither transcribed nor folded
    folded: tuple       # (id, reason)

    @property
    def ok(self):
        return not self.missing and not self.extra


class Validation(NamedTuple):
    diffs: tuple
    engine_missing: tuple    # engine ids with no generated commutation
    engine_extra: tuple      # generated ids the engine lacks
    mirror_mismatch: tuple   # ids whose tensor-mirror variant is present on one side only
    omega_count: int         # cut-only contexts of the cut-pair with/with commutation

    @property
    def ok(self):
        return (all(d.ok for d in self.diffs) and not self.engine_missing
                and not self.engine_extra and not self.mirror_mismatch
                and self.omega_count == 14)

    def summary(self):
        lines = []
        for d in self.diffs:
            lines.append(f"{d.system} mix={'on' if d.mix else 'off'}: generated {d.generated}, "
                         f"expected {d.expected}, missing {list(d.missing)}, "
                         f"extra {list(d.extra)}, folded {len(d.folded)}")
        lines.append(f"engine: missing {list(self.engine_missing)}, extra "
                     f"{list(self.engine_extra)}, mirror mismatch {list(self.mirror_mismatch)}")
        lines.append(f"cut-only contexts in with/with: {self.omega_count}")
        lines.append("ok" if self.ok else "MISMATCH")
        return "\n".join(lines)


CONFIGS = ((MALL_MINUS, False), (MALL_MINUS, True), (MALL_STAR, False), (MALL_STAR, True),
           (MALL, False), (MALL, True))


def diff_catalogue(system, mix, bounds=Bounds()):
    gen = generate_catalogue(system, mix, bounds)
    exp = expected_catalogue(system, mix)
    missing = sorted(cid for k, (cid, _) in exp.items() if k not in gen)
    extra, folded = [], []
    for k, c in gen.items():
        if k in exp:
            continue
        why = _fold_reason(c, exp)
        if why is None:
            extra.append(comm_id(c))
        else:
            folded.append((comm_id(c), why))
    return Diff(system, mix, len(gen), len(exp), tuple(missing), tuple(sorted(extra)),
                tuple(sorted(folded))), gen


def validate_against_tables(bounds=Bounds()):
    """Diff the generated catalogues against the transcription (all six
    system/mix configurations) and against the move engine's ids."""
    from mallnets.commute import catalogue
    diffs, ids, mirrored, omega = [], set(), set(), 0
    for system, mix in CONFIGS:
        d, gen = diff_catalogue(system, mix, bounds)
        diffs.append(d)
        keys = set(gen)
        for c in gen.values():
            cid = comm_id(c)
            ids.add(cid)
            if any(key_of(m) in keys and key_of(m) != key_of(c) for m in tensor_mirrors(c)):
                mirrored.add(cid)
            if system == MALL_STAR and cid == "with/with":
                omega = max(omega, sum(1 for x in derived_rule(c.left).conclusion
                                       if isinstance(x, SVar) and x.cut_only))
    engine = catalogue()
    base = {e.rstrip("~12") for e in engine}
    engine_mirrored = {e.rstrip("~12") for e in engine if "~" in e}
    return Validation(tuple(diffs), tuple(sorted(base - ids)), tuple(sorted(ids - base)),
                      tuple(sorted(mirrored ^ engine_mirrored)), omega)
