"""Bounded corpora of goal sequents and their proofs.

Goals are produced by forward closure of the cut-free rules: a sequent
is a goal when some derivation of it fits the node budget.  The inert
side of a plus-rule is restricted to a literal, otherwise every goal
could carry an arbitrary inert formula.  Goals are taken up to root
order and up to the symmetries of the two atoms (renaming them, and
swapping the polarity of either one).
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

from mallnets import syntax as sx
from mallnets.proofs import Config, Enumerator, enumerate_proofs, MALL, MALL_STAR
from mallnets.syntax import Formula


class CorpusSpec(NamedTuple):
    atoms: tuple = ("P", "Q")
    max_leaves: int = 6
    max_roots: int = 3
    max_nodes: int = 8
    mix: bool = False


def _literals(atoms):
    return [f(a) for a in atoms for f in (sx.atom, sx.natom)]


def _leaves(seq):
    return sum(sx.size(f) for f in seq)


def _key(roots):
    return tuple(sorted(roots))


def rename(f, mapping):
    """Apply a literal substitution (literal -> literal) to a formula."""
    if f.is_literal:
        return mapping[f]
    return Formula(f.op, "", rename(f.left, mapping), rename(f.right, mapping))


def exchange_normal(f):
    """Sort the two arguments of every connective."""
    if f.is_literal:
        return f
    a, b = exchange_normal(f.left), exchange_normal(f.right)
    if b < a:
        a, b = b, a
    return Formula(f.op, "", a, b)


def symmetries(atoms):
    """Literal maps generated by permuting atoms and flipping polarities."""
    out = []
    for perm in itertools.permutations(atoms):
        for flips in itertools.product((False, True), repeat=len(atoms)):
            m = {}
            for a, b, fl in zip(atoms, perm, flips):
                pos, neg = sx.atom(b), sx.natom(b)
                if fl:
                    pos, neg = neg, pos
                m[sx.atom(a)] = pos
                m[sx.natom(a)] = neg
            out.append(m)
    return out


def canonical_goal(seq, syms):
    """Orbit representative under root order, argument exchange and ``syms``."""
    seq = [exchange_normal(f) for f in seq]
    return min(_key(tuple(exchange_normal(rename(f, m)) for f in seq)) for m in syms)


def forward_goals(spec):
    """Representatives of provable sequents, with their least proof size.

    Closure of the cut-free rules on orbit representatives; the rules
    commute with the symmetries, so combining a representative with every
    image of another reaches every orbit.
    """
    lits = _literals(spec.atoms)
    syms = symmetries(spec.atoms)
    best = {}
    layers = {}
    for a in spec.atoms:
        k = canonical_goal((sx.atom(a), sx.natom(a)), syms)
        best[k] = 1
    layers[1] = sorted(best)
    images = {}

    def orbit(s):
        hit = images.get(s)
        if hit is None:
            hit = images[s] = sorted({_key(tuple(exchange_normal(rename(f, m)) for f in s))
                                      for m in syms})
        return hit

    for n in range(2, spec.max_nodes + 1):
        fresh = set()

        def add(roots):
            if _leaves(roots) > spec.max_leaves:
                return
            k = canonical_goal(roots, syms)
            if k not in best:
                fresh.add(k)

        for s in layers[n - 1]:
            small = _leaves(s) < spec.max_leaves
            for i, j in itertools.combinations(range(len(s)), 2):
                rest = [s[k] for k in range(len(s)) if k not in (i, j)]
                add(rest + [sx.parr(s[i], s[j])])
            if small:
                for i in range(len(s)):
                    rest = list(s[:i] + s[i + 1:])
                    for b in lits:
                        add(rest + [sx.plus(s[i], b)])
        for m1 in range(1, n - 1):
            m2 = n - 1 - m1
            if m2 < m1:
                continue
            for s1 in layers[m1]:
                for s2 in (t for s in layers[m2] for t in orbit(s)):
                    if _leaves(s1) + _leaves(s2) <= spec.max_leaves:
                        for i in range(len(s1)):
                            for j in range(len(s2)):
                                add(list(s1[:i] + s1[i + 1:]) + list(s2[:j] + s2[j + 1:])
                                    + [sx.tensor(s1[i], s2[j])])
                        if spec.mix:
                            add(list(s1) + list(s2))
                    if len(s1) == len(s2):
                        for i in range(len(s1)):
                            g = s1[:i] + s1[i + 1:]
                            for j in range(len(s2)):
                                if s2[:j] + s2[j + 1:] == g:
                                    add(list(g) + [sx.with_(s1[i], s2[j])])
        for k in fresh:
            best[k] = n
        layers[n] = sorted(fresh)
    return {s: m for s, m in best.items() if len(s) <= spec.max_roots}


def goals(spec):
    """Goal representatives in deterministic order."""
    return sorted(forward_goals(spec), key=lambda s: (_leaves(s), len(s), s))


def proof_corpus(spec, config=None):
    """(goal, proofs) pairs for every goal of ``spec``."""
    config = config or Config(mix=spec.mix)
    out = []
    for g in goals(spec):
        ps = enumerate_proofs(g, config, spec.max_nodes)
        if ps:
            out.append((g, ps))
    return out


class CutCorpusSpec(NamedTuple):
    atoms: tuple = ("P", "Q")
    max_leaves: int = 5
    max_roots: int = 3
    max_nodes: int = 8
    max_cuts: int = 2
    cut_leaves: int = 1


def cut_corpus(spec):
    """MALL proofs with cuts of cut-free goals, grouped by goal.

    Goals come from the cut-free forward closure (within a generous node
    budget) and cut formulas range over formulas with at most
    ``cut_leaves`` leaves.
    """
    base = CorpusSpec(spec.atoms, spec.max_leaves, spec.max_roots, spec.max_nodes)
    cuts = sx_formulas(spec.atoms, spec.cut_leaves)
    out = []
    for g in goals(base):
        ps = enumerate_proofs(g, Config(MALL), spec.max_nodes, spec.max_cuts, cuts)
        if ps:
            out.append((g, ps))
    return out


def sx_formulas(atoms, max_leaves):
    from mallnets.proofs import formulas_up_to
    return formulas_up_to(atoms, max_leaves)


def star_corpus(spec):
    """MALL* proofs: every lifting of every proof in the cut corpus."""
    from mallnets.proofs import liftings
    out = []
    for g, ps in cut_corpus(spec):
        for p in ps:
            ls, _ = liftings(p, Config(MALL_STAR))
            out.extend(ls)
    return out


# (max leaves of the cut-free part, cut pairs on P, node budget)
MATRIX_LAYERS = ((6, 0, 8), (5, 0, 9), (5, 1, 9), (3, 2, 9))


def matrix_corpus(atoms=("P", "Q"), layers=MATRIX_LAYERS):
    """MALL* proofs with mix, layered so every rule pair occurs adjacently.

    Each layer takes the cut-free goals with the given leaf bound, adds
    that many cut pairs on the first atom, and enumerates within budget.
    """
    config = Config(MALL_STAR, mix=True)
    pair = sx.cut(sx.atom(atoms[0]))
    search = Enumerator(config)
    out = {}
    for leaves, ncut, budget in layers:
        for g in goals(CorpusSpec(atoms, leaves, 3, 8, mix=True)):
            for p in search.proofs(g + (pair,) * ncut, budget):
                out.setdefault(p, None)
    return list(out)
