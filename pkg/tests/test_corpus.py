from __future__ import annotations

import itertools

import oracles
from mallnets import corpus as cp
from mallnets import proofs as pf
from mallnets import syntax as sx
from mallnets.syntax import Formula


def _swap_args(f):
    if f.is_literal:
        return f
    a, b = sorted((_swap_args(f.left), _swap_args(f.right)))
    return Formula(f.op, "", a, b)


def _relabel(f, m):
    if f.is_literal:
        name, neg = m[f.name]
        return Formula(sx.NATOM if (f.op == sx.NATOM) != neg else sx.ATOM, name)
    return Formula(f.op, "", _relabel(f.left, m), _relabel(f.right, m))


def _orbit_key(seq):
    keys = []
    for perm in itertools.permutations("PQ"):
        for flips in itertools.product((False, True), repeat=2):
            m = dict(zip("PQ", zip(perm, flips)))
            keys.append(tuple(sorted(_swap_args(_relabel(f, m)) for f in seq)))
    return min(keys)


def test_small_corpus_is_complete_and_sound():
    spec = cp.CorpusSpec(max_leaves=3)
    by_size = {}
    for f in pf.formulas_up_to(("P", "Q"), 3):
        by_size.setdefault(sx.size(f), []).append(f)
    provable = set()
    memo = {}
    for sizes in ((1,), (2,), (3,), (1, 1), (1, 2), (1, 1, 1)):
        for seq in itertools.product(*(by_size[k] for k in sizes)):
            if oracles.count_proofs(seq, 8, False, memo):
                provable.add(_orbit_key(seq))
    found = {_orbit_key(g) for g in cp.goals(spec)}
    assert found == provable
    assert len(found) == 12
    assert len(cp.goals(spec)) == len(found)


def test_goals_are_representatives():
    spec = cp.CorpusSpec(max_leaves=4)
    syms = cp.symmetries(spec.atoms)
    for g in cp.goals(spec):
        assert cp.canonical_goal(g, syms) == g
        assert len(g) <= spec.max_roots
        assert sum(sx.size(f) for f in g) <= spec.max_leaves
        assert pf.enumerate_proofs(g, pf.Config(), spec.max_nodes)


def test_symmetries_form_a_group_of_eight():
    syms = cp.symmetries(("P", "Q"))
    assert len(syms) == 8
    assert len({tuple(sorted(m.items())) for m in syms}) == 8
