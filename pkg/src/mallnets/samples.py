"""Hand-built proofs used as fixed reference instances."""

from __future__ import annotations

from mallnets import syntax as sx
from mallnets.proofs import (AX, CUT, MIX, PARR, PLUS1, PLUS2, SHARED, STAR, TENSOR,
                             WITH, MALL, MALL_STAR, Config, Proof, Rule, make, validate)

S = SHARED


def node(seq, kind, principal=None, sides=None, *premises, cutf=None):
    conclusion = sx.parse_sequent(seq) if isinstance(seq, str) else tuple(seq)
    if sides is None:
        sides = (0,) * len(conclusion)
    if isinstance(cutf, str):
        cutf = sx.parse_formula(cutf)
    return make(conclusion, Rule(kind, principal, tuple(sides), cutf), premises)


def ax(seq):
    return node(seq, AX)


def two_linkings():
    """A par over a with whose branches split a tensor two different ways.

    Its net has two linkings of two links each; the Q leaf is never linked.
    """
    left = node("P * P, ~P, ~P", TENSOR, 0, (0, 1, 2),
                ax("~P, P"), ax("~P, P"))
    right = node("P * P, ~P, ~P + Q", TENSOR, 0, (0, 2, 1),
                 node("~P + Q, P", PLUS1, 0, (0, 1), ax("P, ~P")),
                 ax("~P, P"))
    body = node("~P & (~P + Q), P * P, ~P", WITH, 0, (0, S, S), left, right)
    return validate(node("(P * P) | ~P, ~P & (~P + Q)", PARR, 0, (0, 1), body))


def tensor_over_plus():
    """Two proofs of ~P, P * Q, R + ~Q one commutation apart."""
    lower = node("~P, P * Q, R + ~Q", TENSOR, 1, (1, 0, 2),
                 ax("~P, P"), node("R + ~Q, Q", PLUS2, 0, (0, 1), ax("Q, ~Q")))
    upper = node("~P, P * Q, R + ~Q", PLUS2, 2, (1, 1, 0),
                 node("~P, P * Q, ~Q", TENSOR, 1, (1, 0, 2), ax("~P, P"), ax("~Q, Q")))
    return validate(lower), validate(upper)


def tensor_over_with():
    """A tensor over a with, and the with over two copies of the tensor."""
    pi1 = node("~P, P + R", PLUS1, 1, (1, 0), ax("~P, P"))
    lower = node("~P, (P + R) * ~Q, Q & Q", TENSOR, 1, (1, 0, 2), pi1,
                 node("Q & Q, ~Q", WITH, 0, (0, S), ax("~Q, Q"), ax("~Q, Q")))
    branch = node("~P, (P + R) * ~Q, Q", TENSOR, 1, (1, 0, 2), pi1, ax("Q, ~Q"))
    upper = node("~P, (P + R) * ~Q, Q & Q", WITH, 2, (S, S, 0), branch, branch)
    return validate(lower), validate(upper)


def crossed_plus():
    """Two proofs of P & P, ~P * Q, ~Q + ~Q choosing opposite plus sides
    in the two with-branches; their nets differ."""
    def side(kind):
        t = node("~P * Q, P, ~Q", TENSOR, 0, (0, 1, 2), ax("P, ~P"), ax("~Q, Q"))
        return node("~P * Q, ~Q + ~Q, P", kind, 1, (1, 0, 1), t)

    left = node("P & P, ~P * Q, ~Q + ~Q", WITH, 0, (0, S, S), side(PLUS1), side(PLUS2))
    right = node("P & P, ~P * Q, ~Q + ~Q", WITH, 0, (0, S, S), side(PLUS2), side(PLUS1))
    return validate(left), validate(right)


def cut_under_with():
    """A cut pair below a with; commuting the with down would make both
    branches share the cut pair."""
    prem1 = node("~P & ~P, P", WITH, 0, (0, S), ax("P, ~P"), ax("P, ~P"))
    p = node("~P & ~P, P # ~P, P", STAR, 1, (1, 0, 2), prem1, ax("P, ~P"))
    return validate(p, Config(MALL_STAR))


def mall_cut():
    """cut(ax, ax) on P proving P, ~P."""
    return validate(node("P, ~P", CUT, None, (1, 2), ax("P, ~P"), ax("~P, P"), cutf="~P"),
                    Config(MALL))


def parr_over_mix():
    """A par whose two arguments come from the two sides of a mix."""
    return validate(node("P | Q, ~P, ~Q", PARR, 0, (0, 1, 1), node(
        "~P, ~Q, P, Q", MIX, None, (1, 2, 1, 2), ax("~P, P"), ax("~Q, Q"))), Config(mix=True))
