"""Formulas, sequents and occurrence addresses.

A formula is a small immutable tree.  A sequent is a tuple of root
formulas; the order of the roots is a storage artifact, but every
address used elsewhere in the package (leaves, links, proof splits) is
expressed in the coordinates of one fixed stored order.

Surface syntax (ASCII):

    P      atom            ~P     negated atom
    A * B  tensor          A | B  par
    A & B  with            A + B  plus
    A # B  cut pair (root position only, B must be the dual of A)

Mixed operators need parentheses.  A chain of one operator such as
``P * Q * R`` associates to the left.
"""

from __future__ import annotations

import re
from typing import NamedTuple

ATOM, NATOM = "atom", "natom"
TENSOR, PARR, WITH, PLUS, CUT = "tensor", "parr", "with", "plus", "cut"
BINARY = (TENSOR, PARR, WITH, PLUS, CUT)

SYMBOL = {TENSOR: "*", PARR: "|", WITH: "&", PLUS: "+", CUT: "#"}
GLYPH = {TENSOR: "⊗", PARR: "⅋", WITH: "&", PLUS: "⊕", CUT: "▷"}
OP_OF = {v: k for k, v in SYMBOL.items()}
DUAL = {TENSOR: PARR, PARR: TENSOR, WITH: PLUS, PLUS: WITH}


class Formula(NamedTuple):
    op: str
    name: str = ""
    left: "Formula | None" = None
    right: "Formula | None" = None

    @property
    def is_literal(self):
        return self.op in (ATOM, NATOM)

    def __str__(self):
        return show(self)


class SyntaxError_(ValueError):
    """Raised on malformed formula or sequent text."""

    def __init__(self, msg, pos=None):
        self.pos = pos
        if pos is not None:
            msg = f"{msg} at position {pos}"
        super().__init__(msg)


def atom(name):
    return Formula(ATOM, name)


def natom(name):
    return Formula(NATOM, name)


def tensor(a, b):
    return Formula(TENSOR, "", a, b)


def parr(a, b):
    return Formula(PARR, "", a, b)


def with_(a, b):
    return Formula(WITH, "", a, b)


def plus(a, b):
    return Formula(PLUS, "", a, b)


def cut(a, b=None):
    """The cut pair of ``a`` and its dual, sides in canonical order."""
    if b is None:
        b = negate(a)
    elif b != negate(a):
        raise SyntaxError_(f"cut sides are not dual: {show(a)} # {show(b)}")
    if b < a:
        a, b = b, a
    return Formula(CUT, "", a, b)


def negate(f):
    if f.op == ATOM:
        return Formula(NATOM, f.name)
    if f.op == NATOM:
        return Formula(ATOM, f.name)
    if f.op == CUT:
        raise ValueError("a cut pair has no dual")
    return Formula(DUAL[f.op], "", negate(f.left), negate(f.right))


def size(f):
    """Number of leaves."""
    if f.is_literal:
        return 1
    return size(f.left) + size(f.right)


def atoms_of(f):
    if f.is_literal:
        return {f.name}
    return atoms_of(f.left) | atoms_of(f.right)


def subformula(f, path):
    for step in path:
        if f.is_literal:
            raise KeyError(path)
        f = f.left if step == "L" else f.right
    return f


def vertices(f, prefix=""):
    """All (path, subformula) pairs, depth first, left to right."""
    yield prefix, f
    if not f.is_literal:
        yield from vertices(f.left, prefix + "L")
        yield from vertices(f.right, prefix + "R")


def formula_leaves(f, prefix=""):
    for path, g in vertices(f, prefix):
        if g.is_literal:
            yield path, g


def leaves(seq):
    """Ordered (address, literal) list; an address is (root index, path)."""
    out = []
    for i, f in enumerate(seq):
        for path, g in formula_leaves(f):
            out.append(((i, path), g))
    return out


def sequent_vertices(seq):
    out = []
    for i, f in enumerate(seq):
        for path, g in vertices(f):
            out.append(((i, path), g))
    return out


def resolve(seq, addr):
    i, path = addr
    if not 0 <= i < len(seq):
        raise KeyError(addr)
    return subformula(seq[i], path)


def dual_literals(a, b):
    return a.is_literal and b.is_literal and a.name == b.name and a.op != b.op


def is_cut_free(f):
    if f.is_literal:
        return True
    return f.op != CUT and is_cut_free(f.left) and is_cut_free(f.right)


def check_formula(f, root=True):
    """Raise unless ``f`` is well formed (cut pairs only at the root)."""
    if f.is_literal:
        return
    if f.op == CUT:
        if not root:
            raise SyntaxError_("cut pair below the root")
        if not (is_cut_free(f.left) and f.right == negate(f.left)):
            raise SyntaxError_("cut sides are not dual")
        if f.right < f.left:
            raise SyntaxError_("cut sides not in canonical order")
        return
    check_formula(f.left, False)
    check_formula(f.right, False)


# -- printing ---------------------------------------------------------------

def show(f):
    if f.op == ATOM:
        return f.name
    if f.op == NATOM:
        return "~" + f.name
    return f"{_wrap(f.left)} {SYMBOL[f.op]} {_wrap(f.right)}"


def _wrap(f):
    return show(f) if f.is_literal else f"({show(f)})"


def show_sequent(seq):
    return ", ".join(show(f) for f in seq)


def pretty(f):
    """Unicode rendering, for reports."""
    if f.op == ATOM:
        return f.name
    if f.op == NATOM:
        return f.name + "⊥"
    wrap = lambda g: pretty(g) if g.is_literal else f"({pretty(g)})"
    return f"{wrap(f.left)}{GLYPH[f.op]}{wrap(f.right)}"


def show_addr(addr):
    i, path = addr
    return f"{i}:{path or '-'}"


def parse_addr(text):
    m = re.fullmatch(r"\s*(\d+):([LR]+|-)\s*", text)
    if not m:
        raise SyntaxError_(f"bad address {text!r}")
    path = m.group(2)
    return int(m.group(1)), "" if path == "-" else path


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(1) if m.group(1) else m.start(2)
        toks.append((m.group(1) or m.group(2), start))
        pos = m.end()
    toks.append(("", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, t):
        tok, pos = self.take()
        if tok != t:
            raise SyntaxError_(f"expected {t!r}, found {tok or 'end of input'!r}", pos)

    def formula(self):
        left = self.unit()
        tok, pos = self.peek()
        if tok not in OP_OF:
            return left
        op = OP_OF[tok]
        while True:
            tok, pos = self.peek()
            if tok not in OP_OF:
                return left
            if OP_OF[tok] != op:
                raise SyntaxError_("mixed operators need parentheses", pos)
            self.take()
            right = self.unit()
            if op == CUT:
                if not (is_cut_free(left) and is_cut_free(right)):
                    raise SyntaxError_("cut pair below the root", pos)
                if right != negate(left):
                    raise SyntaxError_("cut sides are not dual", pos)
                left = cut(left, right)
            else:
                left = Formula(op, "", left, right)

    def unit(self):
        tok, pos = self.take()
        if tok == "(":
            f = self.formula()
            self.expect(")")
            return f
        if tok == "~":
            name, npos = self.take()
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name or ""):
                raise SyntaxError_("negation applies to atoms only", npos)
            return natom(name)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok or ""):
            return atom(tok)
        raise SyntaxError_(f"unexpected {tok or 'end of input'!r}", pos)


def parse_formula(text):
    p = _Parser(text)
    f = p.formula()
    tok, pos = p.peek()
    if tok:
        raise SyntaxError_(f"unexpected {tok!r}", pos)
    check_formula(f)
    return f


def parse_sequent(text):
    """Comma separated formulas; the empty string is the empty sequent."""
    if not text.strip():
        return ()
    p = _Parser(text)
    roots = [p.formula()]
    while True:
        tok, pos = p.peek()
        if tok == ",":
            p.take()
            roots.append(p.formula())
        elif tok == "":
            break
        else:
            raise SyntaxError_(f"unexpected {tok!r}", pos)
    for f in roots:
        check_formula(f)
    return tuple(roots)


def has_cuts(seq):
    return any(f.op == CUT for f in seq)


def lower_bound(f):
    """Twice a lower bound on the number of rule nodes a formula costs.

    Literals cost half an axiom; each connective costs one rule; a plus
    only pays for the cheaper side.
    """
    if f.is_literal:
        return 1
    a, b = lower_bound(f.left), lower_bound(f.right)
    if f.op == PLUS:
        return 2 + min(a, b)
    return 2 + a + b


def sequent_lower_bound(seq):
    total = sum(lower_bound(f) for f in seq)
    return (total + 1) // 2
