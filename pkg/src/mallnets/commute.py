"""Rule commutations: swapping a rule with the rule(s) just above it.

Every commutation is carried out by one engine.  The roots of the lower
node and of the nodes above it get identity tokens (``('c', i)`` for the
conclusion roots, ``(tag, 'L'|'R'|1|2)`` for the formulas a rule adds to
its premises), the new fragment is assembled top-down from the same
subproofs, and ``assemble`` permutes every subproof to its new premise
layout.  Which fragments exist depends on the families of the two rules:

    unary   parr, plus1, plus2
    split   tensor, star, mix, cut
    with    with

A commutation is named after its table entry ``upper/lower`` as drawn on
the entry's left side, with ``direction`` telling which side the current
proof matches.  Symmetric variants carry a ``~`` suffix.
"""

from __future__ import annotations

from typing import NamedTuple

from mallnets import proofs as pf
from mallnets import syntax as sx
from mallnets.proofs import (AX, CUT, MIX, PARR, PLUS1, PLUS2, STAR, TENSOR, WITH,
                             UNARY, Config, ProofError, family)

TABLE = {
    # homogeneous
    ("parr", "parr"), ("plus", "plus"), ("tensor", "tensor"), ("with", "with"),
    # heterogeneous
    ("plus", "parr"), ("plus", "with"), ("parr", "with"),
    ("plus", "tensor"), ("parr", "tensor"), ("with", "tensor"),
    # mix
    ("mix", "mix"), ("tensor", "mix"), ("plus", "mix"), ("parr", "mix"), ("with", "mix"),
    # MALL cut
    ("cut", "cut"), ("tensor", "cut"), ("plus", "cut"), ("parr", "cut"),
    ("with", "cut"), ("cut", "mix"),
    # cut pairs
    ("star", "star"), ("tensor", "star"), ("plus", "star"), ("parr", "star"),
    ("with", "star"), ("star", "mix"),
}

# Entries whose two sides have the same shape.
SELF_DUAL = {"parr/parr", "plus/plus", "with/with", "mix/mix", "cut/cut",
             "star/star", "tensor/tensor~1", "tensor/tensor~2"}

NONLOCAL = {"with/tensor", "with/mix", "with/cut", "with/star"}

SPLIT = (TENSOR, STAR, MIX, CUT)


def catalogue():
    """Every CommId the engine can produce."""
    out = {f"{u}/{l}" for u, l in TABLE}
    for base in ("plus/tensor", "parr/tensor", "with/tensor",
                 "tensor/mix", "tensor/cut", "tensor/star"):
        out.add(base + "~")
    out |= {"tensor/tensor~1", "tensor/tensor~2"}
    return out


class Move(NamedTuple):
    position: tuple      # path from the root to the lower node
    comm: str
    direction: str       # "lr" or "rl"
    premise: int = 0     # lower-node premise holding the upper rule (0: both)
    side: int = 0        # upper-node premise receiving the lower rule

    def record(self):
        return {"position": ".".join(str(k) for k in self.position),
                "commId": self.comm, "direction": self.direction,
                "premise": self.premise, "side": self.side}

    @classmethod
    def from_record(cls, rec):
        pos = rec["position"]
        position = tuple(int(k) for k in pos.split(".")) if pos else ()
        return cls(position, rec["commId"], rec["direction"],
                   int(rec.get("premise", 0)), int(rec.get("side", 0)))


class MoveError(ValueError):
    pass


def is_local(m):
    comm = m.comm if isinstance(m, Move) else m
    return comm.rstrip("~12") not in NONLOCAL


def reverse_direction(comm, direction):
    if comm in SELF_DUAL:
        return direction
    return "rl" if direction == "lr" else "lr"


def _label(lower, upper, variant=""):
    lo, up = family(lower), family(upper)
    if (up, lo) in TABLE:
        return f"{up}/{lo}{variant}", "lr"
    return f"{lo}/{up}{variant}", "rl"


# -- token plumbing ---------------------------------------------------------

def _premise_ids(q, ids, tag, formulas):
    """Token lists for the premises of ``q`` whose conclusion carries ``ids``."""
    out = []
    for roots, origins in pf.layout(q.conclusion, q.rule):
        toks = []
        for f, o in zip(roots, origins):
            t = ids[o[1]] if o[0] == "c" else (tag, o[1])
            formulas.setdefault(t, f)
            toks.append(t)
        out.append(toks)
    return out


def _rename(ids, old, new):
    return [(new, t[1]) if t[0] == old else t for t in ids]


def _local(t, tag):
    if t[0] != tag:
        return t
    return ("x", t[1]) if t[1] in ("L", "R") else ("k", t[1])


def _node(kind, principal, parts, tag, formulas, order=None, cutf=None):
    ids = []
    for _, qids in parts:
        for t in qids:
            if t[0] != tag and t not in ids:
                ids.append(t)
    if principal is not None:
        if principal in ids:
            raise ProofError("principal reaches a premise")
        ids.append(principal)
    if order is not None:
        if sorted(order) != sorted(ids):
            raise ProofError("fragment changes the conclusion")
        ids = list(order)
    roots = [(t, formulas[t]) for t in ids]
    local = [(q, [_local(t, tag) for t in qids]) for q, qids in parts]
    return pf.assemble(kind, roots, principal, local, cutf), ids


def _sorted_part(q, ids):
    """Subproof and tokens, reordered by token: a comparison key."""
    perm = sorted(range(len(ids)), key=lambda j: ids[j])
    return pf.permute(q, perm), [ids[j] for j in perm]


# -- the engine -------------------------------------------------------------

def swaps(q, config=Config()):
    """All commutations with ``q`` as the lower node.

    Returns a list of ``(comm, direction, premise, side, new_node)``.
    """
    kind = q.rule.kind
    if kind == AX:
        return []
    G = [("c", i) for i in range(len(q.conclusion))]
    F = {t: f for t, f in zip(G, q.conclusion)}
    Pb = _premise_ids(q, G, "b", F)
    tb = G[q.rule.principal] if q.rule.principal is not None else None
    out = []

    def emit(comm_dir, k, j, build):
        try:
            new = build()
        except ProofError:
            return
        if pf.check_proof(new, config):
            return
        out.append((comm_dir[0], comm_dir[1], k, j, new))

    if kind != WITH:
        for k, sub in enumerate(q.premises):
            ak = sub.rule.kind
            if ak == AX:
                continue
            Fk = dict(F)
            Pa = _premise_ids(sub, Pb[k], "a", Fk)
            ta = Pb[k][sub.rule.principal] if sub.rule.principal is not None else None
            if ta is not None and ta[0] != "c":
                continue
            _lower_single(q, k, sub, Pb, Pa, tb, ta, Fk, G, emit)
    else:
        s1, s2 = q.premises
        if s1.rule.kind == s2.rule.kind != AX:
            Pa1 = _premise_ids(s1, Pb[0], "a1", F)
            Pa2 = _premise_ids(s2, Pb[1], "a2", F)
            for (a, b) in (("a1", "a"), ("a2", "a")):
                for t in list(F):
                    if t[0] == a:
                        F.setdefault((b, t[1]), F[t])
            p1, p2 = s1.rule.principal, s2.rule.principal
            t1 = Pb[0][p1] if p1 is not None else None
            t2 = Pb[1][p2] if p2 is not None else None
            if t1 == t2 and (t1 is None or t1[0] == "c") and s1.rule.cutf == s2.rule.cutf:
                Pa1 = [_rename(x, "a1", "a") for x in Pa1]
                Pa2 = [_rename(x, "a2", "a") for x in Pa2]
                _lower_with(q, s1, s2, Pa1, Pa2, tb, t1, F, G, emit)
    return out


def _lower_single(q, k, sub, Pb, Pa, tb, ta, F, G, emit):
    kind, ak = q.rule.kind, sub.rule.kind
    other = [(q.premises[i], Pb[i]) for i in range(len(q.premises)) if i != k]

    def lower_parts(slot_part):
        parts = [None] * len(q.premises)
        parts[k] = slot_part
        for i in range(len(q.premises)):
            if i != k:
                parts[i] = (q.premises[i], Pb[i])
        return parts

    if kind in UNARY:
        if ak in UNARY:
            def build():
                b, bids = _node(kind, tb, [(sub.premises[0], Pa[0])], "b", F)
                return _node(ak, ta, [(b, bids)], "a", F, order=G)[0]
            emit(_label(kind, ak), k + 1, 0, build)
        elif ak == WITH:
            def build():
                b1 = _node(kind, tb, [(sub.premises[0], Pa[0])], "b", F)
                b2 = _node(kind, tb, [(sub.premises[1], Pa[1])], "b", F)
                return _node(WITH, ta, [b1, b2], "a", F, order=G)[0]
            emit(_label(kind, ak), k + 1, 0, build)
        else:
            extras = [t for t in Pb[0] if t[0] == "b"]
            slots = [j for j in range(2) if all(t in Pa[j] for t in extras)]
            for j in slots:
                def build(j=j):
                    b = _node(kind, tb, [(sub.premises[j], Pa[j])], "b", F)
                    parts = [(sub.premises[i], Pa[i]) for i in range(2)]
                    parts[j] = b
                    return _node(ak, ta, parts, "a", F, order=G, cutf=sub.rule.cutf)[0]
                variant = "~" if ak == TENSOR and j == 0 else ""
                emit(_label(kind, ak, variant), k + 1, j + 1, build)
        return

    # the lower rule splits its context
    if ak in UNARY:
        def build():
            b = _node(kind, tb, lower_parts((sub.premises[0], Pa[0])), "b", F, cutf=q.rule.cutf)
            return _node(ak, ta, [b], "a", F, order=G)[0]
        variant = "~" if kind == TENSOR and k == 0 else ""
        emit(_label(kind, ak, variant), k + 1, 0, build)
    elif ak == WITH:
        def build():
            b1 = _node(kind, tb, lower_parts((sub.premises[0], Pa[0])), "b", F, cutf=q.rule.cutf)
            b2 = _node(kind, tb, lower_parts((sub.premises[1], Pa[1])), "b", F, cutf=q.rule.cutf)
            return _node(WITH, ta, [b1, b2], "a", F, order=G)[0]
        variant = "~" if kind == TENSOR and k == 0 else ""
        emit(_label(kind, ak, variant), k + 1, 0, build)
    else:
        extra = [t for t in Pb[k] if t[0] == "b"]
        if extra:
            slots = [j for j in range(2) if extra[0] in Pa[j]]
        else:
            slots = [0, 1]
        for j in slots:
            def build(j=j):
                b = _node(kind, tb, lower_parts((sub.premises[j], Pa[j])), "b", F,
                          cutf=q.rule.cutf)
                parts = [(sub.premises[i], Pa[i]) for i in range(2)]
                parts[j] = b
                return _node(ak, ta, parts, "a", F, order=G, cutf=sub.rule.cutf)[0]
            comm = _split_label(kind, ak, k, j)
            emit(comm, k + 1, j + 1, build)


def _split_label(lower, upper, k, j):
    if lower == TENSOR and upper == TENSOR:
        if (k, j) == (1, 0):
            return "tensor/tensor", "lr"
        if (k, j) == (0, 1):
            return "tensor/tensor", "rl"
        return f"tensor/tensor~{k + 1}", "lr"
    if lower == TENSOR:
        return _label(lower, upper, "~" if k == 1 else "")
    if upper == TENSOR:
        return _label(lower, upper, "~" if j == 1 else "")
    return _label(lower, upper)


def _lower_with(q, s1, s2, Pa1, Pa2, tb, ta, F, G, emit):
    ak = s1.rule.kind
    if ak in UNARY:
        def build():
            b = _node(WITH, tb, [(s1.premises[0], Pa1[0]), (s2.premises[0], Pa2[0])], "b", F)
            return _node(ak, ta, [b], "a", F, order=G)[0]
        emit(_label(WITH, ak), 0, 0, build)
    elif ak == WITH:
        def build():
            left = _node(WITH, tb, [(s1.premises[0], Pa1[0]), (s2.premises[0], Pa2[0])], "b", F)
            right = _node(WITH, tb, [(s1.premises[1], Pa1[1]), (s2.premises[1], Pa2[1])], "b", F)
            return _node(WITH, ta, [left, right], "a", F, order=G)[0]
        emit(_label(WITH, ak), 0, 0, build)
    else:
        j1 = [j for j in range(2) if ("b", "L") in Pa1[j]]
        j2 = [j for j in range(2) if ("b", "R") in Pa2[j]]
        if not (j1 and j2):
            return
        j1, j2 = j1[0], j2[0]
        o1 = _sorted_part(s1.premises[1 - j1], Pa1[1 - j1])
        o2 = _sorted_part(s2.premises[1 - j2], Pa2[1 - j2])
        if o1 != o2:
            return
        if ak != MIX and j1 != j2:
            return

        def build():
            b = _node(WITH, tb, [(s1.premises[j1], Pa1[j1]), (s2.premises[j2], Pa2[j2])], "b", F)
            parts = [None, None]
            parts[j1] = b
            parts[1 - j1] = (s1.premises[1 - j1], Pa1[1 - j1])
            return _node(ak, ta, parts, "a", F, order=G, cutf=s1.rule.cutf)[0]
        variant = "~" if ak == TENSOR and j1 == 0 else ""
        emit(_label(WITH, ak, variant), 0, j1 + 1, build)


# -- moves on whole proofs --------------------------------------------------

def neighbours(p, config=Config()):
    """All (move, rewritten proof) pairs, in deterministic order."""
    out = []
    for pos in pf.positions(p):
        node = pf.node_at(p, pos)
        for comm, d, k, j, new in swaps(node, config):
            out.append((Move(pos, comm, d, k, j), pf.replace_at(p, pos, new)))
    return out


def applicable_moves(p, config=Config()):
    return [m for m, _ in neighbours(p, config)]


def apply_move(p, m, config=Config()):
    try:
        node = pf.node_at(p, m.position)
    except (IndexError, TypeError):
        raise MoveError(f"no node at position {m.position}") from None
    for comm, d, k, j, new in swaps(node, config):
        if (comm, d, k, j) == (m.comm, m.direction, m.premise, m.side):
            return pf.replace_at(p, m.position, new)
    raise MoveError(f"{m.comm} ({m.direction}) does not apply at "
                    f"{'.'.join(map(str, m.position)) or 'root'}")


def replay(p, trace, config=Config()):
    """Apply a trace, validating every step; returns all intermediate proofs."""
    seen = [p]
    for m in trace:
        p = apply_move(p, m, config)
        seen.append(p)
    return seen


def dumps_trace(trace):
    import json
    return json.dumps([m.record() for m in trace], indent=1) + "\n"


def loads_trace(text):
    import json
    return [Move.from_record(r) for r in json.loads(text)]


# -- the commutation matrix -------------------------------------------------

MATRIX_ORDER = (STAR, MIX, TENSOR, PLUS1, PLUS2, PARR, WITH)
ALWAYS, CONDITIONAL, DUPLICATING = "always", "conditional", "conditional-with-duplication"
MARK = {ALWAYS: "✓", CONDITIONAL: "○", DUPLICATING: "•", None: "?"}


def instances(p, config=Config()):
    """Every lower/upper adjacency meeting the tracking condition.

    Yields ``(lower kind, upper kind, commutes)``: ``commutes`` tells
    whether some commutation applies to that very adjacency.
    """
    for pos in pf.positions(p):
        q = pf.node_at(p, pos)
        kind = q.rule.kind
        if kind == AX:
            continue
        done = {(m[2], m[3]) for m in swaps(q, config)}
        G = [("c", i) for i in range(len(q.conclusion))]
        Pb = _premise_ids(q, G, "b", {})
        for k, sub in enumerate(q.premises):
            if sub.rule.kind == AX:
                continue
            pr = sub.rule.principal
            if pr is not None and Pb[k][pr][0] != "c":
                continue
            if kind == WITH:
                ok = any(kk == 0 for kk, _ in done)
            else:
                ok = any(kk == k + 1 for kk, _ in done)
            yield kind, sub.rule.kind, ok


def commutation_matrix(corpus, config=Config(pf.MALL_STAR, mix=True)):
    """Classify every (lower, upper) pair over a corpus of proofs.

    A pair is ``always`` when every instance commutes; otherwise it is
    conditional, with duplication when the commutation is non-local.
    Pairs without instances map to None.
    """
    seen = {}
    for p in corpus:
        for lo, up, ok in instances(p, config):
            key = (lo, up)
            seen[key] = seen.get(key, True) and ok
    out = {}
    for lo in MATRIX_ORDER:
        for up in MATRIX_ORDER:
            if (lo, up) not in seen:
                out[(lo, up)] = None
            elif seen[(lo, up)]:
                out[(lo, up)] = ALWAYS
            elif lo == WITH and up in SPLIT:
                out[(lo, up)] = DUPLICATING
            else:
                out[(lo, up)] = CONDITIONAL
    return out


def render_matrix(matrix):
    glyph = {STAR: "▷", MIX: "mix", TENSOR: "⊗", PLUS1: "⊕1", PLUS2: "⊕2", PARR: "⅋", WITH: "&"}
    lines = ["β\\α " + " ".join(f"{glyph[a]:>3}" for a in MATRIX_ORDER)]
    for lo in MATRIX_ORDER:
        lines.append(f"{glyph[lo]:<4}" + " ".join(f"{MARK[matrix[(lo, up)]]:>3}"
                                                  for up in MATRIX_ORDER))
    return "\n".join(lines)


EXPECTED_MATRIX = {
    (lo, up): (ALWAYS if lo in (STAR, MIX, TENSOR, PLUS1, PLUS2)
               else (CONDITIONAL if up in (STAR, MIX, TENSOR) else ALWAYS) if lo == PARR
               else (DUPLICATING if up in (STAR, MIX, TENSOR) else CONDITIONAL))
    for lo in MATRIX_ORDER for up in MATRIX_ORDER
}
