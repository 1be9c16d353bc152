"""Command-line front end.

Exit codes: 0 success or true, 1 false or a negative result, 2 usage or
input error, 3 unknown (a search budget ran out).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from mallnets import abstract as ab
from mallnets import commute as cm
from mallnets import netgraph as ng
from mallnets import nets
from mallnets import proofs as pf
from mallnets import rewrite as rw
from mallnets import syntax as sx

OK, FALSE, USAGE, UNKNOWN = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def load_proof(path):
    text = _read(path)
    try:
        return pf.loads(text)
    except (sx.SyntaxError_, pf.ProofError) as e:
        line = 1 if isinstance(e, sx.SyntaxError_) else 2
        raise InputError(f"{path}:{line}: {e}") from None


def load_net(path):
    """A net file, or the translation of a proof file."""
    text = _read(path)
    if text.lstrip().startswith("sequent:"):
        p = load_proof(path)
        if pf.count_kind(p, (pf.CUT,)):
            raise InputError(f"{path}: MALL cuts have no net of their own; lift to mall-star")
        return nets.translate(p)
    try:
        return nets.loads(text)
    except (sx.SyntaxError_, nets.NetError, KeyError) as e:
        raise InputError(f"{path}: {e}") from None


def load_sequent(arg):
    text = _read(arg) if arg.endswith(".seq") else arg
    try:
        return sx.parse_sequent(text.strip())
    except sx.SyntaxError_ as e:
        raise InputError(f"{arg}: {e}") from None


def config_of(args):
    if args.superimpose_cuts == "none" and args.system != pf.MALL_STAR:
        raise InputError("--superimpose-cuts none needs --system mall-star")
    return pf.Config(args.system, args.mix == "on", args.superimpose_cuts == "free")


def _show_net(net, fmt):
    if fmt == "structured":
        return nets.dumps(net)
    if fmt == "dot":
        return ng.to_dot(ng.net_graph(net))
    lines = [f"sequent: {sx.show_sequent(net.conclusion)}",
             f"linkings: {len(net.linkings)}"]
    for lk in net.sorted():
        lines.append("  " + "  ".join(f"{sx.show_addr(a)}-{sx.show_addr(b)}" for a, b in lk))
    return "\n".join(lines) + "\n"


def _show_proof(p, fmt):
    return pf.dumps(p) if fmt == "structured" else pf.render(p) + "\n"


def _show_trace(trace, fmt):
    if fmt == "structured":
        return cm.dumps_trace(trace)
    if not trace:
        return "no moves\n"
    return "".join(f"{m.comm} {m.direction} at {'.'.join(map(str, m.position)) or 'root'}\n"
                   for m in trace)


def cmd_check(args, cfg, out):
    p = load_proof(args.proof)
    errs = pf.check_proof(p, cfg)
    if args.format == "structured":
        out(json.dumps({"valid": not errs, "errors": errs}) + "\n")
    else:
        out("valid\n" if not errs else "".join(f"invalid: {e}\n" for e in errs))
    return OK if not errs else FALSE


def _valid_proof(path, cfg):
    p = load_proof(path)
    errs = pf.check_proof(p, cfg)
    if errs:
        raise InputError(f"{path}: invalid proof: {errs[0]}")
    return p


def cmd_translate(args, cfg, out):
    p = _valid_proof(args.proof, cfg)
    if pf.count_kind(p, (pf.CUT,)):
        raise InputError(f"{args.proof}: MALL cuts have no net of their own; lift to mall-star")
    out(_show_net(nets.translate(p), args.format))
    return OK


def cmd_net_eq(args, cfg, out):
    a, b = load_net(args.a), load_net(args.b)
    same = nets.net_eq(a, b)
    out("equal\n" if same else "different\n")
    return OK if same else FALSE


def cmd_moves(args, cfg, out):
    p = _valid_proof(args.proof, cfg)
    out(_show_trace(cm.applicable_moves(p, cfg), args.format))
    return OK


def cmd_apply(args, cfg, out):
    p = _valid_proof(args.proof, cfg)
    try:
        trace = cm.loads_trace(_read(args.trace))
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"{args.trace}: {e}") from None
    try:
        q = cm.replay(p, trace, cfg)[-1]
    except cm.MoveError as e:
        out(f"move rejected: {e}\n")
        return FALSE
    out(_show_proof(q, args.format))
    return OK


def cmd_convert(args, cfg, out):
    p, q = _valid_proof(args.a, cfg), _valid_proof(args.b, cfg)
    try:
        trace = rw.convert(p, q, cfg)
    except rw.ConversionError as e:
        out(f"not convertible: {e}\n")
        return FALSE
    except rw.Stuck as e:
        out(f"unknown: {e}\n")
        return UNKNOWN
    out(_show_trace(trace, args.format))
    return OK


def cmd_equiv(args, cfg, out):
    p, q = _valid_proof(args.a, cfg), _valid_proof(args.b, cfg)
    if tuple(p.conclusion) != tuple(q.conclusion):
        out("not equivalent: different conclusions\n")
        return FALSE
    if cfg.system == pf.MALL:
        res = rw.decide_equiv_mall(p, q, args.max_states, args.max_nodes)
        if isinstance(res, rw.Unknown):
            out(f"unknown: {res.reason}\n")
            return UNKNOWN
        if isinstance(res, rw.NotEquivalent):
            out("not equivalent\n")
            return FALSE
        out("equivalent\n" if args.format == "text" else "")
        out(_show_trace(res.trace, args.format))
        return OK
    if not nets.net_eq(nets.translate(p), nets.translate(q)):
        out("not equivalent\n")
        return FALSE
    try:
        trace = rw.convert(p, q, cfg)
    except rw.Stuck as e:
        out(f"unknown: {e}\n")
        return UNKNOWN
    out("equivalent\n" if args.format == "text" else "")
    out(_show_trace(trace, args.format))
    return OK


def cmd_sequentialize(args, cfg, out):
    net = load_net(args.net)
    res = rw.sequentialize(net, cfg)
    if isinstance(res, rw.NotANet):
        out(f"not a net: {res.reason}\n")
        return FALSE
    out(_show_proof(res, args.format))
    return OK


def cmd_graph(args, cfg, out):
    net = load_net(args.file)
    graph = ng.net_graph(net)
    if args.format == "text":
        rep = ng.check_net_properties(net)
        out(f"vertices: {len(graph.vertices)}\nedges: {len(graph.edges)}\n"
            f"connected: {graph.is_connected()}\nproperties: {'ok' if rep.ok else 'violated'}\n")
    else:
        out(ng.to_dot(graph))
    return OK


def cmd_gen_comms(args, cfg, out):
    bounds = ab.Bounds(args.max_upper, args.max_upper + 1)
    if args.matrix:
        from mallnets.corpus import matrix_corpus
        matrix = cm.commutation_matrix(matrix_corpus(), pf.Config(pf.MALL_STAR, mix=True))
        out(cm.render_matrix(matrix) + "\n")
        if args.plot:
            from mallnets import report
            report.matrix_heatmap(matrix, args.plot)
        return OK if matrix == cm.EXPECTED_MATRIX else FALSE
    if args.validate:
        v = ab.validate_against_tables(bounds)
        out(v.summary() + "\n")
        if args.plot:
            from mallnets import report
            report.catalogue_chart(v.diffs, args.plot)
        return OK if v.ok else FALSE
    try:
        cat = ab.generate_catalogue(cfg.system, cfg.mix, bounds)
    except ValueError as e:
        out(f"unknown: {e}\n")
        return UNKNOWN
    if args.format == "structured":
        out(ab.dumps_catalogue(cat))
    else:
        for c in sorted(cat.values(), key=lambda c: (ab.comm_id(c), ab.key_of(c))):
            out(f"{ab.comm_id(c)}{'' if ab.is_local(c) else ' (non-local)'}\n"
                f"  {ab.show_proof(c.left)}\n  {ab.show_proof(c.right)}\n")
        out(f"{len(cat)} commutations\n")
    return OK


def cmd_conjecture(args, cfg, out):
    from mallnets.corpus import CutCorpusSpec, cut_corpus
    spec = CutCorpusSpec(max_leaves=args.max_leaves, max_nodes=args.max_nodes,
                         max_cuts=args.max_cuts)
    rep = rw.conjecture_harness(cut_corpus(spec), pf.Config(pf.MALL), args.max_extra)
    out(rep.summary() + "\n")
    for goal, ps in rep.candidates:
        out(f"candidate: {sx.show_sequent(goal)} ({len(ps)} proofs)\n")
    if args.format == "structured":
        out(json.dumps({k: list(v) for k, v in sorted(rep.class_counts.items())}) + "\n")
    if args.plot:
        from mallnets import report
        report.class_count_chart(rep.class_counts, args.plot)
    return OK if not rep.violations else FALSE


def cmd_enumerate(args, cfg, out):
    goal = load_sequent(args.sequent)
    try:
        cuts = [sx.parse_formula(c) for c in args.cut]
    except sx.SyntaxError_ as e:
        raise InputError(f"--cut: {e}") from None
    ps = pf.enumerate_proofs(goal, cfg, args.max_nodes, args.max_cuts if cuts else 0, cuts)
    ps = sorted(ps, key=pf.dumps)
    if args.format == "structured":
        out("\n".join(pf.dumps(p) for p in ps))
    else:
        for i, p in enumerate(ps):
            out(f"# {i}\n{pf.render(p)}\n")
        out(f"{len(ps)} proofs\n")
    return OK if ps else FALSE


COMMANDS = {
    "check": (cmd_check, ["proof"], "validate a proof file"),
    "translate": (cmd_translate, ["proof"], "translate a proof to its net"),
    "net-eq": (cmd_net_eq, ["a", "b"], "compare two nets (or proofs by their nets)"),
    "moves": (cmd_moves, ["proof"], "list applicable rule commutations"),
    "apply": (cmd_apply, ["proof", "trace"], "replay a trace of moves"),
    "convert": (cmd_convert, ["a", "b"], "moves turning one proof into a net-equal other"),
    "equiv": (cmd_equiv, ["a", "b"], "decide proof-net equivalence"),
    "sequentialize": (cmd_sequentialize, ["net"], "rebuild a proof from a net"),
    "graph": (cmd_graph, ["file"], "the graph of a net, as DOT"),
    "gen-comms": (cmd_gen_comms, [], "generate the rule commutation catalogue"),
    "conjecture": (cmd_conjecture, [], "cut-linking conjecture harness"),
    "enumerate": (cmd_enumerate, ["sequent"], "every proof of a sequent within budget"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", choices=[pf.MALL_MINUS, pf.MALL, pf.MALL_STAR],
                        default=pf.MALL_MINUS)
    common.add_argument("--mix", choices=["on", "off"], default="off")
    common.add_argument("--superimpose-cuts", choices=["free", "none"], default="free")
    common.add_argument("--max-nodes", type=int, default=8, help="proof size budget")
    common.add_argument("--max-states", type=int, default=10000, help="search budget")
    common.add_argument("--format", choices=["text", "structured", "dot"], default="text")
    common.add_argument("--plot", metavar="PATH", help="write a PNG chart")
    common.add_argument("-o", "--output", metavar="PATH", help="write output to a file")
    parser = argparse.ArgumentParser(prog="mallnets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, positional, helptext) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=helptext)
        for arg in positional:
            sp.add_argument(arg)
        if name == "gen-comms":
            sp.add_argument("--validate", action="store_true",
                            help="diff against the transcribed catalogue")
            sp.add_argument("--matrix", action="store_true",
                            help="classify rule pairs over the matrix corpus")
            sp.add_argument("--max-upper", type=int, default=2)
        if name == "conjecture":
            sp.add_argument("--max-leaves", type=int, default=3)
            sp.add_argument("--max-cuts", type=int, default=2)
            sp.add_argument("--max-extra", type=int, default=2)
        if name == "enumerate":
            sp.add_argument("--cut", action="append", default=[], help="a cut formula")
            sp.add_argument("--max-cuts", type=int, default=1)
    return parser


def run(argv=None):
    """Run one command; returns (exit code, output text, output path)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (e.code if isinstance(e.code, int) else USAGE), "", None
    chunks = []
    try:
        cfg = config_of(args)
        code = COMMANDS[args.command][0](args, cfg, chunks.append)
    except InputError as e:
        return USAGE, f"error: {e}\n", None
    return code, "".join(chunks), args.output


def main(argv=None):
    code, text, target = run(argv)
    if code == USAGE:
        sys.stderr.write(text)
    elif target:
        Path(target).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
