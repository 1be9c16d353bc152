from __future__ import annotations

import json
import subprocess
import sys

import pytest

from mallnets import cli
from mallnets import proofs as pf
from mallnets import samples


def run(*argv):
    return cli.run([str(a) for a in argv])


def test_check(data):
    code, text, _ = run("check", data / "two_linkings.proof")
    assert (code, text) == (cli.OK, "valid\n")
    code, text, _ = run("check", data / "two_linkings.proof", "--format", "structured")
    assert json.loads(text) == {"valid": True, "errors": []}


def test_check_invalid_proof(tmp_path):
    p = samples.parr_over_mix()
    f = tmp_path / "mix.proof"
    f.write_text(pf.dumps(p))
    code, text, _ = run("check", f)
    assert code == cli.FALSE and text.startswith("invalid:")
    assert run("check", f, "--mix", "on")[0] == cli.OK


def test_parse_error_reports_file_line_and_position(tmp_path):
    f = tmp_path / "bad.proof"
    f.write_text("sequent: P, , ~P\n{}\n")
    code, text, _ = run("check", f)
    assert code == cli.USAGE
    assert f"{f}:1:" in text and "position" in text


def test_missing_file():
    code, text, _ = run("check", "no/such.proof")
    assert code == cli.USAGE and "no/such.proof" in text


def test_usage_errors():
    assert run()[0] == cli.USAGE
    assert run("frobnicate")[0] == cli.USAGE
    assert run("gen-comms", "--superimpose-cuts", "none")[0] == cli.USAGE


def test_translate_matches_golden(data, golden):
    code, text, _ = run("translate", data / "two_linkings.proof", "--format", "structured")
    assert code == cli.OK and text == (golden / "two_linkings.net").read_text()
    code, text, _ = run("translate", data / "two_linkings.proof", "--format", "dot")
    assert text.startswith("graph G {")


def test_net_eq(data):
    assert run("net-eq", data / "tensor_over_plus_lower.proof", data / "tensor_over_plus_upper.proof")[0] == cli.OK
    assert run("net-eq", data / "crossed_a.proof", data / "crossed_b.proof")[0] == cli.FALSE
    assert run("net-eq", data / "two_linkings.proof", data / "two_linkings.net")[0] == cli.OK


@pytest.mark.parametrize("name", ["tensor_over_plus", "tensor_over_with"])
def test_equiv_matches_golden_trace(data, golden, name):
    code, text, _ = run("equiv", data / f"{name}_lower.proof", data / f"{name}_upper.proof",
                        "--format", "structured")
    assert code == cli.OK
    assert text == (golden / f"{name}.trace").read_text()


def test_equiv_text_and_negative(data):
    code, text, _ = run("equiv", data / "tensor_over_plus_lower.proof", data / "tensor_over_plus_upper.proof")
    assert code == cli.OK and text == "equivalent\nplus/tensor lr at root\n"
    code, text, _ = run("equiv", data / "crossed_a.proof", data / "crossed_b.proof")
    assert (code, text) == (cli.FALSE, "not equivalent\n")


def test_apply_trace(data, golden):
    code, text, _ = run("apply", data / "tensor_over_plus_lower.proof", golden / "tensor_over_plus.trace",
                        "--format", "structured")
    assert code == cli.OK
    assert pf.loads(text) == pf.loads((data / "tensor_over_plus_upper.proof").read_text())
    code, text, _ = run("apply", data / "two_linkings.proof", golden / "tensor_over_plus.trace")
    assert code == cli.FALSE and text.startswith("move rejected")


def test_moves_and_convert(data):
    code, text, _ = run("moves", data / "tensor_over_plus_lower.proof")
    assert code == cli.OK and "plus/tensor lr at root" in text
    code, text, _ = run("convert", data / "tensor_over_with_lower.proof", data / "tensor_over_with_upper.proof")
    assert code == cli.OK and text == "with/tensor lr at root\n"
    assert run("convert", data / "crossed_a.proof", data / "crossed_b.proof")[0] == cli.FALSE


def test_sequentialize(data):
    code, text, _ = run("sequentialize", data / "two_linkings.net", "--format", "structured")
    assert code == cli.OK
    assert run("net-eq", data / "two_linkings.net", data / "two_linkings.net")[0] == cli.OK
    assert pf.is_valid(pf.loads(text))
    code, text, _ = run("sequentialize", data / "mutated.net")
    assert code == cli.FALSE and text.startswith("not a net:")


def test_graph(data):
    code, text, _ = run("graph", data / "two_linkings.net")
    assert code == cli.OK and "connected: True" in text and "properties: ok" in text


def test_enumerate():
    code, text, _ = run("enumerate", "P, ~P")
    assert code == cli.OK and text.endswith("1 proofs\n")
    assert run("enumerate", "P, Q")[0] == cli.FALSE
    code, text, _ = run("enumerate", "P, ~P", "--system", "mall", "--cut", "P",
                        "--max-cuts", "1", "--max-nodes", "3", "--format", "structured")
    proofs = [pf.loads(block) for block in text.strip().split("\n\n")]
    assert code == cli.OK and len(proofs) == 2
    assert sum(pf.count_kind(p, (pf.CUT,)) for p in proofs) == 1
    assert run("enumerate", "P, ~P", "--cut", "P *")[0] == cli.USAGE


def test_mall_equiv_with_cuts(data, tmp_path):
    f = tmp_path / "cut.proof"
    f.write_text(pf.dumps(samples.mall_cut()))
    code, text, _ = run("equiv", f, f, "--system", "mall")
    assert code == cli.OK and text.startswith("equivalent")
    assert run("translate", f, "--system", "mall")[0] == cli.USAGE


def test_gen_comms_validate_and_plot(tmp_path):
    png = tmp_path / "cat.png"
    code, text, _ = run("gen-comms", "--validate", "--plot", png)
    assert code == cli.OK and text.rstrip().endswith("ok")
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_gen_comms_listing():
    code, text, _ = run("gen-comms", "--system", "mall-star")
    assert code == cli.OK and text.endswith("28 commutations\n")
    assert "(non-local)" in text
    assert run("gen-comms", "--max-upper", "1")[0] == cli.UNKNOWN


def test_conjecture_with_plot(tmp_path):
    png = tmp_path / "classes.png"
    code, text, _ = run("conjecture", "--max-leaves", "2", "--plot", png)
    assert code == cli.OK and "violations=0" in text
    assert png.read_bytes()[:4] == b"\x89PNG"


def test_output_is_deterministic(data, tmp_path):
    argv = ["moves", data / "two_linkings.proof", "--format", "structured"]
    first = run(*argv)
    assert all(run(*argv) == first for _ in range(3))
    out = tmp_path / "m.json"
    assert cli.main([str(a) for a in argv] + ["-o", str(out)]) == cli.OK
    assert out.read_text() == first[1]


def test_main_writes_errors_to_stderr(capsys):
    assert cli.main(["check", "no/such.proof"]) == cli.USAGE
    captured = capsys.readouterr()
    assert captured.out == "" and "no/such.proof" in captured.err


def test_console_entry_point(data):
    r = subprocess.run([sys.executable, "-m", "mallnets.cli", "check", str(data / "two_linkings.proof")],
                       capture_output=True, text=True)
    assert (r.returncode, r.stdout) == (0, "valid\n")
