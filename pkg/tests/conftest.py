from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mallnets import corpus  # noqa: E402
from mallnets import proofs as pf  # noqa: E402

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def corpus_plain():
    return corpus.proof_corpus(corpus.CorpusSpec(mix=False))


@pytest.fixture(scope="session")
def corpus_mix():
    return corpus.proof_corpus(corpus.CorpusSpec(mix=True))


@pytest.fixture(scope="session")
def cut_corpus():
    return corpus.cut_corpus(corpus.CutCorpusSpec(max_leaves=5))


@pytest.fixture(scope="session")
def star_corpus():
    """MALL* proofs: every lifting of every cut-corpus proof, deduplicated."""
    return list(dict.fromkeys(corpus.star_corpus(corpus.CutCorpusSpec(max_leaves=5))))


@pytest.fixture(scope="session")
def data():
    return DATA


@pytest.fixture(scope="session")
def golden():
    return GOLDEN


VERDICTS = []


def verdict(n, ok, detail=""):
    """Print the one-line result of an acceptance criterion."""
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}".rstrip()
    VERDICTS.append(line)
    print("\n" + line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)


def proofs_of(c):
    return [p for _, ps in c for p in ps]


MALL_STAR = pf.Config(pf.MALL_STAR)
