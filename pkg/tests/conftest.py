from pathlib import Path

import pytest

from lpm.signature import Theory
from lpm.syntax import parse_file
from lpm.theories import coc_theory, stt_theory

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPUS = REPO_ROOT / "corpus"
THEORY_FILES = REPO_ROOT / "theories"


@pytest.fixture(scope="session")
def stt():
    return stt_theory()


@pytest.fixture(scope="session")
def coc():
    return coc_theory()


@pytest.fixture(scope="session")
def holl_entries():
    return parse_file((CORPUS / "holl.lpm").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def arith_entries():
    return parse_file((CORPUS / "arith.lpm").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def holl_theory(stt, holl_entries):
    return Theory("holl", base=stt).add_entries(holl_entries).seal()


@pytest.fixture(scope="session")
def arith_theory(coc, arith_entries):
    return Theory("arith", base=coc).add_entries(arith_entries).seal()
