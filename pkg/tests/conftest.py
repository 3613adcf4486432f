import random
import sys
from pathlib import Path

import pytest

from eplan import Signature, pointed
from eplan.corpus import enumerate_formulas, state_corpus

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def sig():
    return Signature(("f", "g", "opened", "heads", "key_a"), ("a", "b", "c"))


@pytest.fixture
def coin():
    """Two worlds, f true only in world 0, nobody can tell them apart."""
    full = [(0, 0), (0, 1), (1, 0), (1, 1)]
    return pointed([{"f"}, set()], {"a": full, "b": full, "c": full}, 0, ("a", "b", "c"), ("f",))


@pytest.fixture(scope="session")
def small_corpus():
    return state_corpus(150, seed=7)


@pytest.fixture(scope="session")
def formula_pool():
    return enumerate_formulas()


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    report = getattr(sys.modules.get("test_acceptance"), "REPORT", None)
    if not report:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(report):
        terminalreporter.write_line(report[number])
