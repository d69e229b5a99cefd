from __future__ import annotations

import pytest

from qlorder.groups import negative_lattice_example, shipped_presentations
from qlorder.hnn import nf
from qlorder.syntax import format_tokens, parse_word

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def presentations():
    return shipped_presentations()


@pytest.fixture(scope="session")
def bs23(presentations):
    return presentations["BS(2,3)"]


@pytest.fixture(scope="session")
def free11(presentations):
    return presentations["F2(1,1,b)"]


@pytest.fixture(scope="session")
def free23(presentations):
    return presentations["F2(2,3,b)"]


@pytest.fixture(scope="session")
def z2(presentations):
    return presentations["Z2(2,3,3,2)"]


@pytest.fixture(scope="session")
def negative():
    return negative_lattice_example()


def word(pres, text):
    """Positive normal form of a word given in token syntax."""
    return nf(pres, parse_word(pres, text))


def show(pres, x):
    return format_tokens(pres, x)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
