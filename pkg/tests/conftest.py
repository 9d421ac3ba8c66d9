import pytest

from aspcount.program import parse_program


def pairs(k, prefix=""):
    """``k`` independent even negative loops: 2**k answer sets."""
    return parse_program(
        " ".join(f"{prefix}a{i} :- not {prefix}b{i}. {prefix}b{i} :- not {prefix}a{i}." for i in range(k))
    )


@pytest.fixture
def P():
    return parse_program


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
