import pytest

from translog.fixtures import m2

ACCEPTANCE_LINES = []


@pytest.fixture
def M2():
    return m2()


def team(M, *rows):
    """Team from value tuples, e.g. ``team(M, (0, 0), (1, 1))``."""
    return frozenset(M.assignment(r) for r in rows)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
