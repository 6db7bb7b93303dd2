import pytest

from contractlearn.instgen import gen_hardness

from helpers import ACCEPTANCE_LINES


@pytest.fixture
def e1():
    return gen_hardness(0.1, strict=False)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
