import pytest

from qzetalab.qcore import make_character, principal_character

CHI4_VALUES = (1, 0, -1, 0)
# real even character mod 5: the Legendre symbol (k/5)
CHI5_EVEN_VALUES = (1, -1, -1, 1, 0)


@pytest.fixture
def chi4():
    return make_character(4, CHI4_VALUES)


@pytest.fixture
def chi5_even():
    return make_character(5, CHI5_EVEN_VALUES)


@pytest.fixture
def trivial():
    return principal_character(1)


# one line per acceptance criterion, shown at the end of the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
