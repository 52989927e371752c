import pytest

from adsmana.background import DetectorSetup
from adsmana.checks import load_goldens


@pytest.fixture(scope="session")
def goldens():
    return load_goldens()


@pytest.fixture
def standard():
    """The figure parameter point: d=3, ell=1, R=0.1, sigma=lambda=Omega=1."""
    return DetectorSetup(3, 1.0, 0.1, 1.0, 1.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n].line())
