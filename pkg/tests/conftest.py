import pytest

from quantree import Potential


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {k:2d}: {detail}")


@pytest.fixture(scope="session")
def zero():
    return Potential.zero()


@pytest.fixture(scope="session")
def step():
    """V = -16 on [1/3, 2/3]."""
    return Potential.step(-16.0)
