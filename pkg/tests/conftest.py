import pytest

from cyclet import _backend


@pytest.fixture(params=sorted(_backend.BACKENDS))
def core(request):
    """Each available numerical core in turn."""
    return _backend.BACKENDS[request.param]


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
