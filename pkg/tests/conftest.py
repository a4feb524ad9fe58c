import pytest

_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_KEY] = []


@pytest.fixture
def acceptance_log(request):
    """Append (number, passed, detail); the lines are repeated in the terminal summary."""
    return request.config.stash[_KEY]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = sorted(config.stash.get(_KEY, []))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in rows:
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
