import contextlib

import pytest

ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``with criterion("name") as note: ...; note("detail")``."""

    @contextlib.contextmanager
    def record(name):
        details = []
        try:
            yield details.append
        except BaseException:
            ACCEPTANCE.append(("FAIL", name, "; ".join(details)))
            raise
        ACCEPTANCE.append(("PASS", name, "; ".join(details)))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, detail in ACCEPTANCE:
        terminalreporter.write_line(f"[{status}] {name}" + (f" -- {detail}" if detail else ""))
