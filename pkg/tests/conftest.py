import pytest

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record the verdict of one acceptance criterion for the summary table."""

    def record(number, ok, detail):
        _ACCEPTANCE[number] = (ok, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
