import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def report():
    """Record the PASS/FAIL line of an acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        _LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_LINES):
        terminalreporter.write_line(_LINES[number])
