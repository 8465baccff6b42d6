from __future__ import annotations

OUTCOMES: dict[int, object] = {}


def pytest_terminal_summary(terminalreporter):
    if not OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(OUTCOMES):
        terminalreporter.write_line(OUTCOMES[n].line())
