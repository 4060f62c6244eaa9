"""Shared test plumbing: collect acceptance-criterion verdict lines and
print them in the terminal summary so a plain `pytest -v` run shows one
PASS/FAIL line per criterion."""

CRITERION_LINES = []


def record_criterion(line: str) -> None:
    CRITERION_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.line(line)
