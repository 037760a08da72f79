"""Repeat the acceptance PASS/FAIL lines in the terminal summary.

Captured output is only shown for failing tests, so the lines are collected
here and printed at the end of every run that includes the acceptance suite.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
