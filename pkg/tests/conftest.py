"""Collects the acceptance PASS/FAIL lines and prints them after the run."""

ACCEPTANCE_KEY = "acceptance"
_LINES = []


def pytest_runtest_logreport(report):
    if report.when == "call":
        _LINES.extend(v for k, v in report.user_properties if k == ACCEPTANCE_KEY)


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
