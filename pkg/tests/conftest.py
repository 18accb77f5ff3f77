"""Shared pytest hooks: collect acceptance-criterion lines for the summary."""

acceptance_lines = []


def record_criterion_line(line):
    acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_lines):
            terminalreporter.write_line(line)
