"""Shared test plumbing: the acceptance summary block.

Acceptance tests register one line each; the hook below prints the block
after the run so the per-guarantee verdicts are visible without -s."""

_acceptance_lines: list = []


def record_acceptance(line: str) -> None:
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance summary")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
