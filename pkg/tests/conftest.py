import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# one pass/fail line per acceptance check, echoed after the pytest summary so
# they are visible even when output capture is on
acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance summary:")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
