import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import bindings_support


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if bindings_support.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in bindings_support.ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
