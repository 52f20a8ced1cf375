import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import support


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if support.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in support.ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def mammo():
    from riskscores import load_csv

    return load_csv(support.DATA_DIR / "mammo.csv", "Malignant")


@pytest.fixture(scope="session")
def breastcancer():
    from riskscores import load_csv

    return load_csv(support.DATA_DIR / "breastcancer.csv", "Benign")
