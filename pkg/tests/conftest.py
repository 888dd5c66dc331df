import numpy as np
import pytest

# one (criterion, passed, detail) record per acceptance criterion, printed
# as a PASS/FAIL block in the terminal summary
ACCEPTANCE_RESULTS = []


@pytest.fixture
def acceptance_report():
    def record(name, passed, detail):
        ACCEPTANCE_RESULTS.append((name, bool(passed), detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status} {name}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
