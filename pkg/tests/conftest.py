"""Echo the per-criterion acceptance lines after the run, since pytest's
default capture would otherwise swallow them unless -s is passed."""
import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get(
        "tests.test_acceptance"
    )
    for line in getattr(mod, "REPORT_LINES", []) if mod else []:
        terminalreporter.write_line(line)
