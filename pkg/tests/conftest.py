"""Per-criterion pass/fail reporting for the acceptance suite."""

_results = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _results[name] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_results):
        outcome = _results[name].upper()
        terminalreporter.write_line(f"{name}: {'PASS' if outcome == 'PASSED' else outcome}")
