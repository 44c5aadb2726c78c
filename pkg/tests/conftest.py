"""Prints one verdict line per acceptance check at the end of a run."""

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    if report.failed:
        _acceptance[report.nodeid] = "FAIL"
    elif report.skipped:
        _acceptance.setdefault(report.nodeid, "SKIP")
    elif report.when == "call":
        _acceptance.setdefault(report.nodeid, "PASS")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_acceptance):
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{_acceptance[nodeid]:4s} {name}")
