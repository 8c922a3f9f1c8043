import re

_OUTCOMES = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.failed:
        _OUTCOMES[key] = "FAIL"
    elif report.when == "call" and key not in _OUTCOMES:
        _OUTCOMES[key] = "PASS" if report.passed else "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), outcome in sorted(_OUTCOMES.items()):
        terminalreporter.write_line(f"criterion {num:2d} {name.replace('_', ' ')}: {outcome}")
