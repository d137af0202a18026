import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_outcomes = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2).replace("_", " "))
    if report.when == "call" or report.outcome != "passed":
        prev = _outcomes.get(key, "passed")
        _outcomes[key] = report.outcome if prev == "passed" else prev


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), outcome in sorted(_outcomes.items()):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line("criterion %2d %s: %s" % (num, verdict, title))
