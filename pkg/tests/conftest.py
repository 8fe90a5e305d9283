import re

_AC = re.compile(r"test_acceptance\.py::test_ac(\d+)_")
_results: dict = {}


def pytest_runtest_logreport(report):
    m = _AC.search(report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    failed = report.failed or (report.when == "call" and report.skipped)
    if failed:
        _results[n] = False
    elif report.when == "call":
        _results.setdefault(n, True)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n not in _results:
            continue
        status = "PASS" if _results[n] else "FAIL"
        terminalreporter.write_line(f"AC{n:<2} {status}  {CRITERIA[n]}")
