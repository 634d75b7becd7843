import pytest

_criteria: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "_criterion", None)
    if marker is None:
        return
    number, text = marker
    entry = _criteria.setdefault(number, {"text": text, "ok": True, "ran": False})
    if report.when == "call":
        entry["ran"] = True
    if report.failed:
        entry["ok"] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report._criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] and entry["ran"] else ("FAIL" if entry["ran"] else "NOT RUN")
        terminalreporter.write_line(f"criterion {number}: {status}  {entry['text']}")
