from __future__ import annotations


_results: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    prev = _results.get(number)
    if call.excinfo is not None and call.excinfo.typename != "Skipped":
        _results[number] = (title, "FAIL", call.duration)
    elif call.when == "call" and (prev is None or prev[1] != "FAIL"):
        _results[number] = (title, "PASS", call.duration)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        title, status, seconds = _results[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}  ({seconds:.1f}s)")
