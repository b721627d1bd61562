import pytest

_results: dict[str, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _results.setdefault(marker.args[0], []).append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name, checks in _results.items():
        failed = [test for test, outcome in checks if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        tr.write_line(f"{status}  {name}  ({len(checks) - len(failed)}/{len(checks)} checks)")
        for test in failed:
            tr.write_line(f"        failed: {test}")
