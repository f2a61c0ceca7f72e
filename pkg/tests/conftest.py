import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    number, title = marker.args
    xfail = item.get_closest_marker("xfail")
    if call.excinfo is None:
        status = "PASS"
    else:
        status = "FAIL"
    note = xfail.kwargs.get("reason", "") if (xfail and status == "FAIL") else ""
    previous = _CRITERIA.get(number)
    if previous and previous[1] == "FAIL":
        return
    _CRITERIA[number] = (title, status, note)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status, note = _CRITERIA[number]
        line = f"criterion {number:2d}: {status}  {title}"
        if note:
            line += f"  [{note}]"
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    import random

    return random.Random(20240611)
