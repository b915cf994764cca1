import pytest

from _data import BOW, CYCLE, EYE, SPINNER, TWIN_PEAK
from usokit import enumerate_usos
from usokit.analysis import all_orientations


@pytest.fixture(scope="session")
def usos3():
    return list(enumerate_usos(3))


@pytest.fixture(scope="session")
def orientations3():
    return list(all_orientations(3))


@pytest.fixture
def spinner():
    return SPINNER


@pytest.fixture(params=["eye", "bow", "twin_peak", "cycle"])
def two_cube(request):
    return {"eye": EYE, "bow": BOW, "twin_peak": TWIN_PEAK, "cycle": CYCLE}[request.param]


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        props = dict(report.user_properties)
        timing = f"  {props['elapsed']:.2f}s / {props['budget']}s" if "elapsed" in props else ""
        _acceptance[name] = ("PASS" if report.passed else "FAIL") + timing


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in _acceptance.items():
        terminalreporter.write_line(f"{verdict}  {name}")
