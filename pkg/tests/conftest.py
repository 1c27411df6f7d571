import re

import pytest
from hypothesis import HealthCheck, settings

from twv.fixtures import figure8, whitehead
from twv.volume import Pipeline

settings.register_profile("twv", deadline=None, suppress_health_check=[HealthCheck.too_slow],
                          derandomize=False)
settings.load_profile("twv")


@pytest.fixture(scope="session")
def fig8():
    return figure8()


@pytest.fixture(scope="session")
def wh():
    return whitehead()


@pytest.fixture(scope="session")
def fig8_pipes(fig8):
    return [Pipeline(fig8, i) for i in range(len(fig8.representations))]


@pytest.fixture(scope="session")
def wh_pipes(wh):
    return [Pipeline(wh, i) for i in range(len(wh.representations))]


# acceptance criteria reporting: one line per criterion in the terminal summary
_CRITERION = re.compile(r"test_criterion_(\d+)")


def pytest_configure(config):
    config._twv_results = {}
    config._twv_notes = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    config = pytest_runtest_logreport.config
    if config is not None:
        config._twv_results.setdefault(int(m.group(1)), []).append(report.passed)


pytest_runtest_logreport.config = None


@pytest.hookimpl(tryfirst=True)
def pytest_sessionstart(session):
    pytest_runtest_logreport.config = session.config


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_twv_results", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        status = "PASS" if all(results[k]) else "FAIL"
        notes = "; ".join(config._twv_notes.get(k, []))
        terminalreporter.write_line(f"criterion {k}: {status}" + (f"  ({notes})" if notes else ""))


@pytest.fixture
def note(request):
    """note(k, text): attach a detail string to criterion k's summary line."""
    def _note(k, text):
        request.config._twv_notes.setdefault(k, []).append(text)
        print(f"criterion {k}: {text}")
    return _note
