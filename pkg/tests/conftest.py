import os

import pytest
from hypothesis import settings

from pseudotelepathy.kscolour import builtin_cabello18
from pseudotelepathy.ksgame import builtin_quad_4d

settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile("dev", max_examples=50, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "dev"))


@pytest.fixture(scope="session")
def cabello():
    return builtin_cabello18()


@pytest.fixture(scope="session")
def quad():
    return builtin_quad_4d()


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (outcome, duration) in sorted(_acceptance.items()):
        name = nodeid.split("::")[-1].removeprefix("test_criterion_")
        number, _, label = name.partition("_")
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {int(number):2d} {verdict}  {label.replace('_', ' ')}  ({duration:.2f}s)")
