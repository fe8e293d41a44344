import os
import re

import pytest

from doublecat import fixtures

# keep the test suite reproducible whatever the caller's environment says
os.environ.pop("DCAT_MAX_GRIDS", None)

_CACHE = {}


def example(name):
    """Built-in instances are immutable, so build each once per session."""
    if name not in _CACHE:
        _CACHE[name] = fixtures.EXAMPLES[name]()
    return _CACHE[name]


@pytest.fixture(scope="session")
def c4():
    return example("c4")


@pytest.fixture(scope="session")
def s3():
    return example("s3_a3")


@pytest.fixture(scope="session")
def shell():
    return example("s3_shell")


@pytest.fixture(scope="session")
def d4():
    return example("d4_center")


@pytest.fixture(scope="session")
def semicore():
    return example("semicore_s3")


@pytest.fixture(scope="session")
def broken():
    return example("broken_action")


# acceptance summary: one line per criterion at the end of the run

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        prev = _ACCEPTANCE.get(key, "PASS")
        _ACCEPTANCE[key] = "FAIL" if report.outcome == "failed" or prev == "FAIL" else \
            ("SKIP" if report.outcome == "skipped" else prev)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), status in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"criterion {num} ({name.replace('_', ' ')}): {status}")
