import numpy as np
import pytest

from tirair.series import center, default_spec, generate

_criteria = []


@pytest.fixture(scope="session")
def model_series():
    """Reference model series (length 50400), generated once per session."""
    cache = {}

    def get(model, **overrides):
        key = (model, tuple(sorted(overrides.items())))
        if key not in cache:
            cache[key] = generate(default_spec(model, **overrides))
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def centered():
    def make(values):
        return center(np.asarray(values, dtype=float))

    return make


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.skipped):
        return
    for mark in ("criterion",):
        label = dict(report.user_properties).get(mark)
        if label is not None:
            _criteria.append((label, report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, name, outcome in sorted(_criteria, key=lambda c: (c[0], c[1])):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[outcome]
        terminalreporter.write_line(f"criterion {label}: {status}  {name}")
