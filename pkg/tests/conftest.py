import numpy as np
import pytest

from qfid.states import bloch_to_density, make_rng


@pytest.fixture
def rng():
    return make_rng(1234)


def random_bloch_ball(rng, radius_max=1.0):
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    return v * radius_max * rng.random() ** (1 / 3)


def random_density(rng):
    return bloch_to_density(random_bloch_ball(rng))


def random_pure(rng):
    v = rng.standard_normal(3)
    return bloch_to_density(v / np.linalg.norm(v))


def random_hermitian(rng, n=2, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (a + a.conj().T) / 2


# -- acceptance reporting ------------------------------------------------------

import time

SUITE_BUDGET_S = 300.0
_outcomes: dict = {}
_start = [0.0]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    _start[0] = time.perf_counter()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    report = (yield).get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key = mark.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        ok = report.outcome == "passed" and _outcomes.get(key, True)
        _outcomes[key] = ok


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _start[0]
    session.config._qfid_elapsed = elapsed
    if _outcomes and elapsed > SUITE_BUDGET_S and session.exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for (number, title), ok in sorted(_outcomes.items()):
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
    elapsed = getattr(config, "_qfid_elapsed", 0.0)
    verdict = "PASS" if elapsed <= SUITE_BUDGET_S else "FAIL"
    tr.write_line(f"[{verdict}] criterion 9: test session wall-clock {elapsed:.1f} s "
                  f"(limit {SUITE_BUDGET_S:.0f} s)")
