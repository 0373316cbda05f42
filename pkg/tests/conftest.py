import time

import numpy as np
import pytest

from qmatops import kernels

SUITE_BUDGET_S = 60.0
_session_start = time.perf_counter()


def rand_complex(rng, rows, cols):
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def rand_state_amps(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    kernels.warmup()


def pytest_sessionfinish(session, exitstatus):
    # acceptance criterion 7: whole suite within the laptop budget
    elapsed = time.perf_counter() - _session_start
    session.config._qmatops_elapsed = elapsed
    if elapsed >= SUITE_BUDGET_S and session.testscollected > 50:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = getattr(config, "_qmatops_elapsed", None)
    if elapsed is None or terminalreporter._session.testscollected <= 50:
        return
    mark = "PASS" if elapsed < SUITE_BUDGET_S else "FAIL"
    terminalreporter.write_line(
        f"[{mark}] acceptance 7b: full suite runtime {elapsed:.1f} s (< {SUITE_BUDGET_S:.0f} s), "
        f"kernel backend = {kernels.BACKEND}"
    )
