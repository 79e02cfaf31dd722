import numpy as np
import pytest

from logminor.linalg import make_spd

ACCEPTANCE_LINES = []


def record(criterion: str, passed: bool, detail: str = "") -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] {criterion}" + (f" -- {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_spd(n, seed, spread=5.0):
    """Random SPD matrix with eigenvalues log-uniform over a factor ``spread``."""
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    ev = np.exp(rng.uniform(0.0, np.log(spread), size=n))
    return make_spd(q @ np.diag(ev) @ q.T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
