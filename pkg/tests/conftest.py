import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def direct_dct(x):
    """Textbook O(N^2) DCT-II with c(0)=sqrt(1/N), c(k)=sqrt(2/N)."""
    n = len(x)
    out = np.empty(n)
    for k in range(n):
        c = np.sqrt(1.0 / n) if k == 0 else np.sqrt(2.0 / n)
        out[k] = c * sum(x[i] * np.cos((2 * i + 1) * k * np.pi / (2 * n)) for i in range(n))
    return out


def direct_dft(x):
    n = len(x)
    return np.array(
        [sum(x[i] * np.exp(-2j * np.pi * i * k / n) for i in range(n)) for k in range(n)]
    ) / np.sqrt(n)


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    print(ACCEPTANCE_LINES[-1])
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
