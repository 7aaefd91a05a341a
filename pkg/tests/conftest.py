import numpy as np
import pytest

KET0 = np.array([1.0, 0.0])
KET1 = np.array([0.0, 1.0])
PLUS = np.array([1.0, 1.0]) / np.sqrt(2)


def proj(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def np_entropy(m):
    """Reference entropy straight from LAPACK, no clamping logic from the package."""
    w = np.linalg.eigvalsh(m)
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log(w)))


def zz_dephase(m, side):
    """Dephasing in the computational basis of one qubit of a two-qubit matrix."""
    t = np.asarray(m).reshape(2, 2, 2, 2).copy()
    for i in range(2):
        for j in range(2):
            if i != j:
                if side == "A":
                    t[i, :, j, :] = 0
                else:
                    t[:, i, :, j] = 0
    return t.reshape(4, 4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def record_criterion(number, title, passed, detail):
    """Store one acceptance outcome; printed in the terminal summary."""
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
