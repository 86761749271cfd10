import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def haar(n, rng):
    """Haar unitary by QR with phase fix; used as an oracle independent of the package."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def brute_distance(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return 0.5 * abs(np.linalg.det(a - b)) ** (1 / a.shape[0])


def brute_quality(ms):
    ms = list(ms)
    return min(brute_distance(ms[i], ms[j]) for i in range(len(ms)) for j in range(i + 1, len(ms)))


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[k])
