import numpy as np
import pytest
import scipy.linalg

from supracent import TemporalNetwork


def floyd_warshall_reachable(M):
    """Transitive closure by Floyd-Warshall on the nonzero pattern of ``M``."""
    M = np.asarray(M)
    n = M.shape[0]
    R = (M != 0) | np.eye(n, dtype=bool)
    for k in range(n):
        for i in range(n):
            if R[i, k]:
                for j in range(n):
                    if R[k, j]:
                        R[i, j] = True
    return R


def fw_strongly_connected(M):
    return bool(floyd_warshall_reachable(M).all())


def assemble_dense(Cs, At, omega):
    """Entry-by-entry assembly of the supracentrality matrix, no kron."""
    T = len(Cs)
    N = np.asarray(Cs[0]).shape[0]
    M = np.zeros((N * T, N * T))
    for t in range(T):
        Ct = np.asarray(Cs[t])
        for s in range(T):
            for i in range(N):
                if s == t:
                    for j in range(N):
                        M[N * t + i, N * s + j] += Ct[i, j]
                M[N * t + i, N * s + i] += omega * At[t, s]
    return M


def dense_perron(M):
    """Perron eigenpair from scipy's dense eig, unit 1-norm and positive."""
    vals, vecs = scipy.linalg.eig(M)
    k = np.argmax(vals.real)
    v = vecs[:, k].real
    v = v / v.sum()
    return vals[k].real, v


def random_network(rng, N, T, p=0.5, weighted=True):
    layers = []
    for _ in range(T):
        mask = rng.random((N, N)) < p
        w = rng.random((N, N)) + 0.1 if weighted else np.ones((N, N))
        layers.append(mask * w)
    return TemporalNetwork.from_dense(layers)


@pytest.fixture
def rng():
    return np.random.default_rng(20191114)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        title, ok, detail = verdicts[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
