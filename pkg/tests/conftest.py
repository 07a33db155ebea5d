import numpy as np
import pytest
import scipy.linalg

from fovznn.matflow import random_unitary

# PASS/FAIL lines recorded by the acceptance suite, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def crandn(n, seed, m=None):
    rng = np.random.default_rng(seed)
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


def random_hermitian(n, seed):
    G = crandn(n, seed)
    return (G + G.conj().T) / 2


def block_matrix(sizes, seed, conjugate=True):
    """Seeded complex Gaussian blocks, optionally hidden by a random unitary."""
    blocks = [crandn(m, seed * 101 + i) for i, m in enumerate(sizes)]
    B = scipy.linalg.block_diag(*blocks)
    if not conjugate:
        return B
    Q = random_unitary(B.shape[0], seed + 7)
    return Q.conj().T @ B @ Q


def normal_matrix(n, seed):
    rng = np.random.default_rng(seed)
    lam = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    Q = random_unitary(n, seed + 3)
    return Q.conj().T @ np.diag(lam) @ Q


def demo_matrix(seed=3):
    """blkdiag(1i*G10, -G5 - (3-2i) I5) hidden by a real orthogonal similarity."""
    rng = np.random.default_rng(seed)
    B = scipy.linalg.block_diag(1j * rng.standard_normal((10, 10)),
                                -rng.standard_normal((5, 5)) - (3 - 2j) * np.eye(5))
    Q = random_unitary(15, seed, real=True)
    return Q.T @ B @ Q


@pytest.fixture
def jordan2():
    return np.array([[0, 1], [0, 0]], dtype=complex)


def max_curvature_radius(A, grid=20000):
    """max over t of h + h'' for h(t) = lambda_max(cos t H + sin t K), by finite differences.

    For an indecomposable block h is smooth and h + h'' is the radius of
    curvature of its field-of-values boundary at the support point.
    """
    A = np.asarray(A, complex)
    H = (A + A.conj().T) / 2
    K = (A - A.conj().T) / 2j
    t = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    h = np.empty(grid)
    for i in range(0, grid, 2048):
        tt = t[i:i + 2048]
        h[i:i + 2048] = np.linalg.eigvalsh(np.cos(tt)[:, None, None] * H
                                           + np.sin(tt)[:, None, None] * K)[:, -1]
    d = t[1] - t[0]
    rho = h + (np.roll(h, -1) - 2 * h + np.roll(h, 1)) / d ** 2
    return float(rho.max())


def sagitta_bound(blocks, step):
    """Largest gap between a block's FoV boundary and its inscribed polygon at angle spacing ``step``."""
    return 1.05 * max(max_curvature_radius(b) for b in blocks if b.shape[0] > 1) * step ** 2 / 8
