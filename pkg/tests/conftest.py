import numpy as np
import pytest

from framerecon.framekit import FiniteFrame


def random_complex(rng, rows, cols, rank=None):
    a = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    if rank is not None and rank < min(rows, cols):
        b = rng.standard_normal((rows, rank)) + 1j * rng.standard_normal((rows, rank))
        c = rng.standard_normal((rank, cols)) + 1j * rng.standard_normal((rank, cols))
        a = b @ c
    return a


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    b = random_complex(rng, n, rank)
    return b @ b.conj().T


def random_frame_pair(rng, max_dim=12):
    """Sampling/reconstruction frames with cos(phi) > 0 in C^N, N <= max_dim.

    The sampling system is redundant (more vectors than its span) and may
    not span the whole space; reconstruction vectors are independent and
    close enough to the sampling span that the angle stays away from pi/2.
    """
    while True:
        big_n = int(rng.integers(3, max_dim + 1))
        dim_u = int(rng.integers(2, big_n + 1))
        n_vec = int(rng.integers(dim_u, dim_u + 5))
        m = int(rng.integers(1, dim_u + 1))
        basis = random_complex(rng, big_n, dim_u)
        u = basis @ random_complex(rng, dim_u, n_vec)
        t = basis @ random_complex(rng, dim_u, m) + 0.3 * random_complex(rng, big_n, m)
        s = np.linalg.svd(t, compute_uv=False)
        if s[-1] / s[0] > 1e-3:
            return FiniteFrame(u), FiniteFrame(t)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def r2_model():
    """Sampling e1, 2 e2 in R^2; reconstruction (1, 1)/sqrt(2)."""
    from framerecon.framekit import GramModel

    s = 1 / np.sqrt(2)
    return GramModel(np.diag([1.0, 4.0]), np.array([[s], [np.sqrt(2)]]), np.eye(1))


# One line per acceptance criterion, printed after the run regardless of capture.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
