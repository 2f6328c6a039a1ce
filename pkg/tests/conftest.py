import numpy as np
import pytest


def rng_for(*key) -> np.random.Generator:
    """Deterministic generator keyed by a tuple of ints."""
    return np.random.default_rng(list(key))


def random_hermitian(rng: np.random.Generator, n: int, norm: float = 1.0) -> np.ndarray:
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = 0.5 * (G + G.conj().T)
    top = np.abs(np.linalg.eigvalsh(H)).max()
    if top > 0:
        H = H * (norm / top)
    return H


def random_complex(rng: np.random.Generator, n: int, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


@pytest.fixture
def rng():
    return rng_for(20240817)
