"""Shared test helpers."""
import numpy as np

from remoments import DensityMatrix, validate


def random_density(dims, seed):
    """Full-rank random density matrix: normalized Wishart G G^dag."""
    rng = np.random.default_rng(seed)
    d = int(np.prod(dims))
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return validate(DensityMatrix(dims=tuple(int(x) for x in dims), matrix=m / np.trace(m).real))


def random_matrix(rows, cols, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
