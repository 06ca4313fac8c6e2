"""Dense complex linear algebra for small quantum states.

Everything here works on plain complex ndarrays and is sized for
desk-scale problems: Kronecker products are capped at dimension 64 per
axis, and singular values go through the smaller-side Gram matrix so a
p x q rectangle only ever costs a min(p, q)-sized eigenproblem.
"""
from __future__ import annotations

import numpy as np

MAX_KRON_DIM = 64
HERMITICITY_TOL = 1e-8
GRAM_CLAMP = -1e-12


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two vectors or two matrices.

    Output axes are capped at MAX_KRON_DIM; larger requests are rejected
    rather than silently allocated.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError("kron operands must both be vectors or both be matrices")
    out_shape = tuple(da * db for da, db in zip(a.shape, b.shape))
    if any(d > MAX_KRON_DIM for d in out_shape):
        raise ValueError(
            f"kron output shape {out_shape} exceeds the supported size "
            f"{MAX_KRON_DIM}: input too large"
        )
    return np.kron(a, b)


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def hermitian_eigenvalues(a: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending.

    The input is symmetrized to (a + a^dagger)/2 before solving; a max-abs
    deviation from Hermiticity beyond `tol` is rejected instead of hidden.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    dev = float(np.abs(a - a.conj().T).max()) if a.size else 0.0
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian: deviation {dev:.3e} exceeds {tol:.1e}")
    sym = (a + a.conj().T) / 2.0
    return np.linalg.eigvalsh(sym)[::-1].copy()


def singular_values(a: np.ndarray) -> np.ndarray:
    """All min(rows, cols) singular values, sorted descending.

    Computed as square roots of the eigenvalues of the smaller-side Gram
    matrix.  Gram eigenvalues in [-1e-12, 0) are rounding noise and get
    clamped to zero; anything below that window is a hard error.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim {a.ndim}")
    if a.shape[1] <= a.shape[0]:
        gram = a.conj().T @ a
    else:
        gram = a @ a.conj().T
    evals = np.linalg.eigvalsh((gram + gram.conj().T) / 2.0)
    if evals.size and float(evals[0]) < GRAM_CLAMP:
        raise ValueError(
            f"Gram eigenvalue {float(evals[0]):.3e} below clamp window "
            f"{GRAM_CLAMP:.1e}: numerical failure"
        )
    return np.sqrt(np.clip(evals, 0.0, None))[::-1].copy()


def trace_norm(a: np.ndarray) -> float:
    """Sum of singular values."""
    return float(singular_values(a).sum())
