"""Density matrices: validation, benchmark families, sampling, JSON I/O.

A state is a :class:`DensityMatrix`: a D x D complex matrix plus the
tuple of tensor-factor dimensions whose product is D.  The benchmark
families here cover the standard detection regimes: NPT entanglement
(`rho_d`, `rho_pq` away from its symmetric point), bound entanglement
that partial transposition cannot see (`rho_eps`, `rho_pq` at the
symmetric point), mixtures of inequivalent three-qubit classes
(`ghz_w`), and a noisy four-qubit benchmark with a known detection
threshold (`noisy_ghz4`).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import hermitian_eigenvalues, kron

VALIDATION_TOL = 1e-10

# PSD window of the rho_d family: both of its 2x2 coupling blocks have a
# nonnegative determinant exactly for d in [RHO_D_MIN, RHO_D_MAX].
RHO_D_MIN = (25.0 - math.sqrt(141.0)) / 50.0
RHO_D_MAX = (25.0 + math.sqrt(141.0)) / 100.0


class StateValidationError(ValueError):
    """A matrix failed a density-matrix invariant.

    `code` is one of NOT_HERMITIAN, TRACE_NOT_ONE, NOT_PSD,
    DIMENSION_MISMATCH; `deviation` is the measured violation.
    """

    def __init__(self, code: str, deviation: float, detail: str):
        self.code = code
        self.deviation = deviation
        super().__init__(f"{code}: {detail} (deviation {deviation:.3e})")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A density matrix together with its tensor-factor dimensions."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def purity(self) -> float:
        """trace(rho^2); equals 1 exactly for pure states."""
        return float(np.trace(self.matrix @ self.matrix).real)


def validate(dm: DensityMatrix) -> DensityMatrix:
    """Check Hermiticity, unit trace, positivity and the dims product.

    Returns the input unchanged on success so constructors can end with
    ``return validate(...)``.  Tolerance is 1e-10 on every invariant.
    """
    dims = tuple(int(d) for d in dm.dims)
    if not dims or any(d <= 0 for d in dims):
        raise StateValidationError(
            "DIMENSION_MISMATCH", float("nan"), f"invalid factor dimensions {dm.dims}"
        )
    d = int(np.prod(dims))
    m = np.asarray(dm.matrix)
    if m.ndim != 2 or m.shape != (d, d):
        raise StateValidationError(
            "DIMENSION_MISMATCH",
            float(abs((m.shape[0] if m.ndim else 0) - d)),
            f"matrix shape {m.shape} does not match dims {dims} (product {d})",
        )
    herm_dev = float(np.abs(m - m.conj().T).max())
    if herm_dev > VALIDATION_TOL:
        raise StateValidationError("NOT_HERMITIAN", herm_dev, "matrix is not Hermitian")
    trace_dev = abs(complex(np.trace(m)) - 1.0)
    if trace_dev > VALIDATION_TOL:
        raise StateValidationError("TRACE_NOT_ONE", trace_dev, "trace differs from 1")
    min_eig = float(hermitian_eigenvalues(m, tol=VALIDATION_TOL)[-1])
    if min_eig < -VALIDATION_TOL:
        raise StateValidationError(
            "NOT_PSD", -min_eig, f"minimum eigenvalue {min_eig:.3e} is negative"
        )
    return dm


def pure_state(amplitudes: Sequence[complex], dims: Sequence[int]) -> DensityMatrix:
    """Rank-1 projector |psi><psi| from a ket; the ket is normalized first."""
    ket = np.asarray(amplitudes, dtype=complex).reshape(-1)
    dims = tuple(int(d) for d in dims)
    if ket.size != int(np.prod(dims)):
        raise ValueError(f"amplitude vector length {ket.size} does not match dims {dims}")
    norm = float(np.linalg.norm(ket))
    if norm <= 0.0:
        raise ValueError("amplitude vector has zero norm")
    ket = ket / norm
    return validate(DensityMatrix(dims=dims, matrix=np.outer(ket, ket.conj())))


def mixture(weights: Sequence[float], states: Sequence[DensityMatrix]) -> DensityMatrix:
    """Convex mixture of states sharing the same dims."""
    if len(weights) != len(states) or not states:
        raise ValueError("need one weight per state and at least one state")
    w = np.asarray(weights, dtype=float)
    if (w < 0).any():
        raise ValueError("mixture weights must be nonnegative")
    if abs(float(w.sum()) - 1.0) > VALIDATION_TOL:
        raise ValueError(f"mixture weights sum to {float(w.sum())!r}, expected 1")
    dims = states[0].dims
    if any(s.dims != dims for s in states):
        raise ValueError("all mixture components must share the same dims")
    acc = np.zeros_like(states[0].matrix, dtype=complex)
    for wk, s in zip(w, states):
        acc += wk * s.matrix
    return validate(DensityMatrix(dims=dims, matrix=acc))


def rho_d(d: float) -> DensityMatrix:
    """One-parameter 3x3-by-3x3 NPT family.

    Diagonal ((1-d)/2, 0, 0, 0, 1/2-d, d, 0, 0, d/2) with two symmetric
    off-diagonal couplings of -11/50 at (0,8) and (4,5).  Positive
    semidefinite exactly for d in [RHO_D_MIN, RHO_D_MAX]; its partial
    transpose has a negative eigenvalue throughout that window.
    """
    d = float(d)
    if not (RHO_D_MIN <= d <= RHO_D_MAX):
        raise ValueError(
            f"rho_d is not positive semidefinite for d={d!r}; "
            f"valid range is [{RHO_D_MIN!r}, {RHO_D_MAX!r}]"
        )
    m = np.zeros((9, 9), dtype=complex)
    m[0, 0] = (1.0 - d) / 2.0
    m[4, 4] = 0.5 - d
    m[5, 5] = d
    m[8, 8] = d / 2.0
    m[0, 8] = m[8, 0] = -11.0 / 50.0
    m[4, 5] = m[5, 4] = -11.0 / 50.0
    return validate(DensityMatrix(dims=(3, 3), matrix=m))


def rho_eps(eps: float) -> DensityMatrix:
    """One-parameter 3x3-by-3x3 family that stays PPT for every eps > 0.

    Entangled for eps != 1 (bound entanglement: invisible to partial
    transposition but caught by realignment-based tests); eps = 1 gives
    the separable member.  The family is equivalent under relabeling to
    its eps -> 1/eps mirror.
    """
    eps = float(eps)
    if eps <= 0.0:
        raise ValueError(f"rho_eps requires eps > 0, got {eps!r}")
    e2 = eps * eps
    norm = 3.0 * (1.0 + e2 + 1.0 / e2)
    m = np.zeros((9, 9), dtype=complex)
    for r in (0, 4, 8):
        for c in (0, 4, 8):
            m[r, c] = 1.0
    m[1, 1] = 1.0 / e2
    m[1, 3] = m[3, 1] = 1.0
    m[3, 3] = e2
    m[2, 2] = e2
    m[2, 6] = m[6, 2] = 1.0
    m[6, 6] = 1.0 / e2
    m[5, 5] = 1.0 / e2
    m[5, 7] = m[7, 5] = 1.0
    m[7, 7] = e2
    return validate(DensityMatrix(dims=(3, 3), matrix=m / norm))


def _rho_pq_kets() -> list[np.ndarray]:
    # Six orthonormal kets on 4 x 4; indices are 4*i + j for |ij>.
    s2 = 1.0 / math.sqrt(2.0)
    specs = [
        {1: s2, 11: s2},            # (|01> + |23>)/sqrt2
        {4: s2, 14: s2},            # (|10> + |32>)/sqrt2
        {5: s2, 10: s2},            # (|11> + |22>)/sqrt2
        {0: s2, 15: -s2},           # (|00> - |33>)/sqrt2
        {3: 0.5, 6: 0.5, 9: s2},    # (|03> + |12>)/2 + |21>/sqrt2
        {3: -0.5, 6: 0.5, 12: s2},  # (-|03> + |12>)/2 + |30>/sqrt2
    ]
    kets = []
    for spec in specs:
        v = np.zeros(16, dtype=complex)
        for idx, amp in spec.items():
            v[idx] = amp
        kets.append(v)
    return kets


def rho_pq(q: float) -> DensityMatrix:
    """4x4-by-4x4 mixture of six orthonormal kets, weighted (p,p,p,p,q,q).

    p = (1 - 2q)/4 keeps the trace at 1 for q in [0, 1/2].  At
    q = (sqrt(2)-1)/2 the state equals its own partial transpose, so the
    PPT test is blind there even though the state stays entangled; at
    every other q in the window it is NPT.
    """
    q = float(q)
    if not (0.0 <= q <= 0.5):
        raise ValueError(f"rho_pq requires 0 <= q <= 1/2, got {q!r}")
    p = (1.0 - 2.0 * q) / 4.0
    kets = _rho_pq_kets()
    m = np.zeros((16, 16), dtype=complex)
    for ket in kets[:4]:
        m += p * np.outer(ket, ket.conj())
    for ket in kets[4:]:
        m += q * np.outer(ket, ket.conj())
    return validate(DensityMatrix(dims=(4, 4), matrix=m))


def ghz_w(q: float) -> DensityMatrix:
    """Three-qubit mixture q|GHZ><GHZ| + (1-q)|W><W|."""
    q = float(q)
    if not (0.0 <= q <= 1.0):
        raise ValueError(f"ghz_w requires 0 <= q <= 1, got {q!r}")
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1.0 / math.sqrt(2.0)
    w = np.zeros(8, dtype=complex)
    w[1] = w[2] = w[4] = 1.0 / math.sqrt(3.0)
    m = q * np.outer(ghz, ghz.conj()) + (1.0 - q) * np.outer(w, w.conj())
    return validate(DensityMatrix(dims=(2, 2, 2), matrix=m))


def noisy_ghz4(x: float) -> DensityMatrix:
    """Four-qubit GHZ state mixed with white noise: (1-x)/16 * I + x|GHZ4><GHZ4|."""
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"noisy_ghz4 requires 0 <= x <= 1, got {x!r}")
    psi = np.zeros(16, dtype=complex)
    psi[0] = psi[15] = 1.0 / math.sqrt(2.0)
    m = (1.0 - x) / 16.0 * np.eye(16, dtype=complex) + x * np.outer(psi, psi.conj())
    return validate(DensityMatrix(dims=(2, 2, 2, 2), matrix=m))


def sample_separable(dims: Sequence[int], num_terms: int, seed: int) -> DensityMatrix:
    """Random separable state: a convex mixture of `num_terms` product kets.

    Weights are normalized exponentials; each factor ket is a normalized
    complex Gaussian vector.  Deterministic for a fixed seed.
    """
    dims = tuple(int(d) for d in dims)
    if num_terms < 1:
        raise ValueError(f"num_terms must be >= 1, got {num_terms!r}")
    rng = np.random.default_rng(seed)
    weights = rng.exponential(size=num_terms)
    weights /= weights.sum()
    d = int(np.prod(dims))
    m = np.zeros((d, d), dtype=complex)
    for w in weights:
        ket = np.ones(1, dtype=complex)
        for dk in dims:
            factor = rng.standard_normal(dk) + 1j * rng.standard_normal(dk)
            factor /= np.linalg.norm(factor)
            ket = kron(ket, factor)
        m += w * np.outer(ket, ket.conj())
    return validate(DensityMatrix(dims=dims, matrix=m))


# Parameterized families the CLI can build directly.
FAMILIES = {
    "rho_d": rho_d,
    "rho_eps": rho_eps,
    "rho_pq": rho_pq,
    "ghz_w": ghz_w,
    "noisy_ghz4": noisy_ghz4,
}


def to_json_dict(dm: DensityMatrix) -> dict:
    """JSON form: {"dims": [...], "matrix": [[[re, im], ...], ...]} row-major."""
    return {
        "dims": [int(d) for d in dm.dims],
        "matrix": [
            [[float(z.real), float(z.imag)] for z in row] for row in np.asarray(dm.matrix)
        ],
    }


def from_json_dict(obj: object) -> DensityMatrix:
    """Parse the JSON form back into a DensityMatrix.

    Raises ValueError on any structural problem; invariants are the
    caller's job (run :func:`validate` afterwards).
    """
    if not isinstance(obj, dict):
        raise ValueError("state JSON must be an object with 'dims' and 'matrix'")
    try:
        dims = tuple(int(d) for d in obj["dims"])
        rows = obj["matrix"]
        d = int(np.prod(dims))
        m = np.zeros((d, d), dtype=complex)
        if len(rows) != d:
            raise ValueError(f"matrix has {len(rows)} rows, expected {d}")
        for i, row in enumerate(rows):
            if len(row) != d:
                raise ValueError(f"row {i} has {len(row)} entries, expected {d}")
            for j, pair in enumerate(row):
                re, im = pair
                m[i, j] = complex(float(re), float(im))
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed state JSON: {exc}") from exc
    return DensityMatrix(dims=dims, matrix=m)


def save_state(path: str, dm: DensityMatrix) -> None:
    """Write a state to a JSON file at full round-trip precision."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(dm), fh)
        fh.write("\n")


def load_state(path: str) -> DensityMatrix:
    """Read a state from a JSON file.  Parses only; validate separately."""
    with open(path, "r", encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))
