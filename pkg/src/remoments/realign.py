"""Realignment rearrangements of density matrices and their moment sums.

The bipartite realignment rearranges a (m*n) x (m*n) density matrix into
an m^2 x n^2 rectangle whose entries are the same numbers in a different
layout: entry [(i,j),(k,l)] of the output is rho[(i,k),(j,l)], with the
bra index major in each composite pair.  Separable states keep the trace
norm of this rectangle at or below 1, and its singular-value power sums
T_k = sum_i sigma_i^(2k) feed the moment criteria in
:mod:`remoments.criteria`.

The partial variant realigns only a chosen pair of party groups and
carries every untouched party along rows and columns unchanged; with two
parties and the groups "1|2" it reduces exactly to the bipartite map.
Both maps are pure index permutations: applying the bipartite map twice
on equal dims returns the input bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import dagger, singular_values
from .states import DensityMatrix


@dataclass(frozen=True)
class RealignSpec:
    """Grouping "group1 | group2" of 1-based party indices.

    The two groups name the parties whose indices get rearranged; parties
    in neither group are left untouched.  Groups must be nonempty and
    disjoint.
    """

    group1: tuple[int, ...]
    group2: tuple[int, ...]

    @staticmethod
    def parse(text: str) -> "RealignSpec":
        """Parse compact split syntax: "1|2", "12|3", "1|23"."""
        parts = text.strip().split("|")
        if len(parts) != 2:
            raise ValueError(f"split {text!r} must have exactly one '|'")
        groups = []
        for part in parts:
            if not part or not all(c.isdigit() and c != "0" for c in part):
                raise ValueError(f"split {text!r} must list parties as digits 1-9")
            groups.append(tuple(int(c) for c in part))
        spec = RealignSpec(group1=groups[0], group2=groups[1])
        spec._check_disjoint()
        return spec

    def _check_disjoint(self) -> None:
        if not self.group1 or not self.group2:
            raise ValueError("both groups must be nonempty")
        if len(set(self.group1)) != len(self.group1) or len(set(self.group2)) != len(self.group2):
            raise ValueError("a group may not repeat a party")
        if set(self.group1) & set(self.group2):
            raise ValueError(f"groups {self.group1} and {self.group2} overlap")

    def validate_for(self, n_parties: int) -> None:
        """Check the groups against a state with `n_parties` parties."""
        self._check_disjoint()
        for p in self.group1 + self.group2:
            if not (1 <= p <= n_parties):
                raise ValueError(f"party {p} out of range for {n_parties} parties")

    def untouched(self, n_parties: int) -> tuple[int, ...]:
        """Parties in neither group, ascending."""
        used = set(self.group1) | set(self.group2)
        return tuple(p for p in range(1, n_parties + 1) if p not in used)

    def __str__(self) -> str:
        return "".join(str(p) for p in self.group1) + "|" + "".join(str(p) for p in self.group2)


@dataclass(frozen=True, eq=False)
class RealignedMatrix:
    """A realigned rectangle plus the spec and dims that produced it."""

    matrix: np.ndarray
    spec: RealignSpec
    source_dims: tuple[int, ...]


@dataclass(frozen=True)
class MomentSet:
    """Singular-value power sums T_k of a realigned matrix.

    t1 equals trace(rho^2) for any density matrix (the rearrangement
    preserves the squared Frobenius norm), and t2 <= t1^2 always.
    """

    t1: float
    t2: float
    higher: tuple[float, ...] = ()

    def moment(self, k: int) -> float:
        """T_k for 1 <= k <= 2 + len(higher)."""
        if k == 1:
            return self.t1
        if k == 2:
            return self.t2
        if not 3 <= k <= 2 + len(self.higher):
            raise ValueError(f"moment T_{k} was not computed; available up to T_{2 + len(self.higher)}")
        return self.higher[k - 3]


def vec(a: np.ndarray) -> np.ndarray:
    """Stack the columns of a matrix into one vector (column-major order)."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"vec expects a matrix, got ndim {a.ndim}")
    return a.flatten(order="F")


def realign_bipartite(dm: DensityMatrix) -> RealignedMatrix:
    """Realign a two-party state into its m^2 x n^2 rectangle.

    Output entry [(i,j),(k,l)] = rho[(i,k),(j,l)]: rows pair the party-1
    bra and ket indices (bra major), columns pair the party-2 bra and ket
    (bra major).  A pure product state maps to a rank-1 rectangle; the
    map applied twice on equal dims is the identity.
    """
    if len(dm.dims) != 2:
        raise ValueError(f"realign_bipartite requires exactly two parties, got dims {dm.dims}")
    m, n = dm.dims
    out = dm.matrix.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n * n)
    return RealignedMatrix(matrix=out, spec=RealignSpec((1,), (2,)), source_dims=dm.dims)


def realign_partial(dm: DensityMatrix, spec: RealignSpec) -> RealignedMatrix:
    """Realign the spec's two party groups, leaving the rest untouched.

    Rows carry the (bra, ket) multi-index of group1 followed by the bra
    index of the untouched parties; columns carry the (bra, ket)
    multi-index of group2 followed by the untouched ket index.  Within
    every multi-index earlier parties are major, and the realigned block
    index is major over the untouched index.  The output has shape
    (d1^2 * dC) x (d2^2 * dC) and reduces exactly to
    :func:`realign_bipartite` for two parties split "1|2".
    """
    n = len(dm.dims)
    spec.validate_for(n)
    g1 = [p - 1 for p in spec.group1]
    g2 = [p - 1 for p in spec.group2]
    comp = [p - 1 for p in spec.untouched(n)]
    tensor = dm.matrix.reshape(dm.dims + dm.dims)
    row_axes = g1 + [n + p for p in g1] + comp
    col_axes = g2 + [n + p for p in g2] + [n + p for p in comp]
    d1 = int(np.prod([dm.dims[p] for p in g1]))
    d2 = int(np.prod([dm.dims[p] for p in g2]))
    dc = int(np.prod([dm.dims[p] for p in comp])) if comp else 1
    out = tensor.transpose(row_axes + col_axes).reshape(d1 * d1 * dc, d2 * d2 * dc)
    return RealignedMatrix(matrix=np.ascontiguousarray(out), spec=spec, source_dims=dm.dims)


def moments(rm: RealignedMatrix, max_k: int = 2) -> MomentSet:
    """Moment sums T_k = sum_i sigma_i^(2k) for k = 1 .. max_k."""
    if max_k < 2:
        raise ValueError(f"max_k must be >= 2, got {max_k!r}")
    s2 = singular_values(rm.matrix) ** 2
    vals = [float(np.sum(s2**k)) for k in range(1, max_k + 1)]
    return MomentSet(t1=vals[0], t2=vals[1], higher=tuple(vals[2:]))


def moments_via_gram(rm: RealignedMatrix, max_k: int = 2) -> MomentSet:
    """The same moment sums as traces of Gram-matrix powers.

    Independent arithmetic path kept as a cross-check against
    :func:`moments`; the two must agree to 1e-9 relative.
    """
    if max_k < 2:
        raise ValueError(f"max_k must be >= 2, got {max_k!r}")
    a = rm.matrix
    gram = a @ dagger(a) if a.shape[0] <= a.shape[1] else dagger(a) @ a
    vals = []
    power = gram
    for _ in range(max_k):
        vals.append(float(np.trace(power).real))
        power = power @ gram
    return MomentSet(t1=vals[0], t2=vals[1], higher=tuple(vals[2:]))


def enumerate_splits(n_parties: int) -> list[RealignSpec]:
    """Every unordered split of disjoint nonempty party groups.

    Swapping the two groups only transposes the realigned rectangle up to
    index relabeling, so each pair is listed once with the group holding
    the smallest party first.  Parties outside both groups are untouched.
    """
    if n_parties < 2:
        raise ValueError(f"need at least two parties, got {n_parties!r}")
    splits = []
    for mask1 in range(1, 1 << n_parties):
        for mask2 in range(1, 1 << n_parties):
            if mask1 & mask2:
                continue
            g1 = tuple(p + 1 for p in range(n_parties) if (mask1 >> p) & 1)
            g2 = tuple(p + 1 for p in range(n_parties) if (mask2 >> p) & 1)
            if min(g1) < min(g2):
                splits.append(RealignSpec(group1=g1, group2=g2))
    return splits
