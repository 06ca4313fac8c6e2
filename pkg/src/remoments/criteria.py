"""Entanglement criteria built on realignment moments, plus comparators.

The moment criteria (`v1`, `v2`, `v3`) need only the first two moment
sums T1 and T2 of a realigned state.  `v1`/`v2` carry a tunable weight
whose validity window (the "admissible range") depends on the sign of a
discriminant; `v3` holds for every nonnegative weight with no window.
A statistic above 1 at an admissible weight flags entanglement.  The
comparators are the plain trace-norm test on the realigned rectangle
and the partial-transpose minimum eigenvalue.

As published, the weighted criterion evaluates to sqrt(1 + 4/a) > 1 on
every pure product state, so a statistic above 1 is not by itself proof
of entanglement; the `audit` command of the CLI measures that gap on
random separable states rather than hiding it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_eigenvalues, trace_norm
from .realign import MomentSet, RealignSpec, moments, realign_bipartite, realign_partial
from .states import DensityMatrix

ENTANGLED = "ENTANGLED"
INCONCLUSIVE = "INCONCLUSIVE"

# A statistic must clear its threshold by this much before we call it.
DETECTION_SLACK = 1e-9
# A partial-transpose eigenvalue below -PT_NEGATIVITY_TOL certifies NPT.
PT_NEGATIVITY_TOL = 1e-10
# Quadratic coefficient below this is treated as the rank-1 linear case.
DEGENERATE_TOL = 1e-12
# Radicand values in [F_CLAMP, 0) are endpoint rounding and clamp to 0.
F_CLAMP = -1e-12


@dataclass(frozen=True)
class Interval:
    """One interval of weight values; `hi` may be math.inf."""

    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool

    def contains(self, x: float) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below


@dataclass(frozen=True)
class AdmissibleRange:
    """Weight values where the v1/v2 bound is asserted (radicand >= 0)."""

    intervals: tuple[Interval, ...]
    discriminant: float
    degenerate: bool

    def contains(self, x: float) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    def finite_endpoints(self) -> tuple[float, ...]:
        """Finite nonzero interval endpoints, ascending (for reports)."""
        ends = []
        for iv in self.intervals:
            for e in (iv.lo, iv.hi):
                if e > 0.0 and math.isfinite(e):
                    ends.append(e)
        return tuple(sorted(ends))


@dataclass(frozen=True)
class CriterionVerdict:
    """Outcome of one criterion evaluation on one state."""

    criterion: str
    parameter: float | None
    statistic: float
    threshold: float
    outcome: str
    admissible: AdmissibleRange | None = None
    note: str | None = None

    def to_dict(self) -> dict:
        """JSON-safe mirror (NaN -> null, inf -> null)."""

        def _num(x: float | None) -> float | None:
            if x is None or not math.isfinite(x):
                return None
            return float(x)

        adm = None
        if self.admissible is not None:
            adm = {
                "intervals": [
                    {
                        "lo": _num(iv.lo),
                        "hi": _num(iv.hi),
                        "lo_closed": iv.lo_closed,
                        "hi_closed": iv.hi_closed,
                    }
                    for iv in self.admissible.intervals
                ],
                "discriminant": _num(self.admissible.discriminant),
                "degenerate": self.admissible.degenerate,
            }
        return {
            "criterion": self.criterion,
            "parameter": _num(self.parameter),
            "statistic": _num(self.statistic),
            "threshold": _num(self.threshold),
            "outcome": self.outcome,
            "admissible": adm,
            "note": self.note,
        }


def discriminant(m: MomentSet) -> float:
    """(T1^2 - T1)^2 - 2 (T1^2 - T2) T1^2.

    Nonpositive means the weighted bound holds for every weight a > 0;
    positive splits the admissible weights into two intervals around the
    roots of the radicand.
    """
    t1, t2 = m.t1, m.t2
    return (t1 * t1 - t1) ** 2 - 2.0 * (t1 * t1 - t2) * t1 * t1


def _radicand(m: MomentSet, a: float) -> float:
    # F(a) = (T1^2 - T2) a^2 / 2 + (T1^2 - T1) a + T1^2
    t1, t2 = m.t1, m.t2
    return (t1 * t1 - t2) * a * a / 2.0 + (t1 * t1 - t1) * a + t1 * t1


def admissible_range(m: MomentSet) -> AdmissibleRange:
    """Weights a > 0 where the radicand F(a) stays nonnegative.

    The quadratic coefficient (T1^2 - T2)/2 is nonnegative for genuine
    moment sets.  Nondegenerate with a nonpositive discriminant: all of
    (0, inf).  Positive discriminant: (0, r-] and [r+, inf) around the
    radicand's roots, dropping an interval whose upper end is not
    positive.  Degenerate (rank-1 realignment, T2 = T1^2): the linear
    tail decides, giving (0, inf) when T1^2 >= T1 and otherwise
    (0, T1^2/(T1 - T1^2)].
    """
    t1, t2 = m.t1, m.t2
    quad = t1 * t1 - t2
    lin = t1 * t1 - t1
    const = t1 * t1
    disc = discriminant(m)
    degenerate = quad <= DEGENERATE_TOL
    unbounded = Interval(0.0, math.inf, lo_closed=False, hi_closed=False)
    if degenerate:
        if lin >= 0.0:
            intervals: tuple[Interval, ...] = (unbounded,)
        else:
            intervals = (Interval(0.0, const / (-lin), lo_closed=False, hi_closed=True),)
        return AdmissibleRange(intervals=intervals, discriminant=disc, degenerate=True)
    if disc <= 0.0:
        return AdmissibleRange(intervals=(unbounded,), discriminant=disc, degenerate=False)
    root = math.sqrt(disc)
    lower = (-lin - root) / quad
    upper = (-lin + root) / quad
    pieces = []
    if lower > 0.0:
        pieces.append(Interval(0.0, lower, lo_closed=False, hi_closed=True))
    if upper > 0.0:
        pieces.append(Interval(upper, math.inf, lo_closed=True, hi_closed=False))
    else:
        pieces = [unbounded]
    return AdmissibleRange(intervals=tuple(pieces), discriminant=disc, degenerate=False)


def v1(m: MomentSet, a: float) -> float:
    """Weighted moment statistic sqrt((2/a)((1 + a/2) T1 + sqrt(F(a)))).

    Defined where the radicand F(a) is nonnegative; values in
    [-1e-12, 0) are endpoint rounding and clamp to zero, anything lower
    means `a` sits outside the admissible range and is an error.
    """
    if a <= 0.0:
        raise ValueError(f"weight must be positive, got {a!r}")
    f = _radicand(m, a)
    if f < F_CLAMP:
        raise ValueError(
            f"radicand {f:.3e} is negative: weight {a!r} lies outside the admissible range"
        )
    f = max(f, 0.0)
    return math.sqrt((2.0 / a) * ((1.0 + a / 2.0) * m.t1 + math.sqrt(f)))


def v3(m: MomentSet, v: float) -> float:
    """Unconditional moment statistic, valid for every weight v >= 0.

    sqrt((sqrt(T1 + (v^2 + 2v) T2) - v sqrt(T2))^2 + sqrt(2 (T1^2 - T2))).
    No admissible-range gate; separable states stay at or below 1.  At
    v = 0 this is the limit value sqrt(T1 + sqrt(2 (T1^2 - T2))).
    """
    if v < 0.0:
        raise ValueError(f"weight must be nonnegative, got {v!r}")
    t1, t2 = m.t1, m.t2
    inner = math.sqrt(t1 + (v * v + 2.0 * v) * t2) - v * math.sqrt(t2)
    spread = max(2.0 * (t1 * t1 - t2), 0.0)
    return math.sqrt(inner * inner + math.sqrt(spread))


def _moment_verdict(name: str, m: MomentSet, a: float) -> CriterionVerdict:
    rng = admissible_range(m)
    if a <= 0.0:
        raise ValueError(f"weight must be positive, got {a!r}")
    if not rng.contains(a):
        return CriterionVerdict(
            criterion=name,
            parameter=a,
            statistic=float("nan"),
            threshold=1.0,
            outcome=INCONCLUSIVE,
            admissible=rng,
            note="parameter outside admissible range",
        )
    stat = v1(m, a)
    outcome = ENTANGLED if stat > 1.0 + DETECTION_SLACK else INCONCLUSIVE
    return CriterionVerdict(
        criterion=name,
        parameter=a,
        statistic=stat,
        threshold=1.0,
        outcome=outcome,
        admissible=rng,
    )


def verdict_v1(dm: DensityMatrix, a: float) -> CriterionVerdict:
    """Weighted moment criterion on a two-party state at weight a."""
    return _moment_verdict("v1", moments(realign_bipartite(dm)), a)


def verdict_v2(dm: DensityMatrix, spec: RealignSpec, u: float) -> CriterionVerdict:
    """Weighted moment criterion on a partial realignment at weight u.

    Same pipeline as :func:`verdict_v1` with the moments taken from
    `realign_partial(dm, spec)`; for two parties split "1|2" the two
    agree exactly.
    """
    return _moment_verdict("v2", moments(realign_partial(dm, spec)), u)


def verdict_v3(dm: DensityMatrix, spec: RealignSpec, v: float) -> CriterionVerdict:
    """Unconditional moment criterion on a partial realignment at weight v."""
    stat = v3(moments(realign_partial(dm, spec)), v)
    outcome = ENTANGLED if stat > 1.0 + DETECTION_SLACK else INCONCLUSIVE
    return CriterionVerdict(
        criterion="v3", parameter=v, statistic=stat, threshold=1.0, outcome=outcome
    )


def realignment_norm_verdict(dm: DensityMatrix, spec: RealignSpec) -> CriterionVerdict:
    """Trace norm of the realigned rectangle; above 1 flags entanglement."""
    stat = trace_norm(realign_partial(dm, spec).matrix)
    outcome = ENTANGLED if stat > 1.0 + DETECTION_SLACK else INCONCLUSIVE
    return CriterionVerdict(
        criterion="realign", parameter=None, statistic=stat, threshold=1.0, outcome=outcome
    )


def partial_transpose(dm: DensityMatrix, party: int) -> np.ndarray:
    """Transpose the indices of one 1-based party, leaving the rest alone."""
    n = len(dm.dims)
    if not (1 <= party <= n):
        raise ValueError(f"party {party!r} out of range for {n} parties")
    tensor = dm.matrix.reshape(dm.dims + dm.dims)
    axes = list(range(2 * n))
    axes[party - 1], axes[n + party - 1] = axes[n + party - 1], axes[party - 1]
    return np.ascontiguousarray(tensor.transpose(axes).reshape(dm.dim, dm.dim))


def ppt_verdict(dm: DensityMatrix, party: int) -> CriterionVerdict:
    """Partial-transpose test: a negative eigenvalue certifies entanglement.

    The statistic is the minimum eigenvalue of the partial transpose over
    the given party; at or above -1e-10 the test is inconclusive (the
    state may still be bound entangled).
    """
    min_eig = float(hermitian_eigenvalues(partial_transpose(dm, party))[-1])
    outcome = ENTANGLED if min_eig < -PT_NEGATIVITY_TOL else INCONCLUSIVE
    return CriterionVerdict(
        criterion="ppt", parameter=float(party), statistic=min_eig, threshold=0.0, outcome=outcome
    )
