"""Command-line front end.

Subcommands:
  analyze    evaluate one criterion on one state (family or JSON file)
  sweep      evaluate a criterion across a family parameter grid -> CSV
  threshold  bisect a family parameter bracket for a statistic crossing
  audit      measure criterion behavior on random separable states

Exit codes: 0 success (INCONCLUSIVE is a success), 2 malformed input or
bad flags, 3 state validation failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, dataclass

from .criteria import (
    ENTANGLED,
    CriterionVerdict,
    discriminant,
    ppt_verdict,
    realignment_norm_verdict,
    verdict_v1,
    verdict_v2,
    verdict_v3,
)
from .realign import (
    MomentSet,
    RealignSpec,
    enumerate_splits,
    moments,
    realign_bipartite,
    realign_partial,
)
from .states import (
    FAMILIES,
    DensityMatrix,
    StateValidationError,
    load_state,
    sample_separable,
    validate,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDATION = 3

BISECTION_TOL = 1e-6

CRITERIA = ("v1", "v2", "v3", "realign", "ppt")

SWEEP_HEADER = (
    "state_param",
    "criterion",
    "criterion_param",
    "statistic",
    "admissible_low",
    "admissible_high",
    "outcome",
)


class UsageError(ValueError):
    """Bad flags or malformed input; maps to exit code 2."""


class ValidationFailure(Exception):
    """State failed an invariant or family domain check; exit code 3."""


@dataclass(frozen=True)
class SweepRow:
    """One CSV row of a parameter sweep."""

    state_param: float
    criterion: str
    criterion_param: float | None
    statistic: float
    admissible_low: float | None
    admissible_high: float | None
    outcome: str


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return format(float(x), ".12g")


def _parse_split(text: str) -> RealignSpec:
    try:
        return RealignSpec.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _build_state(args: argparse.Namespace) -> DensityMatrix:
    """State from --family/--param or --state; validates either way."""
    if args.state is not None and args.family is not None:
        raise UsageError("give either --family or --state, not both")
    if args.state is not None:
        try:
            dm = load_state(args.state)
        except StateValidationError:
            raise
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read state file {args.state!r}: {exc}") from exc
        try:
            return validate(dm)
        except StateValidationError as exc:
            raise ValidationFailure(str(exc)) from exc
    if args.family is None:
        raise UsageError("one of --family or --state is required")
    if args.param is None:
        raise UsageError("--family requires --param")
    return _family_state(args.family, args.param)


def _family_state(family: str, param: float) -> DensityMatrix:
    try:
        return FAMILIES[family](param)
    except KeyError:
        raise UsageError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc


def evaluate_criterion(
    dm: DensityMatrix,
    criterion: str,
    *,
    a: float | None = None,
    u: float | None = None,
    v: float | None = None,
    split: str | None = None,
    party: int | None = None,
) -> CriterionVerdict:
    """Dispatch one criterion evaluation; shared by analyze/sweep/threshold."""
    try:
        if criterion == "v1":
            if a is None:
                raise UsageError("criterion v1 requires --a")
            if len(dm.dims) != 2:
                raise UsageError(
                    "criterion v1 requires a two-party state (use v2 with --split instead)"
                )
            return verdict_v1(dm, a)
        if criterion in ("v2", "v3", "realign"):
            if split is None:
                raise UsageError(f"criterion {criterion} requires --split")
            spec = _parse_split(split)
            if criterion == "v2":
                if u is None:
                    raise UsageError("criterion v2 requires --u")
                return verdict_v2(dm, spec, u)
            if criterion == "v3":
                if v is None:
                    raise UsageError("criterion v3 requires --v")
                return verdict_v3(dm, spec, v)
            return realignment_norm_verdict(dm, spec)
        if criterion == "ppt":
            if party is None:
                raise UsageError("criterion ppt requires --party")
            return ppt_verdict(dm, party)
        raise UsageError(f"unknown criterion {criterion!r}; choose from {CRITERIA}")
    except UsageError:
        raise
    except ValueError as exc:
        # Weight sign, split/party versus dims: input problems, not state ones.
        raise UsageError(str(exc)) from exc


def _criterion_moments(dm: DensityMatrix, criterion: str, split: str | None) -> MomentSet | None:
    if criterion == "v1":
        return moments(realign_bipartite(dm))
    if criterion in ("v2", "v3") and split is not None:
        return moments(realign_partial(dm, _parse_split(split)))
    return None


def _format_admissible(verdict: CriterionVerdict) -> str:
    rng = verdict.admissible
    if rng is None:
        return ""
    parts = []
    for iv in rng.intervals:
        left = "[" if iv.lo_closed else "("
        right = "]" if iv.hi_closed else ")"
        hi = "inf" if math.isinf(iv.hi) else _fmt(iv.hi)
        parts.append(f"{left}{_fmt(iv.lo)}, {hi}{right}")
    return " U ".join(parts)


def cmd_analyze(args: argparse.Namespace) -> int:
    dm = _build_state(args)
    verdict = evaluate_criterion(
        dm, args.criterion, a=args.a, u=args.u, v=args.v, split=args.split, party=args.party
    )
    mset = _criterion_moments(dm, args.criterion, args.split)

    if args.family is not None:
        state_label = f"{args.family}({_fmt(args.param)})"
    else:
        state_label = args.state
    lines = [
        ("state", state_label),
        ("dims", "x".join(str(d) for d in dm.dims)),
        ("criterion", verdict.criterion),
    ]
    if verdict.parameter is not None:
        lines.append(("parameter", _fmt(verdict.parameter)))
    if args.split is not None and args.criterion in ("v2", "v3", "realign"):
        lines.append(("split", args.split))
    lines.append(("statistic", _fmt(verdict.statistic)))
    lines.append(("threshold", _fmt(verdict.threshold)))
    lines.append(("outcome", verdict.outcome))
    if mset is not None:
        lines.append(("T1", _fmt(mset.t1)))
        lines.append(("T2", _fmt(mset.t2)))
    if verdict.admissible is not None:
        lines.append(("discriminant", _fmt(verdict.admissible.discriminant)))
        lines.append(("admissible", _format_admissible(verdict)))
    if verdict.note:
        lines.append(("note", verdict.note))
    width = max(len(k) for k, _ in lines) + 1
    for key, value in lines:
        print(f"{key + ':':<{width}} {value}")

    if args.out:
        payload = verdict.to_dict()
        payload["dims"] = [int(d) for d in dm.dims]
        payload["state"] = (
            {"family": args.family, "param": args.param}
            if args.family is not None
            else {"file": args.state}
        )
        payload["split"] = args.split if args.criterion in ("v2", "v3", "realign") else None
        payload["party"] = args.party if args.criterion == "ppt" else None
        if mset is not None:
            payload["moments"] = {"t1": mset.t1, "t2": mset.t2}
            payload["discriminant"] = discriminant(mset)
        else:
            payload["moments"] = None
            payload["discriminant"] = None
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def _parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range {text!r} must be LO:HI:STEP")
    try:
        lo, hi, step = (float(x) for x in parts)
    except ValueError as exc:
        raise UsageError(f"range {text!r} must be numeric LO:HI:STEP") from exc
    if step <= 0.0 or hi < lo:
        raise UsageError("range requires STEP > 0 and HI >= LO")
    pts = []
    k = 0
    while True:
        x = lo + k * step
        if x > hi + 1e-9 * step:
            break
        pts.append(min(x, hi))
        k += 1
    if not pts or pts[-1] < hi - 1e-9 * step:
        pts.append(hi)
    return pts


def _verdict_row(state_param: float, verdict: CriterionVerdict) -> SweepRow:
    low = high = None
    if verdict.admissible is not None:
        ends = verdict.admissible.finite_endpoints()
        if len(ends) >= 1:
            low = ends[0]
        if len(ends) >= 2:
            high = ends[1]
    return SweepRow(
        state_param=state_param,
        criterion=verdict.criterion,
        criterion_param=verdict.parameter,
        statistic=verdict.statistic,
        admissible_low=low,
        admissible_high=high,
        outcome=verdict.outcome,
    )


def sweep_rows(
    family: str,
    grid: list[float],
    criterion: str,
    *,
    a: float | None = None,
    u: float | None = None,
    v: float | None = None,
    split: str | None = None,
    party: int | None = None,
) -> list[SweepRow]:
    """Evaluate one criterion across a family grid, ascending order."""
    rows = []
    for x in grid:
        dm = _family_state(family, x)
        verdict = evaluate_criterion(dm, criterion, a=a, u=u, v=v, split=split, party=party)
        rows.append(_verdict_row(x, verdict))
    return rows


def write_sweep_csv(fh, rows: list[SweepRow]) -> None:
    """Fixed header, 12-significant-digit numbers, one row per grid point."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for r in rows:
        writer.writerow(
            [
                _fmt(r.state_param),
                r.criterion,
                _fmt(r.criterion_param),
                _fmt(r.statistic),
                _fmt(r.admissible_low),
                _fmt(r.admissible_high),
                r.outcome,
            ]
        )


def cmd_sweep(args: argparse.Namespace) -> int:
    grid = _parse_grid(args.range_spec)
    rows = sweep_rows(
        args.family, grid, args.criterion, a=args.a, u=args.u, v=args.v,
        split=args.split, party=args.party,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_sweep_csv(fh, rows)
    else:
        write_sweep_csv(sys.stdout, rows)
    return EXIT_OK


def cmd_threshold(args: argparse.Namespace) -> int:
    parts = args.bracket.split(":")
    if len(parts) != 2:
        raise UsageError(f"bracket {args.bracket!r} must be LO:HI")
    try:
        lo, hi = (float(x) for x in parts)
    except ValueError as exc:
        raise UsageError(f"bracket {args.bracket!r} must be numeric LO:HI") from exc
    if hi <= lo:
        raise UsageError("bracket requires HI > LO")

    def offset(x: float) -> float:
        dm = _family_state(args.family, x)
        verdict = evaluate_criterion(
            dm, args.criterion, a=args.a, u=args.u, v=args.v, split=args.split, party=args.party
        )
        if math.isnan(verdict.statistic):
            raise UsageError(
                f"statistic undefined at state parameter {_fmt(x)} "
                "(criterion parameter outside admissible range)"
            )
        return verdict.statistic - verdict.threshold

    f_lo = offset(lo)
    f_hi = offset(hi)
    if f_lo * f_hi > 0.0:
        raise UsageError(
            f"bracket [{_fmt(lo)}, {_fmt(hi)}] does not straddle the threshold "
            f"(offsets {_fmt(f_lo)} and {_fmt(f_hi)})"
        )
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        f_mid = offset(mid)
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    print(_fmt(0.5 * (lo + hi)))
    return EXIT_OK


@dataclass(frozen=True)
class AuditConfig:
    """Settings for one audit run over seeded separable samples."""

    dims: tuple[int, ...]
    num_states: int = 200
    num_terms: int = 3
    seed: int = 0
    criteria: tuple[str, ...] = ("realign", "v3", "ppt")
    params: tuple[float, ...] = (0.01, 0.5, 1.0, 5.0)


@dataclass
class AuditEntry:
    """Tally for one (criterion, parameter, split) cell of an audit."""

    criterion: str
    parameter: float | None
    split: str | None
    evaluated: int = 0
    violations: int = 0
    worst_statistic: float = float("nan")
    worst_seed: int | None = None


def run_audit(cfg: AuditConfig) -> list[AuditEntry]:
    """Evaluate the requested criteria on seeded separable samples.

    Weighted criteria count only evaluations whose weight is admissible.
    A violation is an ENTANGLED verdict on a separable state; for the
    published weighted criteria on near-pure samples that is expected,
    which is exactly what this measures.  `worst_statistic` is the
    largest statistic seen (smallest for ppt), with the seed that made it.
    """
    n = len(cfg.dims)
    splits = enumerate_splits(n)
    entries: dict[tuple, AuditEntry] = {}

    def entry_for(criterion: str, parameter: float | None, split: str | None) -> AuditEntry:
        key = (criterion, parameter, split)
        if key not in entries:
            entries[key] = AuditEntry(criterion=criterion, parameter=parameter, split=split)
        return entries[key]

    def record(ent: AuditEntry, verdict: CriterionVerdict, seed: int) -> None:
        if math.isnan(verdict.statistic):
            return  # weight outside the admissible range: not evaluated
        ent.evaluated += 1
        if verdict.outcome == ENTANGLED:
            ent.violations += 1
        stat = verdict.statistic
        worse = (
            math.isnan(ent.worst_statistic)
            or (stat < ent.worst_statistic if ent.criterion == "ppt" else stat > ent.worst_statistic)
        )
        if worse:
            ent.worst_statistic = stat
            ent.worst_seed = seed

    for i in range(cfg.num_states):
        seed = cfg.seed + i
        dm = sample_separable(cfg.dims, cfg.num_terms, seed)
        for criterion in cfg.criteria:
            if criterion == "v1":
                if n != 2:
                    continue
                for a in cfg.params:
                    record(entry_for("v1", a, "1|2"), verdict_v1(dm, a), seed)
            elif criterion == "v2":
                for spec in splits:
                    for u in cfg.params:
                        record(entry_for("v2", u, str(spec)), verdict_v2(dm, spec, u), seed)
            elif criterion == "v3":
                for spec in splits:
                    for v in cfg.params:
                        record(entry_for("v3", v, str(spec)), verdict_v3(dm, spec, v), seed)
            elif criterion == "realign":
                for spec in splits:
                    record(
                        entry_for("realign", None, str(spec)),
                        realignment_norm_verdict(dm, spec),
                        seed,
                    )
            elif criterion == "ppt":
                for party in range(1, n + 1):
                    record(entry_for("ppt", float(party), None), ppt_verdict(dm, party), seed)
            else:
                raise UsageError(f"unknown criterion {criterion!r}; choose from {CRITERIA}")
    return list(entries.values())


def cmd_audit(args: argparse.Namespace) -> int:
    try:
        dims = tuple(int(x) for x in args.dims.split(","))
    except ValueError as exc:
        raise UsageError(f"dims {args.dims!r} must be comma-separated integers") from exc
    if len(dims) < 2 or any(d < 2 for d in dims):
        raise UsageError("dims needs at least two parties of dimension >= 2")
    criteria = tuple(c.strip() for c in args.criteria.split(",") if c.strip())
    for c in criteria:
        if c not in CRITERIA:
            raise UsageError(f"unknown criterion {c!r}; choose from {CRITERIA}")
    try:
        params = tuple(float(x) for x in args.params.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"params {args.params!r} must be comma-separated numbers") from exc
    if args.num_states < 1 or args.num_terms < 1:
        raise UsageError("--num-states and --num-terms must be >= 1")

    cfg = AuditConfig(
        dims=dims,
        num_states=args.num_states,
        num_terms=args.num_terms,
        seed=args.seed,
        criteria=criteria,
        params=params,
    )
    report = run_audit(cfg)

    print(
        f"audit: dims={','.join(str(d) for d in dims)} states={cfg.num_states} "
        f"terms={cfg.num_terms} seed={cfg.seed}"
    )
    header = f"{'criterion':<9} {'param':>8} {'split':<6} {'evaluated':>9} {'violations':>10} {'worst_statistic':>18} {'worst_seed':>10}"
    print(header)
    for ent in report:
        param = _fmt(ent.parameter) if ent.parameter is not None else "-"
        split = ent.split if ent.split is not None else "-"
        worst = _fmt(ent.worst_statistic) if ent.evaluated else "-"
        seed = str(ent.worst_seed) if ent.worst_seed is not None else "-"
        print(
            f"{ent.criterion:<9} {param:>8} {split:<6} {ent.evaluated:>9} "
            f"{ent.violations:>10} {worst:>18} {seed:>10}"
        )

    if args.out:
        payload = {"config": asdict(cfg), "entries": [asdict(e) for e in report]}
        for e in payload["entries"]:
            if isinstance(e["worst_statistic"], float) and math.isnan(e["worst_statistic"]):
                e["worst_statistic"] = None
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def _add_state_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--family", choices=sorted(FAMILIES), help="state family name")
    sp.add_argument("--param", type=float, help="family parameter value")
    sp.add_argument("--state", help="path to a state JSON file")


def _add_criterion_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--criterion", required=True, choices=CRITERIA)
    sp.add_argument("--a", type=float, help="weight for v1")
    sp.add_argument("--u", type=float, help="weight for v2")
    sp.add_argument("--v", type=float, help="weight for v3")
    sp.add_argument("--split", help='party grouping like "1|2" or "12|3" (v2/v3/realign)')
    sp.add_argument("--party", type=int, help="1-based party index (ppt)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="remoments",
        description="Entanglement detection from realignment moments of density matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="evaluate one criterion on one state")
    _add_state_flags(pa)
    _add_criterion_flags(pa)
    pa.add_argument("--out", help="also write the verdict as JSON to this path")
    pa.set_defaults(func=cmd_analyze)

    ps = sub.add_parser("sweep", help="evaluate a criterion across a family grid -> CSV")
    ps.add_argument("--family", required=True, choices=sorted(FAMILIES))
    ps.add_argument(
        "--range", required=True, dest="range_spec", metavar="LO:HI:STEP",
        help="closed state-parameter grid, both endpoints included",
    )
    _add_criterion_flags(ps)
    ps.add_argument("--out", help="CSV output path (default: stdout)")
    ps.set_defaults(func=cmd_sweep)

    pt = sub.add_parser("threshold", help="bisect a statistic/threshold crossing")
    pt.add_argument("--family", required=True, choices=sorted(FAMILIES))
    pt.add_argument(
        "--bracket", required=True, metavar="LO:HI",
        help="state-parameter bracket that must straddle the threshold",
    )
    _add_criterion_flags(pt)
    pt.set_defaults(func=cmd_threshold)

    pd = sub.add_parser("audit", help="run criteria against random separable states")
    pd.add_argument("--dims", required=True, help='party dimensions, e.g. "2,2" or "3,3"')
    pd.add_argument("--num-states", type=int, default=200)
    pd.add_argument("--num-terms", type=int, default=3)
    pd.add_argument("--seed", type=int, default=0)
    pd.add_argument(
        "--criteria", default="realign,v3,ppt",
        help=f"comma list from {','.join(CRITERIA)}",
    )
    pd.add_argument("--params", default="0.01,0.5,1,5", help="comma list of weights")
    pd.add_argument("--out", help="also write the report as JSON to this path")
    pd.set_defaults(func=cmd_audit)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationFailure as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
