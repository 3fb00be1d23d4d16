"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 configuration error, 3 target not
caught, 4 optimizer failure, 5 no adversarial witness exists.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .adversary import AuditError, NoWitness, cone_audit, departure_witness, eps_speed_witness
from .analysis import REPORT_COLUMNS, evaluation_record, row_summary, verify_table, write_report_csv
from .evaluation import RoundCapExceeded, sup_cr_over_d, sup_cr_sweep
from .kinematics import (
    DEFAULT_ROUND_CAP,
    Direction,
    Instance,
    NoCatch,
    Side,
    as_fraction,
    first_catch,
    format_fraction,
    optimal_offline_time,
    read_trajectory_csv,
    write_trajectory_csv,
)
from .optimizer import (
    OPT_REPORT_COLUMNS,
    OptimizationError,
    closed_form_toward_a,
    empirical_best_a,
    minimize_toward_bound,
    optimization_record,
    toward_bound,
)
from .bounds import no_dist_away_bound
from .strategies import SPEC_TYPES, spec_from_dict

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NO_CATCH, EXIT_OPTIMIZER, EXIT_NO_WITNESS = range(6)


class ConfigError(ValueError):
    pass


def rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def rational_list(text: str) -> list:
    return [rational(x) for x in text.split(",") if x.strip()]


def ratio_text(q) -> Optional[str]:
    if isinstance(q, Fraction):
        return format_fraction(q)
    if q is None:
        return None
    return "inf" if q == math.inf else repr(float(q))


# -- output ---------------------------------------------------------------------

def emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def records_to_csv(records: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r)
    return buf.getvalue()


def records_out(records, columns, fmt) -> str:
    if fmt == "json":
        return json.dumps(records, indent=2, sort_keys=True) + "\n"
    return records_to_csv(records, columns)


# -- strategy flags ----------------------------------------------------------------

def spec_from_args(args):
    if args.model not in SPEC_TYPES:
        raise ConfigError(f"--model: unknown model {args.model!r}; choose from {', '.join(sorted(SPEC_TYPES))}")
    data = {"model": args.model, "first": args.first, "seq": args.seq}
    if args.a is not None:
        data["a"] = args.a
    elif args.model == "zigzag":
        raise ConfigError("--a is required for the zigzag model")
    return spec_from_dict(data)


def direction_for(spec, args) -> Direction:
    if args.direction is not None:
        direction = Direction.parse(args.direction)
        if spec.direction is not None and spec.direction is not direction:
            raise ConfigError(f"--direction {direction.value} conflicts with model {spec.model}")
        return direction
    if spec.direction is None:
        raise ConfigError(f"--direction is required for model {spec.model}")
    return spec.direction


def single_v(args, what: str) -> Fraction:
    if args.v is None or len(args.v) != 1:
        raise ConfigError(f"{what} needs a single --v")
    return args.v[0]


# -- commands --------------------------------------------------------------------

def cmd_simulate(args) -> int:
    spec = spec_from_args(args)
    direction = direction_for(spec, args)
    v = single_v(args, "simulate")
    if args.d is None or args.side is None:
        raise ConfigError("simulate needs --d and --side")
    inst = Instance(args.d, v, Side.parse(args.side), direction)
    traj = spec.with_knowledge(v=v, d=args.d).build()
    res = first_catch(traj, inst, args.round_cap)
    t_opt = optimal_offline_time(inst)
    if isinstance(res, NoCatch):
        record = {"no_catch": res.reason, "rounds_scanned": res.rounds_scanned,
                  "t_opt": format_fraction(t_opt)}
        emit(json.dumps(record, sort_keys=True) + "\n", args.out)
        return EXIT_NO_CATCH
    cr = res.time / t_opt
    record = {
        "catch_time": format_fraction(res.time),
        "catch_position": format_fraction(res.position),
        "round": res.round,
        "cr": format_fraction(cr),
        "t_opt": format_fraction(t_opt),
        "decimal": {"catch_time": float(res.time), "catch_position": float(res.position),
                    "cr": float(cr), "t_opt": float(t_opt)},
    }
    if args.format == "csv":
        cols = ("catch_time", "catch_position", "round", "cr", "t_opt")
        emit(records_to_csv([{k: record[k] for k in cols}], cols), args.out)
    else:
        emit(json.dumps(record, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = spec_from_args(args)
    direction = direction_for(spec, args)
    if not args.v:
        raise ConfigError("sweep needs --v (one value or a comma-separated grid)")
    d_lo = args.d_lo if args.d_lo is not None else Fraction(1)
    d_hi = args.d_hi if args.d_hi is not None else d_lo
    if d_lo < 1 or d_hi < d_lo:
        raise ConfigError(f"bad distance range [{d_lo}, {d_hi}]")
    records, violated = [], False
    for v in args.v:
        if args.grid:
            ds = [d_lo + (d_hi - d_lo) * Fraction(k, max(args.grid - 1, 1)) for k in range(args.grid)]
            ev = sup_cr_sweep(spec, [v], ds, direction, args.round_cap)
        else:
            ev = sup_cr_over_d(spec, v, (d_lo, d_hi), direction, args.round_cap)
        # unresolved windows hold distances the path only reaches in the Zeno limit
        violated |= bool(ev.violations) or bool(ev.unresolved)
        records.append(evaluation_record(ev, spec.model, direction.value))
    emit(records_out(records, REPORT_COLUMNS, args.format), args.out)
    return EXIT_NO_CATCH if violated else EXIT_OK


def cmd_verify(args) -> int:
    tol = args.tolerance
    report = verify_table(tol, a_override=args.a)
    if args.format == "json":
        emit(records_out([r.as_record() for r in report], REPORT_COLUMNS, "json"), args.out)
    else:
        emit(write_report_csv(report), args.out)
    summary = row_summary(report)
    passed = sum(summary.values())
    for row, ok in summary.items():
        print(f"{row:22s} {'PASS' if ok else 'FAIL'}", file=sys.stderr)
    print(f"{passed}/{len(summary)} rows pass", file=sys.stderr)
    return EXIT_OK if passed == len(summary) else EXIT_VERIFY


def cmd_optimize(args) -> int:
    direction = Direction.parse(args.direction or "toward")
    v = single_v(args, "optimize")
    if direction is Direction.TOWARD and not 0 < v < Fraction(1, 3):
        raise ConfigError(f"--v {v}: the toward objective is defined for 0 < v < 1/3")
    if direction is Direction.AWAY and not 0 <= v < 1:
        raise ConfigError(f"--v {v}: away targets need 0 <= v < 1")
    if direction is Direction.TOWARD:
        closed_a = closed_form_toward_a(v)
        closed_value = toward_bound(closed_a, v)
    else:
        closed_a = 2 * (1 + v) / (1 - v)
        closed_value = no_dist_away_bound(v)
    if args.empirical:
        d_hi = args.d_hi if args.d_hi is not None else Fraction(10 ** 6)
        res = empirical_best_a(direction, v, d_family=(1, d_hi), round_cap=max(args.round_cap, 512))
        name = f"empirical-sup-{direction.value}"
    else:
        if direction is not Direction.TOWARD:
            raise ConfigError("the analytic objective is the toward bound; add --empirical for away targets")
        res = minimize_toward_bound(v)
        name = "toward-bound"
    emit(records_out([optimization_record(name, v, res, closed_a, closed_value)], OPT_REPORT_COLUMNS,
                     args.format), args.out)
    return EXIT_OK


def witness_record(w, kind: str) -> dict:
    inst = w.instance
    rec = {
        "construction": w.construction,
        "instance": {"d": format_fraction(inst.d), "v": format_fraction(inst.v),
                     "side": inst.side.letter, "direction": inst.direction.value},
        "predicted_lb": ratio_text(w.predicted_lb),
        "predicted_lb_decimal": float(w.predicted_lb),
        "realized_cr": ratio_text(w.realized_cr),
        "realized_cr_decimal": float(w.realized_cr) if w.realized_cr is not None else None,
        "tolerance": ratio_text(w.tolerance),
        "holds": w.holds,
    }
    if w.audit is not None:
        a = w.audit
        rec["audit"] = {k: ratio_text(getattr(a, k)) for k in ("beta", "t1", "x1", "t0", "x0", "eps0", "eps1", "p")}
        rec["audit"]["turning_points"] = a.turning_points
        rec["audit"]["beta_limit_bound"] = ratio_text(a.beta_limit_bound)
    return rec


def cmd_audit(args) -> int:
    if not args.file:
        raise ConfigError("audit needs --file")
    try:
        traj = read_trajectory_csv(args.file)
    except OSError as exc:
        raise ConfigError(f"--file: {exc}") from None
    kind = args.kind
    if kind == "cone":
        v = single_v(args, "the cone audit")
        horizon = args.horizon
        if horizon is None:
            # leave the last two rounds of the file for the return leg that meets the target
            times = [t for t, _, _ in traj.breakpoints(10 ** 6)]
            horizon = times[-5] if len(times) > 5 and traj.terminal is None else times[-1]
        w = cone_audit(traj, v, horizon, args.eps0, args.eps1, beta_rtol=float(args.beta_rtol))
    elif kind == "eps-speed":
        if args.d is None or args.eps is None:
            raise ConfigError("eps-speed audit needs --d and --eps")
        w = eps_speed_witness(traj, args.d, args.eps, args.round_cap)
    else:
        if args.d is None:
            raise ConfigError("departure audit needs --d")
        w = departure_witness(traj, args.d, args.round_cap)
    emit(json.dumps(witness_record(w, kind), indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    spec = spec_from_args(args)
    if args.v:
        spec = spec.with_knowledge(v=args.v[0])
    if args.d is not None:
        spec = spec.with_knowledge(d=args.d)
    traj = spec.build()
    emit(write_trajectory_csv(traj, max_breakpoints=args.breakpoints), args.out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", default="zigzag", help="strategy: " + ", ".join(sorted(SPEC_TYPES)))
    common.add_argument("--direction", choices=("toward", "away"))
    common.add_argument("--v", type=rational_list, help="target speed, p/q or decimal; sweep accepts a list")
    common.add_argument("--d", type=rational, help="initial distance")
    common.add_argument("--side", help="target side, L or R")
    common.add_argument("--first", default="R", help="side the robot explores first")
    common.add_argument("--a", type=rational, help="zig-zag expansion ratio")
    common.add_argument("--seq", help="exponent sequence: pow2, linear or a comma list")
    common.add_argument("--d-lo", type=rational)
    common.add_argument("--d-hi", type=rational)
    common.add_argument("--round-cap", type=int, default=DEFAULT_ROUND_CAP)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int, default=0,
                        help="recorded for reproducibility; the computations are deterministic")
    common.add_argument("--tolerance", type=rational)

    parser = argparse.ArgumentParser(prog="linepursuit", description="Search for a moving target on a line.")
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", parents=[common], help="first catch on one instance")
    sim.set_defaults(func=cmd_simulate, default_format="json")
    sw = sub.add_parser("sweep", parents=[common], help="worst case over distances, per speed")
    sw.add_argument("--grid", type=int, default=0, help="use an N-point float grid instead of the exact sup")
    sw.set_defaults(func=cmd_sweep, default_format="csv")
    ver = sub.add_parser("verify", parents=[common], help="check every row of the bound table")
    ver.set_defaults(func=cmd_verify, default_format="csv")
    opt = sub.add_parser("optimize", parents=[common], help="best zig-zag expansion ratio")
    opt.add_argument("--empirical", action="store_true", help="minimize the exact worst case instead of the bound")
    opt.set_defaults(func=cmd_optimize, default_format="csv")
    aud = sub.add_parser("audit", parents=[common], help="adversarial instance against a trajectory file")
    aud.add_argument("kind", choices=("cone", "eps-speed", "departure"))
    aud.add_argument("--file", help="trajectory CSV (t,x rows, optional ray row)")
    aud.add_argument("--eps", type=rational)
    aud.add_argument("--horizon", type=rational)
    aud.add_argument("--eps0", type=rational, default=Fraction(1, 10 ** 6))
    aud.add_argument("--eps1", type=rational, default=Fraction(1, 10 ** 6))
    aud.add_argument("--beta-rtol", type=rational, default=Fraction(1, 10 ** 9))
    aud.set_defaults(func=cmd_audit, default_format="json")
    exp = sub.add_parser("export", parents=[common], help="write a strategy's trajectory as CSV")
    exp.add_argument("--breakpoints", type=int, default=200)
    exp.set_defaults(func=cmd_export, default_format="csv")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OptimizationError as exc:
        print(f"optimizer failure: {exc}", file=sys.stderr)
        return EXIT_OPTIMIZER
    except NoWitness as exc:
        print(f"no witness: {exc}", file=sys.stderr)
        return EXIT_NO_WITNESS
    except AuditError as exc:
        print(f"audit failed: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RoundCapExceeded as exc:
        print(f"round cap exceeded: {exc}", file=sys.stderr)
        return EXIT_NO_CATCH
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
