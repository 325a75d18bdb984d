"""Command-line front end.

Subcommands: state (build and measure an initial family member), evolve
(apply a channel and re-measure), sweep (CSV over a (theta, time) grid),
deathtime (root-find a death or half-life), verify (self-check suite).

Angles accept plain radians or pi tokens like ``pi/8`` and ``3pi/4``.  Exit
codes: 0 success, 1 verify failure, 2 usage error, 3 numerical/validation
error while computing.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from typing import Optional, Sequence, TextIO

import numpy as np

from .channels import ChannelSpec, analytic_evolve, integrate_rk4, kraus_apply
from .dynamics import (
    MEASURE_NAMES,
    SweepGrid,
    death_time,
    sweep,
    verify_suite,
)
from .measures import (
    OptimizerSettings,
    classical_correlation,
    concurrence,
    geometric_discord,
    mutual_information,
    quantum_discord,
)
from .dynamics import _CLOSED as _CLOSED_MEASURES
from .states import initial_state, make_params, state_to_json

__all__ = ["main", "build_parser"]

_PI_TOKEN = re.compile(r"^\s*([0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$")


def parse_angle(token: str) -> float:
    """Parse '0.7', 'pi', 'pi/8', '3pi/4', or '0.5*pi' into radians."""
    m = _PI_TOKEN.match(token.lower())
    if m:
        coef = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        if den == 0.0:
            raise argparse.ArgumentTypeError(f"zero denominator in angle {token!r}")
        return coef * math.pi / den
    try:
        return float(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {token!r}") from None


def _angle_list(text: str) -> list[float]:
    return [parse_angle(tok) for tok in text.split(",") if tok.strip()]


def _time_list(text: str) -> list[float]:
    """Comma list ('0,0.5,1') or inclusive range 'start:stop:step'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"time range must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"cannot parse time range {text!r}") from None
        if step <= 0.0 or stop < start:
            raise argparse.ArgumentTypeError(f"bad time range {text!r}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + k * step for k in range(n)]
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse time list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty time list")
    return values


def _measure_list(text: str) -> list[str]:
    if text.strip() == "all":
        return list(MEASURE_NAMES)
    names = [tok.strip() for tok in text.split(",") if tok.strip()]
    for name in names:
        if name not in MEASURE_NAMES:
            raise argparse.ArgumentTypeError(
                f"unknown measure {name!r}; choose from {', '.join(MEASURE_NAMES)} or 'all'"
            )
    if not names:
        raise argparse.ArgumentTypeError("empty measure list")
    return names


def _axis_list(text: str) -> list[str]:
    axes = [tok.strip() for tok in text.split(",") if tok.strip()]
    for axis in axes:
        if axis not in ("x", "y", "z"):
            raise argparse.ArgumentTypeError(f"unknown axis {axis!r}; choose from x, y, z")
    if not axes:
        raise argparse.ArgumentTypeError("empty axis list")
    return axes


def _default_threads() -> int:
    raw = os.environ.get("QCORR_THREADS", "")
    try:
        value = int(raw)
    except ValueError:
        return 1
    return value if value >= 1 else 1


def _fmt(value: float, precision: int) -> str:
    return f"%.{precision}g" % value


def _print_matrix(rho: np.ndarray, precision: int, out: TextIO) -> None:
    for row in rho:
        cells = []
        for z in row:
            re_s = _fmt(z.real, precision)
            im = z.imag
            if im == 0.0:
                cells.append(re_s)
            else:
                cells.append(f"{re_s}{'+' if im >= 0 else '-'}{_fmt(abs(im), precision)}j")
        out.write("  [" + ", ".join(f"{c:>14s}" for c in cells) + "]\n")


def _measure_table(
    rho: np.ndarray,
    measures: Sequence[str],
    settings: OptimizerSettings,
    closed: Optional[dict[str, float]] = None,
) -> dict[str, dict[str, Optional[float]]]:
    oracle_fns = {
        "concurrence": lambda r: concurrence(r).value,
        "geometric_discord": lambda r: geometric_discord(r).value,
        "quantum_discord": lambda r: quantum_discord(r, settings=settings).value,
        "mutual_information": lambda r: mutual_information(r).value,
        "classical_correlation": lambda r: classical_correlation(r, settings=settings).value,
    }
    table: dict[str, dict[str, Optional[float]]] = {}
    for name in measures:
        table[name] = {
            "closed": None if closed is None else closed.get(name),
            "oracle": oracle_fns[name](rho),
        }
    return table


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcorr",
        description="Entanglement and discord dynamics of a one-parameter two-qubit family"
        " under single-qubit Pauli noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--precision", type=int, default=9, metavar="P",
                       help="significant digits for printed numbers (6-17, default 9)")
        p.add_argument("--json", action="store_true", help="emit JSON instead of text")
        p.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    def add_optimizer(p: argparse.ArgumentParser) -> None:
        p.add_argument("--grid-points", type=int, default=1024, metavar="N",
                       help="measurement-sphere seed grid size (default 1024)")
        p.add_argument("--opt-tol", type=float, default=1e-7, metavar="TOL",
                       help="optimizer refinement tolerance (default 1e-7)")

    p_state = sub.add_parser("state", help="build an initial family member and measure it")
    p_state.add_argument("--theta", required=True, type=parse_angle, metavar="ANGLE",
                         help="family parameter, e.g. 0.7, pi/8, 3pi/4")
    p_state.add_argument("--degrees", action="store_true",
                         help="interpret a plain-number --theta as degrees")
    p_state.add_argument("--measures", type=_measure_list, default=list(MEASURE_NAMES),
                         metavar="LIST", help="comma list or 'all' (default all)")
    add_optimizer(p_state)
    add_common(p_state)

    p_evolve = sub.add_parser("evolve", help="evolve a family member and re-measure it")
    p_evolve.add_argument("--theta", required=True, type=parse_angle, metavar="ANGLE")
    p_evolve.add_argument("--axis", "--channel", required=True, choices=("x", "y", "z"),
                          help="Pauli axis of the noise")
    p_evolve.add_argument("--time", "--t", required=True, type=float, metavar="T",
                          help="evolution time (gamma*t when --gamma is omitted)")
    p_evolve.add_argument("--gamma", type=float, default=1.0, metavar="G",
                          help="channel rate (default 1)")
    p_evolve.add_argument("--noisy-qubit", choices=("A", "B"), default="B",
                          help="which qubit the noise acts on (default B)")
    p_evolve.add_argument("--method", choices=("kraus", "analytic", "rk4"), default="kraus",
                          help="evolution route (default kraus)")
    p_evolve.add_argument("--steps", type=int, default=400, metavar="N",
                          help="rk4 step count (default 400)")
    p_evolve.add_argument("--check", action="store_true",
                          help="append a cross-method deviation footer (exit 1 if over tolerance)")
    p_evolve.add_argument("--measures", type=_measure_list,
                          default=["concurrence", "geometric_discord", "quantum_discord"],
                          metavar="LIST")
    add_optimizer(p_evolve)
    add_common(p_evolve)

    p_sweep = sub.add_parser("sweep", help="CSV of measures over a (theta, time) grid")
    p_sweep.add_argument("--thetas", required=True, type=_angle_list, metavar="LIST",
                         help="comma list of angles, e.g. pi/8,pi/4,3pi/8")
    p_sweep.add_argument("--times", type=_time_list, metavar="LIST",
                         help="comma list or start:stop:step range")
    p_sweep.add_argument("--tmax", type=float, metavar="T",
                         help="with --tsteps: evenly spaced times 0..T inclusive")
    p_sweep.add_argument("--tsteps", type=int, metavar="N",
                         help="number of time points for --tmax (>= 2)")
    p_sweep.add_argument("--axes", "--channels", "--channel", type=_axis_list,
                         default=["x", "y", "z"], metavar="LIST")
    p_sweep.add_argument("--measures", type=_measure_list,
                         default=["concurrence", "geometric_discord", "quantum_discord"],
                         metavar="LIST")
    p_sweep.add_argument("--gamma", type=float, default=1.0, metavar="G")
    p_sweep.add_argument("--noisy-qubit", choices=("A", "B"), default="B")
    p_sweep.add_argument("--oracle", action="store_true",
                         help="add an independently computed oracle column")
    p_sweep.add_argument("--threads", type=int, default=None, metavar="N",
                         help="worker threads (default: QCORR_THREADS or 1)")
    add_optimizer(p_sweep)
    add_common(p_sweep)

    p_death = sub.add_parser("deathtime", help="find a death time or half-life")
    p_death.add_argument("--theta", required=True, type=parse_angle, metavar="ANGLE")
    p_death.add_argument("--axis", "--channel", required=True, choices=("x", "y", "z"))
    p_death.add_argument("--gamma", type=float, default=1.0, metavar="G")
    p_death.add_argument("--noisy-qubit", choices=("A", "B"), default="B")
    p_death.add_argument("--measure", choices=("concurrence", "geometric_discord", "quantum_discord"),
                         default="concurrence")
    add_common(p_death)

    p_verify = sub.add_parser("verify", help="run the internal consistency checks")
    p_verify.add_argument("--quick", action="store_true", help="smaller grids, faster run")
    add_optimizer(p_verify)
    add_common(p_verify)

    return parser


def _cmd_state(args: argparse.Namespace, out: TextIO) -> int:
    theta = math.radians(args.theta) if args.degrees else args.theta
    params = make_params(theta)
    rho = initial_state(params)
    settings = OptimizerSettings(grid_points=args.grid_points, final_tolerance=args.opt_tol)
    closed = {name: _CLOSED_MEASURES[name](params, None, 0.0).value for name in args.measures}
    table = _measure_table(rho, args.measures, settings, closed)
    if args.json:
        payload = {
            "theta": params.theta,
            "eta": params.eta,
            "xi": params.xi,
            "q": 1.0 - 4.0 * params.eta,
            "state": state_to_json(rho),
            "measures": table,
        }
        out.write(json.dumps(payload, indent=2) + "\n")
        return 0
    p = args.precision
    out.write(f"theta = {_fmt(params.theta, p)}  (eta = {_fmt(params.eta, p)},"
              f" xi = {_fmt(params.xi, p)}, q = {_fmt(1.0 - 4.0 * params.eta, p)})\n")
    out.write("density matrix:\n")
    _print_matrix(rho, p, out)
    out.write("measures (closed form | oracle):\n")
    for name in args.measures:
        c, o = table[name]["closed"], table[name]["oracle"]
        out.write(f"  {name:<22s} {_fmt(c, p):>14s} | {_fmt(o, p)}\n")
    return 0


def _cmd_evolve(args: argparse.Namespace, out: TextIO) -> int:
    params = make_params(args.theta)
    channel = ChannelSpec(axis=args.axis, gamma=args.gamma, qubit=args.noisy_qubit)
    rho0 = initial_state(params)
    if args.method == "kraus":
        rho = kraus_apply(rho0, channel, args.time)
    elif args.method == "analytic":
        rho = analytic_evolve(params, channel, args.time)
    else:
        rho = integrate_rk4(rho0, channel, args.time, steps=args.steps)
    check = None
    if args.check:
        # rk4 is checked against the exact map; the two exact routes against
        # each other
        if args.method == "analytic":
            reference, ref_name, tol = kraus_apply(rho0, channel, args.time), "kraus", 1e-13
        elif args.method == "kraus":
            reference, ref_name, tol = analytic_evolve(params, channel, args.time), "analytic", 1e-13
        else:
            reference, ref_name, tol = analytic_evolve(params, channel, args.time), "analytic", 1e-8
        deviation = float(np.max(np.abs(rho - reference)))
        check = {"reference": ref_name, "max_deviation": deviation,
                 "tolerance": tol, "passed": deviation <= tol}
    settings = OptimizerSettings(grid_points=args.grid_points, final_tolerance=args.opt_tol)
    closed = {
        name: _CLOSED_MEASURES[name](params, channel, args.time).value for name in args.measures
    }
    table = _measure_table(rho, args.measures, settings, closed)
    if args.json:
        payload = {
            "theta": params.theta,
            "axis": channel.axis,
            "gamma": channel.gamma,
            "time": args.time,
            "gamma_t": channel.gamma * args.time,
            "method": args.method,
            "state": state_to_json(rho),
            "measures": table,
        }
        if check is not None:
            payload["check"] = check
        out.write(json.dumps(payload, indent=2) + "\n")
        return 0 if check is None or check["passed"] else 1
    p = args.precision
    out.write(f"theta = {_fmt(params.theta, p)}, axis = {channel.axis},"
              f" gamma*t = {_fmt(channel.gamma * args.time, p)}, method = {args.method}\n")
    out.write("evolved density matrix:\n")
    _print_matrix(rho, p, out)
    out.write("measures (closed form | oracle):\n")
    for name in args.measures:
        c, o = table[name]["closed"], table[name]["oracle"]
        out.write(f"  {name:<22s} {_fmt(c, p):>14s} | {_fmt(o, p)}\n")
    if check is not None:
        out.write(f"check: max deviation vs {check['reference']} = "
                  f"{_fmt(check['max_deviation'], p)} (tolerance {check['tolerance']:g})"
                  f" -> {'ok' if check['passed'] else 'FAIL'}\n")
        if not check["passed"]:
            return 1
    return 0


def _cmd_sweep(args: argparse.Namespace, out: TextIO) -> int:
    threads = args.threads if args.threads is not None else _default_threads()
    settings = OptimizerSettings(grid_points=args.grid_points, final_tolerance=args.opt_tol)
    rows = sweep(
        SweepGrid(thetas=tuple(args.thetas), times=tuple(args.times)),
        axes=tuple(args.axes),
        measures=tuple(args.measures),
        gamma=args.gamma,
        noisy_qubit=args.noisy_qubit,
        include_oracle=args.oracle,
        threads=threads,
        optimizer=settings,
    )
    p = args.precision
    if args.json:
        payload = [
            {
                "channel": r.channel,
                "measure": r.measure,
                "theta": r.theta,
                "gamma_t": r.gamma_t,
                "value_closed": r.value_closed,
                "value_oracle": r.value_oracle,
            }
            for r in rows
        ]
        out.write(json.dumps(payload, indent=2) + "\n")
        return 0
    out.write("channel,measure,theta,gamma_t,value_closed,value_oracle\n")
    for r in rows:
        oracle = "" if r.value_oracle is None else _fmt(r.value_oracle, p)
        out.write(
            f"{r.channel},{r.measure},{_fmt(r.theta, p)},{_fmt(r.gamma_t, p)},"
            f"{_fmt(r.value_closed, p)},{oracle}\n"
        )
    return 0


def _cmd_deathtime(args: argparse.Namespace, out: TextIO) -> int:
    params = make_params(args.theta)
    channel = ChannelSpec(axis=args.axis, gamma=args.gamma, qubit=args.noisy_qubit)
    result = death_time(params, channel, measure=args.measure)
    if args.json:
        payload = {
            "theta": params.theta,
            "axis": channel.axis,
            "gamma": channel.gamma,
            "measure": args.measure,
            "kind": result.kind,
            "time": result.time,
            "bracket": list(result.bracket) if result.bracket else None,
            "iterations": result.iterations,
            "closed_form_time": result.closed_form_time,
            "diagnostic": result.diagnostic,
        }
        out.write(json.dumps(payload, indent=2) + "\n")
        return 0
    p = args.precision
    out.write(f"measure = {args.measure}, axis = {channel.axis},"
              f" theta = {_fmt(params.theta, p)}, gamma = {_fmt(channel.gamma, p)}\n")
    out.write(f"kind = {result.kind}\n")
    if result.time is not None:
        out.write(f"time = {_fmt(result.time, p)}\n")
    if result.closed_form_time is not None:
        out.write(f"closed-form time = {_fmt(result.closed_form_time, p)}\n")
    if result.bracket is not None:
        out.write(f"bracket = [{_fmt(result.bracket[0], p)}, {_fmt(result.bracket[1], p)}]"
                  f" after {result.iterations} bisections\n")
    out.write(f"note: {result.diagnostic}\n")
    return 0


def _cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    settings = OptimizerSettings(grid_points=args.grid_points, final_tolerance=args.opt_tol)
    report = verify_suite(quick=args.quick, optimizer=settings)
    if args.json:
        payload = {
            "passed": report.passed,
            "runtime_seconds": report.runtime_seconds,
            "checks": [
                {
                    "check_id": c.check_id,
                    "status": c.status,
                    "detail": c.detail,
                    "max_error": c.max_error,
                    "tolerance": c.tolerance,
                }
                for c in report.checks
            ],
        }
        out.write(json.dumps(payload, indent=2) + "\n")
        return 0 if report.passed else 1
    tags = {"pass": "[PASS] ", "fail": "[FAIL] ", "expected_fail": "[XFAIL]"}
    for c in report.checks:
        line = f"{tags[c.status]} {c.check_id}: {c.detail}"
        if c.tolerance is not None:
            line += f" (tolerance {c.tolerance:g})"
        out.write(line + "\n")
    n_fail = sum(1 for c in report.checks if c.status == "fail")
    out.write(
        f"{len(report.checks)} checks, {n_fail} failed,"
        f" {sum(1 for c in report.checks if c.status == 'expected_fail')} expected-fail,"
        f" {report.runtime_seconds:.2f}s\n"
    )
    return 0 if report.passed else 1


_COMMANDS = {
    "state": _cmd_state,
    "evolve": _cmd_evolve,
    "sweep": _cmd_sweep,
    "deathtime": _cmd_deathtime,
    "verify": _cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not 6 <= args.precision <= 17:
        parser.error(f"--precision must be in [6, 17], got {args.precision}")
    if args.command == "sweep":
        has_range = args.tmax is not None or args.tsteps is not None
        if args.times is not None and has_range:
            parser.error("--times and --tmax/--tsteps are mutually exclusive")
        if args.times is None:
            if args.tmax is None or args.tsteps is None:
                parser.error("sweep needs --times, or both --tmax and --tsteps")
            if args.tmax <= 0.0 or args.tsteps < 2:
                parser.error("--tmax must be > 0 and --tsteps >= 2")
            args.times = [args.tmax * k / (args.tsteps - 1) for k in range(args.tsteps)]
    handler = _COMMANDS[args.command]
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                return handler(args, fh)
        return handler(args, sys.stdout)
    except ValueError as exc:  # includes InvalidStateError
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
