"""Command-line front end: tables, solver, sweeps, simulations and plots.

Exit codes: 0 success / feasible, 1 infeasible or inequality violated,
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .errors import BellFactsError
from .montecarlo import SimConfig, simulate_quantum, simulate_students
from .plot import facts_plane_svg
from .quantum import (
    MeasurementProtocol,
    NamedState,
    closed_form_coincidence,
    closed_form_expression,
    coincidence_probability,
    facts,
)
from .strategies import MixturePoint, classical_inequality, solve_mixture_for_facts
from .sweep import GridSpec, fmt12, region_report, sweep_csv, sweep_facts, sweep_json

EXIT_OK, EXIT_VERDICT, EXIT_USAGE = 0, 1, 2
SPOT_CHECKS = ((0.0, 30.0), (30.0, 60.0), (0.0, 60.0))


class UsageError(Exception):
    pass


def fmt6(x: float) -> str:
    return format(round(float(x), 15) + 0.0, ".6g")


def _protocol(text: Optional[str]) -> MeasurementProtocol:
    if not text:
        return MeasurementProtocol()
    try:
        return MeasurementProtocol(tuple(float(a) for a in text.split(",") if a.strip()))
    except ValueError as exc:
        raise UsageError(f"bad --angles {text!r}: {exc}") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror or exc}") from None


def _text_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in (header, *rows)]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    return "\n".join(",".join(r) for r in (header, *rows)) + "\n"


def cmd_table(args) -> int:
    protocol = _protocol(args.angles)
    if args.which == "facts":
        table = {tag.value: facts(tag, protocol) for tag in NamedState}
        if args.format == "json":
            payload = {k: {"F1": float(fmt12(f.f1)), "F2": float(fmt12(f.f2)), "F3": float(fmt12(f.f3))}
                       for k, f in table.items()}
            text = json.dumps(payload, indent=1) + "\n"
        else:
            fmt = fmt12 if args.format == "csv" else fmt6
            rows = [(k, fmt(f.f1), fmt(f.f2), fmt(f.f3)) for k, f in table.items()]
            render = _csv if args.format == "csv" else _text_table
            text = render(("state", "F1", "F2", "F3"), rows)
    else:
        fmt = fmt6 if args.format == "text" else fmt12
        spots = [f"P({a:g},{b:g})" for a, b in SPOT_CHECKS]
        rows, payload = [], {}
        for tag in NamedState:
            vals = [coincidence_probability(tag, a, b) for a, b in SPOT_CHECKS]
            closed = [closed_form_coincidence(tag, a, b) for a, b in SPOT_CHECKS]
            if max(abs(x - y) for x, y in zip(vals, closed)) > 1e-9:
                raise BellFactsError(f"closed form and Born rule disagree for {tag.value}")
            rows.append((tag.value, closed_form_expression(tag), *(fmt(v) for v in vals)))
            payload[tag.value] = {"expression": closed_form_expression(tag),
                                  **{s: float(fmt12(v)) for s, v in zip(spots, vals)}}
        header = ("state", "coincidence", *spots)
        if args.format == "json":
            text = json.dumps(payload, indent=1) + "\n"
        elif args.format == "csv":
            text = _csv(header, [(r[0], f'"{r[1]}"', *r[2:]) for r in rows])
        else:
            text = _text_table(header, rows)
    _emit(text, args.out)
    return EXIT_OK


def _verdict_payload(f2: float, f3: float) -> dict:
    res = solve_mixture_for_facts(f2, f3)
    satisfied, margin = classical_inequality(f2, f3)
    return {
        "F2": float(fmt12(f2)),
        "F3": float(fmt12(f3)),
        "mixture": dict(zip(("alpha", "beta", "gamma", "delta"), (float(fmt12(x)) for x in res.mixture))),
        "feasible": res.feasible,
        "inequality_satisfied": satisfied,
        "margin": float(fmt12(margin)),
    }


def _verdict_text(p: dict) -> list[str]:
    mix = ", ".join(f"{k}={fmt6(v)}" for k, v in p["mixture"].items())
    return [
        f"facts      F2={fmt6(p['F2'])} F3={fmt6(p['F3'])}",
        f"mixture    {mix}",
        f"verdict    {'feasible' if p['feasible'] else 'infeasible'}",
        f"|2F2-1|<=F3 {'satisfied' if p['inequality_satisfied'] else 'violated'} (margin {fmt6(p['margin'])})",
    ]


def cmd_solve(args) -> int:
    for name, v in (("F2", args.f2), ("F3", args.f3)):
        if not 0.0 <= v <= 1.0:
            raise UsageError(f"{name}={v} is outside [0, 1]")
    payload = _verdict_payload(args.f2, args.f3)
    if args.format == "json":
        text = json.dumps(payload, indent=1) + "\n"
    else:
        text = "\n".join(_verdict_text(payload)) + "\n"
    _emit(text, args.out)
    return EXIT_OK if payload["feasible"] else EXIT_VERDICT


def cmd_check(args) -> int:
    tag = NamedState.parse(args.state)
    f = facts(tag, _protocol(args.angles))
    payload = _verdict_payload(f.f2, f.f3)
    report = region_report(f, GridSpec(args.p))
    payload.update({
        "state": tag.value,
        "F1": float(fmt12(f.f1)),
        "f1_matches_protocol": report.f1_matches,
        "inside": report.inside,
        "distance": float(fmt12(report.euclidean_distance)),
    })
    if args.format == "json":
        text = json.dumps(payload, indent=1) + "\n"
    else:
        lines = [f"state      {tag.value}", f"F1         {fmt6(f.f1)}"
                 + ("" if report.f1_matches else "  (differs from the classical F1 = 1)")]
        lines += _verdict_text(payload)
        lines.append(f"region     {'inside' if report.inside else 'outside'} "
                     f"(distance {fmt6(report.euclidean_distance)})")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    ok = payload["feasible"] and payload["inequality_satisfied"]
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_sweep(args) -> int:
    spec = GridSpec(args.p, args.plane)
    records = sweep_facts(spec)
    text = sweep_json(records) if args.format == "json" else sweep_csv(records)
    _emit(text, args.out)
    worst = min(r.margin for r in records)
    print(f"points={len(records)} worst_margin={fmt12(worst)}", file=sys.stderr)
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = SimConfig(args.runs, args.seed, _protocol(args.angles), args.workers)
    keep_log = args.log is not None
    if args.kind == "students":
        if args.mixture is None:
            raise UsageError("simulate students needs --mixture a,b,c,d")
        result = simulate_students(MixturePoint.parse(args.mixture), config, log=keep_log)
    else:
        if args.state is None:
            raise UsageError("simulate quantum needs --state")
        result = simulate_quantum(NamedState.parse(args.state), config, log=keep_log)
    report, log = result if keep_log else (result, None)
    _emit(report.to_json() if args.format == "json" else report.to_csv(), args.out)
    if log is not None:
        _emit(log.to_csv(), args.log)
    return EXIT_OK


def cmd_plot(args) -> int:
    protocol = _protocol(args.angles)
    records = sweep_facts(GridSpec(args.p))
    states = {tag.value: facts(tag, protocol) for tag in NamedState}
    _emit(facts_plane_svg(records, states), args.out)
    return EXIT_OK


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bellfacts", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats, default):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    p = sub.add_parser("table", help="coincidence kernels or facts for the six named states")
    p.add_argument("which", choices=("coincidence", "facts"))
    p.add_argument("--angles", metavar="A1,A2,A3")
    common(p, ("text", "csv", "json"), "text")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("solve", help="solve for the strategy mixture behind (F2, F3)")
    p.add_argument("f2", type=float)
    p.add_argument("f3", type=float)
    common(p, ("text", "json"), "text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="solve and test the classical inequality for a named state")
    p.add_argument("--state", required=True)
    p.add_argument("--angles", metavar="A1,A2,A3")
    p.add_argument("--p", type=_positive_int, default=25, help="grid resolution for the distance cross-check")
    common(p, ("text", "json"), "text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="map the whole mixture simplex into facts space")
    p.add_argument("--p", type=_positive_int, required=True)
    p.add_argument("--plane", help="restrict to a plane such as gamma=0")
    common(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo of the students game or the quantum experiment")
    p.add_argument("kind", choices=("students", "quantum"))
    p.add_argument("--mixture", metavar="a,b,c,d")
    p.add_argument("--state")
    p.add_argument("--runs", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--angles", metavar="A1,A2,A3")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--log", metavar="PATH", help="also write every run as CSV")
    common(p, ("csv", "json"), "json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("plot", help="SVG of classical facts and the named states")
    p.add_argument("--p", type=_positive_int, default=25)
    p.add_argument("--angles", metavar="A1,A2,A3")
    common(p, ("svg",), "svg")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, BellFactsError) as exc:
        print(f"bellfacts {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
