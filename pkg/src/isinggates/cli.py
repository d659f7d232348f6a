"""Command-line front end: ``isinggates <geodesic|gates|sequence|spectrum> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .geodesic import NoFeasibleSolution, reduce_to_sphere, sample_solution, search_constant_u
from .nmr import PRESETS, SpectrumConfig, prepare_state, simulate_spectrum
from .propagator import DEFAULT_TOL
from .sequences import REALIZATIONS, duration_table, realization, verify

TABLE_FIELDS = ("label", "duration_invJ", "duration_s", "relative_pct")
VERIFY_FIELDS = ("label", "target", "level", "duration", "fidelity", "infidelity",
                 "unitarity_error", "conjugation_deviation", "tol", "passed")


class UsageError(Exception):
    pass


def emit_report(results, fmt: str = "json", fields=None) -> str:
    """Render a list of flat dicts as JSON, CSV or a markdown table.

    Fields keep the order of `fields` (or of the first result), so the same
    input always renders to the same text.
    """
    results = list(results)
    fields = list(fields or (results[0].keys() if results else []))
    if fmt == "json":
        return json.dumps([{k: r.get(k) for k in fields} for r in results], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for r in results:
            w.writerow([r.get(k) for k in fields])
        return buf.getvalue()
    if fmt == "md":
        lines = ["| " + " | ".join(fields) + " |", "|" + "---|" * len(fields)]
        for r in results:
            lines.append("| " + " | ".join(_md_cell(r.get(k)) for k in fields) + " |")
        return "\n".join(lines) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def _md_cell(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v)
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------------


def _cmd_geodesic(args) -> int:
    if (args.phi is None) == (args.kappa is None):
        raise UsageError("give exactly one of --phi or --kappa")
    try:
        sol = search_constant_u(phi=args.phi, kappa=args.kappa, u_max=args.u_max)
    except (NoFeasibleSolution, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    d = sol.to_dict()
    d["tau_s"] = sol.tau / args.J
    _write(json.dumps(d, indent=2) + "\n", args.out)
    if args.trajectory_csv:
        t, x = sample_solution(sol, args.points)
        xyz = reduce_to_sphere(x)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tJ", "x", "y", "z"])
        for ti, p in zip(t, xyz):
            w.writerow([repr(float(ti))] + [repr(float(c)) for c in p])
        Path(args.trajectory_csv).write_text(buf.getvalue(), encoding="utf-8")
    return 0


def _cmd_gates_table(args) -> int:
    rows = [
        {"label": r.label, "duration_invJ": r.duration, "duration_s": r.duration / args.J,
         "relative_pct": r.relative_pct}
        for r in duration_table()
    ]
    fmt = args.format or "md"
    if fmt == "md":
        rows = [dict(r, duration_invJ=f"{r['duration_invJ']:.3f}", duration_s=f"{r['duration_s']:.6g}",
                     relative_pct=f"{r['relative_pct']:.1f}%") for r in rows]
    _write(emit_report(rows, fmt, TABLE_FIELDS), args.out)
    return 0


def _cmd_gates_verify(args) -> int:
    labels = list(REALIZATIONS) if args.label.lower() == "all" else [args.label]
    reports = []
    for lab in labels:
        try:
            reports.append(verify(lab, tol=args.tol, m=args.m).to_dict())
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    _write(emit_report(reports, args.format or "md", VERIFY_FIELDS), args.out)
    return 0 if all(r["passed"] for r in reports) else 1


def _cmd_sequence_emit(args) -> int:
    try:
        r = realization(args.label, args.m)
        seq = r.sequence
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    if (args.format or "json") != "json":
        raise UsageError("sequences are emitted as JSON only")
    _write(seq.to_json() + "\n", args.out)
    return 0


def _spectrum_config(args) -> SpectrumConfig:
    data = {}
    if args.config:
        data.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
    if args.params:
        data["params"] = args.params
    data.setdefault("params", "acetamide")
    if data["params"] not in PRESETS:
        raise UsageError(f"unknown parameter preset {data['params']!r}")
    if data["params"] == "ideal":
        data.setdefault("J12", args.J)
        data.setdefault("J23", args.J)
        data.setdefault("J", args.J)
    for key, val in (("line_broadening", args.lb), ("acquisition_time", args.acq),
                     ("points", args.points), ("detect", args.detect)):
        if val is not None:
            data[key] = val
    try:
        return SpectrumConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid spectrum configuration: {exc}") from None


def _cmd_spectrum(args) -> int:
    cfg = _spectrum_config(args)
    spec = simulate_spectrum(prepare_state(args.state), cfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["freq_Hz", "real", "imag"])
    for f, a in zip(spec.frequencies, spec.amplitudes):
        w.writerow([repr(float(f)), repr(float(a.real)), repr(float(a.imag))])
    _write(buf.getvalue(), args.out)
    return 0


# -- parser -------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--J", type=float, default=1.0, help="reference coupling in Hz (default 1)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="infidelity threshold")
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "md"))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="isinggates", description="Gate design for a three-spin Ising chain.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("geodesic", parents=[common], help="constant-control geodesic search")
    g.add_argument("--phi", type=float, help="target angle on the x1 = 0 meridian (rad)")
    g.add_argument("--kappa", type=float, help="trilinear rotation parameter in [0, 2]")
    g.add_argument("--u-max", type=float, default=4.0)
    g.add_argument("--trajectory-csv", help="also write the sphere trajectory here")
    g.add_argument("--points", type=int, default=201, help="trajectory samples")
    g.set_defaults(func=_cmd_geodesic)

    gates = sub.add_parser("gates", help="duration ledger and verification")
    gsub = gates.add_subparsers(dest="action", required=True)
    t = gsub.add_parser("table", parents=[common])
    t.set_defaults(func=_cmd_gates_table)
    v = gsub.add_parser("verify", parents=[common])
    v.add_argument("label", help=f"one of {', '.join(REALIZATIONS)} or 'all'")
    v.add_argument("--m", type=int, default=2, help="repetitions for broadband variants")
    v.set_defaults(func=_cmd_gates_verify)

    s = sub.add_parser("sequence", help="pulse sequences")
    ssub = s.add_subparsers(dest="action", required=True)
    e = ssub.add_parser("emit", parents=[common])
    e.add_argument("label")
    e.add_argument("--m", type=int, default=2)
    e.set_defaults(func=_cmd_sequence_emit)

    sp = sub.add_parser("spectrum", parents=[common], help="simulated 1-D spectrum as CSV")
    sp.add_argument("--state", choices=("A", "B", "C", "D"), default="A")
    sp.add_argument("--params", choices=tuple(PRESETS))
    sp.add_argument("--config", help="JSON file with SpectrumConfig fields")
    sp.add_argument("--lb", type=float, help="line broadening (Hz)")
    sp.add_argument("--acq", type=float, help="acquisition time (s)")
    sp.add_argument("--points", type=int)
    sp.add_argument("--detect", type=int, nargs="+")
    sp.set_defaults(func=_cmd_spectrum)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
