"""Command-line entry point: ``kdv-reservoir {simulate,gate,sweep,convert-units}``.

Exit status: 0 on success, 1 on validation/usage errors, 2 on numerical
failure (solver instability or a singular response matrix).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import elm
from .config import load_config
from .experiment import (
    SWEEP_PARAMS,
    format_truth_table,
    parse_range,
    run_gate,
    sweep,
    unit_report,
    write_sweep_csv,
)
from .reservoir import EncodingError, case_label, parse_case, simulate_case
from .solver import IntegrationError
from .units import KINDS, to_adimensional, to_physical
from .waves import ConfigurationError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _atomic_write(path: Path, writer) -> None:
    """Run ``writer(tmp_path)`` then move the result into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _record_times(t_end: float, every: float, dt: float) -> list[float]:
    stride = max(1, int(round(every / dt)))
    n_end = int(round(t_end / dt))
    return [i * dt for i in range(0, n_end + 1, stride)]


def cmd_simulate(args) -> int:
    exp = load_config(args.config)
    cfg = exp.gate
    case = parse_case(args.case)
    if len(case) != cfg.n_u:
        raise EncodingError(f"--case has {len(case)} inputs, config defines {cfg.n_u}")
    times = _record_times(args.t_end, args.every, cfg.solver.dt)
    traj = simulate_case(cfg, case, times)
    _atomic_write(Path(args.out), traj.to_csv)
    d1, d2, d3 = traj.max_drift
    print(f"case {case_label(case)}: {len(traj.snapshots)} snapshots to t={traj.times[-1]:g} -> {args.out}")
    print(f"invariant drift (relative): I1 {d1:.3e}  I2 {d2:.3e}  I3 {d3:.3e}")
    return EXIT_OK


def cmd_gate(args) -> int:
    exp = load_config(args.config)
    report, timings = run_gate(exp, threads=args.threads)
    if args.timings:
        report["timings"] = timings
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        _atomic_write(Path(args.out), lambda p: Path(p).write_text(text))
    labels = tuple(v.label for v in exp.gate.variables)
    print(format_truth_table(report, labels))
    print(f"simulation {timings['simulation_s']:.1f} s, total {timings['total_s']:.1f} s")
    if report["status"] != "ok":
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_sweep(args) -> int:
    exp = load_config(args.config)
    values = parse_range(args.range)
    rows = sweep(exp, args.param, values, threads=args.threads)
    _atomic_write(Path(args.out), lambda p: write_sweep_csv(rows, p))
    for r in rows:
        print(
            f"{r['param']}={r['value']:g}  |det X|={r['abs_det']:.4g}  "
            f"cond={r['condition_number']:.4g}  accuracy={r['accuracy']:.2f}  {r['status']}"
        )
    return EXIT_OK


def cmd_convert_units(args) -> int:
    exp = load_config(args.config)
    if args.value is not None:
        if args.kind is None:
            raise ConfigurationError("--value needs --kind")
        fn = to_adimensional if args.to_adimensional else to_physical
        print(f"{fn(args.value, args.kind, exp.units):.10g}")
        return EXIT_OK
    rows = unit_report(exp)
    lines = [f"{'quantity':<24}{'computed':>12}{'stated':>10}  unit    ok  note"]
    for r in rows:
        ok = "yes" if r["matches"] else "NO"
        lines.append(
            f"{r['quantity']:<24}{r['display']:>12.4g}{r['stated_display']:>10.4g}  "
            f"{r['display_unit']:<7} {ok:<3} {r['flag']}"
        )
    text = "\n".join(lines)
    print(text)
    if args.out:
        payload = json.dumps(rows, indent=2, default=float) + "\n"
        _atomic_write(Path(args.out), lambda p: Path(p).write_text(payload))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kdv-reservoir", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, out_required=False):
        sp.add_argument("--config", default=None, help="YAML config (default: shipped XNOR config)")
        sp.add_argument("--out", required=out_required)
        sp.add_argument("--threads", type=int, default=1)

    s = sub.add_parser("simulate", help="evolve one encoded case and write the trajectory CSV")
    common(s, out_required=True)
    s.add_argument("--case", required=True, help="inputs, e.g. 1,0")
    s.add_argument("--t-end", type=float, default=100.0)
    s.add_argument("--every", type=float, default=1.0, help="snapshot spacing")
    s.set_defaults(func=cmd_simulate)

    g = sub.add_parser("gate", help="run all cases, train the readout and print the truth table")
    common(g)
    g.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    g.set_defaults(func=cmd_gate)

    w = sub.add_parser("sweep", help="retrain the gate over a range of one parameter")
    common(w, out_required=True)
    w.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    w.add_argument("--range", required=True, help="start:stop:step (inclusive) or v1,v2,...")
    w.set_defaults(func=cmd_sweep)

    c = sub.add_parser("convert-units", help="physical dimensions of the configured setup")
    common(c)
    c.add_argument("--value", type=float)
    c.add_argument("--kind", choices=KINDS)
    c.add_argument("--to-adimensional", action="store_true")
    c.set_defaults(func=cmd_convert_units)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    # LinAlgError subclasses ValueError, so it must be caught first
    except (IntegrationError, elm.SingularMatrixError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:  # ConfigError, ConfigurationError, EncodingError, bad ranges
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
