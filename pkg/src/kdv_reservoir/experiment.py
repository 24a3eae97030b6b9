"""End-to-end runs: gate training/evaluation, parameter sweeps, unit tables."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import replace

import numpy as np

from . import elm
from .config import Experiment
from .reference import KNOWN_DISCREPANCIES, PHYSICAL_TABLE, matches_sig_figs
from .reservoir import GateConfig, ResponseMatrix, assemble, case_label, simulate_cases
from .units import shallow_water_speed, to_physical
from .waves import ConfigurationError

SIG_DIGITS = 10

SWEEP_PARAMS = ("x_D", "L", "l", "epsilon_true", "t_offset")


def round_sig(obj, digits: int = SIG_DIGITS):
    """Round every float in a nested structure to ``digits`` significant figures."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, np.ndarray):
        return round_sig(obj.tolist(), digits)
    if isinstance(obj, np.floating):
        return round_sig(float(obj), digits)
    if isinstance(obj, dict):
        return {k: round_sig(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_sig(v, digits) for v in obj]
    return obj


def evaluate_gate(cfg: GateConfig, X: ResponseMatrix, tolerance: float = elm.DEFAULT_TOLERANCE):
    """Train exactly on X, re-infer every training column and decode.

    Returns ``(model, rows)``; raises ``SingularMatrixError`` when X cannot be
    inverted.
    """
    if not cfg.outputs:
        raise ConfigurationError("gate outputs are required to train the readout")
    target = elm.TargetMatrix.from_booleans(cfg.outputs)
    model = elm.train_exact(X, target, tolerance)
    rows = []
    for j, case in enumerate(X.cases):
        y = elm.infer(model, X.entries[:, j])
        bit = elm.decode_boolean(y)
        expected = cfg.outputs[cfg.cases.index(case)]
        err = float(np.max(np.abs(y - target.entries[:, j])))
        rows.append(
            {
                "case": case,
                "output": y,
                "decoded": bit.value,
                "confidence": bit.confidence,
                "expected": expected,
                "correct": bit.value == expected,
                "max_error": err,
            }
        )
    return model, rows


def run_gate(exp: Experiment, threads: int = 1) -> tuple[dict, dict]:
    """Simulate every configured case, train and evaluate.

    Returns ``(report, timings)``. Timings are kept out of the report so that
    re-running a config reproduces it byte for byte.
    """
    cfg = exp.gate
    t0 = time.perf_counter()
    trajs = simulate_cases(cfg, cfg.cases, threads)
    t_sim = time.perf_counter() - t0
    X = assemble(cfg, trajs, cfg.cases)
    report = {
        "cases": [case_label(c) for c in cfg.cases],
        "detection_x": cfg.detection_x,
        "detection_times": list(cfg.detection_times),
        "response_matrix": X.entries,
        "determinant": X.determinant,
        "condition_number": X.condition_number,
        "solver_drift": {case_label(c): list(X.drifts[c]) for c in cfg.cases},
        "collision_points": [list(p) for p in cfg.collision_points()],
    }
    try:
        model, rows = evaluate_gate(cfg, X)
    except (elm.SingularMatrixError, elm.ShapeError) as exc:
        report["status"] = "error"
        report["error"] = str(exc)
    else:
        report["status"] = "ok"
        report["w_out"] = model.w_out
        report["bias"] = model.bias
        report["training_residual"] = model.residual
        report["results"] = [
            {**r, "case": case_label(r["case"]), "output": r["output"]} for r in rows
        ]
        report["accuracy"] = sum(r["correct"] for r in rows) / len(rows)
    timings = {"simulation_s": t_sim, "total_s": time.perf_counter() - t0}
    # the config echo keeps full precision so it can be re-run as is
    return {"config": exp.echo(), **round_sig(report)}, timings


def format_truth_table(report: dict, labels=("A", "B")) -> str:
    if report.get("status") != "ok":
        return f"gate failed: {report.get('error')}"
    lines = []
    head = " ".join(labels) if len(labels) else "inputs"
    lines.append(f"{head} | out | y                          | expected")
    for r in report["results"]:
        bits = " ".join(r["case"].strip("()").split(","))
        y = ", ".join(f"{v:+.6f}" for v in r["output"])
        mark = "" if r["correct"] else "  MISMATCH"
        lines.append(f"{bits} |  {int(r['decoded'])}  | ({y}) | {int(r['expected'])}{mark}")
    lines.append(f"accuracy {report['accuracy'] * 100:.0f}%  det(X) = {report['determinant']:.6g}")
    return "\n".join(lines)


def _apply_param(cfg: GateConfig, name: str, value: float) -> GateConfig:
    if name == "x_D":
        return replace(cfg, detection_x=value)
    if name == "L":
        return replace(cfg, delay_L=value)
    if name == "l":
        return replace(cfg, envelope_l=value)
    if name == "epsilon_true":
        return replace(cfg, variables=tuple(replace(v, epsilon_true=value) for v in cfg.variables))
    if name == "t_offset":
        return replace(cfg, detection_times=tuple(t + value for t in cfg.detection_times))
    raise ValueError(f"unknown sweep parameter {name!r}; choose from {SWEEP_PARAMS}")


def parse_range(text: str) -> list[float]:
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range {text!r} must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("range step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = [start + i * step for i in range(max(n, 0))]
    else:
        values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ValueError(f"range {text!r} is empty")
    return values


def sweep(exp: Experiment, name: str, values, threads: int = 1) -> list[dict]:
    """Retrain the gate at each parameter value.

    Simulations are shared between points when the parameter only moves the
    detection point or times.
    """
    if name not in SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {name!r}; choose from {SWEEP_PARAMS}")
    values = list(values)
    if not values:
        raise ValueError("empty sweep range")
    base = exp.gate
    shared = None
    if name in ("x_D", "t_offset"):
        times = set()
        for v in values:
            try:
                times.update(_apply_param(base, name, v).detection_times)
            except ConfigurationError:
                pass  # reported per row below
        times = sorted(times) or list(base.detection_times)
        shared = simulate_cases(base, base.cases, threads, record_times=times)

    rows = []
    for v in values:
        row = {"param": name, "value": v}
        try:
            cfg = _apply_param(base, name, v)
            trajs = shared if shared is not None else simulate_cases(cfg, cfg.cases, threads)
            X = assemble(cfg, trajs, cfg.cases)
            row["abs_det"] = abs(X.determinant) if X.is_square else float("nan")
            row["condition_number"] = X.condition_number
            _, results = evaluate_gate(cfg, X)
            row["accuracy"] = sum(r["correct"] for r in results) / len(results)
            row["status"] = "ok"
        except elm.SingularMatrixError:
            row.setdefault("abs_det", float("nan"))
            row.setdefault("condition_number", float("inf"))
            row["accuracy"] = float("nan")
            row["status"] = "singular"
        except ConfigurationError as exc:
            row.update(abs_det=float("nan"), condition_number=float("nan"), accuracy=float("nan"))
            row["status"] = f"invalid: {exc}"
        rows.append(row)
    return rows


def write_sweep_csv(rows: list[dict], path) -> None:
    cols = ["param", "value", "abs_det", "condition_number", "accuracy", "status"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for r in rows:
            w.writerow(
                [f"{r[c]:.{SIG_DIGITS}g}" if isinstance(r[c], float) else r[c] for c in cols]
            )


def unit_report(exp: Experiment) -> list[dict]:
    """Physical dimensions of the configured gate, checked against the stated table."""
    cfg, u = exp.gate, exp.units
    sol = cfg.soliton
    k1, k2 = cfg.variables[0].k, cfg.variables[1].k
    v1, v2 = cfg.encoding_speeds()[:2]
    computed = {
        "soliton amplitude": to_physical(sol.amplitude, "height", u),
        "soliton wavenumber": to_physical(sol.width_parameter, "wavenumber", u),
        "soliton wavelength": to_physical(2 * math.pi / sol.width_parameter, "wavelength", u),
        "soliton velocity": to_physical(sol.speed, "velocity", u),
        "encoding amplitude": to_physical(cfg.variables[0].epsilon_true, "height", u),
        "encoding wavenumber k1": to_physical(k1, "wavenumber", u),
        "encoding wavenumber k2": to_physical(k2, "wavenumber", u),
        "encoding wavelength 1": to_physical(2 * math.pi / k1, "wavelength", u),
        "encoding wavelength 2": to_physical(2 * math.pi / k2, "wavelength", u),
        "encoding velocity 1": to_physical(v1, "velocity", u),
        "encoding velocity 2": to_physical(v2, "velocity", u),
        "soliton delay": to_physical(cfg.delay_L / sol.speed, "time", u),
        "excitation length": to_physical(cfg.envelope_l, "length", u),
        "rest height": to_physical(sol.r2, "height", u),
        "velocity scale v0": u.v0,
        "processing time": to_physical(100.0, "time", u),
        "shallow-water speed": shallow_water_speed(exp.setup),
    }
    rows = []
    for name, value in computed.items():
        stated, unit, factor, digits = PHYSICAL_TABLE[name]
        rows.append(
            {
                "quantity": name,
                "si_value": value,
                "display": value * factor,
                "display_unit": unit,
                "stated_display": stated * factor,
                "matches": matches_sig_figs(value, stated, min(3, digits)),
                "flag": KNOWN_DISCREPANCIES.get(name, ""),
            }
        )
    return rows
