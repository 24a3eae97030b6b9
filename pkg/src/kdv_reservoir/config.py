"""YAML experiment configuration.

Sections: ``grid``, ``solver``, ``soliton``, ``encoding``, ``detection``,
``gate`` and the optional ``units``. Every physical number is in
adimensional units except inside ``units``. Errors carry the line of the
offending key.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .reservoir import GateConfig, GateVariable, truth_table_cases
from .solver import Grid, SolverConfig
from .units import PhysicalSetup, UnitSystem

SECTIONS = ("grid", "solver", "soliton", "encoding", "detection", "gate", "units")
REQUIRED = ("grid", "solver", "soliton", "encoding", "detection")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where = f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


@dataclass(frozen=True)
class Experiment:
    gate: GateConfig
    units: UnitSystem
    setup: PhysicalSetup
    raw: dict

    def echo(self) -> dict:
        return copy.deepcopy(self.raw)


def default_config_path() -> Path:
    return Path(str(resources.files("kdv_reservoir") / "configs" / "xnor.yaml"))


def _key_lines(node, prefix=()) -> dict:
    """Map key paths to 1-based line numbers in the composed YAML tree."""
    lines = {}
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            path = prefix + (k.value,)
            lines[path] = k.start_mark.line + 1
            lines.update(_key_lines(v, path))
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            path = prefix + (i,)
            lines[path] = v.start_mark.line + 1
            lines.update(_key_lines(v, path))
    return lines


class _Reader:
    def __init__(self, data: dict, lines: dict, source: str | None):
        self.data = data
        self.lines = lines
        self.source = source

    def fail(self, message, *path):
        line = None
        for n in range(len(path), 0, -1):
            if path[:n] in self.lines:
                line = self.lines[path[:n]]
                break
        raise ConfigError(message, line, self.source)

    def section(self, name, required=True) -> dict:
        sec = self.data.get(name)
        if sec is None:
            if required:
                raise ConfigError(f"missing section [{name}]", None, self.source)
            return {}
        if not isinstance(sec, dict):
            self.fail(f"section [{name}] must be a mapping", name)
        return sec

    def number(self, path, key, default=None):
        node = self.data
        for p in path:
            node = node[p]
        if key not in node:
            if default is None:
                self.fail(f"missing key {key!r}", *path)
            return default
        value = node[key]
        if isinstance(value, bool):
            self.fail(f"{key!r} must be a number, got {value!r}", *path, key)
        try:
            return float(value)
        except (TypeError, ValueError):
            self.fail(f"{key!r} must be a number, got {value!r}", *path, key)


def parse_config(text: str, source: str | None = None) -> Experiment:
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError(f"malformed YAML: {getattr(exc, 'problem', exc)}", line, source) from None
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping of sections", 1, source)
    r = _Reader(data, _key_lines(root), source)
    for name in data:
        if name not in SECTIONS:
            r.fail(f"unknown section [{name}]", name)
    for name in REQUIRED:
        r.section(name)

    num = r.number
    try:
        grid = Grid(
            num(("grid",), "x_min"),
            num(("grid",), "x_max"),
            int(num(("grid",), "n_points")),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        r.fail(str(exc), "grid")

    dealias = data["solver"].get("dealias", True)
    if not isinstance(dealias, bool):
        r.fail("'dealias' must be true or false", "solver", "dealias")
    try:
        solver = SolverConfig(
            beta=num(("solver",), "beta"),
            dt=num(("solver",), "dt"),
            dealias=dealias,
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        r.fail(str(exc), "solver")

    enc = r.section("encoding")
    raw_vars = enc.get("variables")
    if not isinstance(raw_vars, list) or not raw_vars:
        r.fail("[encoding] needs a non-empty 'variables' list", "encoding")
    variables = []
    for i, v in enumerate(raw_vars):
        if not isinstance(v, dict):
            r.fail("each encoding variable must be a mapping", "encoding", "variables", i)
        p = ("encoding", "variables", i)
        variables.append(
            GateVariable(
                label=str(v.get("label", f"x{i + 1}")),
                k=num(p, "k"),
                epsilon_true=num(p, "epsilon_true"),
            )
        )

    det = r.section("detection")
    times = det.get("times")
    if not isinstance(times, list) or not times:
        r.fail("[detection] needs a non-empty 'times' list", "detection")
    for i, t in enumerate(times):
        if isinstance(t, bool) or not isinstance(t, (int, float)):
            r.fail(f"detection time {t!r} is not a number", "detection", "times", i)

    gate = r.section("gate", required=False)
    cases = gate.get("cases")
    outputs = gate.get("outputs", [])
    if cases is None:
        cases = truth_table_cases(len(variables))
    if not isinstance(cases, list) or not all(isinstance(c, (list, tuple)) for c in cases):
        r.fail("'cases' must be a list of input lists", "gate", "cases")
    if not isinstance(outputs, list):
        r.fail("'outputs' must be a list", "gate", "outputs")

    try:
        gate_cfg = GateConfig(
            r1=num(("soliton",), "r1"),
            r2=num(("soliton",), "r2"),
            delay_L=num(("soliton",), "delay_L"),
            envelope_l=num(("encoding",), "envelope_l"),
            variables=variables,
            detection_x=num(("detection",), "x"),
            detection_times=times,
            solver=solver,
            grid=grid,
            cases=[tuple(bool(b) for b in c) for c in cases],
            outputs=[bool(o) for o in outputs],
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        r.fail(str(exc), _guess_section(str(exc)))

    u = r.section("units", required=False)
    up = ("units",)
    try:
        units = UnitSystem(
            T=num(up, "T", 1e-3) if u else 1e-3,
            D=num(up, "D", 1e-3) if u else 1e-3,
            height_factor=num(up, "height_factor", 10.0) if u else 10.0,
        )
        setup = PhysicalSetup(
            bucket_side=num(up, "bucket_side", 0.10) if u else 0.10,
            rest_height=num(up, "h0", 0.01) if u else 0.01,
            gravity=num(up, "g", 9.80665) if u else 9.80665,
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        r.fail(str(exc), "units")

    return Experiment(gate_cfg, units, setup, data)


def _guess_section(message: str) -> str:
    msg = message.lower()
    if "detection" in msg:
        return "detection"
    if "case" in msg or "output" in msg:
        return "gate"
    if "encoding" in msg or "envelope" in msg:
        return "encoding"
    return "soliton"


def load_config(path=None) -> Experiment:
    path = Path(path) if path is not None else default_config_path()
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, str(path)) from None
    return parse_config(text, str(path))


def dump_config(raw: dict) -> str:
    return yaml.safe_dump(raw, sort_keys=False)
