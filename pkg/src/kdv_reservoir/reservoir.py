"""Boolean encoding, KdV evolution and readout at a fixed detection point."""

from __future__ import annotations

import csv
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .solver import Grid, SolverConfig, Trajectory, WaveField, evolve
from .waves import (
    ConfigurationError,
    EncodingTrain,
    EncodingWaveParams,
    SolitonParams,
    build_initial_condition,
    collision_point,
    encoding_wave_speed,
)

Case = tuple[bool, ...]


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class GateVariable:
    label: str
    k: float
    epsilon_true: float


@dataclass(frozen=True)
class GateConfig:
    r1: float
    r2: float
    delay_L: float
    envelope_l: float
    variables: tuple[GateVariable, ...]
    detection_x: float
    detection_times: tuple[float, ...]
    solver: SolverConfig
    grid: Grid
    cases: tuple[Case, ...] = ()
    outputs: tuple[bool, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "detection_times", tuple(float(t) for t in self.detection_times))
        object.__setattr__(self, "cases", tuple(tuple(bool(b) for b in c) for c in self.cases))
        object.__setattr__(self, "outputs", tuple(bool(o) for o in self.outputs))
        self.validate()

    @property
    def beta(self) -> float:
        return self.solver.beta

    @property
    def n_u(self) -> int:
        return len(self.variables)

    @property
    def n_x(self) -> int:
        return len(self.detection_times)

    @property
    def soliton(self) -> SolitonParams:
        return SolitonParams(self.r1, self.r2, self.beta, x0=-self.delay_L)

    def encoding_speeds(self) -> list[float]:
        return [
            encoding_wave_speed(EncodingWaveParams(v.epsilon_true, v.k), self.r2, self.beta)
            for v in self.variables
        ]

    def collision_points(self) -> list[tuple[float, float]]:
        v = self.soliton.speed
        return [collision_point(v, vn, self.delay_L) for vn in self.encoding_speeds()]

    def validate(self) -> None:
        if not self.delay_L > 0:
            raise ConfigurationError("delay L must be positive")
        if not self.envelope_l > 0:
            raise ConfigurationError("envelope length l must be positive")
        if not self.variables:
            raise ConfigurationError("at least one encoding variable is required")
        if not self.detection_times:
            raise ConfigurationError("at least one detection time is required")
        if any(b <= a for a, b in zip(self.detection_times, self.detection_times[1:])):
            raise ConfigurationError("detection times must be strictly increasing")
        for t in self.detection_times:
            steps = t / self.solver.dt
            if t < 0 or abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
                raise ConfigurationError(f"detection time {t} is not a multiple of dt={self.solver.dt}")
        if not self.grid.contains(self.detection_x):
            raise ConfigurationError(f"detection point x_D={self.detection_x} lies outside the grid")
        sol = self.soliton  # validates r1 > r2
        for var, vn in zip(self.variables, self.encoding_speeds()):
            if not vn < sol.speed:
                raise ConfigurationError(
                    f"encoding wave {var.label!r} (speed {vn:.6g}) is not slower than the soliton "
                    f"(speed {sol.speed:.6g})"
                )
        for c in self.cases:
            if len(c) != self.n_u:
                raise ConfigurationError(f"case {c} has arity {len(c)}, expected {self.n_u}")
        if len(set(self.cases)) != len(self.cases):
            raise ConfigurationError("gate cases must be distinct")
        if self.outputs and len(self.outputs) != len(self.cases):
            raise ConfigurationError("gate outputs must match the number of cases")

    def with_updates(self, **changes) -> "GateConfig":
        return replace(self, **changes)


def truth_table_cases(n_u: int) -> list[Case]:
    """All input tuples, all-true first, in truth-table row order."""
    return [tuple(c) for c in itertools.product((True, False), repeat=n_u)]


def case_label(case: Sequence[bool]) -> str:
    return "(" + ",".join(str(int(b)) for b in case) + ")"


def parse_case(text: str) -> Case:
    """``"1,0"`` or ``"true,false"`` -> (True, False)."""
    out = []
    for tok in text.replace("(", "").replace(")", "").split(","):
        tok = tok.strip().lower()
        if tok in ("1", "true", "t"):
            out.append(True)
        elif tok in ("0", "false", "f"):
            out.append(False)
        else:
            raise EncodingError(f"cannot read {tok!r} as a Boolean")
    return tuple(out)


def encoding_train(cfg: GateConfig, inputs: Sequence[bool]) -> EncodingTrain:
    if len(inputs) != cfg.n_u:
        raise EncodingError(f"got {len(inputs)} inputs for {cfg.n_u} encoding variables")
    waves = [
        EncodingWaveParams(v.epsilon_true if bool(b) else 0.0, v.k, v.label)
        for v, b in zip(cfg.variables, inputs)
    ]
    return EncodingTrain(waves, cfg.envelope_l)


def encode_case(cfg: GateConfig, inputs: Sequence[bool]) -> WaveField:
    return build_initial_condition(encoding_train(cfg, inputs), cfg.soliton, cfg.grid)


@dataclass(frozen=True)
class ReadoutVector:
    values: np.ndarray
    case_id: Case
    times: tuple[float, ...] = ()

    def __len__(self):
        return len(self.values)

    def to_csv(self, path, precision: int = 10) -> None:
        _write_columns(path, self.times, [self.case_id], np.asarray(self.values)[:, None], precision)


@dataclass(frozen=True)
class ResponseMatrix:
    entries: np.ndarray
    cases: tuple[Case, ...]
    times: tuple[float, ...] = ()
    # per-case max relative invariant drift (I1, I2, I3) from the solver
    drifts: dict = field(default_factory=dict, compare=False)

    @property
    def shape(self):
        return self.entries.shape

    @property
    def is_square(self) -> bool:
        return self.entries.shape[0] == self.entries.shape[1]

    @property
    def determinant(self) -> float | None:
        return float(np.linalg.det(self.entries)) if self.is_square else None

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.entries))

    def column(self, case: Sequence[bool]) -> np.ndarray:
        return self.entries[:, self.cases.index(tuple(case))]

    def to_csv(self, path, precision: int = 10) -> None:
        _write_columns(path, self.times, self.cases, self.entries, precision)


def _write_columns(path, times, cases, entries, precision):
    fmt = f"{{:.{precision}g}}".format
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t"] + [f"case{case_label(c)}" for c in cases])
        for t, row in zip(times, entries):
            w.writerow([fmt(t)] + [fmt(v) for v in row])


def simulate_case(cfg: GateConfig, inputs: Sequence[bool], record_times=None) -> Trajectory:
    times = cfg.detection_times if record_times is None else record_times
    return evolve(encode_case(cfg, inputs), cfg.solver, times)


def readout(cfg: GateConfig, traj: Trajectory, case: Sequence[bool]) -> ReadoutVector:
    values = np.array([traj.at(t).sample(cfg.detection_x) for t in cfg.detection_times])
    return ReadoutVector(values, tuple(case), cfg.detection_times)


def run_case(cfg: GateConfig, inputs: Sequence[bool]) -> ReadoutVector:
    return readout(cfg, simulate_case(cfg, inputs), inputs)


def simulate_cases(cfg: GateConfig, cases: Sequence[Case], threads: int = 1, record_times=None) -> dict:
    """Trajectories keyed by case; cases run independently, optionally on threads."""
    cases = [tuple(bool(b) for b in c) for c in cases]
    if len(set(cases)) != len(cases):
        raise ConfigurationError("cases must be distinct")
    if threads > 1 and len(cases) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trajs = list(pool.map(lambda c: simulate_case(cfg, c, record_times), cases))
    else:
        trajs = [simulate_case(cfg, c, record_times) for c in cases]
    return dict(zip(cases, trajs))


def assemble(cfg: GateConfig, trajectories: dict, cases: Sequence[Case]) -> ResponseMatrix:
    cols = [readout(cfg, trajectories[tuple(c)], c).values for c in cases]
    return ResponseMatrix(
        np.column_stack(cols),
        tuple(tuple(c) for c in cases),
        cfg.detection_times,
        {tuple(c): trajectories[tuple(c)].max_drift for c in cases},
    )


def response_matrix(cfg: GateConfig, cases: Sequence[Case] | None = None, threads: int = 1) -> ResponseMatrix:
    """N_x x N matrix whose column j is the readout for ``cases[j]``."""
    cases = list(cfg.cases if cases is None else cases)
    trajs = simulate_cases(cfg, cases, threads)
    return assemble(cfg, trajs, cases)
