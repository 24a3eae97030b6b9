"""Reservoir computing with KdV soliton collisions in shallow water."""

from .elliptic import complete_elliptic_k, jacobi_sn
from .elm import TargetMatrix, TrainedModel, decode_boolean, infer, train_exact, train_pinv
from .reservoir import GateConfig, ReadoutVector, ResponseMatrix, encode_case, response_matrix, run_case
from .solver import Grid, SolverConfig, Trajectory, WaveField, evolve, invariants, kdv_residual
from .units import PhysicalSetup, UnitSystem, shallow_water_speed, to_adimensional, to_physical
from .waves import (
    CnoidalParams,
    EncodingTrain,
    EncodingWaveParams,
    SolitonParams,
    build_initial_condition,
    cnoidal_profile,
    collision_point,
    encoding_train_profile,
    encoding_wave_speed,
    soliton_profile,
    wave_speed,
)

__all__ = [
    "build_initial_condition",
    "cnoidal_profile",
    "CnoidalParams",
    "collision_point",
    "complete_elliptic_k",
    "decode_boolean",
    "encode_case",
    "encoding_train_profile",
    "encoding_wave_speed",
    "EncodingTrain",
    "EncodingWaveParams",
    "evolve",
    "GateConfig",
    "Grid",
    "infer",
    "invariants",
    "jacobi_sn",
    "kdv_residual",
    "PhysicalSetup",
    "ReadoutVector",
    "response_matrix",
    "ResponseMatrix",
    "run_case",
    "shallow_water_speed",
    "soliton_profile",
    "SolitonParams",
    "SolverConfig",
    "TargetMatrix",
    "to_adimensional",
    "to_physical",
    "train_exact",
    "train_pinv",
    "TrainedModel",
    "Trajectory",
    "UnitSystem",
    "wave_speed",
    "WaveField",
]

__version__ = "0.1.0"
