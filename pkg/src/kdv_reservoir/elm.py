"""Linear readout training for the extreme-learning-machine limit.

Two trainers are provided: an exact solve ``W = Y X^-1`` for square,
invertible response matrices, and the general Moore-Penrose form
``W = (Y - b 1^T) X^+`` built from an SVD. Models serialise to JSON; Python's
float repr makes the round trip bit-exact.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-3
COND_WARN = 1e8
COND_SINGULAR = 1e12
PINV_RCOND = 1e-12


class ShapeError(ValueError):
    pass


class SingularMatrixError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class TargetMatrix:
    entries: np.ndarray

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.entries, dtype=float))
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_booleans(cls, outputs: Sequence[bool]) -> "TargetMatrix":
        """One column per sample: (1, 0) for false, (0, 1) for true."""
        cols = [[0.0, 1.0] if bool(o) else [1.0, 0.0] for o in outputs]
        return cls(np.array(cols).T)

    @property
    def shape(self):
        return self.entries.shape


@dataclass(frozen=True)
class TrainedModel:
    w_out: np.ndarray
    bias: np.ndarray
    training_tolerance: float = DEFAULT_TOLERANCE
    condition_number: float = float("nan")
    mode: str = "exact"
    residual: float = float("nan")
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "w_out", np.atleast_2d(np.asarray(self.w_out, dtype=float)))
        object.__setattr__(self, "bias", np.asarray(self.bias, dtype=float).reshape(-1))
        if self.bias.shape[0] != self.w_out.shape[0]:
            raise ShapeError("bias length must equal the number of outputs")

    @property
    def n_inputs(self) -> int:
        return self.w_out.shape[1]

    @property
    def meets_tolerance(self) -> bool:
        return bool(self.residual <= self.training_tolerance)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "w_out": self.w_out.tolist(),
            "bias": self.bias.tolist(),
            "training_tolerance": self.training_tolerance,
            "condition_number": self.condition_number,
            "residual": self.residual,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainedModel":
        return cls(
            w_out=np.array(d["w_out"], dtype=float),
            bias=np.array(d["bias"], dtype=float),
            training_tolerance=float(d["training_tolerance"]),
            condition_number=float(d["condition_number"]),
            mode=d["mode"],
            residual=float(d["residual"]),
            metadata=dict(d.get("metadata", {})),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "TrainedModel":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _as_matrix(a) -> np.ndarray:
    entries = getattr(a, "entries", a)
    return np.atleast_2d(np.asarray(entries, dtype=float))


def train_exact(X, Y, tolerance: float = DEFAULT_TOLERANCE) -> TrainedModel:
    """Exact learning with zero bias: ``W_out = Y X^-1`` by a pivoted LU solve."""
    x = _as_matrix(X)
    y = _as_matrix(Y)
    n_x, n = x.shape
    if n_x != n:
        raise ShapeError(f"exact learning needs a square response matrix, got {x.shape}")
    if y.shape[1] != n:
        raise ShapeError(f"target has {y.shape[1]} columns, response matrix has {n}")
    cond = float(np.linalg.cond(x))
    if not np.isfinite(cond) or cond > COND_SINGULAR:
        raise SingularMatrixError(f"response matrix is numerically singular (cond={cond:.3e})")
    if cond > COND_WARN:
        log.warning("response matrix is ill-conditioned (cond=%.3e)", cond)
    # W X = Y  <=>  X^T W^T = Y^T
    w = np.linalg.solve(x.T, y.T).T
    residual = float(np.max(np.abs(w @ x - y)))
    return TrainedModel(w, np.zeros(y.shape[0]), tolerance, cond, "exact", residual)


def pseudoinverse(x, rcond: float = PINV_RCOND) -> np.ndarray:
    """Moore-Penrose inverse from the SVD, dropping singular values below rcond * s_max."""
    x = _as_matrix(x)
    u, s, vt = np.linalg.svd(x, full_matrices=False)
    cutoff = rcond * (s[0] if s.size else 0.0)
    s_inv = np.zeros_like(s)
    keep = s > cutoff
    s_inv[keep] = 1.0 / s[keep]
    return (vt.T * s_inv) @ u.T


def train_pinv(X, Y, b=None, tolerance: float = DEFAULT_TOLERANCE) -> TrainedModel:
    x = _as_matrix(X)
    y = _as_matrix(Y)
    if y.shape[1] != x.shape[1]:
        raise ShapeError(f"target has {y.shape[1]} columns, response matrix has {x.shape[1]}")
    bias = np.zeros(y.shape[0]) if b is None else np.asarray(b, dtype=float).reshape(-1)
    if bias.shape[0] != y.shape[0]:
        raise ShapeError("bias length must equal the number of target rows")
    w = (y - bias[:, None]) @ pseudoinverse(x)
    s = np.linalg.svd(x, compute_uv=False)
    cond = float(s[0] / s[-1]) if s.size and s[-1] > 0 else float("inf")
    residual = float(np.max(np.abs(w @ x + bias[:, None] - y)))
    return TrainedModel(w, bias, tolerance, cond, "pseudoinverse", residual)


def infer(model: TrainedModel, x) -> np.ndarray:
    """``W_out x + b``; ``x`` may be a readout vector or a matrix of readout columns."""
    values = np.asarray(getattr(x, "values", x), dtype=float)
    if values.shape[0] != model.n_inputs:
        raise ShapeError(f"model expects {model.n_inputs} readout samples, got {values.shape[0]}")
    out = model.w_out @ values
    return out + (model.bias if out.ndim == 1 else model.bias[:, None])


@dataclass(frozen=True)
class DecodedBit:
    value: bool
    confidence: float
    tie: bool = False

    def __bool__(self):
        return self.value


def decode_boolean(y) -> DecodedBit:
    """(1, 0) reads as false and (0, 1) as true; the larger component wins."""
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.shape != (2,):
        raise ShapeError(f"boolean decoding needs a 2-vector, got shape {y.shape}")
    diff = float(y[1] - y[0])
    if diff == 0.0:
        log.warning("decode_boolean: tie at %s, decoding as false", y.tolist())
        return DecodedBit(False, 0.0, tie=True)
    return DecodedBit(diff > 0, abs(diff))
