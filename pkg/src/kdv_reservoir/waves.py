"""Analytic KdV wave profiles and the truncated encoding initial condition."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .elliptic import jacobi_sn
from .solver import Grid, WaveField

# m this close to 0 or 1 is handled by the sin^2 / sech^2 closed forms.
DEGENERATE_M = 1e-12
# Margin, in soliton widths, required between the soliton and the domain edges.
EDGE_MARGIN_WIDTHS = 5.0


class ConfigurationError(ValueError):
    """Parameters that cannot describe a physical setup."""


class NoCollisionError(ValueError):
    """An encoding wave at least as fast as the soliton never gets caught."""


@dataclass(frozen=True)
class CnoidalParams:
    r1: float
    r2: float
    r3: float
    beta: float

    def __post_init__(self):
        if not (self.r1 >= self.r2 >= self.r3):
            raise ConfigurationError(f"need r1 >= r2 >= r3, got {self.r1}, {self.r2}, {self.r3}")
        if not self.beta > 0:
            raise ConfigurationError("beta must be positive")

    @property
    def m(self) -> float:
        span = self.r1 - self.r3
        return 0.0 if span == 0 else (self.r1 - self.r2) / span

    @property
    def wavenumber(self) -> float:
        return math.sqrt((self.r1 - self.r3) / (12.0 * self.beta))


@dataclass(frozen=True)
class SolitonParams:
    r1: float
    r2: float
    beta: float
    x0: float = 0.0

    def __post_init__(self):
        if not self.r1 > self.r2:
            raise ConfigurationError("soliton needs r1 > r2")
        if not self.beta > 0:
            raise ConfigurationError("beta must be positive")

    @property
    def amplitude(self) -> float:
        return self.r1 - self.r2

    @property
    def width_parameter(self) -> float:
        return math.sqrt((self.r1 - self.r2) / (12.0 * self.beta))

    @property
    def speed(self) -> float:
        return (self.r1 + 2.0 * self.r2) / 3.0


@dataclass(frozen=True)
class EncodingWaveParams:
    epsilon: float
    k: float
    label: Hashable = None

    def __post_init__(self):
        if self.epsilon < 0:
            raise ConfigurationError("encoding amplitude must be >= 0")
        if not self.k > 0:
            raise ConfigurationError("encoding wavenumber must be positive")


@dataclass(frozen=True)
class EncodingTrain:
    waves: tuple[EncodingWaveParams, ...] = field(default_factory=tuple)
    l: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "waves", tuple(self.waves))
        if len(self.waves) < 1:
            raise ConfigurationError("an encoding train needs at least one wave")
        if not self.l > 0:
            raise ConfigurationError("envelope length l must be positive")


def wave_speed(p: CnoidalParams) -> float:
    return (p.r1 + p.r2 + p.r3) / 3.0


def cnoidal_profile(p: CnoidalParams, x, t: float = 0.0):
    """u = r1 - (r1 - r2) sn^2(sqrt((r1 - r3)/(12 beta)) (x - v t) | m)."""
    x = np.asarray(x, dtype=float)
    if p.r1 == p.r3:
        out = np.full_like(x, p.r1)
    else:
        theta = p.wavenumber * (x - wave_speed(p) * t)
        m = p.m
        if m <= DEGENERATE_M:
            s2 = np.sin(theta) ** 2
        elif m >= 1.0 - DEGENERATE_M:
            s2 = np.tanh(theta) ** 2
        else:
            s2 = jacobi_sn(theta, m) ** 2
        out = p.r1 - (p.r1 - p.r2) * s2
    return float(out) if out.ndim == 0 else out


def low_amplitude_profile(p: CnoidalParams, x, t: float = 0.0):
    """Small-m form r1 - (r1 - r2) sin^2(...)."""
    theta = p.wavenumber * (np.asarray(x, dtype=float) - wave_speed(p) * t)
    return p.r1 - (p.r1 - p.r2) * np.sin(theta) ** 2


def soliton_profile(p: SolitonParams, x, t: float = 0.0):
    arg = p.width_parameter * (np.asarray(x, dtype=float) - p.x0 - p.speed * t)
    out = p.r2 + p.amplitude / np.cosh(arg) ** 2
    return float(out) if np.ndim(out) == 0 else out


def encoding_wave_speed(w: EncodingWaveParams, r2: float, beta: float) -> float:
    return r2 + (2.0 / 3.0) * w.epsilon - 4.0 * beta * w.k**2


def envelope(x, l: float):
    return np.exp(-((2.0 * np.asarray(x, dtype=float) / l) ** 8))


def encoding_train_profile(train: EncodingTrain, x):
    """exp(-(2x/l)^8) * sum_n eps_n cos^2(k_n x)."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    for w in train.waves:
        if w.epsilon:
            total = total + w.epsilon * np.cos(w.k * x) ** 2
    out = envelope(x, train.l) * total
    return float(out) if out.ndim == 0 else out


def envelope_half_support(l: float, cutoff: float = 1e-16) -> float:
    """|x| beyond which the envelope drops below ``cutoff``."""
    return 0.5 * l * (-math.log(cutoff)) ** (1.0 / 8.0)


def build_initial_condition(train: EncodingTrain, sol: SolitonParams, grid: Grid) -> WaveField:
    """Sample ``u_e(x) + u_s(x)`` on the grid, soliton centred at ``sol.x0``."""
    margin = EDGE_MARGIN_WIDTHS / sol.width_parameter
    half = envelope_half_support(train.l, cutoff=1e-8)
    lo = min(-half, sol.x0 - margin)
    hi = max(half, sol.x0 + margin)
    if lo < grid.x_min or hi >= grid.x_max:
        raise ConfigurationError(
            f"grid [{grid.x_min}, {grid.x_max}) cannot hold the encoding train and soliton "
            f"(needs [{lo:.3g}, {hi:.3g}])"
        )
    x = grid.x
    values = encoding_train_profile(train, x) + soliton_profile(sol, x, 0.0)
    return WaveField(values, grid, 0.0)


def collision_point(v: float, v_n: float, L: float) -> tuple[float, float]:
    """Where and when a wave leaving x=0 at speed v_n is caught by a soliton leaving -L at v."""
    if not v > v_n:
        raise NoCollisionError(f"soliton speed {v} does not exceed encoding speed {v_n}")
    t_c = L / (v - v_n)
    return v_n * t_c, t_c


def superposition_residual(
    train: EncodingTrain, sol: SolitonParams, x: Sequence[float], t: float, h: float = 1e-3
) -> float:
    """Max KdV residual of the untruncated sum of moving cos^2 waves plus soliton.

    Reported as a diagnostic only; the sum is not an exact KdV solution.
    """
    x = np.asarray(x, dtype=float)

    def u(xx, tt):
        total = soliton_profile(sol, xx, tt)
        for w in train.waves:
            vn = encoding_wave_speed(w, sol.r2, sol.beta)
            total = total + w.epsilon * np.cos(w.k * (xx - vn * tt)) ** 2
        return total

    ut = (u(x, t + h) - u(x, t - h)) / (2 * h)
    ux = (u(x + h, t) - u(x - h, t)) / (2 * h)
    uxxx = (u(x + 2 * h, t) - 2 * u(x + h, t) + 2 * u(x - h, t) - u(x - 2 * h, t)) / (2 * h**3)
    return float(np.max(np.abs(ut + u(x, t) * ux + sol.beta * uxxx)))
