"""Mapping between adimensional solver quantities and SI units.

Reference scales are a time T and a length D, giving the velocity scale
v0 = D / T. Water height is ``u * v0 * height_factor * T`` so that the
background level r2 = 1 maps onto the rest depth h0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

STANDARD_GRAVITY = 9.80665

KINDS = ("length", "time", "velocity", "height", "wavenumber", "wavelength")


class UnitError(ValueError):
    pass


@dataclass(frozen=True)
class UnitSystem:
    T: float = 1e-3
    D: float = 1e-3
    height_factor: float = 10.0

    def __post_init__(self):
        if not (self.T > 0 and self.D > 0 and self.height_factor > 0):
            raise UnitError("reference scales must be positive")

    @property
    def v0(self) -> float:
        return self.D / self.T

    def nu(self, beta: float) -> float:
        """Normalised dispersion beta / (v0^3 T^2)."""
        value = beta / (self.v0**3 * self.T**2)
        if not value > 0:
            raise UnitError("normalised dispersion must be positive")
        return value

    def scale(self, kind: str) -> float:
        """Multiplier taking an adimensional value of ``kind`` to SI."""
        if kind in ("length", "wavelength"):
            return self.D
        if kind == "time":
            return self.T
        if kind == "velocity":
            return self.v0
        if kind == "height":
            return self.v0 * self.height_factor * self.T
        if kind == "wavenumber":
            return 1.0 / self.D
        raise UnitError(f"unknown quantity kind {kind!r}; expected one of {KINDS}")


@dataclass(frozen=True)
class PhysicalSetup:
    bucket_side: float = 0.10
    rest_height: float = 0.01
    gravity: float = STANDARD_GRAVITY


def to_physical(value: float, kind: str, units: UnitSystem) -> float:
    return value * units.scale(kind)


def to_adimensional(value: float, kind: str, units: UnitSystem) -> float:
    return value / units.scale(kind)


def shallow_water_speed(setup: PhysicalSetup) -> float:
    """sqrt(g h0), the long-wave speed over still water of depth h0."""
    if not setup.rest_height > 0:
        raise UnitError("rest height must be positive")
    return math.sqrt(setup.gravity * setup.rest_height)
