"""Closed forms for the rotating transverse field ``-hbar w0 (X cos 2wt + Y sin 2wt)``.

The parallel-transported eigenstates are
``|1_t> = (e^{-iwt}|0> - e^{iwt}|1>)/sqrt(2)`` (energy ``+hbar w0``) and
``|2_t> = (e^{-iwt}|0> + e^{iwt}|1>)/sqrt(2)`` (energy ``-hbar w0``), and
``U_a^dagger U_d`` is known exactly in the ``{|1_0>, |2_0>}`` basis with
``wbar = sqrt(w^2 + w0^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SpecError
from .model import HamiltonianSpec, Rotating


@dataclass(frozen=True)
class RotatingParams:
    omega0: float
    omega: float

    def __post_init__(self):
        if not (self.omega0 > 0 and self.omega > 0):
            raise SpecError("omega0 and omega must both be positive")

    @property
    def omega_bar(self) -> float:
        return math.hypot(self.omega, self.omega0)

    def spec(self, hbar: float = 1.0, T: float | None = None) -> HamiltonianSpec:
        return HamiltonianSpec(Rotating(self.omega0, self.omega), hbar=hbar, T=T)


def analytic_eigenvectors(p: RotatingParams, t) -> np.ndarray:
    """Columns ``|1_t>, |2_t>`` in the computational basis, shape ``(..., 2, 2)``."""
    t = np.asarray(t, dtype=float)
    a = np.exp(-1j * p.omega * t) / math.sqrt(2)
    b = np.exp(1j * p.omega * t) / math.sqrt(2)
    out = np.empty(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = a
    out[..., 1, 0] = -b
    out[..., 0, 1] = a
    out[..., 1, 1] = b
    return out


def analytic_energies(p: RotatingParams, hbar: float = 1.0):
    return hbar * p.omega0, -hbar * p.omega0


def analytic_coupling12(p: RotatingParams) -> complex:
    return -1j * p.omega


def analytic_interaction_unitary(p: RotatingParams, t) -> np.ndarray:
    """Exact ``U_a^dagger(t) U_d(t)`` in the ``{|1_0>, |2_0>}`` basis. Vectorised over ``t``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise SpecError("t must be non-negative")
    w0, w, wb = p.omega0, p.omega, p.omega_bar
    c, s = np.cos(wb * t), np.sin(wb * t)
    plus, minus = np.exp(1j * w0 * t), np.exp(-1j * w0 * t)
    out = np.empty(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = plus * (c - 1j * (w0 / wb) * s)
    out[..., 0, 1] = plus * (1j * w / wb) * s
    out[..., 1, 0] = minus * (1j * w / wb) * s
    out[..., 1, 1] = minus * (c + 1j * (w0 / wb) * s)
    return out


@dataclass(frozen=True)
class DrReport:
    second_kind_deviation: np.ndarray | float  # 1 - |<1_0|U_a^dag U_d|1_0>|^2
    first_kind_phase_defect: np.ndarray | float  # w^2 t / (wbar + w0), radians
    dr6_bound: np.ndarray | float  # w/w0 + w^2 t / (2 w0)


def dr_report(p: RotatingParams, t) -> DrReport:
    t = np.asarray(t, dtype=float)
    w0, w, wb = p.omega0, p.omega, p.omega_bar
    dev = (w / wb) ** 2 * np.sin(wb * t) ** 2
    phase = w**2 * t / (wb + w0)
    bound = w / w0 + w**2 * t / (2 * w0)
    if t.ndim == 0:
        return DrReport(float(dev), float(phase), float(bound))
    return DrReport(dev, phase, bound)


def separation_time(p: RotatingParams) -> float:
    """Time at which the slow first-kind phase ``w^2 t / (wbar + w0)`` reaches pi."""
    return math.pi * (p.omega_bar + p.omega0) / p.omega**2
