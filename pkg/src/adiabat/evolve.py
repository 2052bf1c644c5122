"""Dynamical and adiabatic evolution operators on a uniform time grid."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from ._linalg import (
    IDENTITY,
    cumulative_left_product,
    dagger,
    expm_hermitian,
    hermitian_defect,
    unitarity_defect,
)
from .errors import GridMismatch, NonHermitianObservable, SpecError, UnitarityError
from .model import HamiltonianSpec, Rotating, TimeGrid, hamiltonian_at_time, spectral_norm
from .spectral import EigenFrame

UNITARITY_TOL = 1e-10
DEFAULT_STEPS_PER_UNIT = 10_000
DEFAULT_STEP_CAP = 400_000


@dataclass(frozen=True, eq=False)
class UnitaryTrace:
    grid: TimeGrid
    matrices: np.ndarray  # (K, 2, 2)
    frame: EigenFrame | None = None

    def __post_init__(self):
        if self.matrices.shape != (len(self.grid), 2, 2):
            raise SpecError(f"trace shape {self.matrices.shape} does not match grid of {len(self.grid)} points")
        defect = float(np.max(unitarity_defect(self.matrices)))
        if defect > UNITARITY_TOL:
            raise UnitarityError(f"unitarity defect {defect:.3e} exceeds {UNITARITY_TOL:.0e}")

    def __getitem__(self, k):
        return self.matrices[k]

    def apply(self, psi) -> np.ndarray:
        """States ``U(t_k) psi`` for every grid point, shape ``(K, 2)``."""
        return self.matrices @ np.asarray(psi, dtype=complex)


@dataclass(frozen=True, eq=False)
class CoefficientTrace:
    grid: TimeGrid
    c: np.ndarray  # (K, 2)

    def level(self, n: int) -> np.ndarray:
        return self.c[:, n - 1]


@dataclass(frozen=True, eq=False)
class ErrorNorms:
    direct: np.ndarray  # ||U_d psi - U_a psi||
    reconstructed: np.ndarray  # sqrt(sum |c_n(t) - c_n(0)|^2)


def same_grid(a: TimeGrid, b: TimeGrid) -> None:
    if a != b:
        raise GridMismatch(f"grids differ: {a} vs {b}")


def unit_state(psi, tol: float = 1e-12) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise SpecError(f"state must have shape (2,), got {psi.shape}")
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise SpecError(f"state is not normalised (norm {np.linalg.norm(psi):.17g})")
    return psi


def default_steps(
    spec: HamiltonianSpec,
    t_final: float,
    per_unit: float = DEFAULT_STEPS_PER_UNIT,
    cap: int = DEFAULT_STEP_CAP,
) -> int:
    """Even step count proportional to the fastest frequency times ``t_final``."""
    scale = 0.0
    if isinstance(spec.family, Rotating):
        w0, w = spec.family.omega0, spec.family.omega
        scale = max(w0, math.hypot(w0, w))
    probe = np.linspace(0.0, t_final, 257)
    if spec.scaled:
        probe = probe[probe <= spec.T]
    scale = max(scale, float(np.max(spectral_norm(hamiltonian_at_time(spec, probe)))) / spec.hbar, 1e-12)
    steps = math.ceil(per_unit * scale * t_final)
    steps += steps % 2
    return int(min(max(steps, 2), cap - cap % 2))


def propagate_deo(spec: HamiltonianSpec, grid: TimeGrid) -> UnitaryTrace:
    """Exponential midpoint rule ``U_{k+1} = exp(-i h H(t_k + h/2) / hbar) U_k``.

    Each step is an exact 2x2 exponential, so the trace is unitary up to
    rounding; the global error is second order in ``h``.
    """
    h = grid.dt
    mid = grid.points[:-1] + 0.5 * h
    if spec.scaled:
        # mid never exceeds t_final; rounding can push it a hair past T
        mid = np.minimum(mid, spec.T)
    steps = expm_hermitian(hamiltonian_at_time(spec, mid), h / spec.hbar)
    return UnitaryTrace(grid, cumulative_left_product(steps))


def build_aeo(frame: EigenFrame) -> UnitaryTrace:
    """``U_a(t) = sum_n exp(-i/hbar int_0^t E_n) |n_t><n_0|``."""
    phases = np.exp(-1j * frame.dynphase / frame.hbar)
    v0 = frame.vectors[0]
    ua = (frame.vectors * phases[:, None, :]) @ dagger(v0)
    ua[0] = IDENTITY
    return UnitaryTrace(frame.grid, ua, frame=frame)


def coefficients(ud: UnitaryTrace, frame: EigenFrame, psi0) -> CoefficientTrace:
    """``c_n(t) = exp(+i/hbar int_0^t E_n) <n_t| U_d(t) |psi0>``."""
    same_grid(ud.grid, frame.grid)
    psi0 = unit_state(psi0)
    states = ud.apply(psi0)
    proj = np.einsum("kin,ki->kn", np.conj(frame.vectors), states)
    return CoefficientTrace(ud.grid, proj * np.exp(1j * frame.dynphase / frame.hbar))


def error_norm(ud: UnitaryTrace, ua: UnitaryTrace, psi0, frame: EigenFrame | None = None) -> ErrorNorms:
    """Distance between the exact and adiabatic states, by two independent routes.

    ``direct`` is the vector norm of ``(U_d - U_a) psi0``; ``reconstructed`` is
    the coefficient form ``sqrt(sum_n |c_n(t) - c_n(0)|^2)``. The frame
    defaults to the one the adiabatic trace was built from.
    """
    same_grid(ud.grid, ua.grid)
    psi0 = unit_state(psi0)
    frame = frame if frame is not None else ua.frame
    if frame is None:
        raise SpecError("error_norm needs the eigenframe of the adiabatic trace")
    direct = np.linalg.norm(ud.apply(psi0) - ua.apply(psi0), axis=1)
    c = coefficients(ud, frame, psi0).c
    recon = np.sqrt(np.sum(np.abs(c - c[0]) ** 2, axis=1))
    return ErrorNorms(direct, recon)


ObservableLike = Union[np.ndarray, Callable[[float], np.ndarray]]


def expectation(ud: UnitaryTrace, psi0, b: ObservableLike) -> np.ndarray:
    """``<psi0| U_d^dagger(t) B(t) U_d(t) |psi0>`` on the grid.

    ``b`` may be a constant 2x2 matrix, a stack of one matrix per grid point,
    or a callable ``t -> 2x2``.
    """
    psi0 = unit_state(psi0)
    t = ud.grid.points
    if callable(b):
        bm = np.stack([np.asarray(b(tk), dtype=complex) for tk in t])
    else:
        bm = np.asarray(b, dtype=complex)
        bm = np.broadcast_to(bm, (len(t), 2, 2)) if bm.shape == (2, 2) else bm
    if bm.shape != (len(t), 2, 2):
        raise SpecError(f"observable shape {bm.shape} does not match the grid")
    scale = np.maximum(1.0, np.max(np.abs(bm), axis=(-1, -2)))
    if np.any(hermitian_defect(bm) > 1e-12 * scale):
        raise NonHermitianObservable("observable is not Hermitian at some grid point")
    states = ud.apply(psi0)
    vals = np.einsum("ki,kij,kj->k", np.conj(states), bm, states)
    if np.max(np.abs(vals.imag)) > 1e-10:
        raise NonHermitianObservable(f"imaginary residual {np.max(np.abs(vals.imag)):.3e}")
    return vals.real
