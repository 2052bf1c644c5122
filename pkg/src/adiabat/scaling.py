"""Error versus total time for scaled Hamiltonians ``H(t / T)``.

For ``s = t / T`` the adiabatic error obeys ``||(U_d - U_a) psi|| <= C / T``.
Two constants are computed on a dense ``s`` grid:

``error_coeff``
    ``sqrt(2) * max_s [2|f| + |f'| + |<2|d/ds|1> f|]`` with
    ``f(s) = hbar <1|d/ds|2> / (i (E1 - E2))``.
``bound_coeff``
    ``sqrt(2) hbar * max_s [2||H'||/D^2 + 7||H'||^2/D^3 + ||H''||/D^2]``, which
    only needs norms of the Hamiltonian derivatives and the gap ``D``.

``bound_coeff >= error_coeff`` pointwise; ``t_min = bound_coeff / delta`` is
the running time that guarantees an error of at most ``delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import AdiabatError, InvalidDelta, SpecError
from .evolve import build_aeo, error_norm, propagate_deo, unit_state
from .model import HamiltonianSpec, TimeGrid, d2h_ds2, dh_ds, hamiltonian_at, spectral_norm
from .spectral import GAP_MIN, EigenFrame, build_frame

DEFAULT_S_POINTS = 2001
SWEEP_SLACK = 1e-6
DEFAULT_SWEEP_STEPS_PER_UNIT = 200


def _require_scaled(spec: HamiltonianSpec) -> None:
    if not spec.scaled:
        raise SpecError("a scaled spec (with T) is required")


def f_of_s(frame: EigenFrame, k: int | None = None):
    """``f(s) = hbar <1|d/ds|2> / (i (E1 - E2))`` from a frame of a scaled spec.

    The frame may be built on any time grid ``[0, T]``; ``d/ds = T d/dt``.
    Returns the whole series when ``k`` is None.
    """
    _require_scaled(frame.spec)
    T = frame.spec.T
    f = frame.hbar * T * frame.coupling12 / (1j * (frame.energies[:, 0] - frame.energies[:, 1]))
    return f if k is None else complex(f[k])


@dataclass(frozen=True, eq=False)
class SProfile:
    """Per-``s`` quantities on a dense grid."""

    s: np.ndarray
    gap: np.ndarray
    dh_norm: np.ndarray
    d2h_norm: np.ndarray
    f: np.ndarray
    df: np.ndarray
    coupling21_f: np.ndarray  # <2|d/ds|1> f
    hbar: float

    @property
    def bracket(self) -> np.ndarray:
        """Norm-only bracket, without the ``hbar`` prefactor."""
        d = self.gap
        return 2 * self.dh_norm / d**2 + 7 * self.dh_norm**2 / d**3 + self.d2h_norm / d**2

    @property
    def bracket_f(self) -> np.ndarray:
        return 2 * np.abs(self.f) + np.abs(self.df) + np.abs(self.coupling21_f)


def s_profile(spec: HamiltonianSpec, s_points: int = DEFAULT_S_POINTS, gap_min: float = GAP_MIN) -> SProfile:
    _require_scaled(spec)
    if s_points < 3 or (s_points - 1) % 2:
        raise SpecError(f"s_points must be odd and >= 3, got {s_points}")
    frame = build_frame(spec, TimeGrid(spec.T, s_points - 1), gap_min)
    s = frame.times / spec.T
    s[-1] = 1.0
    f = f_of_s(frame)
    return SProfile(
        s=s,
        gap=frame.gap,
        dh_norm=spectral_norm(dh_ds(spec, s)),
        d2h_norm=spectral_norm(d2h_ds2(spec, s)),
        f=f,
        df=np.gradient(f, s, edge_order=2),
        coupling21_f=spec.T * frame.coupling21 * f,
        hbar=spec.hbar,
    )


@dataclass(frozen=True, eq=False)
class BoundReport:
    delta: float
    t_min: float
    error_coeff: float
    bound_coeff: float
    gap_min: float
    max_dh: float
    max_d2h: float
    profile: SProfile = field(repr=False)


def theorem2_min_time(
    spec: HamiltonianSpec,
    delta: float,
    s_points: int = DEFAULT_S_POINTS,
    gap_min: float = GAP_MIN,
) -> BoundReport:
    """Running time ``T`` above which the adiabatic error is at most ``delta``.

    Maxima over ``s`` are grid maxima, so they can only under-estimate the
    true supremum; keep ``s_points`` dense.
    """
    if not (isinstance(delta, (int, float)) and math.isfinite(delta) and delta > 0):
        raise InvalidDelta(f"delta must be a positive number, got {delta!r}")
    prof = s_profile(spec, s_points, gap_min)
    bound_coeff = math.sqrt(2) * spec.hbar * float(np.max(prof.bracket))
    return BoundReport(
        delta=float(delta),
        t_min=bound_coeff / delta,
        error_coeff=math.sqrt(2) * float(np.max(prof.bracket_f)),
        bound_coeff=bound_coeff,
        gap_min=float(np.min(prof.gap)),
        max_dh=float(np.max(prof.dh_norm)),
        max_d2h=float(np.max(prof.d2h_norm)),
        profile=prof,
    )


def steps_for(spec: HamiltonianSpec, T: float, steps_per_unit: float = DEFAULT_SWEEP_STEPS_PER_UNIT) -> int:
    """Even step count for ``[0, T]`` resolving the fastest eigenvalue at ``steps_per_unit``."""
    probe = np.linspace(0.0, 1.0, 257)
    scale = max(float(np.max(spectral_norm(hamiltonian_at(spec, probe)))) / spec.hbar, 1.0 / T)
    steps = math.ceil(steps_per_unit * scale * T)
    return max(2, steps + steps % 2)


def max_error_at(spec: HamiltonianSpec, psi0, steps: int | None = None, gap_min: float = GAP_MIN) -> float:
    """``max_t ||U_d(t) psi0 - U_a(t) psi0||`` over ``[0, T]``."""
    _require_scaled(spec)
    grid = TimeGrid(spec.T, steps if steps is not None else steps_for(spec, spec.T))
    frame = build_frame(spec, grid, gap_min)
    return float(np.max(error_norm(propagate_deo(spec, grid), build_aeo(frame), psi0).direct))


class BoundViolation(AdiabatError):
    """Simulated error exceeded the proven ``C / T`` bound."""


@dataclass(frozen=True)
class SweepRow:
    T: float
    max_error: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.max_error <= self.bound + SWEEP_SLACK


def sweep_error_vs_T(
    spec: HamiltonianSpec,
    T_list: Iterable[float],
    psi0,
    steps_per_unit: float = DEFAULT_SWEEP_STEPS_PER_UNIT,
    s_points: int = DEFAULT_S_POINTS,
    gap_min: float = GAP_MIN,
    strict: bool = True,
) -> list[SweepRow]:
    """Simulate every ``T`` and compare the max error with ``error_coeff / T``.

    Rows are sorted by ``T``. With ``strict`` a violated bound raises
    :class:`BoundViolation`.
    """
    _require_scaled(spec)
    Ts = sorted(float(T) for T in T_list)
    if not Ts or any(not (math.isfinite(T) and T > 0) for T in Ts):
        raise SpecError(f"every T must be positive, got {Ts}")
    psi0 = unit_state(psi0)
    rows = []
    for T in Ts:
        at_T = spec.with_T(T)
        # the coefficient is T-independent for families defined on s, but not for Rotating
        coeff = theorem2_min_time(at_T, 1.0, s_points, gap_min).error_coeff
        err = max_error_at(at_T, psi0, steps_for(at_T, T, steps_per_unit), gap_min)
        rows.append(SweepRow(T=T, max_error=err, bound=coeff / T))
    if strict:
        bad = [r for r in rows if not r.holds]
        if bad:
            raise BoundViolation(f"error exceeds C/T at T = {[r.T for r in bad]}")
    return rows
