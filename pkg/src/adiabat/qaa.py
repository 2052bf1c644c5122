"""Conditions and bounds for the two kinds of adiabatic approximation.

First kind: the overlaps ``<m_0| U_a^dagger U_d |m_0>`` stay close to 1,
relative phases included. Second kind: only their moduli stay close to 1,
i.e. populations of instantaneous eigenstates are preserved.

Functions taking ``k_end`` return the value at that grid index (default: last
point); the ``*_trace`` variants return the whole time series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from ._linalg import IDENTITY, dagger, cumulative_left_product, expm_hermitian, hermitian_defect
from .errors import AdiabatError, SameLevel, SpecError
from .evolve import CoefficientTrace, UnitaryTrace, same_grid
from .spectral import EigenFrame

DOMINANCE_SLACK = 1e-6


def _level(m: int) -> int:
    if m not in (1, 2):
        raise SpecError(f"level must be 1 or 2, got {m!r}")
    return m - 1


def _end(frame_or_trace, k_end):
    return len(frame_or_trace.grid) - 1 if k_end is None else int(k_end)


def interaction_unitary(ud: UnitaryTrace, ua: UnitaryTrace) -> np.ndarray:
    """``U_a^dagger U_d`` in the basis of initial eigenstates, shape ``(K, 2, 2)``."""
    same_grid(ud.grid, ua.grid)
    if ua.frame is None:
        raise SpecError("adiabatic trace carries no eigenframe")
    v0 = ua.frame.vectors[0]
    ut = dagger(ua.matrices) @ ud.matrices
    out = dagger(v0) @ ut @ v0
    if np.array_equal(ut[0], IDENTITY):
        out[0] = IDENTITY  # V_0 is unitary; skip its rounding at t = 0
    return out


def first_kind_overlap(ud: UnitaryTrace, ua: UnitaryTrace, m: int) -> np.ndarray:
    i = _level(m)
    return interaction_unitary(ud, ua)[:, i, i]


def second_kind_magnitude(ud: UnitaryTrace, frame: EigenFrame, m: int) -> np.ndarray:
    """``|<m_t| U_d(t) |m_0>|`` on the grid."""
    same_grid(ud.grid, frame.grid)
    i = _level(m)
    evolved = ud.matrices @ frame.vectors[0, :, i]
    return np.abs(np.einsum("ki,ki->k", np.conj(frame.vectors[:, :, i]), evolved))


def _ratio(frame: EigenFrame) -> np.ndarray:
    # hbar <1|d/dt|2> / (E1 - E2); E1 is the upper level so the gap is E1 - E2
    return frame.hbar * frame.coupling12 / (frame.energies[:, 0] - frame.energies[:, 1])


def bar_bounds_trace(frame: EigenFrame):
    """Running upper-bound terms ``(A, B, C)`` for ``|c_1(t) - c_1(0)|`` at every grid point.

    Suprema over ``[0, t]`` are running grid maxima and the time derivative is a
    second-order finite difference (one-sided at the ends).
    """
    t = frame.times
    g = _ratio(frame)
    bar_a = np.abs(g[0]) + np.abs(g)
    dg = np.gradient(g, frame.grid.dt, edge_order=2)
    bar_b = t * np.maximum.accumulate(np.abs(dg))
    bar_c = t * np.maximum.accumulate(np.abs(frame.coupling21 * g))
    return bar_a, bar_b, bar_c


def bar_bounds(frame: EigenFrame, k_end: int | None = None):
    k = _end(frame, k_end)
    a, b, c = bar_bounds_trace(frame)
    return float(a[k]), float(b[k]), float(c[k])


def _xx_integrand(frame: EigenFrame, m: int, n: int) -> np.ndarray:
    if m == n:
        raise SameLevel("xx integral needs two different levels")
    i, j = _level(m), _level(n)
    coupling = frame.coupling12 if (i, j) == (0, 1) else frame.coupling21
    dphi = (frame.dynphase[:, i] - frame.dynphase[:, j]) / frame.hbar
    return coupling * np.exp(1j * dphi)


def xx_integral_trace(frame: EigenFrame, m: int, n: int) -> np.ndarray:
    """``int_0^t <m|d/dt'|n> exp(i/hbar int_0^t' (E_m - E_n)) dt'`` by the trapezoid rule."""
    return cumulative_trapezoid(_xx_integrand(frame, m, n), frame.times, initial=0.0)


def xx_integral(frame: EigenFrame, m: int, n: int, k_end: int | None = None) -> complex:
    return complex(xx_integral_trace(frame, m, n)[_end(frame, k_end)])


def simplified_ratio_trace(frame: EigenFrame) -> np.ndarray:
    return np.maximum.accumulate(np.abs(frame.hbar * frame.coupling12 / frame.gap))


def simplified_ratio(frame: EigenFrame, k_end: int | None = None) -> float:
    return float(simplified_ratio_trace(frame)[_end(frame, k_end)])


def interaction_hamiltonian_trace(frame: EigenFrame) -> np.ndarray:
    """Generator of ``U_a^dagger U_d`` in the ``{|1_0>, |2_0>}`` basis, every grid point."""
    h = np.zeros((len(frame.grid), 2, 2), dtype=complex)
    h[:, 0, 1] = -1j * frame.hbar * _xx_integrand(frame, 1, 2)
    h[:, 1, 0] = -1j * frame.hbar * _xx_integrand(frame, 2, 1)
    defect = np.max(hermitian_defect(h))
    if defect > 1e-10:
        raise AdiabatError(f"interaction Hamiltonian not Hermitian (defect {defect:.3e})")
    return h


def interaction_hamiltonian(frame: EigenFrame, k: int) -> np.ndarray:
    return interaction_hamiltonian_trace(frame)[k]


def dyson_first_order_trace(frame: EigenFrame) -> np.ndarray:
    """``I + (1/(i hbar)) int_0^t H_tilde dt'`` at every grid point."""
    integral = cumulative_trapezoid(interaction_hamiltonian_trace(frame), frame.times, axis=0, initial=0.0)
    return IDENTITY + integral / (1j * frame.hbar)


def dyson_first_order(frame: EigenFrame, k_end: int | None = None) -> np.ndarray:
    return dyson_first_order_trace(frame)[_end(frame, k_end)]


def propagate_interaction(frame: EigenFrame) -> np.ndarray:
    """Propagate the interaction Hamiltonian with the exponential midpoint rule.

    Uses step ``2h`` with odd grid points as midpoints; returns the unitaries at
    the even grid points, shape ``(steps // 2 + 1, 2, 2)``.
    """
    h_tilde = interaction_hamiltonian_trace(frame)[1::2]
    steps = expm_hermitian(h_tilde, 2 * frame.grid.dt / frame.hbar)
    return cumulative_left_product(steps)


@dataclass(frozen=True, eq=False)
class DiagnosticsReport:
    times: np.ndarray
    first_kind_overlap: np.ndarray  # (K, 2) complex
    second_kind_mag: np.ndarray  # (K, 2)
    bar_a: np.ndarray
    bar_b: np.ndarray
    bar_c: np.ndarray
    xx_integral: np.ndarray  # (K,) complex, levels (1, 2)
    simplified_ratio: np.ndarray

    @property
    def bar_sum(self) -> np.ndarray:
        return self.bar_a + self.bar_b + self.bar_c

    def dominance_violation(self, coeffs: CoefficientTrace, slack: float = DOMINANCE_SLACK) -> float:
        """Largest excess of ``|c_1(t) - c_1(0)|`` over the bound; ``<= 0`` when it holds."""
        c1 = coeffs.level(1)
        return float(np.max(np.abs(c1 - c1[0]) - self.bar_sum - slack))


def diagnose(ud: UnitaryTrace, ua: UnitaryTrace) -> DiagnosticsReport:
    frame = ua.frame
    if frame is None:
        raise SpecError("adiabatic trace carries no eigenframe")
    same_grid(ud.grid, frame.grid)
    ut = interaction_unitary(ud, ua)
    overlap = np.stack([ut[:, 0, 0], ut[:, 1, 1]], axis=1)
    mag = np.stack([second_kind_magnitude(ud, frame, 1), second_kind_magnitude(ud, frame, 2)], axis=1)
    gap = np.max(np.abs(mag - np.abs(overlap)))
    if gap > 1e-10:
        raise AdiabatError(f"second-kind magnitude disagrees with |overlap| by {gap:.3e}")
    a, b, c = bar_bounds_trace(frame)
    return DiagnosticsReport(
        times=frame.times,
        first_kind_overlap=overlap,
        second_kind_mag=mag,
        bar_a=a,
        bar_b=b,
        bar_c=c,
        xx_integral=xx_integral_trace(frame, 1, 2),
        simplified_ratio=simplified_ratio_trace(frame),
    )
