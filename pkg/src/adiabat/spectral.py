"""Instantaneous eigenframes in the parallel-transport gauge.

Level 1 is always the upper eigenvalue. Eigenvectors are stored column-wise,
``vectors[k, :, m]`` being level ``m + 1`` at grid point ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from ._linalg import pauli_coefficients
from .errors import DegenerateSpectrum, SpecError
from .model import HamiltonianSpec, TimeGrid, dh_dt, hamiltonian_at_time

GAP_MIN = 1e-8
# tie tolerance when choosing the component that carries the real positive phase
_TIE = 1e-12
# smallest acceptable overlap between neighbouring eigenvectors
_MIN_OVERLAP = 0.5


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column vector real positive."""
    mag = np.abs(v)
    first = mag[..., 0, :] >= mag[..., 1, :] - _TIE
    pivot = np.where(first, v[..., 0, :], v[..., 1, :])
    out = v * (np.conj(pivot) / np.abs(pivot))[..., None, :]
    # the pivot itself is set exactly real; the product leaves ~1e-17 imaginary residue
    out[..., 0, :] = np.where(first, np.abs(pivot), out[..., 0, :])
    out[..., 1, :] = np.where(first, out[..., 1, :], np.abs(pivot))
    return out


def _eig2_stack(h: np.ndarray):
    a0, ax, ay, az = pauli_coefficients(h)
    r = np.sqrt(ax * ax + ay * ay + az * az)
    energies = np.stack([a0 + r, a0 - r], axis=-1)
    off_lo = ax + 1j * ay
    # two algebraically equivalent eigenvector forms; pick the better-conditioned one
    pos = az >= 0
    up = np.where(pos[..., None], np.stack([az + r, off_lo], -1), np.stack([np.conj(off_lo), r - az], -1))
    dn = np.where(pos[..., None], np.stack([np.conj(off_lo), -(az + r)], -1), np.stack([r - az, -off_lo], -1))
    vecs = np.stack([up, dn], axis=-1).astype(complex)
    # r = 0 yields NaN vectors; callers reject those through the gap floor
    with np.errstate(invalid="ignore", divide="ignore"):
        vecs = _fix_phase(vecs / np.linalg.norm(vecs, axis=-2, keepdims=True))
    return energies, vecs, 2 * r


def eig2(h, gap_min: float = GAP_MIN):
    """Closed-form eigendecomposition of one Hermitian 2x2 matrix.

    Returns ``(lam_plus, lam_minus, v_plus, v_minus)``. Each eigenvector has
    unit norm and its largest component real positive (the first one on ties).
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (2, 2):
        raise SpecError(f"eig2 expects a 2x2 matrix, got shape {h.shape}")
    energies, vecs, gap = _eig2_stack(h)
    if gap < gap_min:
        raise DegenerateSpectrum(f"gap {gap:.3e} below gap_min {gap_min:.3e}")
    return float(energies[0]), float(energies[1]), vecs[:, 0].copy(), vecs[:, 1].copy()


@dataclass(frozen=True, eq=False)
class EigenFrame:
    spec: HamiltonianSpec
    grid: TimeGrid
    energies: np.ndarray  # (K, 2), column 0 is the upper level
    vectors: np.ndarray  # (K, 2, 2), columns are levels
    gap: np.ndarray  # (K,)
    coupling12: np.ndarray  # (K,) <1|d/dt|2>
    dynphase: np.ndarray  # (K, 2) integral of the eigenvalue from 0 to t_k
    gap_min: float = GAP_MIN

    @property
    def times(self) -> np.ndarray:
        return self.grid.points

    @property
    def hbar(self) -> float:
        return self.spec.hbar

    @property
    def coupling21(self) -> np.ndarray:
        # <2|d/dt|1> = -conj(<1|d/dt|2>) for orthonormal frames
        return -np.conj(self.coupling12)

    def vector(self, level: int, k: int) -> np.ndarray:
        return self.vectors[k, :, level - 1]


def build_frame(spec: HamiltonianSpec, grid: TimeGrid, gap_min: float = GAP_MIN) -> EigenFrame:
    """Eigendecompose ``H_t`` on the grid and fix phases by discrete parallel transport.

    Neighbouring eigenvectors are re-phased so that ``<v_m(t_k)|v_m(t_k+1)>`` is
    real and positive. Couplings use ``<1|dH/dt|2> / (E2 - E1)``.
    """
    t = grid.points
    energies, raw, gap = _eig2_stack(hamiltonian_at_time(spec, t))
    bad = np.flatnonzero(gap < gap_min)
    if bad.size:
        k = int(bad[0])
        raise DegenerateSpectrum(
            f"gap {gap[k]:.3e} below gap_min {gap_min:.3e} at t = {t[k]:.17g}", time=float(t[k])
        )

    overlap = np.sum(np.conj(raw[:-1]) * raw[1:], axis=1)
    if np.min(np.abs(overlap)) < _MIN_OVERLAP:
        k = int(np.argmin(np.min(np.abs(overlap), axis=1)))
        raise SpecError(f"grid too coarse to transport eigenvectors near t = {t[k]:.6g}")
    angle = np.concatenate([np.zeros((1, 2)), np.cumsum(np.angle(overlap), axis=0)])
    vectors = raw * np.exp(-1j * angle)[:, None, :]

    dynphase = cumulative_simpson(energies, x=t, axis=0, initial=0.0)
    dh = dh_dt(spec, t)
    v1, v2 = vectors[:, :, 0], vectors[:, :, 1]
    hf = np.einsum("ki,kij,kj->k", np.conj(v1), dh, v2)
    coupling12 = hf / (energies[:, 1] - energies[:, 0])

    return EigenFrame(
        spec=spec,
        grid=grid,
        energies=energies,
        vectors=vectors,
        gap=gap,
        coupling12=coupling12,
        dynphase=dynphase,
        gap_min=gap_min,
    )


def fd_coupling12(frame: EigenFrame) -> np.ndarray:
    """``<1|d/dt|2>`` by second-order differences of the transported eigenvectors."""
    dv2 = np.gradient(frame.vectors[:, :, 1], frame.grid.dt, axis=0, edge_order=2)
    return np.sum(np.conj(frame.vectors[:, :, 0]) * dv2, axis=1)


def hellmann_feynman_residual(frame: EigenFrame, spec: HamiltonianSpec | None = None) -> float:
    """Max over the grid of ``|FD coupling - Hellmann-Feynman coupling|``."""
    if spec is not None and spec is not frame.spec:
        frame = build_frame(spec, frame.grid, frame.gap_min)
    return float(np.max(np.abs(fd_coupling12(frame) - frame.coupling12)))
