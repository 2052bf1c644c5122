"""Vectorised closed-form kernels for stacks of 2x2 complex matrices.

Every function accepts arrays of shape ``(..., 2, 2)`` so that a whole time
grid can be processed without a Python loop.
"""

from __future__ import annotations

import math

import numpy as np

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermitian_defect(m: np.ndarray) -> np.ndarray:
    """Largest entry of ``|A - A^dagger|`` per matrix."""
    return np.max(np.abs(m - dagger(m)), axis=(-1, -2))


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + dagger(m))


def pauli_coefficients(h: np.ndarray):
    """Split Hermitian ``h = a0 I + ax X + ay Y + az Z`` into real coefficients."""
    h00 = h[..., 0, 0]
    h11 = h[..., 1, 1]
    h01 = h[..., 0, 1]
    h10 = h[..., 1, 0]
    a0 = 0.5 * (h00 + h11).real
    az = 0.5 * (h00 - h11).real
    ax = 0.5 * (h10 + h01).real
    ay = 0.5 * (h10 - h01).imag
    return a0, ax, ay, az


def from_pauli(a0, ax, ay, az) -> np.ndarray:
    a0, ax, ay, az = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (a0, ax, ay, az)))
    out = np.empty(a0.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = a0 + az
    out[..., 1, 1] = a0 - az
    out[..., 0, 1] = ax - 1j * ay
    out[..., 1, 0] = ax + 1j * ay
    return out


def expm_hermitian(h: np.ndarray, theta) -> np.ndarray:
    """``exp(-i * theta * h)`` for Hermitian 2x2 ``h``, exactly unitary.

    Uses ``exp(-i t (a0 + a.sigma)) = e^{-i t a0} (cos(t|a|) I - i sin(t|a|) a.sigma/|a|)``.
    """
    a0, ax, ay, az = pauli_coefficients(h)
    theta = np.asarray(theta, dtype=float)
    r = np.sqrt(ax * ax + ay * ay + az * az)
    c = np.cos(theta * r)
    # sin(theta r)/r without the 0/0 at r = 0
    s = theta * np.sinc(theta * r / np.pi)
    phase = np.exp(-1j * theta * a0)
    out = np.empty(np.broadcast(a0, theta).shape + (2, 2), dtype=complex)
    out[..., 0, 0] = phase * (c - 1j * s * az)
    out[..., 1, 1] = phase * (c + 1j * s * az)
    out[..., 0, 1] = phase * (-1j * s * (ax - 1j * ay))
    out[..., 1, 0] = phase * (-1j * s * (ax + 1j * ay))
    return out


def cumulative_left_product(steps: np.ndarray) -> np.ndarray:
    """Prefix products ``U_0 = I``, ``U_{k+1} = S_k U_k`` of a stack of 2x2 steps.

    The recurrence is evaluated in blocks of about ``sqrt(N)`` so that only
    ``O(sqrt(N))`` Python iterations are needed; each iteration is a batched
    matmul. Result has shape ``(N + 1, 2, 2)``.
    """
    n = steps.shape[0]
    out = np.empty((n + 1, 2, 2), dtype=complex)
    out[0] = IDENTITY
    if n == 0:
        return out
    block = max(1, math.isqrt(n))
    nblocks = -(-n // block)
    padded = np.broadcast_to(IDENTITY, (nblocks * block, 2, 2)).copy()
    padded[:n] = steps
    padded = padded.reshape(nblocks, block, 2, 2)

    inner = np.empty_like(padded)
    inner[:, 0] = padded[:, 0]
    for j in range(1, block):
        inner[:, j] = padded[:, j] @ inner[:, j - 1]

    offsets = np.empty((nblocks, 2, 2), dtype=complex)
    offsets[0] = IDENTITY
    for b in range(1, nblocks):
        offsets[b] = inner[b - 1, -1] @ offsets[b - 1]

    full = inner @ offsets[:, None]
    out[1:] = full.reshape(-1, 2, 2)[:n]
    return out


def unitarity_defect(u: np.ndarray) -> np.ndarray:
    """Largest entry of ``|U^dagger U - I|`` per matrix."""
    return np.max(np.abs(dagger(u) @ u - IDENTITY), axis=(-1, -2))
