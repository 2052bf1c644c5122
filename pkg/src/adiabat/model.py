"""Time-dependent 2x2 Hermitian Hamiltonians and their parameter derivatives.

A :class:`HamiltonianSpec` couples a matrix *family* with a parameterisation:

* unscaled: the family is evaluated directly at the time ``t``;
* scaled: the family is evaluated at ``s = t / T`` with ``s`` in ``[0, 1]``.

Three families are provided. :class:`Rotating` is the rotating transverse
field ``-hbar w0 (X cos 2wt + Y sin 2wt)``, :class:`LinearInterp` the straight
line ``(1 - x) h0 + x h1`` and :class:`TabulatedScaled` a cubic spline through
sampled matrices on ``[0, 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np
from scipy.interpolate import CubicSpline

from ._linalg import hermitian_defect, symmetrize
from .errors import DomainError, SpecError

HERMITIAN_RTOL = 1e-12
DOMAIN_SLACK = 1e-12


def as_matrix(value, name: str = "matrix", hermitian: bool = False) -> np.ndarray:
    """Coerce ``value`` to a finite complex 2x2 array, optionally checking Hermiticity."""
    try:
        m = np.asarray(value, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"{name}: not a numeric 2x2 matrix") from exc
    if m.shape != (2, 2):
        raise SpecError(f"{name}: expected shape (2, 2), got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise SpecError(f"{name}: entries must be finite")
    if hermitian and hermitian_defect(m) > HERMITIAN_RTOL * max(1.0, np.max(np.abs(m))):
        raise SpecError(f"{name}: matrix is not Hermitian")
    return m


@dataclass(frozen=True)
class Rotating:
    omega0: float
    omega: float

    def __post_init__(self):
        for name in ("omega0", "omega"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise SpecError(f"Rotating.{name} must be positive, got {v!r}")

    def matrix(self, x, hbar: float, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        # d^k/dx^k of e^{+-2iwx} is (+-2iw)^k e^{+-2iwx}
        up = np.exp(2j * self.omega * x) * (2j * self.omega) ** order
        down = np.exp(-2j * self.omega * x) * (-2j * self.omega) ** order
        out = np.zeros(x.shape + (2, 2), dtype=complex)
        out[..., 0, 1] = -hbar * self.omega0 * down
        out[..., 1, 0] = -hbar * self.omega0 * up
        return out


@dataclass(frozen=True, eq=False)
class LinearInterp:
    h0: np.ndarray
    h1: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "h0", as_matrix(self.h0, "LinearInterp.h0", hermitian=True))
        object.__setattr__(self, "h1", as_matrix(self.h1, "LinearInterp.h1", hermitian=True))

    def matrix(self, x, hbar: float, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)[..., None, None]
        if order == 0:
            return (1.0 - x) * self.h0 + x * self.h1
        if order == 1:
            return np.broadcast_to(self.h1 - self.h0, x.shape[:-2] + (2, 2)).copy()
        return np.zeros(x.shape[:-2] + (2, 2), dtype=complex)


@dataclass(frozen=True, eq=False)
class TabulatedScaled:
    s_grid: np.ndarray
    h_samples: np.ndarray
    _re: CubicSpline = field(init=False, repr=False)
    _im: CubicSpline = field(init=False, repr=False)

    def __post_init__(self):
        s = np.asarray(self.s_grid, dtype=float)
        if s.ndim != 1 or s.size < 5:
            raise SpecError("TabulatedScaled.s_grid needs at least 5 samples")
        if not np.all(np.isfinite(s)) or np.any(np.diff(s) <= 0):
            raise SpecError("TabulatedScaled.s_grid must be finite and strictly ascending")
        if abs(s[0]) > DOMAIN_SLACK or abs(s[-1] - 1.0) > DOMAIN_SLACK:
            raise SpecError("TabulatedScaled.s_grid must start at 0 and end at 1")
        h = np.asarray(self.h_samples, dtype=complex)
        if h.shape != (s.size, 2, 2):
            raise SpecError(f"TabulatedScaled.h_samples: expected shape ({s.size}, 2, 2), got {h.shape}")
        for i, m in enumerate(h):
            as_matrix(m, f"TabulatedScaled.h_samples[{i}]", hermitian=True)
        object.__setattr__(self, "s_grid", s)
        object.__setattr__(self, "h_samples", h)
        object.__setattr__(self, "_re", CubicSpline(s, h.real, axis=0))
        object.__setattr__(self, "_im", CubicSpline(s, h.imag, axis=0))

    def matrix(self, x, hbar: float, order: int = 0) -> np.ndarray:
        if order != 0:
            raise SpecError("TabulatedScaled derivatives are taken by finite differences")
        x = np.asarray(x, dtype=float)
        return symmetrize(self._re(x) + 1j * self._im(x))


Family = Union[Rotating, LinearInterp, TabulatedScaled]


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    """A Hamiltonian family plus its parameterisation.

    ``T is None`` selects the unscaled form (parameter = time). Otherwise the
    parameter is ``s = t / T``.
    """

    family: Family
    hbar: float = 1.0
    T: float | None = None
    fd_step: float = 1e-5

    def __post_init__(self):
        if not isinstance(self.family, (Rotating, LinearInterp, TabulatedScaled)):
            raise SpecError(f"unknown Hamiltonian family {type(self.family).__name__}")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise SpecError(f"hbar must be positive, got {self.hbar!r}")
        if self.T is not None and not (np.isfinite(self.T) and self.T > 0):
            raise SpecError(f"T must be positive, got {self.T!r}")
        if isinstance(self.family, TabulatedScaled) and self.T is None:
            raise SpecError("TabulatedScaled requires the scaled form (set T)")
        if not (0 < self.fd_step < 0.1):
            raise SpecError(f"fd_step must lie in (0, 0.1), got {self.fd_step!r}")

    @property
    def scaled(self) -> bool:
        return self.T is not None

    def with_T(self, T: float) -> "HamiltonianSpec":
        return replace(self, T=float(T))

    def parameter(self, t):
        t = np.asarray(t, dtype=float)
        return t / self.T if self.scaled else t


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t_k = k * t_final / steps`` for ``k = 0..steps``."""

    t_final: float
    steps: int

    def __post_init__(self):
        if not (np.isfinite(self.t_final) and self.t_final > 0):
            raise SpecError(f"t_final must be positive, got {self.t_final!r}")
        if int(self.steps) != self.steps or self.steps < 2 or self.steps % 2:
            raise SpecError(f"steps must be an even integer >= 2, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))

    @property
    def dt(self) -> float:
        return self.t_final / self.steps

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.steps + 1) * self.t_final / self.steps

    def __len__(self) -> int:
        return self.steps + 1


def _check_domain(spec: HamiltonianSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("parameter must be finite")
    lo = np.min(x) if x.size else 0.0
    hi = np.max(x) if x.size else 0.0
    if lo < -DOMAIN_SLACK:
        raise DomainError(f"parameter {lo!r} is negative")
    if spec.scaled and hi > 1.0 + DOMAIN_SLACK:
        raise DomainError(f"s = {hi!r} lies outside [0, 1]")
    return np.clip(x, 0.0, 1.0) if spec.scaled else np.maximum(x, 0.0)


def hamiltonian_at(spec: HamiltonianSpec, x) -> np.ndarray:
    """H at parameter ``x`` (``s`` for scaled specs, ``t`` otherwise). Vectorised over ``x``."""
    x = _check_domain(spec, x)
    if spec.scaled and isinstance(spec.family, Rotating):
        return spec.family.matrix(x * spec.T, spec.hbar)
    return spec.family.matrix(x, spec.hbar)


def _fd_points(x: np.ndarray, h: float):
    lo = x - h < 0.0
    hi = x + h > 1.0
    return lo, hi


def _tabulated_derivative(spec: HamiltonianSpec, s: np.ndarray, order: int) -> np.ndarray:
    h = spec.fd_step
    f = lambda v: spec.family.matrix(v, spec.hbar)  # noqa: E731
    lo, hi = _fd_points(s, h)
    mid = ~(lo | hi)
    out = np.empty(s.shape + (2, 2), dtype=complex)
    if order == 1:
        out[mid] = (f(s[mid] + h) - f(s[mid] - h)) / (2 * h)
        # one-sided second-order stencils at the ends
        out[lo] = (-3 * f(s[lo]) + 4 * f(s[lo] + h) - f(s[lo] + 2 * h)) / (2 * h)
        out[hi] = (3 * f(s[hi]) - 4 * f(s[hi] - h) + f(s[hi] - 2 * h)) / (2 * h)
    else:
        out[mid] = (f(s[mid] + h) - 2 * f(s[mid]) + f(s[mid] - h)) / h**2
        out[lo] = (2 * f(s[lo]) - 5 * f(s[lo] + h) + 4 * f(s[lo] + 2 * h) - f(s[lo] + 3 * h)) / h**2
        out[hi] = (2 * f(s[hi]) - 5 * f(s[hi] - h) + 4 * f(s[hi] - 2 * h) - f(s[hi] - 3 * h)) / h**2
    return symmetrize(out)


def _scaled_derivative(spec: HamiltonianSpec, s, order: int) -> np.ndarray:
    if not spec.scaled:
        raise SpecError("s-derivatives need a scaled spec (T is not set)")
    s = _check_domain(spec, s)
    fam = spec.family
    if isinstance(fam, TabulatedScaled):
        return _tabulated_derivative(spec, np.atleast_1d(s), order).reshape(s.shape + (2, 2))
    if isinstance(fam, Rotating):
        return spec.T**order * fam.matrix(s * spec.T, spec.hbar, order)
    return fam.matrix(s, spec.hbar, order)


def dh_ds(spec: HamiltonianSpec, s) -> np.ndarray:
    return _scaled_derivative(spec, s, 1)


def d2h_ds2(spec: HamiltonianSpec, s) -> np.ndarray:
    return _scaled_derivative(spec, s, 2)


def hamiltonian_at_time(spec: HamiltonianSpec, t) -> np.ndarray:
    return hamiltonian_at(spec, spec.parameter(t))


def dh_dt(spec: HamiltonianSpec, t) -> np.ndarray:
    """Time derivative of ``H_t``; for scaled specs this is ``H'(t/T) / T``."""
    if spec.scaled:
        return dh_ds(spec, spec.parameter(t)) / spec.T
    t = _check_domain(spec, t)
    return spec.family.matrix(t, spec.hbar, 1)


def spectral_norm(m) -> np.ndarray | float:
    """Largest singular value of 2x2 matrices, in closed form.

    The singular values solve ``sigma^2 = (F +- sqrt(F^2 - 4|det|^2)) / 2`` (the
    eigenvalues of ``A^dagger A``, ``F`` the squared Frobenius norm). That
    form cancels catastrophically when ``sigma_1 ~ sigma_2``, so we evaluate
    ``sigma_1 = (sqrt(F + 2|det|) + sqrt(F - 2|det|)) / 2`` after rotating the
    global phase so that ``det`` is real positive; then both radicands are
    sums of squares.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape[-2:] != (2, 2):
        raise SpecError(f"expected trailing shape (2, 2), got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise SpecError("spectral_norm: non-finite entries")
    det = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    rot = np.exp(-0.5j * np.angle(det))[..., None, None] * m
    a, b, c, d = rot[..., 0, 0], rot[..., 0, 1], rot[..., 1, 0], rot[..., 1, 1]
    total = np.sqrt(np.abs(a + np.conj(d)) ** 2 + np.abs(b - np.conj(c)) ** 2)
    diff = np.sqrt(np.abs(a - np.conj(d)) ** 2 + np.abs(b + np.conj(c)) ** 2)
    out = 0.5 * (total + diff)
    return float(out) if out.ndim == 0 else out
