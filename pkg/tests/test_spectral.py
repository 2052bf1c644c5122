import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adiabat import (
    DegenerateSpectrum,
    HamiltonianSpec,
    LinearInterp,
    Rotating,
    TimeGrid,
    build_frame,
    eig2,
    hellmann_feynman_residual,
)
from adiabat._linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, from_pauli
from adiabat.model import hamiltonian_at_time
from adiabat.rotating import RotatingParams, analytic_eigenvectors
from adiabat.spectral import fd_coupling12

STATIC = HamiltonianSpec(LinearInterp(SIGMA_Z, SIGMA_Z))
S2 = np.sqrt(0.5)


def test_eig2_minus_sigma_x():
    lp, lm, vp, vm = eig2(-SIGMA_X)
    assert (lp, lm) == pytest.approx((1.0, -1.0))
    assert np.allclose(vp, [S2, -S2], atol=1e-15)
    assert np.allclose(vm, [S2, S2], atol=1e-15)


def test_eig2_sigma_z():
    lp, lm, vp, vm = eig2(SIGMA_Z)
    assert (lp, lm) == (1.0, -1.0)
    assert np.array_equal(vp, [1, 0]) and np.array_equal(vm, [0, 1])


def test_eig2_degenerate():
    with pytest.raises(DegenerateSpectrum):
        eig2(np.zeros((2, 2)))
    with pytest.raises(DegenerateSpectrum):
        eig2(3.0 * np.eye(2))


coef = st.floats(-10, 10, allow_nan=False)


@settings(max_examples=300)
@given(coef, coef, coef, coef)
def test_eig2_properties(a0, ax, ay, az):
    h = from_pauli(a0, ax, ay, az)
    r = np.sqrt(ax * ax + ay * ay + az * az)
    if 2 * r < 1e-6:
        return
    lp, lm, vp, vm = eig2(h)
    norm_h = max(np.max(np.abs(h)), 1e-300)
    assert lp > lm
    for lam, v in ((lp, vp), (lm, vm)):
        assert abs(np.linalg.norm(v) - 1) <= 1e-12
        assert np.linalg.norm(h @ v - lam * v) <= 1e-12 * max(norm_h, 1.0) * 4
        big = np.argmax(np.abs(v) + np.array([1e-12, 0]))
        assert v[big].imag == 0 and v[big].real > 0
    assert abs(np.vdot(vp, vm)) <= 1e-12
    assert np.allclose(np.linalg.eigvalsh(h)[::-1], (lp, lm), atol=1e-12 * max(norm_h, 1.0))


def test_rotating_coupling_is_constant():
    frame = build_frame(HamiltonianSpec(Rotating(1.0, 0.1)), TimeGrid(20.0, 2000))
    assert np.max(np.abs(frame.coupling12 + 0.1j)) < 1e-14
    assert np.allclose(frame.energies, [1.0, -1.0], atol=1e-14)
    assert np.allclose(frame.gap, 2.0)


def test_static_frame():
    grid = TimeGrid(3.0, 30)
    frame = build_frame(STATIC, grid)
    assert np.max(np.abs(frame.coupling12)) == 0
    assert np.allclose(frame.dynphase[:, 0], grid.points, atol=1e-14)
    assert np.allclose(frame.dynphase[:, 1], -grid.points, atol=1e-14)


def test_rotating_transport_reproduces_analytic_gauge():
    p = RotatingParams(1.3, 0.4)
    grid = TimeGrid(15.0, 3000)
    frame = build_frame(p.spec(), grid)
    exact = analytic_eigenvectors(p, grid.points)
    # one constant phase per level, fixed at t = 0
    phase = np.sum(np.conj(exact[0]) * frame.vectors[0], axis=0)
    assert np.allclose(np.abs(phase), 1.0)
    assert np.max(np.abs(frame.vectors - exact * phase)) < 1e-12


def _complex_path(T=1.0):
    return HamiltonianSpec(LinearInterp(SIGMA_Z + 0.3 * SIGMA_X, SIGMA_Y - 0.2 * SIGMA_Z), T=T)


def test_frame_invariants():
    frame = build_frame(_complex_path(), TimeGrid(1.0, 400))
    v = frame.vectors
    h = hamiltonian_at_time(frame.spec, frame.times)
    assert np.all(frame.energies[:, 0] > frame.energies[:, 1])
    assert np.max(np.abs(np.linalg.norm(v, axis=1) - 1)) <= 1e-12
    assert np.max(np.abs(np.sum(np.conj(v[:, :, 0]) * v[:, :, 1], axis=1))) <= 1e-12
    for m in range(2):
        res = np.linalg.norm(h @ v[:, :, m][..., None] - frame.energies[:, m, None, None] * v[:, :, m][..., None], axis=(1, 2))
        assert np.max(res) <= 1e-12 * np.max(np.abs(h))
        step = np.sum(np.conj(v[:-1, :, m]) * v[1:, :, m], axis=1)
        assert np.max(np.abs(step.imag)) <= 1e-10 and np.all(step.real > 0)


def _berry_defect(steps):
    frame = build_frame(_complex_path(), TimeGrid(1.0, steps))
    dv = np.gradient(frame.vectors, frame.grid.dt, axis=0, edge_order=2)
    return np.max(np.abs(np.sum(np.conj(frame.vectors) * dv, axis=1)))


def test_gauge_defect_converges_at_second_order():
    # <m|d/dt|m> estimated by differences: vanishes as the grid is refined
    d1, d2, d3 = _berry_defect(100), _berry_defect(200), _berry_defect(400)
    assert d1 / d2 >= 3.5 and d2 / d3 >= 3.5


def test_degenerate_frame_reports_time():
    spec = HamiltonianSpec(LinearInterp(SIGMA_Z, -SIGMA_Z), T=1.0)
    with pytest.raises(DegenerateSpectrum) as info:
        build_frame(spec, TimeGrid(1.0, 10))
    assert info.value.time == pytest.approx(0.5)


def test_hellmann_feynman_residual_linear():
    frame = build_frame(HamiltonianSpec(LinearInterp(SIGMA_Z, SIGMA_X), T=1.0), TimeGrid(1.0, 2000))
    assert hellmann_feynman_residual(frame) <= 1e-5


def test_hellmann_feynman_residual_converges():
    spec = HamiltonianSpec(LinearInterp(SIGMA_Z, SIGMA_X), T=1.0)
    r1 = hellmann_feynman_residual(build_frame(spec, TimeGrid(1.0, 200)))
    r2 = hellmann_feynman_residual(build_frame(spec, TimeGrid(1.0, 400)))
    assert r1 / r2 >= 3.5


def test_hellmann_feynman_residual_static_and_rotating():
    assert hellmann_feynman_residual(build_frame(STATIC, TimeGrid(1.0, 10))) <= 1e-12
    frame = build_frame(HamiltonianSpec(Rotating(1.0, 0.1)), TimeGrid(10.0, 10_000))
    assert hellmann_feynman_residual(frame) <= 1e-6
    assert np.max(np.abs(fd_coupling12(frame) + 0.1j)) <= 1e-6


def test_coarse_grid_is_rejected():
    from adiabat import SpecError

    with pytest.raises(SpecError):
        build_frame(HamiltonianSpec(Rotating(1.0, 5.0)), TimeGrid(3.0, 10))
