import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adiabat import SpecError, coefficients
from adiabat.rotating import (
    RotatingParams,
    analytic_coupling12,
    analytic_energies,
    analytic_eigenvectors,
    analytic_interaction_unitary,
    dr_report,
    separation_time,
)
from adiabat.model import hamiltonian_at

freq = st.floats(1e-3, 10.0)


def test_params_validation_and_omega_bar():
    p = RotatingParams(1.0, 0.1)
    assert p.omega_bar**2 == pytest.approx(1.01, abs=1e-12)
    for bad in [(0.0, 1.0), (1.0, -0.1)]:
        with pytest.raises(SpecError):
            RotatingParams(*bad)
    with pytest.raises(SpecError):
        analytic_interaction_unitary(p, -1.0)


def test_analytic_frame_diagonalises_hamiltonian():
    p = RotatingParams(1.3, 0.2)
    t = np.linspace(0, 20, 41)
    v = analytic_eigenvectors(p, t)
    h = hamiltonian_at(p.spec(hbar=2.0), t)
    d = v.conj().transpose(0, 2, 1) @ h @ v
    e1, e2 = analytic_energies(p, hbar=2.0)
    assert np.allclose(d, np.array([[e1, 0], [0, e2]]), atol=1e-12)
    assert analytic_coupling12(p) == -0.2j


def test_identity_at_zero():
    assert np.array_equal(analytic_interaction_unitary(RotatingParams(2.0, 0.3), 0.0), np.eye(2))


@given(freq, st.floats(0, 1e3))
def test_static_limit(omega0, t):
    u = analytic_interaction_unitary(RotatingParams(omega0, 1e-12), t)
    assert np.allclose(u, np.eye(2), atol=1e-8)


@settings(max_examples=200)
@given(freq, freq, st.floats(0, 1e4))
def test_closed_form_is_unitary(omega0, omega, t):
    u = analytic_interaction_unitary(RotatingParams(omega0, omega), t)
    assert abs(abs(np.linalg.det(u)) - 1) <= 1e-12
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)


def test_dr_report_examples():
    assert dr_report(RotatingParams(1.0, 0.1), 10.0).dr6_bound == pytest.approx(0.15, abs=1e-15)
    p = RotatingParams(1.0, 0.1)
    t_peak = (math.pi / 2) / p.omega_bar
    assert dr_report(p, t_peak).second_kind_deviation == pytest.approx(0.01 / 1.01, abs=1e-15)
    t = np.linspace(0, 100, 10001)
    assert np.max(dr_report(p, t).second_kind_deviation) <= 0.01 / 1.01 + 1e-15


def test_separation_example():
    p = RotatingParams(1.0, 0.05)
    t = separation_time(p)
    assert 2.4e3 < t < 2.6e3
    rep = dr_report(p, t)
    assert rep.first_kind_phase_defect == pytest.approx(math.pi, abs=1e-12)
    assert rep.second_kind_deviation <= 2.5e-3
    u = analytic_interaction_unitary(p, t)
    assert u[0, 0].real <= -0.99 and abs(u[0, 0]) >= 0.998


def test_dr6_bound_dominates_measured(rotating_small):
    run = rotating_small
    c1 = coefficients(run.ud, run.frame, run.frame.vectors[0, :, 0]).level(1)
    bound = dr_report(RotatingParams(1.0, 0.1), run.grid.points).dr6_bound
    assert np.all(np.abs(c1 - c1[0]) <= bound)
