import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from adiabat._linalg import (
    IDENTITY,
    cumulative_left_product,
    expm_hermitian,
    from_pauli,
    pauli_coefficients,
    unitarity_defect,
)

finite = st.floats(-5, 5, allow_nan=False)


@given(finite, finite, finite, finite, st.floats(-3, 3, allow_nan=False))
def test_expm_matches_scipy(a0, ax, ay, az, theta):
    h = from_pauli(a0, ax, ay, az)
    expected = scipy.linalg.expm(-1j * theta * h)
    assert np.max(np.abs(expm_hermitian(h, theta) - expected)) < 1e-12


@given(finite, finite, finite, finite)
def test_pauli_roundtrip(a0, ax, ay, az):
    coeffs = pauli_coefficients(from_pauli(a0, ax, ay, az))
    assert np.allclose(coeffs, (a0, ax, ay, az), atol=1e-14)


def test_expm_of_zero_vector_part_is_pure_phase():
    u = expm_hermitian(2.0 * IDENTITY, 0.25)
    assert np.allclose(u, np.exp(-0.5j) * IDENTITY, atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 7, 16, 17, 1000])
def test_cumulative_product_matches_sequential(n):
    rng = np.random.default_rng(n)
    hs = from_pauli(*rng.normal(size=(4, n)))
    steps = expm_hermitian(hs, 0.1)
    out = cumulative_left_product(steps)
    u = IDENTITY.copy()
    assert np.array_equal(out[0], IDENTITY)
    for k in range(n):
        u = steps[k] @ u
        assert np.max(np.abs(out[k + 1] - u)) < 1e-12
    assert np.max(unitarity_defect(out)) < 1e-12
