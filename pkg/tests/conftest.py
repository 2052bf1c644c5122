from __future__ import annotations

import numpy as np
import pytest

from adiabat import HamiltonianSpec, LinearInterp, TimeGrid, build_aeo, build_frame, propagate_deo
from adiabat.rotating import RotatingParams

ACCEPTANCE_LINES: list[str] = []


def random_hermitian(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return scale * 0.5 * (a + a.conj().T)


def random_state(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def min_gap_linear(h0, h1, points: int = 4001) -> float:
    s = np.linspace(0, 1, points)[:, None, None]
    ev = np.linalg.eigvalsh((1 - s) * h0 + s * h1)
    return float(np.min(ev[:, 1] - ev[:, 0]))


def random_gapped_pair(rng: np.random.Generator, gap: float = 0.5):
    while True:
        h0, h1 = random_hermitian(rng), random_hermitian(rng)
        if min_gap_linear(h0, h1) >= gap:
            return h0, h1


def even(n: float) -> int:
    n = int(np.ceil(n))
    return n + n % 2


class Run:
    """DEO, AEO and frame of one simulation."""

    def __init__(self, spec: HamiltonianSpec, grid: TimeGrid):
        self.spec = spec
        self.grid = grid
        self.frame = build_frame(spec, grid)
        self.ud = propagate_deo(spec, grid)
        self.ua = build_aeo(self.frame)


def rotating_run(omega0: float, omega: float, t_final: float, dt: float, hbar: float = 1.0) -> Run:
    p = RotatingParams(omega0, omega)
    return Run(p.spec(hbar), TimeGrid(t_final, even(t_final / dt)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def rotating_small():
    """Rotating field w0=1, w=0.1 over t in [0, 5] with dt = 1e-4."""
    return rotating_run(1.0, 0.1, 5.0, 1e-4)


@pytest.fixture(scope="session")
def linear_sx_sz():
    return HamiltonianSpec(
        LinearInterp(np.array([[-1, 0], [0, 1]], complex), np.array([[0, 1], [1, 0]], complex)), T=1.0
    )


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
