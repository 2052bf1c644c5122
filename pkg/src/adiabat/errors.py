"""Exception hierarchy shared by every module of the package."""


class AdiabatError(Exception):
    """Base class for all errors raised by :mod:`adiabat`."""


class SpecError(AdiabatError, ValueError):
    """A Hamiltonian specification, grid or input violates its invariants."""


class DomainError(SpecError):
    """A parameter value lies outside the domain of the Hamiltonian family."""


class DegenerateSpectrum(AdiabatError, ArithmeticError):
    """The two instantaneous eigenvalues are closer than the gap floor."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class GridMismatch(AdiabatError, ValueError):
    """Two traces or frames were built on different time grids."""


class NonHermitianObservable(AdiabatError, ValueError):
    pass


class SameLevel(AdiabatError, ValueError):
    pass


class InvalidDelta(AdiabatError, ValueError):
    pass


class UnitarityError(AdiabatError, ArithmeticError):
    """A propagated operator drifted away from unitarity."""
