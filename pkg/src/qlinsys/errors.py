"""Exception types shared across the package."""

from __future__ import annotations


class QuantumError(ValueError):
    """Base class for every invariant or contract violation raised here."""


class DimensionError(QuantumError):
    pass


class HermiticityError(QuantumError):
    def __init__(self, asymmetry: float, tol: float):
        super().__init__(f"matrix is not Hermitian: max |h - h^dagger| = {asymmetry:.3e} > tol {tol:.1e}")
        self.asymmetry = asymmetry


class NormalizationError(QuantumError):
    def __init__(self, norm: float):
        super().__init__(f"state is not normalized: norm = {norm!r}")
        self.norm = norm


class InvalidDensityError(QuantumError):
    """Raised when a matrix fails one of the density-matrix checks."""

    def __init__(self, report):
        failed = ", ".join(f"{c.name} (deviation {c.deviation:.3e})" for c in report.failures)
        super().__init__(f"not a valid density matrix: {failed}")
        self.report = report


class ClosureError(QuantumError):
    def __init__(self, deviation: float, tol: float):
        super().__init__(
            f"Kraus set violates closure: ||sum M^dagger M - I||_F = {deviation:.3e} > tol {tol:.1e}"
        )
        self.deviation = deviation


class UnitarityError(QuantumError):
    def __init__(self, deviation: float, tol: float):
        super().__init__(f"matrix is not unitary: ||U^dagger U - I||_F = {deviation:.3e} > tol {tol:.1e}")
        self.deviation = deviation


class MeasurementError(QuantumError):
    pass


class ZeroProbabilityError(MeasurementError):
    def __init__(self, probability: float):
        super().__init__(f"zero-probability outcome; post-state undefined (p = {probability:.3e})")
        self.probability = probability
