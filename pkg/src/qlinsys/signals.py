"""Quantum signals: pure states, ensembles and validated density matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DimensionError, InvalidDensityError, NormalizationError, QuantumError
from .linalg import DEFAULT_TOL

# Inputs closer than this to unit norm are renormalized silently.
NORMALIZATION_SLACK = 1e-6


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size < 1:
            raise DimensionError(f"amplitudes must be a non-empty vector, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise QuantumError("amplitudes must be finite")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORMALIZATION_SLACK:
            raise NormalizationError(norm)
        amps = amps / norm
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Statistical mixture ``{(p_i, |x_i>)}`` of pure states."""

    members: tuple[tuple[float, PureState], ...]
    tol: float = 1e-10

    def __post_init__(self):
        members = tuple((float(p), s if isinstance(s, PureState) else PureState(s)) for p, s in self.members)
        if not members:
            raise QuantumError("ensemble must have at least one member")
        dims = {s.dim for _, s in members}
        if len(dims) != 1:
            raise DimensionError(f"ensemble members have different dimensions: {sorted(dims)}")
        for p, _ in members:
            if not (0.0 < p <= 1.0 + self.tol) or not math.isfinite(p):
                raise QuantumError(f"ensemble probability {p!r} outside (0, 1]")
        total = math.fsum(p for p, _ in members)
        if abs(total - 1.0) > self.tol:
            raise QuantumError(f"ensemble probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "members", members)

    @property
    def dim(self) -> int:
        return self.members[0][1].dim


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    deviation: float


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[PropertyCheck, ...]
    eigenvalues: tuple[float, ...] = ()

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[PropertyCheck]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> PropertyCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def validate_density(m: np.ndarray, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check the density-matrix properties of ``m`` and report the deviation of each.

    Checks, in order: ``hermitian`` (max entrywise asymmetry), ``trace``
    (``|Tr m - 1|``), ``psd`` (negative part of the smallest eigenvalue) and
    ``eigenvalue_cap`` (excess of the largest eigenvalue over 1). Eigenvalues
    are taken from the Hermitian part, so they are reported even when the
    first check fails.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        return ValidationReport((PropertyCheck("square", False, math.inf),))
    if not np.all(np.isfinite(m)):
        return ValidationReport((PropertyCheck("finite", False, math.inf),))

    asym = linalg.hermitian_asymmetry(m)
    tr_dev = abs(complex(np.trace(m)) - 1.0)
    evals = linalg.hermitian_eigen((m + m.conj().T) / 2).eigenvalues
    neg = max(0.0, -float(evals[0]))
    excess = max(0.0, float(evals[-1]) - 1.0)
    checks = (
        PropertyCheck("hermitian", asym <= tol, asym),
        PropertyCheck("trace", tr_dev <= tol, tr_dev),
        PropertyCheck("psd", neg <= tol, neg),
        PropertyCheck("eigenvalue_cap", excess <= tol, excess),
    )
    return ValidationReport(checks, tuple(float(x) for x in evals))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix. Construction fails unless every check passes."""

    matrix: np.ndarray
    tol: float = field(default=DEFAULT_TOL, kw_only=True, repr=False)
    eigenvalues: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix, name="density matrix")
        report = validate_density(m, self.tol)
        if not report.ok:
            raise InvalidDensityError(report)
        evals = np.array(report.eigenvalues)
        evals.setflags(write=False)
        object.__setattr__(self, "matrix", linalg.frozen(m))
        object.__setattr__(self, "eigenvalues", evals)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def density_from_pure(psi: PureState | Sequence[complex], tol: float = DEFAULT_TOL) -> DensityMatrix:
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    x = psi.amplitudes
    return DensityMatrix(np.outer(x, x.conj()), tol=tol)


def density_from_ensemble(e: Ensemble, tol: float = DEFAULT_TOL) -> DensityMatrix:
    rho = np.zeros((e.dim, e.dim), dtype=np.complex128)
    for p, s in e.members:
        x = s.amplitudes
        rho += p * np.outer(x, x.conj())
    return DensityMatrix(rho, tol=tol)


def purity(rho: DensityMatrix) -> float:
    """``Tr(rho^2)``, with eigenvalues clamped at zero."""
    lam = np.clip(rho.eigenvalues, 0.0, None)
    return float(np.sum(lam * lam))


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(linalg.identity(dim) / dim)
