"""Dense complex linear algebra for small matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` with two
dimensions. :func:`as_matrix` is the single entry point that coerces and
checks input; every other function here assumes its arguments already went
through it (or were produced by this package).

Composite indices follow the row-major pair enumeration: for a factor of
shape ``(n_a, n_a)`` and one of shape ``(n_b, n_b)``, pair ``(n, m)`` sits at
row ``n * n_b + m`` of the Kronecker product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, HermiticityError, QuantumError

DEFAULT_TOL = 1e-10

_MAX_SWEEPS = 64


def as_matrix(data, *, name: str = "matrix") -> np.ndarray:
    """Coerce ``data`` to a finite 2-D complex array (always a fresh copy)."""
    try:
        m = np.array(data, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise QuantumError(f"{name}: cannot interpret as a complex matrix ({exc})") from None
    if m.ndim != 2:
        raise DimensionError(f"{name}: expected a 2-D matrix, got an array of shape {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"{name}: matrix must have at least one row and one column, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise QuantumError(f"{name}: non-finite entries are not allowed")
    return m


def frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=np.complex128)
    m.setflags(write=False)
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def require_square(a: np.ndarray, name: str = "matrix") -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a.shape[0]


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    return a.conj().T.copy()


def trace(a: np.ndarray) -> complex:
    require_square(a)
    return complex(np.trace(a))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def _finite_or_inf(x: float) -> float:
    # overflow in a deviation must fail every "<= tol" test, so NaN becomes inf
    return x if math.isfinite(x) else math.inf


def hermitian_asymmetry(h: np.ndarray) -> float:
    """Largest entrywise ``|h - h^dagger|``."""
    if h.shape[0] != h.shape[1]:
        return math.inf
    with np.errstate(over="ignore", invalid="ignore"):
        return _finite_or_inf(float(np.max(np.abs(h - h.conj().T))))


def unitarity_deviation(u: np.ndarray) -> float:
    if u.shape[0] != u.shape[1]:
        return math.inf
    return gram_deviation([u])


def gram_deviation(ops) -> float:
    """Frobenius norm of ``sum_k M_k^dagger M_k - I``, inf on overflow."""
    n = ops[0].shape[1]
    with np.errstate(over="ignore", invalid="ignore"):
        total = sum(m.conj().T @ m for m in ops)
        return _finite_or_inf(float(np.linalg.norm(total - identity(n))))


def is_scalar_identity(x: np.ndarray, tol: float) -> bool:
    n = x.shape[0]
    return float(np.linalg.norm(x - (np.trace(x) / n) * identity(n))) <= tol


@dataclass(frozen=True, eq=False)
class HermitianEigenResult:
    """Ascending real eigenvalues with eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eigen(h: np.ndarray, tol: float = DEFAULT_TOL) -> HermitianEigenResult:
    """Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``h[p, q]`` and then
    applies the classical real Jacobi rotation to the resulting real
    symmetric 2x2 block. Sweeps continue until the off-diagonal mass is at
    round-off level.
    """
    n = require_square(h, "hermitian_eigen input")
    asym = hermitian_asymmetry(h)
    if asym > tol:
        raise HermiticityError(asym, tol)

    a = (h + h.conj().T) / 2
    # work on a unit-magnitude copy so squared entries cannot overflow
    peak = float(np.max(np.abs(a))) if a.size else 0.0
    if peak > 0:
        a = a / peak
    v = identity(n)
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)
    target = (np.finfo(float).eps * scale) ** 2
    diag_mask = np.eye(n, dtype=bool)

    for _ in range(_MAX_SWEEPS):
        off = float(np.sum(np.abs(a[~diag_mask]) ** 2))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= np.finfo(float).eps * 1e-3 * scale:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    else:
        raise QuantumError("Jacobi eigen-solver did not converge")  # pragma: no cover

    evals = np.real(np.diag(a)) * (peak if peak > 0 else 1.0)
    order = np.argsort(evals, kind="stable")
    return HermitianEigenResult(evals[order], v[:, order])
