"""Quantum systems as Kraus channels."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import ClosureError, DimensionError, HermiticityError, QuantumError
from .linalg import DEFAULT_TOL
from .signals import DensityMatrix

# Looser than DEFAULT_TOL: user channels usually arrive through text files.
CLOSURE_TOL = 1e-8


def closure_deviation(kraus: Sequence[np.ndarray]) -> float:
    return linalg.gram_deviation(kraus)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """An ordered Kraus set satisfying the closure relation.

    ``closure_deviation`` is the Frobenius norm of ``sum M^dagger M - I``
    measured at construction.
    """

    kraus: tuple[np.ndarray, ...]
    closure_deviation: float

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def __len__(self) -> int:
        return len(self.kraus)


def channel_from_kraus(matrices: Sequence, tol: float = CLOSURE_TOL) -> KrausChannel:
    mats = [linalg.as_matrix(m, name=f"Kraus matrix {i}") for i, m in enumerate(matrices)]
    if not mats:
        raise QuantumError("a channel needs at least one Kraus matrix")
    n = linalg.require_square(mats[0], "Kraus matrix 0")
    for i, m in enumerate(mats):
        if m.shape != (n, n):
            raise DimensionError(f"Kraus matrix {i} has shape {m.shape}, expected {(n, n)}")
    dev = closure_deviation(mats)
    if dev > tol:
        raise ClosureError(dev, tol)
    return KrausChannel(tuple(linalg.frozen(m) for m in mats), dev)


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel((linalg.frozen(linalg.identity(dim)),), 0.0)


def apply_channel(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """``sum_mu M_mu rho M_mu^dagger``; composite inputs keep their subsystem dims."""
    if ch.dim != rho.dim:
        raise DimensionError(f"channel acts on dimension {ch.dim}, state has dimension {rho.dim}")
    x = rho.matrix
    out = sum(m @ x @ m.conj().T for m in ch.kraus)
    # an imperfect closure shifts the output trace by at most the closure deviation
    return dataclasses.replace(rho, matrix=out, tol=max(rho.tol, ch.closure_deviation))


def compose(first: KrausChannel, second: KrausChannel, tol: float = CLOSURE_TOL) -> KrausChannel:
    """Cascade: ``first`` acts, then ``second``. No Kraus-count reduction."""
    if first.dim != second.dim:
        raise DimensionError(f"cannot compose channels of dimension {first.dim} and {second.dim}")
    return channel_from_kraus([s @ f for s in second.kraus for f in first.kraus], tol=tol)


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Hermitian generator of the evolution; units with hbar = 1."""

    matrix: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix, name="Hamiltonian")
        linalg.require_square(m, "Hamiltonian")
        asym = linalg.hermitian_asymmetry(m)
        if asym > self.tol:
            raise HermiticityError(asym, self.tol)
        object.__setattr__(self, "matrix", linalg.frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def evolution_operator(h: Hamiltonian | np.ndarray, delta_tau: float) -> np.ndarray:
    """``exp(-i H delta_tau)`` through the eigendecomposition of ``H``."""
    if not isinstance(h, Hamiltonian):
        h = Hamiltonian(h)
    eig = linalg.hermitian_eigen(h.matrix, h.tol)
    v = eig.eigenvectors
    return (v * np.exp(-1j * eig.eigenvalues * delta_tau)) @ v.conj().T


def unitary_from_hamiltonian(h: Hamiltonian | np.ndarray, delta_tau: float) -> KrausChannel:
    return channel_from_kraus([evolution_operator(h, delta_tau)], tol=DEFAULT_TOL)


def is_unitary_channel(ch: KrausChannel, tol: float = DEFAULT_TOL) -> bool:
    """True iff the channel has a single-Kraus (unitary) representation.

    Every pairwise product ``M_mu^dagger M_nu`` must be a multiple of the
    identity; together with closure this forces all ``M_mu`` to be scalar
    multiples of one unitary.
    """
    if len(ch.kraus) == 1:
        return linalg.unitarity_deviation(ch.kraus[0]) <= tol
    return all(
        linalg.is_scalar_identity(a.conj().T @ b, tol)
        for i, a in enumerate(ch.kraus)
        for b in ch.kraus[i:]
    )


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_channel(dim: int, kraus_count: int, seed: int) -> KrausChannel:
    """Seeded random channel: the first block-column of a random unitary, cut into K blocks."""
    if dim < 1:
        raise DimensionError(f"dimension must be positive, got {dim}")
    if not 1 <= kraus_count <= dim * dim:
        raise QuantumError(f"kraus_count must lie in [1, {dim * dim}], got {kraus_count}")
    u = random_unitary(dim * kraus_count, np.random.default_rng(seed))
    column = u[:, :dim]
    blocks = [column[k * dim:(k + 1) * dim, :] for k in range(kraus_count)]
    return channel_from_kraus(blocks, tol=DEFAULT_TOL)


def binary_channel(p: float) -> KrausChannel:
    """Qubit channel: identity with weight ``p``, population exchange with weight ``1 - p``.

    Kraus set ``sqrt(p) I``, ``sqrt(1-p) |0><1|``, ``sqrt(1-p) |1><0|``.
    """
    if not 0.0 <= p <= 1.0:
        raise QuantumError(f"p must lie in [0, 1], got {p}")
    a = np.sqrt(p)
    b = np.sqrt(1.0 - p)
    return channel_from_kraus(
        [
            a * np.eye(2),
            b * np.array([[0, 1], [0, 0]]),
            b * np.array([[0, 0], [1, 0]]),
        ],
        tol=DEFAULT_TOL,
    )
