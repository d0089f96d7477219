"""Bipartite composite signals and systems.

A composite state on ``A (x) B`` stores the flat matrix together with the two
subsystem dimensions; pair ``(n, m)`` maps to flat index ``n * dim_b + m``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import linalg
from .errors import ClosureError, DimensionError, QuantumError, UnitarityError
from .linalg import DEFAULT_TOL
from .signals import DensityMatrix, purity
from .systems import KrausChannel, apply_channel, channel_from_kraus, closure_deviation, identity_channel

Subsystem = Literal["A", "B"]

# ancilla eigenvalues at or below this carry no weight in the dilation
WEIGHT_CUTOFF = 1e-12


@dataclass(frozen=True, eq=False)
class CompositeDensity(DensityMatrix):
    dim_a: int = field(kw_only=True)
    dim_b: int = field(kw_only=True)

    def __post_init__(self):
        super().__post_init__()
        if self.dim_a < 1 or self.dim_b < 1 or self.dim_a * self.dim_b != self.dim:
            raise DimensionError(
                f"subsystem dims {self.dim_a} x {self.dim_b} do not match matrix dimension {self.dim}"
            )

    def tensor(self) -> np.ndarray:
        """Rank-four view ``rho[n, m, i, j]``."""
        return self.matrix.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)


def as_composite(rho: DensityMatrix, dim_a: int, dim_b: int) -> CompositeDensity:
    return CompositeDensity(rho.matrix, tol=rho.tol, dim_a=dim_a, dim_b=dim_b)


def tensor_state(rho_a: DensityMatrix, rho_b: DensityMatrix) -> CompositeDensity:
    return CompositeDensity(
        linalg.kron(rho_a.matrix, rho_b.matrix),
        tol=max(rho_a.tol, rho_b.tol),
        dim_a=rho_a.dim,
        dim_b=rho_b.dim,
    )


def partial_trace(rho_ab: CompositeDensity, over: Subsystem) -> DensityMatrix:
    """Trace out subsystem ``over`` ("A" or "B") and return the other one."""
    t = rho_ab.tensor()
    if over == "B":
        reduced = np.einsum("nmim->ni", t)
    elif over == "A":
        reduced = np.einsum("nmnj->mj", t)
    else:
        raise QuantumError(f"subsystem label must be 'A' or 'B', got {over!r}")
    return DensityMatrix(reduced, tol=rho_ab.tol)


def lift_channels(
    ch_a: KrausChannel | int,
    ch_b: KrausChannel | int,
    dims: tuple[int, int] | None = None,
) -> KrausChannel:
    """Local channels acting side by side on ``A (x) B``.

    Either slot may be an integer, meaning the identity channel of that
    dimension. ``dims``, when given, is checked against the slot dimensions.
    """
    if isinstance(ch_a, int):
        ch_a = identity_channel(ch_a)
    if isinstance(ch_b, int):
        ch_b = identity_channel(ch_b)
    if dims is not None and (ch_a.dim, ch_b.dim) != tuple(dims):
        raise DimensionError(f"lifted channel dims {(ch_a.dim, ch_b.dim)} do not match target {tuple(dims)}")
    tol = max(DEFAULT_TOL, 2 * (ch_a.closure_deviation + ch_b.closure_deviation))
    return channel_from_kraus([linalg.kron(a, b) for a in ch_a.kraus for b in ch_b.kraus], tol=tol)


def require_unitary(u: np.ndarray, dim: int, tol: float) -> np.ndarray:
    u = linalg.as_matrix(u, name="unitary")
    if u.shape != (dim, dim):
        raise DimensionError(f"unitary has shape {u.shape}, expected {(dim, dim)}")
    dev = linalg.unitarity_deviation(u)
    if dev > tol:
        raise UnitarityError(dev, tol)
    return u


def apply_global_unitary(u: np.ndarray, rho_ab: CompositeDensity, tol: float = DEFAULT_TOL) -> CompositeDensity:
    u = require_unitary(u, rho_ab.dim, tol)
    out = u @ rho_ab.matrix @ u.conj().T
    return dataclasses.replace(rho_ab, matrix=out)


@dataclass(frozen=True, eq=False)
class ProductTest:
    is_product: bool
    distance: float
    reduced_purity: float
    factors: tuple[DensityMatrix, DensityMatrix] | None

    def __bool__(self) -> bool:
        return self.is_product


def is_product_state(rho_ab: CompositeDensity, tol: float = DEFAULT_TOL) -> ProductTest:
    """Compare ``rho_ab`` with the product of its own marginals.

    Exact for globally pure states. For mixed states a negative answer does
    not rule out a separable mixture of products.
    """
    rho_a = partial_trace(rho_ab, "B")
    rho_b = partial_trace(rho_ab, "A")
    dist = linalg.frobenius_distance(rho_ab.matrix, linalg.kron(rho_a.matrix, rho_b.matrix))
    ok = dist <= tol
    return ProductTest(ok, dist, purity(rho_a), (rho_a, rho_b) if ok else None)


def dilation_branches(
    u_ab: np.ndarray,
    dim_a: int,
    dim_b: int,
    weights: np.ndarray,
    inputs: np.ndarray,
    outputs: np.ndarray,
) -> list[np.ndarray]:
    """``sqrt(w_k) (I (x) <out_n|) U (I (x) |in_k>)`` for every output column n and input column k."""
    u4 = u_ab.reshape(dim_a, dim_b, dim_a, dim_b)
    branches = []
    for n in range(outputs.shape[1]):
        bra = outputs[:, n].conj()
        for k in range(inputs.shape[1]):
            op = np.einsum("b,abcd,d->ac", bra, u4, inputs[:, k])
            branches.append(np.sqrt(weights[k]) * op)
    return branches


@dataclass(frozen=True, eq=False)
class OpenSystemKraus:
    """Kraus operators of subsystem A under a joint unitary with an uncorrelated B."""

    operators: tuple[np.ndarray, ...]
    interaction: np.ndarray
    ancilla_weights: np.ndarray
    ancilla_vectors: np.ndarray
    closure_deviation: float

    def as_channel(self) -> KrausChannel:
        return KrausChannel(self.operators, self.closure_deviation)

    def apply(self, rho_a: DensityMatrix) -> DensityMatrix:
        return apply_channel(self.as_channel(), rho_a)


def derive_open_system_kraus(
    u_ab: np.ndarray,
    rho_b: DensityMatrix,
    tol: float = DEFAULT_TOL,
    weight_cutoff: float = WEIGHT_CUTOFF,
) -> OpenSystemKraus:
    """Kraus set for ``rho_a -> Tr_B[U (rho_a (x) rho_b) U^dagger]``.

    With ``rho_b = sum_k l_k |e_k><e_k|`` the operators are
    ``sqrt(l_k) (I (x) <b_n|) U (I (x) |e_k>)`` for each computational basis
    vector ``b_n`` of B and each ``l_k > weight_cutoff``.
    """
    u_ab = linalg.as_matrix(u_ab, name="interaction")
    total = linalg.require_square(u_ab, "interaction")
    dim_b = rho_b.dim
    if total % dim_b:
        raise DimensionError(f"interaction dimension {total} is not a multiple of the ancilla dimension {dim_b}")
    dim_a = total // dim_b
    u_ab = require_unitary(u_ab, total, tol)

    eig = linalg.hermitian_eigen(rho_b.matrix, rho_b.tol)
    keep = eig.eigenvalues > weight_cutoff
    weights = eig.eigenvalues[keep]
    vectors = eig.eigenvectors[:, keep]
    ops = dilation_branches(u_ab, dim_a, dim_b, weights, vectors, linalg.identity(dim_b))
    dev = closure_deviation(ops)
    limit = max(1e-9, 2 * tol)
    if dev > limit:
        raise ClosureError(dev, limit)
    return OpenSystemKraus(
        tuple(linalg.frozen(op) for op in ops),
        linalg.frozen(u_ab),
        weights,
        vectors,
        dev,
    )
