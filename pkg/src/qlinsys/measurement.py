"""Projective and ancilla-based generalized measurement.

Outcomes are always listed in ascending order of their (clustered)
eigenvalue. For measurements on an ancilla the composite ordering is
``signal (x) ancilla``, so an ancilla projector lifts as ``I_A (x) P``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .composite import (
    WEIGHT_CUTOFF,
    dilation_branches,
    partial_trace,
    require_unitary,
    tensor_state,
)
from .errors import DimensionError, HermiticityError, MeasurementError, ZeroProbabilityError
from .linalg import DEFAULT_TOL
from .signals import DensityMatrix
from .systems import KrausChannel, channel_from_kraus

CLUSTER_TOL = 1e-8
ZERO_PROBABILITY = 1e-12


@dataclass(frozen=True, eq=False)
class Observable:
    matrix: np.ndarray
    tol: float = DEFAULT_TOL
    eigen: linalg.HermitianEigenResult = field(init=False, repr=False)

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix, name="observable")
        linalg.require_square(m, "observable")
        asym = linalg.hermitian_asymmetry(m)
        if asym > self.tol:
            raise HermiticityError(asym, self.tol)
        object.__setattr__(self, "matrix", linalg.frozen(m))
        object.__setattr__(self, "eigen", linalg.hermitian_eigen(m, self.tol))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Complete family of orthogonal projectors with one real value per outcome.

    ``bases`` optionally holds, per outcome, an orthonormal basis of the
    projector's range as matrix columns.
    """

    projectors: tuple[np.ndarray, ...]
    outcome_values: tuple[float, ...]
    bases: tuple[np.ndarray, ...] | None = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        projs = tuple(linalg.frozen(linalg.as_matrix(p, name="projector")) for p in self.projectors)
        if not projs:
            raise MeasurementError("a measurement needs at least one projector")
        if len(projs) != len(self.outcome_values):
            raise MeasurementError(f"{len(projs)} projectors but {len(self.outcome_values)} outcome values")
        n = linalg.require_square(projs[0], "projector")
        for p in projs:
            if p.shape != (n, n):
                raise DimensionError(f"projector shape {p.shape} differs from {(n, n)}")
        tol = self.tol
        for i, p in enumerate(projs):
            if linalg.hermitian_asymmetry(p) > tol:
                raise MeasurementError(f"projector {i} is not Hermitian")
            if np.linalg.norm(p @ p - p) > tol:
                raise MeasurementError(f"projector {i} is not idempotent")
            for j in range(i + 1, len(projs)):
                if np.linalg.norm(p @ projs[j]) > tol:
                    raise MeasurementError(f"projectors {i} and {j} are not orthogonal")
        if np.linalg.norm(sum(projs) - linalg.identity(n)) > tol:
            raise MeasurementError("projectors do not sum to the identity")
        object.__setattr__(self, "projectors", projs)
        object.__setattr__(self, "outcome_values", tuple(float(v) for v in self.outcome_values))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def __len__(self) -> int:
        return len(self.projectors)

    def basis(self, k: int) -> np.ndarray:
        if self.bases is not None:
            return self.bases[k]
        eig = linalg.hermitian_eigen(self.projectors[k])
        return eig.eigenvectors[:, eig.eigenvalues > 0.5]


def projectors_from_observable(q: Observable, cluster_tol: float = CLUSTER_TOL) -> ProjectiveMeasurement:
    """Spectral projectors of ``q``; eigenvalues closer than ``cluster_tol`` share an outcome."""
    lam = q.eigen.eigenvalues
    vecs = q.eigen.eigenvectors
    groups: list[list[int]] = [[0]]
    for k in range(1, len(lam)):
        if lam[k] - lam[groups[-1][-1]] <= cluster_tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    bases = tuple(vecs[:, g] for g in groups)
    return ProjectiveMeasurement(
        tuple(b @ b.conj().T for b in bases),
        tuple(float(np.mean(lam[g])) for g in groups),
        bases,
    )


def measurement_channel(m: ProjectiveMeasurement) -> KrausChannel:
    """The nonselective measurement written as a Kraus channel."""
    return channel_from_kraus(m.projectors, tol=DEFAULT_TOL)


def _check_dims(rho: DensityMatrix, m: ProjectiveMeasurement) -> None:
    if rho.dim != m.dim:
        raise DimensionError(f"measurement acts on dimension {m.dim}, state has dimension {rho.dim}")


def outcome_probabilities(rho: DensityMatrix, m: ProjectiveMeasurement) -> tuple[float, ...]:
    """Born-rule probabilities ``Tr(P_n rho)``, clamped to ``[0, 1]``."""
    _check_dims(rho, m)
    return tuple(float(np.clip(np.real(np.trace(p @ rho.matrix)), 0.0, 1.0)) for p in m.projectors)


def measure_nonselective(rho: DensityMatrix, m: ProjectiveMeasurement) -> DensityMatrix:
    _check_dims(rho, m)
    out = sum(p @ rho.matrix @ p for p in m.projectors)
    return dataclasses.replace(rho, matrix=out)


def measure_selective(
    rho: DensityMatrix,
    m: ProjectiveMeasurement,
    outcome_index: int,
    tol: float = ZERO_PROBABILITY,
) -> tuple[float, DensityMatrix]:
    _check_dims(rho, m)
    if not 0 <= outcome_index < len(m):
        raise MeasurementError(f"outcome index {outcome_index} out of range for {len(m)} outcomes")
    p_op = m.projectors[outcome_index]
    prob = float(np.real(np.trace(p_op @ rho.matrix)))
    if prob <= tol:
        raise ZeroProbabilityError(prob)
    post = p_op @ rho.matrix @ p_op / prob
    # dividing by prob scales round-off by 1/prob
    return min(prob, 1.0), dataclasses.replace(rho, matrix=post, tol=max(rho.tol, rho.tol / prob))


@dataclass(frozen=True, eq=False)
class GeneralizedMeasurement:
    """Signal couples to an ancilla through ``interaction``; the ancilla is then measured."""

    ancilla_state: DensityMatrix
    interaction: np.ndarray
    ancilla_observable: Observable
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        u = linalg.as_matrix(self.interaction, name="interaction")
        total = linalg.require_square(u, "interaction")
        dim_b = self.ancilla_state.dim
        if self.ancilla_observable.dim != dim_b:
            raise DimensionError(
                f"ancilla observable has dimension {self.ancilla_observable.dim}, ancilla has {dim_b}"
            )
        if total % dim_b:
            raise DimensionError(f"interaction dimension {total} is not a multiple of the ancilla dimension {dim_b}")
        object.__setattr__(self, "interaction", linalg.frozen(require_unitary(u, total, self.tol)))

    @property
    def dim_b(self) -> int:
        return self.ancilla_state.dim

    @property
    def dim_a(self) -> int:
        return self.interaction.shape[0] // self.dim_b

    def readout(self, cluster_tol: float = CLUSTER_TOL) -> ProjectiveMeasurement:
        return projectors_from_observable(self.ancilla_observable, cluster_tol)


@dataclass(frozen=True, eq=False)
class Outcome:
    value: float
    probability: float
    post_state: DensityMatrix | None


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    outcomes: tuple[Outcome, ...]
    nonselective_state: DensityMatrix

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(o.probability for o in self.outcomes)


def generalized_measure(
    rho_a: DensityMatrix,
    gm: GeneralizedMeasurement,
    zero_tol: float = ZERO_PROBABILITY,
) -> MeasurementRecord:
    """Couple ``rho_a`` to the ancilla, measure the ancilla, and condition A on each outcome.

    Outcomes with probability at or below ``zero_tol`` are kept with
    ``post_state=None``.
    """
    if rho_a.dim != gm.dim_a:
        raise DimensionError(f"signal has dimension {rho_a.dim}, measurement expects {gm.dim_a}")
    u = gm.interaction
    joint = tensor_state(rho_a, gm.ancilla_state)
    evolved = dataclasses.replace(joint, matrix=u @ joint.matrix @ u.conj().T)
    eye_a = linalg.identity(gm.dim_a)

    outcomes = []
    mixture = np.zeros((gm.dim_a, gm.dim_a), dtype=np.complex128)
    readout = gm.readout()
    for value, proj in zip(readout.outcome_values, readout.projectors):
        lifted = linalg.kron(eye_a, proj)
        prob = float(np.clip(np.real(np.trace(lifted @ evolved.matrix)), 0.0, 1.0))
        if prob <= zero_tol:
            outcomes.append(Outcome(value, prob, None))
            continue
        cond = lifted @ evolved.matrix @ lifted / prob
        tol = max(rho_a.tol, rho_a.tol / prob)
        post = partial_trace(dataclasses.replace(evolved, matrix=cond, tol=tol), "B")
        outcomes.append(Outcome(value, prob, post))
        mixture += prob * post.matrix
    return MeasurementRecord(tuple(outcomes), DensityMatrix(mixture, tol=rho_a.tol))


@dataclass(frozen=True, eq=False)
class Effect:
    value: float
    matrix: np.ndarray


def extract_povm_effects(gm: GeneralizedMeasurement, drop_tol: float = ZERO_PROBABILITY) -> tuple[Effect, ...]:
    """POVM effects on A induced by the ancilla readout.

    For readout outcome k with range basis ``{q}``, the effect is the sum of
    ``B^dagger B`` over the branch operators
    ``B = sqrt(l_j) (I (x) <q|) U (I (x) |e_j>)``, where
    ``rho_b = sum_j l_j |e_j><e_j|``. Effects whose norm does not exceed
    ``drop_tol`` belong to unattainable outcomes and are dropped.
    """
    eig = linalg.hermitian_eigen(gm.ancilla_state.matrix, gm.ancilla_state.tol)
    keep = eig.eigenvalues > WEIGHT_CUTOFF
    weights = eig.eigenvalues[keep]
    vectors = eig.eigenvectors[:, keep]
    readout = gm.readout()
    effects = []
    for k, value in enumerate(readout.outcome_values):
        branches = dilation_branches(gm.interaction, gm.dim_a, gm.dim_b, weights, vectors, readout.basis(k))
        e = sum(b.conj().T @ b for b in branches)
        e = (e + e.conj().T) / 2
        if np.linalg.norm(e) > drop_tol:
            effects.append(Effect(value, linalg.frozen(e)))
    return tuple(effects)
