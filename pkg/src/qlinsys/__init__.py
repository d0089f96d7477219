"""Density matrices, Kraus channels, composite systems and measurement."""

from .composite import (
    CompositeDensity,
    OpenSystemKraus,
    ProductTest,
    apply_global_unitary,
    as_composite,
    derive_open_system_kraus,
    is_product_state,
    lift_channels,
    partial_trace,
    tensor_state,
)
from .errors import (
    ClosureError,
    DimensionError,
    HermiticityError,
    InvalidDensityError,
    MeasurementError,
    NormalizationError,
    QuantumError,
    UnitarityError,
    ZeroProbabilityError,
)
from .linalg import (
    HermitianEigenResult,
    adjoint,
    frobenius_distance,
    hermitian_eigen,
    kron,
    matmul,
    trace,
)
from .measurement import (
    Effect,
    GeneralizedMeasurement,
    MeasurementRecord,
    Observable,
    Outcome,
    ProjectiveMeasurement,
    extract_povm_effects,
    generalized_measure,
    measure_nonselective,
    measure_selective,
    measurement_channel,
    outcome_probabilities,
    projectors_from_observable,
)
from .signals import (
    DensityMatrix,
    Ensemble,
    PureState,
    ValidationReport,
    density_from_ensemble,
    density_from_pure,
    maximally_mixed,
    purity,
    validate_density,
)
from .systems import (
    Hamiltonian,
    KrausChannel,
    apply_channel,
    binary_channel,
    channel_from_kraus,
    compose,
    evolution_operator,
    identity_channel,
    is_unitary_channel,
    random_channel,
    random_unitary,
    unitary_from_hamiltonian,
)

__version__ = "0.1.0"
