import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import (
    CNOT,
    KET0,
    SIGMA_X,
    SIGMA_Z,
    SWAP,
    gram_schmidt_unitary,
    max_abs,
    naive_partial_trace,
    random_density_matrix,
    random_hermitian,
)
from qlinsys import (
    DensityMatrix,
    GeneralizedMeasurement,
    Observable,
    ProjectiveMeasurement,
    apply_channel,
    density_from_pure,
    extract_povm_effects,
    generalized_measure,
    maximally_mixed,
    measure_nonselective,
    measure_selective,
    measurement_channel,
    outcome_probabilities,
    projectors_from_observable,
)
from qlinsys.errors import (
    DimensionError,
    HermiticityError,
    MeasurementError,
    UnitarityError,
    ZeroProbabilityError,
)

seeds = st.integers(0, 2**32 - 1)
PLUS = np.array([1, 1]) / np.sqrt(2)


def sz():
    return projectors_from_observable(Observable(SIGMA_Z))


def rand_rho(rng, n, rank=None):
    return DensityMatrix(random_density_matrix(rng, n, rank))


def degenerate_observable(rng, n):
    """Hermitian matrix with a random number of repeated eigenvalues."""
    q = gram_schmidt_unitary(rng, n)
    levels = rng.integers(0, max(1, n - 1), size=n).astype(float)
    h = (q * levels) @ q.conj().T
    return (h + h.conj().T) / 2


def random_gm(rng, na, nb):
    rb = rand_rho(rng, nb, rank=int(rng.integers(1, nb + 1)))
    obs = Observable(random_hermitian(rng, nb) if rng.random() < 0.7 else degenerate_observable(rng, nb))
    return GeneralizedMeasurement(rb, gram_schmidt_unitary(rng, na * nb), obs)


def composition_oracle(rho_a, gm):
    """Nonselective readout of the ancilla followed by tracing it out, done densely."""
    na, nb = gm.dim_a, gm.dim_b
    joint = gm.interaction @ np.kron(rho_a.matrix, gm.ancilla_state.matrix) @ gm.interaction.conj().T
    probs, total = [], np.zeros((na * nb, na * nb), dtype=complex)
    for p in gm.readout().projectors:
        lifted = np.kron(np.eye(na), p)
        probs.append(np.trace(lifted @ joint).real)
        total += lifted @ joint @ lifted
    return probs, naive_partial_trace(total, na, nb, "B")


def test_projectors_from_sigma_z():
    m = sz()
    assert m.outcome_values == pytest.approx((-1.0, 1.0))
    assert max_abs(m.projectors[0], np.diag([0, 1])) < 1e-15
    assert max_abs(m.projectors[1], np.diag([1, 0])) < 1e-15


def test_projectors_from_identity_collapse_to_one():
    m = projectors_from_observable(Observable(np.eye(2)))
    assert len(m) == 1
    assert max_abs(m.projectors[0], np.eye(2)) < 1e-15
    assert m.outcome_values == pytest.approx((1.0,))


def test_projectors_from_sigma_x():
    m = projectors_from_observable(Observable(SIGMA_X))
    assert m.outcome_values == pytest.approx((-1.0, 1.0))
    assert max_abs(m.projectors[0], 0.5 * np.array([[1, -1], [-1, 1]])) < 1e-15
    assert max_abs(m.projectors[1], 0.5 * np.array([[1, 1], [1, 1]])) < 1e-15


def test_observable_must_be_hermitian():
    with pytest.raises(HermiticityError):
        Observable(np.array([[0, 1], [0, 0]]))


def test_projective_measurement_rejects_incomplete_set():
    with pytest.raises(MeasurementError):
        ProjectiveMeasurement((np.diag([1.0, 0.0]),), (1.0,))


@given(seeds, st.integers(1, 6))
def test_clustered_projectors_are_valid(seed, n):
    obs = Observable(degenerate_observable(np.random.default_rng(seed), n))
    m = projectors_from_observable(obs)
    assert np.all(np.diff(m.outcome_values) > 0)
    total = sum(m.projectors)
    assert max_abs(total, np.eye(n)) < 1e-10
    rebuilt = sum(v * p for v, p in zip(m.outcome_values, m.projectors))
    assert max_abs(rebuilt, obs.matrix) < 1e-10


def test_nonselective_examples():
    rho = DensityMatrix(np.diag([0.3, 0.7]))
    assert max_abs(measure_nonselective(rho, sz()).matrix, rho.matrix) == 0
    assert max_abs(measure_nonselective(density_from_pure(PLUS), sz()).matrix, np.eye(2) / 2) < 1e-15
    out = measure_nonselective(density_from_pure([0.6, 0.8]), sz())
    assert max_abs(out.matrix, np.diag([0.36, 0.64])) < 1e-15


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        measure_nonselective(maximally_mixed(3), sz())
    with pytest.raises(DimensionError):
        outcome_probabilities(maximally_mixed(3), sz())


def test_probability_examples():
    assert outcome_probabilities(density_from_pure([1, 0]), sz()) == (0.0, 1.0)
    x = projectors_from_observable(Observable(SIGMA_X))
    assert outcome_probabilities(maximally_mixed(2), x) == pytest.approx((0.5, 0.5), abs=1e-15)
    assert outcome_probabilities(density_from_pure([0.6, 0.8]), sz()) == pytest.approx((0.64, 0.36), abs=1e-15)


def test_selective_examples():
    ket0 = density_from_pure([1, 0])
    p, post = measure_selective(ket0, sz(), 1)
    assert p == 1.0 and max_abs(post.matrix, np.diag([1, 0])) == 0
    with pytest.raises(ZeroProbabilityError, match="zero-probability outcome; post-state undefined"):
        measure_selective(ket0, sz(), 0)

    plus = density_from_pure(PLUS)
    for idx, proj in ((0, np.diag([0, 1])), (1, np.diag([1, 0]))):
        p, post = measure_selective(plus, sz(), idx)
        assert p == pytest.approx(0.5, abs=1e-15)
        assert max_abs(post.matrix, proj) < 1e-15

    with pytest.raises(MeasurementError):
        measure_selective(plus, sz(), 2)


def check_projective_pair(rho, m):
    once = measure_nonselective(rho, m)
    twice = measure_nonselective(once, m)
    assert max_abs(once.matrix, twice.matrix) < 1e-12

    probs = outcome_probabilities(rho, m)
    assert abs(sum(probs) - 1) < 1e-12

    ch = measurement_channel(m)
    assert ch.closure_deviation < 1e-10
    assert max_abs(apply_channel(ch, rho).matrix, once.matrix) < 1e-12

    mixture = np.zeros_like(rho.matrix)
    for k, p in enumerate(probs):
        if p > 1e-12:
            pk, post = measure_selective(rho, m, k)
            mixture = mixture + pk * post.matrix
    assert max_abs(mixture, once.matrix) < 1e-12


@given(seeds, st.integers(1, 6), st.booleans())
def test_projective_measurement_properties(seed, n, degenerate):
    rng = np.random.default_rng(seed)
    h = degenerate_observable(rng, n) if degenerate else random_hermitian(rng, n)
    check_projective_pair(rand_rho(rng, n, rank=int(rng.integers(1, n + 1))), projectors_from_observable(Observable(h)))


def test_generalized_identity_interaction():
    rng = np.random.default_rng(0)
    rho = rand_rho(rng, 2)
    gm = GeneralizedMeasurement(density_from_pure([1, 0]), np.eye(4), Observable(SIGMA_Z))
    rec = generalized_measure(rho, gm)
    assert rec.probabilities == (0.0, 1.0)
    assert rec.outcomes[0].post_state is None
    assert max_abs(rec.outcomes[1].post_state.matrix, rho.matrix) < 1e-14
    assert max_abs(rec.nonselective_state.matrix, rho.matrix) < 1e-14

    effects = extract_povm_effects(gm)
    assert len(effects) == 1
    assert effects[0].value == pytest.approx(1.0)
    assert max_abs(effects[0].matrix, np.eye(2)) < 1e-15


def test_generalized_cnot_reproduces_sigma_z():
    gm = GeneralizedMeasurement(density_from_pure(KET0), CNOT, Observable(SIGMA_Z))
    rec = generalized_measure(density_from_pure([0.6, 0.8]), gm)
    # ascending readout order: -1 (ancilla flipped, A was |1>) then +1
    assert [o.value for o in rec.outcomes] == pytest.approx([-1.0, 1.0])
    assert rec.probabilities == pytest.approx((0.64, 0.36), abs=1e-15)
    assert max_abs(rec.outcomes[0].post_state.matrix, np.diag([0, 1])) < 1e-15
    assert max_abs(rec.outcomes[1].post_state.matrix, np.diag([1, 0])) < 1e-15
    assert max_abs(rec.nonselective_state.matrix, np.diag([0.36, 0.64])) < 1e-15

    effects = extract_povm_effects(gm)
    assert max_abs(effects[0].matrix, np.diag([0, 1])) < 1e-15
    assert max_abs(effects[1].matrix, np.diag([1, 0])) < 1e-15


def test_generalized_measurement_validation():
    with pytest.raises(UnitarityError):
        GeneralizedMeasurement(maximally_mixed(2), 2 * np.eye(4), Observable(SIGMA_Z))
    with pytest.raises(DimensionError):
        GeneralizedMeasurement(maximally_mixed(2), np.eye(5), Observable(SIGMA_Z))
    with pytest.raises(DimensionError):
        GeneralizedMeasurement(maximally_mixed(2), np.eye(4), Observable(np.eye(3)))
    gm = GeneralizedMeasurement(maximally_mixed(2), np.eye(6), Observable(SIGMA_Z))
    with pytest.raises(DimensionError):
        generalized_measure(maximally_mixed(2), gm)


def test_generalized_on_maximal_mixture_with_symmetric_interaction():
    gm = GeneralizedMeasurement(density_from_pure(PLUS), SWAP, Observable(SIGMA_X))
    rho = maximally_mixed(2)
    rec = generalized_measure(rho, gm)
    probs, state = composition_oracle(rho, gm)
    assert max_abs(rec.probabilities, probs) < 1e-12
    assert max_abs(rec.nonselective_state.matrix, state) < 1e-12


@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_generalized_measurement_matches_oracle(seed, na, nb):
    rng = np.random.default_rng(seed)
    gm = random_gm(rng, na, nb)
    rho = rand_rho(rng, na)
    rec = generalized_measure(rho, gm)
    probs, state = composition_oracle(rho, gm)
    assert abs(sum(rec.probabilities) - 1) < 1e-12
    assert max_abs(rec.probabilities, probs) < 1e-10
    assert max_abs(rec.nonselective_state.matrix, state) < 1e-10

    mixture = sum(o.probability * o.post_state.matrix for o in rec.outcomes if o.post_state is not None)
    assert max_abs(mixture, rec.nonselective_state.matrix) < 1e-10

    effects = extract_povm_effects(gm)
    assert max_abs(sum(e.matrix for e in effects), np.eye(na)) < 1e-10
    by_value = {o.value: o.probability for o in rec.outcomes}
    for e in effects:
        assert np.linalg.eigvalsh(e.matrix).min() >= -1e-10
        assert abs(np.trace(e.matrix @ rho.matrix).real - by_value[e.value]) < 1e-10
