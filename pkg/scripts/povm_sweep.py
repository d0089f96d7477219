"""Ancilla-based generalized measurements and their induced POVM effects.

Prints how the effect set of a CNOT-like coupling degrades from a sharp
sigma_z measurement to a trivial one as the coupling angle goes to zero,
then checks completeness and Born-rule agreement on random setups.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from qlinsys import (
    DensityMatrix,
    GeneralizedMeasurement,
    Observable,
    density_from_pure,
    evolution_operator,
    extract_povm_effects,
    generalized_measure,
    random_unitary,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
P1 = np.diag([0.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class Config:
    angles: int = 6
    random_setups: int = 50
    seed: int = 1


def partial_cnot(theta: float) -> np.ndarray:
    """Controlled rotation exp(-i theta |1><1| (x) sigma_x); theta = pi/2 is CNOT up to a phase."""
    return evolution_operator(np.kron(P1, SIGMA_X), theta)


def angle_sweep(cfg: Config) -> None:
    rho = density_from_pure([0.6, 0.8])
    print("theta    p(-1)    p(+1)    E(-1) diagonal")
    for theta in np.linspace(0, np.pi / 2, cfg.angles):
        gm = GeneralizedMeasurement(density_from_pure([1, 0]), partial_cnot(theta), Observable(SIGMA_Z))
        probs = generalized_measure(rho, gm).probabilities
        effects = {e.value: e.matrix for e in extract_povm_effects(gm)}
        e_minus = effects.get(-1.0, np.zeros((2, 2)))
        print(f"{theta:.3f}   {probs[0]:.5f}  {probs[1]:.5f}  {np.round(np.diag(e_minus).real, 5)}")


def random_checks(cfg: Config) -> tuple[float, float]:
    rng = np.random.default_rng(cfg.seed)
    worst_sum = worst_born = 0.0
    for _ in range(cfg.random_setups):
        na, nb = (int(v) for v in rng.integers(2, 4, size=2))
        g = rng.standard_normal((nb, nb)) + 1j * rng.standard_normal((nb, nb))
        anc = g @ g.conj().T
        h = rng.standard_normal((nb, nb)) + 1j * rng.standard_normal((nb, nb))
        gm = GeneralizedMeasurement(
            DensityMatrix(anc / np.trace(anc).real), random_unitary(na * nb, rng), Observable((h + h.conj().T) / 2)
        )
        effects = extract_povm_effects(gm)
        worst_sum = max(worst_sum, float(np.linalg.norm(sum(e.matrix for e in effects) - np.eye(na))))
        v = rng.standard_normal(na) + 1j * rng.standard_normal(na)
        rho = density_from_pure(v / np.linalg.norm(v))
        probs = {o.value: o.probability for o in generalized_measure(rho, gm).outcomes}
        for e in effects:
            worst_born = max(worst_born, abs(np.trace(e.matrix @ rho.matrix).real - probs[e.value]))
    print(f"{cfg.random_setups} random setups: max |sum E - I| = {worst_sum:.2e}, max |Tr(E rho) - p| = {worst_born:.2e}")
    return worst_sum, worst_born


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--angles", type=int, default=Config.angles)
    ap.add_argument("--setups", type=int, default=Config.random_setups)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args()
    cfg = Config(args.angles, args.setups, args.seed)
    angle_sweep(cfg)
    print()
    random_checks(cfg)


if __name__ == "__main__":
    main()
