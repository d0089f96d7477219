"""Compare the derived open-system Kraus set against direct evolve-then-trace.

For random joint unitaries and ancilla states, reports the worst Frobenius
gap and closure deviation per (N_A, N_B) pair.
"""

from __future__ import annotations

import argparse
import itertools
import time
from dataclasses import dataclass

import numpy as np

from qlinsys import (
    DensityMatrix,
    apply_global_unitary,
    derive_open_system_kraus,
    partial_trace,
    random_unitary,
    tensor_state,
)


@dataclass(frozen=True)
class Config:
    trials: int = 100
    dims: tuple[int, ...] = (2, 3, 4)
    seed: int = 0


def random_density(rng: np.random.Generator, n: int, rank: int) -> DensityMatrix:
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def run(cfg: Config) -> dict[tuple[int, int], tuple[float, float, int]]:
    rng = np.random.default_rng(cfg.seed)
    results = {}
    for na, nb in itertools.product(cfg.dims, repeat=2):
        worst_gap = worst_closure = 0.0
        max_ops = 0
        for _ in range(cfg.trials):
            u = random_unitary(na * nb, rng)
            rho_b = random_density(rng, nb, int(rng.integers(1, nb + 1)))
            rho_a = random_density(rng, na, na)
            red = derive_open_system_kraus(u, rho_b)
            direct = partial_trace(apply_global_unitary(u, tensor_state(rho_a, rho_b)), "B")
            worst_gap = max(worst_gap, float(np.linalg.norm(red.apply(rho_a).matrix - direct.matrix)))
            worst_closure = max(worst_closure, red.closure_deviation)
            max_ops = max(max_ops, len(red.operators))
        results[(na, nb)] = (worst_gap, worst_closure, max_ops)
    return results


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=Config.trials)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args()
    cfg = Config(trials=args.trials, seed=args.seed)
    start = time.perf_counter()
    results = run(cfg)
    print("N_A N_B  max gap     max closure  max #ops")
    for (na, nb), (gap, closure, ops) in results.items():
        print(f"{na:>3} {nb:>3}  {gap:.3e}   {closure:.3e}    {ops}")
    print(f"{cfg.trials} trials per pair in {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
