"""Reproduce the two worked examples: the binary channel and CNOT entanglement.

    python scripts/reproduce_examples.py --p 0.75 --alpha 0.6 --beta 0.8
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from qlinsys import (
    apply_channel,
    apply_global_unitary,
    binary_channel,
    density_from_pure,
    is_product_state,
    partial_trace,
    purity,
    tensor_state,
)

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


@dataclass(frozen=True)
class Config:
    p: float = 0.75
    alpha: complex = 0.6
    beta: complex = 0.8
    sweep_points: int = 5


def binary_example(cfg: Config) -> float:
    a, b, p = cfg.alpha, cfg.beta, cfg.p
    out = apply_channel(binary_channel(p), density_from_pure([a, b])).matrix
    closed = np.array(
        [
            [p * abs(a) ** 2 + (1 - p) * abs(b) ** 2, p * a * np.conj(b)],
            [p * np.conj(a) * b, p * abs(b) ** 2 + (1 - p) * abs(a) ** 2],
        ]
    )
    err = float(np.max(np.abs(out - closed)))
    print(f"binary channel p={p}: output\n{np.round(out.real, 6)}\n  max |output - closed form| = {err:.2e}")
    print("  p      purity(out)")
    for q in np.linspace(0.0, 1.0, cfg.sweep_points):
        print(f"  {q:.3f}  {purity(apply_channel(binary_channel(q), density_from_pure([a, b]))):.6f}")
    return err


def cnot_example(cfg: Config) -> None:
    for a, b in ((cfg.alpha, cfg.beta), (2**-0.5, 2**-0.5), (1.0, 0.0)):
        x = tensor_state(density_from_pure([a, b]), density_from_pure([1, 0]))
        y = apply_global_unitary(CNOT, x)
        before, after = is_product_state(x), is_product_state(y)
        reduced = partial_trace(y, "B")
        print(
            f"cnot alpha={a:.4f} beta={b:.4f}: product before={before.is_product} after={after.is_product} "
            f"reduced purity={purity(reduced):.6f}"
        )


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--p", type=float, default=Config.p)
    ap.add_argument("--alpha", type=float, default=0.6)
    ap.add_argument("--beta", type=float, default=0.8)
    ap.add_argument("--sweep-points", type=int, default=Config.sweep_points)
    args = ap.parse_args()
    cfg = Config(args.p, args.alpha, args.beta, args.sweep_points)
    binary_example(cfg)
    print()
    cnot_example(cfg)


if __name__ == "__main__":
    main()
