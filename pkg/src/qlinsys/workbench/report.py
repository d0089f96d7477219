"""Human and machine renderings of a pipeline report."""

from __future__ import annotations

import json

import numpy as np

from .pipeline import Report, StepEntry


def _num(x: float, precision: int) -> float:
    # adding 0.0 folds -0.0 into 0.0 so reruns print identical bytes
    return round(float(x), precision) + 0.0


def _complex_text(z: complex, precision: int) -> str:
    re = _num(z.real, precision)
    im = _num(z.imag, precision)
    return f"{re:.{precision}f}{im:+.{precision}f}i"


def machine_dict(r: Report) -> dict:
    p = r.settings.output_precision
    steps = []
    for e in r.steps:
        d = {
            "id": e.id,
            "op": e.op,
            "output": [[[_num(z.real, p), _num(z.imag, p)] for z in row] for row in e.output],
            "trace": _num(e.trace, p),
            "purity": _num(e.purity, p),
        }
        if e.probabilities is not None:
            d["probabilities"] = [_num(x, p) for x in e.probabilities]
        if e.verdict is not None:
            d["verdict"] = e.verdict
        steps.append(d)
    return {
        "steps": steps,
        "settings": {"tolerance": r.settings.tolerance, "output_precision": p},
    }


def _matrix_lines(m: np.ndarray, precision: int) -> list[str]:
    cells = [[_complex_text(z, precision) for z in row] for row in m]
    widths = [max(len(row[j]) for row in cells) for j in range(m.shape[1])]
    return ["    " + "  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]


def _human_step(e: StepEntry, precision: int) -> list[str]:
    head = f"step {e.id}: {e.op}"
    if e.binding is not None:
        head += f" -> {e.binding}"
    lines = [head]
    lines += _matrix_lines(e.output, precision)
    lines.append(f"  trace   {_num(e.trace, precision):.{precision}f}")
    lines.append(f"  purity  {_num(e.purity, precision):.{precision}f}")
    if e.probabilities is not None:
        probs = ", ".join(f"{_num(x, precision):.{precision}f}" for x in e.probabilities)
        lines.append(f"  probabilities  [{probs}]")
    if e.verdict is not None:
        lines.append(f"  verdict  {'true' if e.verdict else 'false'}")
    return lines


def format_report(r: Report, mode: str = "human") -> bytes:
    if mode == "machine":
        return (json.dumps(machine_dict(r), indent=2) + "\n").encode("utf-8")
    if mode != "human":
        raise ValueError(f"unknown report mode {mode!r}")
    p = r.settings.output_precision
    lines = [f"# qlinsys report: {len(r.steps)} step(s), tolerance {r.settings.tolerance:g}, precision {p}"]
    for e in r.steps:
        lines.append("")
        lines += _human_step(e, p)
    return ("\n".join(lines) + "\n").encode("utf-8")
