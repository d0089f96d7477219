"""Step-by-step execution of a checked scenario document."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..composite import is_product_state, partial_trace, tensor_state
from ..errors import QuantumError
from ..measurement import (
    GeneralizedMeasurement,
    generalized_measure,
    measure_nonselective,
    measure_selective,
    outcome_probabilities,
    projectors_from_observable,
)
from ..signals import DensityMatrix, purity, validate_density
from ..systems import apply_channel
from .scenario import ScenarioDocument, Settings, build_channel, build_observable, build_state


class PipelineError(Exception):
    def __init__(self, step: int, op: str, cause: Exception):
        super().__init__(f"step {step} ({op}) failed: {cause}")
        self.step = step
        self.op = op
        self.cause = cause


@dataclass(frozen=True, eq=False)
class StepEntry:
    id: int
    op: str
    binding: str | None
    output: np.ndarray
    trace: float
    purity: float
    probabilities: tuple[float, ...] | None = None
    verdict: bool | None = None


@dataclass(eq=False)
class Report:
    settings: Settings
    steps: list[StepEntry] = field(default_factory=list)
    # final binding environment, for callers that want the objects themselves
    bindings: dict[str, DensityMatrix] = field(default_factory=dict, repr=False)


def _entry(i, step, rho: DensityMatrix, probabilities=None, verdict=None) -> StepEntry:
    return StepEntry(
        i,
        step.op,
        step.as_,
        rho.matrix,
        float(np.real(np.trace(rho.matrix))),
        purity(rho),
        probabilities,
        verdict,
    )


def run_pipeline(doc: ScenarioDocument) -> Report:
    """Execute ``doc.pipeline`` in order; the document must come from ``parse_scenario``."""
    tol = doc.settings.tolerance
    env: dict[str, DensityMatrix] = {name: build_state(spec, tol) for name, spec in doc.states.items()}
    report = Report(doc.settings, bindings=env)

    for i, step in enumerate(doc.pipeline):
        try:
            entry, out = _run_step(doc, i, step, env, tol)
        except QuantumError as exc:
            raise PipelineError(i, step.op, exc) from exc
        report.steps.append(entry)
        if step.as_ is not None:
            env[step.as_] = out
    return report


def _run_step(doc: ScenarioDocument, i: int, step, env, tol):
    op = step.op
    args = step.inputs
    if op in ("apply", "evolve"):
        ch = build_channel(doc.channels[args[0]], step.params.get("delta_tau"))
        out = apply_channel(ch, env[args[1]])
        return _entry(i, step, out), out
    if op == "tensor":
        out = tensor_state(env[args[0]], env[args[1]])
        return _entry(i, step, out), out
    if op == "ptrace":
        out = partial_trace(env[args[0]], step.params["over"])
        return _entry(i, step, out), out
    if op == "measure":
        rho = env[args[0]]
        m = projectors_from_observable(build_observable(doc.observables[args[1]], tol))
        probs = outcome_probabilities(rho, m)
        if "outcome" in step.params:
            _, out = measure_selective(rho, m, step.params["outcome"])
        else:
            out = measure_nonselective(rho, m)
        return _entry(i, step, out, probabilities=probs), out
    if op == "gmeasure":
        ch = build_channel(doc.channels[args[2]])
        gm = GeneralizedMeasurement(
            env[args[1]], ch.kraus[0], build_observable(doc.observables[args[3]], tol), tol=max(tol, 1e-10)
        )
        record = generalized_measure(env[args[0]], gm)
        out = record.nonselective_state
        return _entry(i, step, out, probabilities=record.probabilities), out
    if op == "product_test":
        rho = env[args[0]]
        verdict = is_product_state(rho, tol).is_product
        return _entry(i, step, rho, verdict=verdict), rho
    if op == "validate":
        rho = env[args[0]]
        verdict = validate_density(rho.matrix, tol).ok
        return _entry(i, step, rho, verdict=verdict), rho
    raise AssertionError(f"unchecked op {op!r}")  # pragma: no cover
