"""Scenario documents: parsing, static checking and serialization.

A scenario is one JSON object::

    {
      "settings":    {"tolerance": 1e-10, "output_precision": 6},
      "states":      {"psi": {"kind": "pure", "amplitudes": [[0.6, 0], [0.8, 0]]}},
      "channels":    {"ch": {"kind": "kraus", "matrices": [...]}},
      "observables": {"z": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]},
      "pipeline":    [{"op": "apply", "inputs": ["ch", "psi"], "as": "out"}]
    }

Complex numbers are ``[re, im]`` pairs (a bare number is read as real),
matrices are row-major lists of rows.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .. import linalg
from ..composite import CompositeDensity
from ..errors import DimensionError, QuantumError
from ..measurement import Observable
from ..signals import DensityMatrix, Ensemble, PureState, density_from_ensemble, density_from_pure
from ..systems import CLOSURE_TOL, Hamiltonian, KrausChannel, channel_from_kraus, unitary_from_hamiltonian

Matrix = tuple[tuple[complex, ...], ...]

OPS = ("apply", "evolve", "tensor", "ptrace", "measure", "gmeasure", "product_test", "validate")

# input slots per op, as namespaces: s = state, c = channel, o = observable
SIGNATURES = {
    "apply": "cs",
    "evolve": "cs",
    "tensor": "ss",
    "ptrace": "s",
    "measure": "so",
    "gmeasure": "ssco",
    "product_test": "s",
    "validate": "s",
}
PARAMS = {
    "apply": set(),
    "evolve": {"delta_tau"},
    "tensor": set(),
    "ptrace": {"over"},
    "measure": {"outcome"},
    "gmeasure": set(),
    "product_test": set(),
    "validate": set(),
}
PRODUCES_STATE = {"apply", "evolve", "tensor", "ptrace", "measure", "gmeasure"}
NAMESPACES = {"s": "state", "c": "channel", "o": "observable"}


class ErrorCategory(str, enum.Enum):
    SYNTAX = "syntax"
    SCHEMA = "schema"
    UNKNOWN_OP = "unknown_op"
    UNDEFINED_REFERENCE = "undefined_reference"
    DUPLICATE_NAME = "duplicate_name"
    DIMENSION = "dimension"
    INVARIANT = "invariant"


class ScenarioError(Exception):
    def __init__(
        self,
        category: ErrorCategory,
        message: str,
        *,
        name: str | None = None,
        step: int | None = None,
        line: int | None = None,
        column: int | None = None,
    ):
        self.category = category
        self.name = name
        self.step = step
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if step is not None:
            where.append(f"step {step}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(f"{prefix}{message}")


@dataclass(frozen=True)
class Settings:
    tolerance: float = 1e-10
    output_precision: int = 6


@dataclass(frozen=True)
class StateSpec:
    kind: str
    amplitudes: tuple[complex, ...] | None = None
    members: tuple[tuple[float, tuple[complex, ...]], ...] | None = None
    matrix: Matrix | None = None
    dims: tuple[int, int] | None = None


@dataclass(frozen=True)
class ChannelSpec:
    kind: str
    matrices: tuple[Matrix, ...] = ()
    matrix: Matrix | None = None
    delta_tau: float | None = None


@dataclass(frozen=True)
class PipelineStep:
    op: str
    inputs: tuple[str, ...]
    params: dict[str, Any] = field(default_factory=dict)
    as_: str | None = None


@dataclass(frozen=True)
class ScenarioDocument:
    states: dict[str, StateSpec] = field(default_factory=dict)
    channels: dict[str, ChannelSpec] = field(default_factory=dict)
    observables: dict[str, Matrix] = field(default_factory=dict)
    pipeline: tuple[PipelineStep, ...] = ()
    settings: Settings = field(default_factory=Settings)


# -- building runtime objects -------------------------------------------------


def build_state(spec: StateSpec, tol: float) -> DensityMatrix:
    if spec.kind == "pure":
        rho = density_from_pure(PureState(np.array(spec.amplitudes)), tol=tol)
    elif spec.kind == "ensemble":
        rho = density_from_ensemble(Ensemble(tuple((p, np.array(a)) for p, a in spec.members), tol=tol), tol=tol)
    else:
        rho = DensityMatrix(np.array(spec.matrix), tol=tol)
    if spec.dims is not None:
        rho = CompositeDensity(rho.matrix, tol=tol, dim_a=spec.dims[0], dim_b=spec.dims[1])
    return rho


def build_channel(spec: ChannelSpec, delta_tau: float | None = None) -> KrausChannel:
    if spec.kind == "kraus":
        return channel_from_kraus([np.array(m) for m in spec.matrices], tol=CLOSURE_TOL)
    tau = spec.delta_tau if delta_tau is None else delta_tau
    return unitary_from_hamiltonian(Hamiltonian(np.array(spec.matrix)), tau)


def build_observable(matrix: Matrix, tol: float) -> Observable:
    return Observable(np.array(matrix), tol=max(tol, 1e-10))


# -- decoding -------------------------------------------------------------------


def _schema(msg: str, name: str | None = None, step: int | None = None) -> ScenarioError:
    return ScenarioError(ErrorCategory.SCHEMA, msg, name=name, step=step)


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _real(x, where: str) -> float:
    if _is_number(x):
        try:
            v = float(x)
        except OverflowError:
            v = math.inf
        if math.isfinite(v):
            return v
    raise _schema(f"{where}: expected a finite number, got {x!r:.40}")


def _complex(x, where: str) -> complex:
    if _is_number(x):
        return complex(_real(x, where), 0.0)
    if isinstance(x, list) and len(x) == 2:
        return complex(_real(x[0], where), _real(x[1], where))
    raise _schema(f"{where}: expected a number or [re, im], got {x!r}")


def _vector(x, where: str) -> tuple[complex, ...]:
    if not isinstance(x, list) or not x:
        raise _schema(f"{where}: expected a non-empty list of complex numbers")
    return tuple(_complex(v, f"{where}[{i}]") for i, v in enumerate(x))


def _matrix(x, where: str) -> Matrix:
    if not isinstance(x, list) or not x:
        raise _schema(f"{where}: expected a non-empty list of rows")
    rows = tuple(_vector(r, f"{where}[{i}]") for i, r in enumerate(x))
    if len({len(r) for r in rows}) != 1:
        raise _schema(f"{where}: rows have different lengths")
    return rows


def _object(x, where: str, allowed: set[str], required: set[str] = frozenset()) -> dict:
    if not isinstance(x, dict):
        raise _schema(f"{where}: expected an object")
    extra = set(x) - allowed
    if extra:
        raise _schema(f"{where}: unexpected keys {sorted(extra)}")
    missing = set(required) - set(x)
    if missing:
        raise _schema(f"{where}: missing keys {sorted(missing)}")
    return x


def _name(x, where: str) -> str:
    if not isinstance(x, str) or not x:
        raise _schema(f"{where}: names must be non-empty strings, got {x!r}")
    return x


def _decode_state(name: str, raw) -> StateSpec:
    where = f"state {name!r}"
    obj = _object(raw, where, {"kind", "amplitudes", "members", "matrix", "dims"}, {"kind"})
    kind = obj["kind"]
    dims = None
    if "dims" in obj:
        d = obj["dims"]
        if not (isinstance(d, list) and len(d) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in d)):
            raise _schema(f"{where}: dims must be two integers", name=name)
        dims = (d[0], d[1])
    if kind == "pure":
        _object(obj, where, {"kind", "amplitudes", "dims"}, {"amplitudes"})
        return StateSpec("pure", amplitudes=_vector(obj["amplitudes"], f"{where}.amplitudes"), dims=dims)
    if kind == "ensemble":
        _object(obj, where, {"kind", "members", "dims"}, {"members"})
        members = obj["members"]
        if not isinstance(members, list) or not members:
            raise _schema(f"{where}: members must be a non-empty list", name=name)
        decoded = []
        for i, m in enumerate(members):
            mo = _object(m, f"{where}.members[{i}]", {"p", "amplitudes"}, {"p", "amplitudes"})
            decoded.append((_real(mo["p"], f"{where}.members[{i}].p"), _vector(mo["amplitudes"], f"{where}.members[{i}]")))
        return StateSpec("ensemble", members=tuple(decoded), dims=dims)
    if kind == "density":
        _object(obj, where, {"kind", "matrix", "dims"}, {"matrix"})
        return StateSpec("density", matrix=_matrix(obj["matrix"], f"{where}.matrix"), dims=dims)
    raise _schema(f"{where}: unknown state kind {kind!r}", name=name)


def _decode_channel(name: str, raw) -> ChannelSpec:
    where = f"channel {name!r}"
    obj = _object(raw, where, {"kind", "matrices", "matrix", "delta_tau"}, {"kind"})
    kind = obj["kind"]
    if kind == "kraus":
        _object(obj, where, {"kind", "matrices"}, {"matrices"})
        mats = obj["matrices"]
        if not isinstance(mats, list) or not mats:
            raise _schema(f"{where}: matrices must be a non-empty list", name=name)
        return ChannelSpec("kraus", matrices=tuple(_matrix(m, f"{where}.matrices[{i}]") for i, m in enumerate(mats)))
    if kind == "hamiltonian":
        _object(obj, where, {"kind", "matrix", "delta_tau"}, {"matrix"})
        tau = _real(obj["delta_tau"], f"{where}.delta_tau") if "delta_tau" in obj else None
        return ChannelSpec("hamiltonian", matrix=_matrix(obj["matrix"], f"{where}.matrix"), delta_tau=tau)
    raise _schema(f"{where}: unknown channel kind {kind!r}", name=name)


def _decode_step(index: int, raw) -> PipelineStep:
    if not isinstance(raw, dict):
        raise _schema("pipeline steps must be objects", step=index)
    if "op" not in raw:
        raise _schema("step is missing 'op'", step=index)
    op = raw["op"]
    if not isinstance(op, str) or op not in SIGNATURES:
        raise ScenarioError(ErrorCategory.UNKNOWN_OP, f"unknown op {op!r}", name=str(op), step=index)
    extra = set(raw) - {"op", "inputs", "params", "as"}
    if extra:
        raise _schema(f"unexpected step keys {sorted(extra)}", step=index)
    inputs = raw.get("inputs", [])
    if not isinstance(inputs, list) or not all(isinstance(i, str) for i in inputs):
        raise _schema("inputs must be a list of names", step=index)
    if len(inputs) != len(SIGNATURES[op]):
        raise _schema(f"{op} takes {len(SIGNATURES[op])} inputs, got {len(inputs)}", step=index)
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise _schema("params must be an object", step=index)
    unknown = set(params) - PARAMS[op]
    if unknown:
        raise _schema(f"{op} does not accept params {sorted(unknown)}", step=index)
    if "delta_tau" in params:
        _real(params["delta_tau"], f"step {index} delta_tau")
    if op == "ptrace" and params.get("over") not in ("A", "B"):
        raise _schema("ptrace needs params.over equal to 'A' or 'B'", step=index)
    if "outcome" in params:
        o = params["outcome"]
        if not isinstance(o, int) or isinstance(o, bool) or o < 0:
            raise _schema("measure outcome must be a non-negative integer", step=index)
    as_ = raw.get("as")
    if as_ is not None:
        as_ = _name(as_, f"step {index} as")
    elif op in PRODUCES_STATE:
        raise _schema(f"{op} needs an 'as' binding", step=index)
    return PipelineStep(op, tuple(inputs), dict(params), as_)


def _pairs_hook(pairs):
    seen = {}
    for k, v in pairs:
        if k in seen:
            raise ScenarioError(ErrorCategory.DUPLICATE_NAME, f"duplicate key {k!r}", name=k)
        seen[k] = v
    return seen


def _reject_constant(token):
    raise ValueError(f"non-finite literal {token}")


def _load_json(text: bytes | str):
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioError(ErrorCategory.SYNTAX, f"input is not UTF-8 (byte {exc.start})") from None
    try:
        return json.loads(text, object_pairs_hook=_pairs_hook, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ScenarioError(ErrorCategory.SYNTAX, exc.msg, line=exc.lineno, column=exc.colno) from None
    except ValueError as exc:
        raise ScenarioError(ErrorCategory.SYNTAX, str(exc)) from None
    except RecursionError:
        raise ScenarioError(ErrorCategory.SYNTAX, "document nested too deeply") from None


def _decode_settings(raw) -> Settings:
    obj = _object(raw, "settings", {"tolerance", "output_precision"})
    tol = _real(obj.get("tolerance", 1e-10), "settings.tolerance")
    prec = obj.get("output_precision", 6)
    if tol <= 0:
        raise _schema("settings.tolerance must be positive")
    if not isinstance(prec, int) or isinstance(prec, bool) or not 0 <= prec <= 17:
        raise _schema("settings.output_precision must be an integer in [0, 17]")
    return Settings(tol, prec)


def _section(doc: dict, key: str) -> dict:
    raw = doc.get(key, {})
    if not isinstance(raw, dict):
        raise _schema(f"{key} must be an object")
    for k in raw:
        _name(k, key)
    return raw


def decode(doc) -> ScenarioDocument:
    """Structural decoding only; no numerical checks."""
    if not isinstance(doc, dict):
        raise _schema("top level must be an object")
    extra = set(doc) - {"states", "channels", "observables", "pipeline", "settings"}
    if extra:
        raise _schema(f"unexpected top-level keys {sorted(extra)}")
    states = {k: _decode_state(k, v) for k, v in _section(doc, "states").items()}
    channels = {k: _decode_channel(k, v) for k, v in _section(doc, "channels").items()}
    observables = {k: _matrix(v, f"observable {k!r}") for k, v in _section(doc, "observables").items()}
    pipeline = doc.get("pipeline", [])
    if not isinstance(pipeline, list):
        raise _schema("pipeline must be a list")
    steps = tuple(_decode_step(i, s) for i, s in enumerate(pipeline))
    settings = _decode_settings(doc.get("settings", {}))
    return ScenarioDocument(states, channels, observables, steps, settings)


# -- static checking ------------------------------------------------------------


@dataclass(frozen=True)
class _Shape:
    dim: int
    dims: tuple[int, int] | None = None


def _invariant(exc: QuantumError, name: str, what: str) -> ScenarioError:
    cat = ErrorCategory.DIMENSION if isinstance(exc, DimensionError) else ErrorCategory.INVARIANT
    return ScenarioError(cat, f"{what} {name!r}: {exc}", name=name)


def check(doc: ScenarioDocument) -> None:
    """Build every payload and type-check the pipeline without running it."""
    tol = doc.settings.tolerance
    shapes: dict[str, _Shape] = {}
    for name, spec in doc.states.items():
        try:
            rho = build_state(spec, tol)
        except QuantumError as exc:
            raise _invariant(exc, name, "state") from None
        shapes[name] = _Shape(rho.dim, spec.dims)

    channel_dims: dict[str, int] = {}
    unitary: dict[str, bool] = {}
    for name, spec in doc.channels.items():
        try:
            if spec.kind == "kraus":
                ch = build_channel(spec)
                channel_dims[name] = ch.dim
                unitary[name] = len(ch.kraus) == 1 and _unitary_ok(ch.kraus[0], tol)
            else:
                channel_dims[name] = Hamiltonian(np.array(spec.matrix)).dim
                unitary[name] = True
        except QuantumError as exc:
            raise _invariant(exc, name, "channel") from None

    obs_dims: dict[str, int] = {}
    for name, m in doc.observables.items():
        try:
            obs_dims[name] = build_observable(m, tol).dim
        except QuantumError as exc:
            raise _invariant(exc, name, "observable") from None

    for i, step in enumerate(doc.pipeline):
        args = []
        for slot, ref in zip(SIGNATURES[step.op], step.inputs):
            table = {"s": shapes, "c": channel_dims, "o": obs_dims}[slot]
            if ref not in table:
                raise ScenarioError(
                    ErrorCategory.UNDEFINED_REFERENCE,
                    f"{step.op} references undefined {NAMESPACES[slot]} {ref!r}",
                    name=ref,
                    step=i,
                )
            args.append(table[ref])
        out = _check_step(doc, i, step, args, unitary)
        if step.as_ is not None:
            if step.as_ in shapes:
                raise ScenarioError(
                    ErrorCategory.DUPLICATE_NAME, f"binding {step.as_!r} already exists", name=step.as_, step=i
                )
            if out is not None:
                shapes[step.as_] = out


def _unitary_ok(m: np.ndarray, tol: float) -> bool:
    return linalg.unitarity_deviation(m) <= max(tol, 1e-10)


def _dim_error(i: int, msg: str, name: str | None = None) -> ScenarioError:
    return ScenarioError(ErrorCategory.DIMENSION, msg, name=name, step=i)


def _check_step(doc: ScenarioDocument, i: int, step: PipelineStep, args: list, unitary: dict) -> _Shape | None:
    op = step.op
    if op in ("apply", "evolve"):
        ch_name = step.inputs[0]
        spec = doc.channels[ch_name]
        ch_dim, state = args
        if op == "evolve" and spec.kind != "hamiltonian":
            raise _schema(f"evolve needs a hamiltonian channel, {ch_name!r} is {spec.kind}", name=ch_name, step=i)
        if spec.kind == "hamiltonian" and spec.delta_tau is None and "delta_tau" not in step.params:
            raise _schema(f"channel {ch_name!r} has no delta_tau", name=ch_name, step=i)
        if ch_dim != state.dim:
            raise _dim_error(i, f"channel {ch_name!r} has dimension {ch_dim}, state has {state.dim}", ch_name)
        return state
    if op == "tensor":
        a, b = args
        return _Shape(a.dim * b.dim, (a.dim, b.dim))
    if op in ("ptrace", "product_test"):
        (state,) = args
        if state.dims is None:
            raise _dim_error(i, f"{op} needs a composite state, {step.inputs[0]!r} is not one", step.inputs[0])
        if op == "product_test":
            return state
        return _Shape(state.dims[0] if step.params["over"] == "B" else state.dims[1])
    if op == "measure":
        state, obs_dim = args
        if obs_dim != state.dim:
            raise _dim_error(i, f"observable has dimension {obs_dim}, state has {state.dim}", step.inputs[1])
        return state
    if op == "gmeasure":
        sig, anc, ch_dim, obs_dim = args
        ch_name = step.inputs[2]
        if obs_dim != anc.dim:
            raise _dim_error(i, f"ancilla observable has dimension {obs_dim}, ancilla has {anc.dim}", step.inputs[3])
        if ch_dim != sig.dim * anc.dim:
            raise _dim_error(i, f"interaction {ch_name!r} has dimension {ch_dim}, expected {sig.dim * anc.dim}", ch_name)
        if not unitary[ch_name]:
            raise ScenarioError(
                ErrorCategory.INVARIANT, f"interaction {ch_name!r} is not a single unitary", name=ch_name, step=i
            )
        if doc.channels[ch_name].kind == "hamiltonian" and doc.channels[ch_name].delta_tau is None:
            raise _schema(f"channel {ch_name!r} has no delta_tau", name=ch_name, step=i)
        return _Shape(sig.dim)
    return args[0]  # validate


def parse_scenario(text: bytes | str, *, tolerance: float | None = None) -> ScenarioDocument:
    """Parse and fully check a scenario; raise :class:`ScenarioError` on any problem.

    ``tolerance`` replaces the document's own setting before any check runs.
    """
    try:
        doc = decode(_load_json(text))
        if tolerance is not None:
            doc = dataclasses.replace(doc, settings=dataclasses.replace(doc.settings, tolerance=tolerance))
        check(doc)
    except ScenarioError:
        raise
    except (RecursionError, MemoryError, OverflowError) as exc:  # pragma: no cover - pathological inputs
        raise ScenarioError(ErrorCategory.SYNTAX, f"unreadable document: {exc!r}") from None
    return doc


# -- serialization --------------------------------------------------------------


def _enc_complex(z: complex) -> list[float]:
    return [z.real, z.imag]


def _enc_matrix(m: Matrix) -> list:
    return [[_enc_complex(z) for z in row] for row in m]


def _enc_state(s: StateSpec) -> dict:
    out: dict[str, Any] = {"kind": s.kind}
    if s.kind == "pure":
        out["amplitudes"] = [_enc_complex(z) for z in s.amplitudes]
    elif s.kind == "ensemble":
        out["members"] = [{"p": p, "amplitudes": [_enc_complex(z) for z in a]} for p, a in s.members]
    else:
        out["matrix"] = _enc_matrix(s.matrix)
    if s.dims is not None:
        out["dims"] = list(s.dims)
    return out


def _enc_channel(c: ChannelSpec) -> dict:
    if c.kind == "kraus":
        return {"kind": "kraus", "matrices": [_enc_matrix(m) for m in c.matrices]}
    out: dict[str, Any] = {"kind": "hamiltonian", "matrix": _enc_matrix(c.matrix)}
    if c.delta_tau is not None:
        out["delta_tau"] = c.delta_tau
    return out


def _enc_step(s: PipelineStep) -> dict:
    out: dict[str, Any] = {"op": s.op, "inputs": list(s.inputs)}
    if s.params:
        out["params"] = dict(s.params)
    if s.as_ is not None:
        out["as"] = s.as_
    return out


def to_json_obj(doc: ScenarioDocument) -> dict:
    return {
        "settings": {"tolerance": doc.settings.tolerance, "output_precision": doc.settings.output_precision},
        "states": {k: _enc_state(v) for k, v in doc.states.items()},
        "channels": {k: _enc_channel(v) for k, v in doc.channels.items()},
        "observables": {k: _enc_matrix(v) for k, v in doc.observables.items()},
        "pipeline": [_enc_step(s) for s in doc.pipeline],
    }


def serialize_scenario(doc: ScenarioDocument) -> bytes:
    return (json.dumps(to_json_obj(doc), indent=2) + "\n").encode("utf-8")
