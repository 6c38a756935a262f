"""JSON document formats for frames, POVMs, measures, and dilations.

One canonical serialization: atoms sorted, matrices row-major, complex
scalars always two-element [re, im] arrays, reals rendered with 17
significant digits, fixed key order. parse(emit(d)) reproduces the payload
bit-exactly, and emit is idempotent across round trips.

Error taxonomy: ParseError for text that is not JSON, SchemaError (with a
field path) for structure that does not match the document kind, and the
domain modules' ValidationError for payloads that are structurally fine but
mathematically invalid.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, SchemaError, ValidationError
from .frames import Frame, FusionFrame, SampledGeneralizedFrame
from .measure import DiscreteBorelSpace, ScalarMeasure
from .naimark import NaimarkRepresentation
from .operators import DEFAULT_TOLERANCES, Tolerances
from .povm import FramedPOVM

KINDS = (
    "frame",
    "fusion_frame",
    "sampled_generalized_frame",
    "povm",
    "measure",
    "naimark",
    "report",
)


@dataclass(frozen=True)
class Report:
    """Command outcome: named boolean flags, named residuals, optional bounds."""

    command: str
    flags: dict[str, bool]
    residuals: dict[str, float]
    bounds: tuple[float, float] | None = None


@dataclass(frozen=True)
class Document:
    kind: str
    payload: object


_PAYLOAD_KINDS = (
    (Frame, "frame"),
    (FusionFrame, "fusion_frame"),
    (SampledGeneralizedFrame, "sampled_generalized_frame"),
    (FramedPOVM, "povm"),
    (ScalarMeasure, "measure"),
    (NaimarkRepresentation, "naimark"),
    (Report, "report"),
)


def document_for(payload) -> Document:
    for cls, kind in _PAYLOAD_KINDS:
        if isinstance(payload, cls):
            return Document(kind, payload)
    raise SchemaError(f"no document kind for payload type {type(payload).__name__}")


# ---------------------------------------------------------------------------
# canonical JSON writer

def _format_real(value: float) -> str:
    if not math.isfinite(value):
        raise ValidationError("finite entries: cannot serialize NaN or Inf")
    return format(float(value), ".17g")


def _write(value, out: list[str]) -> None:
    if isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(_format_real(value))
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, dict):
        out.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(":")
            _write(item, out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _write(item, out)
        out.append("]")
    elif value is None:
        out.append("null")
    else:
        raise SchemaError(f"cannot serialize value of type {type(value).__name__}")


def canonical_json(value) -> str:
    out: list[str] = []
    _write(value, out)
    out.append("\n")
    return "".join(out)


def _complex_out(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _vector_out(vector) -> list:
    return [_complex_out(z) for z in np.asarray(vector).ravel()]


def _matrix_out(matrix) -> list:
    m = np.asarray(matrix)
    return [[_complex_out(z) for z in row] for row in m]


# ---------------------------------------------------------------------------
# schema-checked readers

def _load_json(text: str):
    def reject(name: str):
        raise ParseError(f"non-finite number {name!r} is not valid JSON")

    try:
        return json.loads(text, parse_constant=reject)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc


def _as_object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"{path}: expected an object")
    return value


def _get(obj: dict, key: str, path: str):
    if key not in obj:
        raise SchemaError(f"{path}.{key}: missing required field")
    return obj[key]


def _as_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{path}: expected an array")
    return value


def _as_string(value, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{path}: expected a string")
    return value


def _as_count(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{path}: expected an integer")
    if value < 0:
        raise SchemaError(f"{path}: expected a nonnegative integer")
    return value


def _as_real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{path}: expected a number")
    return float(value)


def _as_bool(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(f"{path}: expected a boolean")
    return value


def _as_complex(value, path: str) -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise SchemaError(f"{path}: expected a complex scalar as [re, im]")
    return complex(_as_real(value[0], f"{path}[0]"), _as_real(value[1], f"{path}[1]"))


def _as_vector(value, path: str, length: int | None = None) -> np.ndarray:
    items = _as_list(value, path)
    if length is not None and len(items) != length:
        raise SchemaError(f"{path}: expected {length} entries, got {len(items)}")
    return np.array(
        [_as_complex(z, f"{path}[{i}]") for i, z in enumerate(items)], dtype=np.complex128
    )


def _as_matrix(value, path: str, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    row_items = _as_list(value, path)
    if rows is not None and len(row_items) != rows:
        raise SchemaError(f"{path}: expected {rows} rows, got {len(row_items)}")
    if not row_items:
        raise SchemaError(f"{path}: matrix needs at least one row")
    parsed = []
    width = None
    for i, row in enumerate(row_items):
        vec = _as_vector(row, f"{path}[{i}]")
        if width is None:
            width = vec.shape[0]
        elif vec.shape[0] != width:
            raise SchemaError(f"{path}[{i}]: ragged matrix rows")
        parsed.append(vec)
    if cols is not None and width != cols:
        raise SchemaError(f"{path}: expected {cols} columns, got {width}")
    if width == 0:
        raise SchemaError(f"{path}: matrix needs at least one column")
    return np.array(parsed, dtype=np.complex128)


def _atom_labels(obj: dict, path: str, count: int) -> tuple[str, ...]:
    if "atoms" not in obj:
        return tuple(str(i) for i in range(count))
    items = _as_list(obj["atoms"], f"{path}.atoms")
    labels = tuple(_as_string(a, f"{path}.atoms[{i}]") for i, a in enumerate(items))
    if len(labels) != count:
        raise SchemaError(f"{path}.atoms: expected {count} labels, got {len(labels)}")
    return labels


# ---------------------------------------------------------------------------
# per-kind parsing

def _parse_frame(obj: dict, tol: Tolerances) -> Frame:
    dim = _as_count(_get(obj, "dim", "frame"), "frame.dim")
    if dim < 1:
        raise SchemaError("frame.dim: must be at least 1")
    rows = _as_list(_get(obj, "vectors", "frame"), "frame.vectors")
    vectors = [_as_vector(v, f"frame.vectors[{i}]", dim) for i, v in enumerate(rows)]
    atoms = _atom_labels(obj, "frame", len(vectors))
    return Frame(dim, vectors, atoms=atoms)


def _parse_fusion_frame(obj: dict, tol: Tolerances) -> FusionFrame:
    dim = _as_count(_get(obj, "dim", "fusion_frame"), "fusion_frame.dim")
    if dim < 1:
        raise SchemaError("fusion_frame.dim: must be at least 1")
    entries = _as_list(_get(obj, "members", "fusion_frame"), "fusion_frame.members")
    if not entries:
        raise SchemaError("fusion_frame.members: needs at least one member")
    atoms = []
    members = []
    for i, entry in enumerate(entries):
        path = f"fusion_frame.members[{i}]"
        member = _as_object(entry, path)
        atoms.append(_as_string(_get(member, "atom", path), f"{path}.atom"))
        weight = _as_real(_get(member, "weight", path), f"{path}.weight")
        basis = _as_matrix(_get(member, "basis", path), f"{path}.basis", rows=dim)
        members.append((basis, weight))
    return FusionFrame(dim, members, atoms=tuple(atoms), tol=tol)


def _parse_sampled(obj: dict, tol: Tolerances) -> SampledGeneralizedFrame:
    dim = _as_count(_get(obj, "dim", "sampled_generalized_frame"), "sampled_generalized_frame.dim")
    if dim < 1:
        raise SchemaError("sampled_generalized_frame.dim: must be at least 1")
    rows = _as_list(
        _get(obj, "samples", "sampled_generalized_frame"), "sampled_generalized_frame.samples"
    )
    samples = [
        _as_vector(v, f"sampled_generalized_frame.samples[{i}]", dim)
        for i, v in enumerate(rows)
    ]
    mu_items = _as_list(_get(obj, "mu", "sampled_generalized_frame"), "sampled_generalized_frame.mu")
    if len(mu_items) != len(samples):
        raise SchemaError(
            f"sampled_generalized_frame.mu: expected {len(samples)} weights, got {len(mu_items)}"
        )
    weights = [
        _as_real(w, f"sampled_generalized_frame.mu[{i}]") for i, w in enumerate(mu_items)
    ]
    atoms = _atom_labels(obj, "sampled_generalized_frame", len(samples))
    return SampledGeneralizedFrame(dim, samples, weights, atoms=atoms)


def _parse_povm(obj: dict, tol: Tolerances) -> FramedPOVM:
    dim = _as_count(_get(obj, "dim", "povm"), "povm.dim")
    if dim < 1:
        raise SchemaError("povm.dim: must be at least 1")
    effects_obj = _as_object(_get(obj, "effects", "povm"), "povm.effects")
    if not effects_obj:
        raise SchemaError("povm.effects: needs at least one effect")
    if "atoms" in obj:
        labels = _atom_labels(obj, "povm", len(effects_obj))
        if set(labels) != set(effects_obj):
            raise SchemaError("povm.atoms: labels do not match effect keys")
    effects = {
        label: _as_matrix(matrix, f"povm.effects[{label!r}]", rows=dim, cols=dim)
        for label, matrix in effects_obj.items()
    }
    return FramedPOVM(dim, effects, tol=tol)


def _parse_measure(obj: dict, tol: Tolerances) -> ScalarMeasure:
    atom_items = _as_list(_get(obj, "atoms", "measure"), "measure.atoms")
    labels = tuple(_as_string(a, f"measure.atoms[{i}]") for i, a in enumerate(atom_items))
    weight_items = _as_list(_get(obj, "weights", "measure"), "measure.weights")
    if len(weight_items) != len(labels):
        raise SchemaError(
            f"measure.weights: expected {len(labels)} weights, got {len(weight_items)}"
        )
    weights = [_as_real(w, f"measure.weights[{i}]") for i, w in enumerate(weight_items)]
    pairs = sorted(zip(labels, weights), key=lambda p: p[0])
    space = DiscreteBorelSpace(tuple(p[0] for p in pairs))
    return ScalarMeasure(space, tuple(p[1] for p in pairs))


def _parse_naimark(obj: dict, tol: Tolerances) -> NaimarkRepresentation:
    dim = _as_count(_get(obj, "dim", "naimark"), "naimark.dim")
    sharp_dim = _as_count(_get(obj, "sharp_dim", "naimark"), "naimark.sharp_dim")
    blocks_obj = _as_object(_get(obj, "blocks", "naimark"), "naimark.blocks")
    if not blocks_obj:
        raise SchemaError("naimark.blocks: needs at least one atom")
    labels = tuple(sorted(blocks_obj))
    dims = tuple(
        _as_count(blocks_obj[label], f"naimark.blocks[{label!r}]") for label in labels
    )
    if sum(dims) != sharp_dim:
        raise SchemaError(
            f"naimark.blocks: block dimensions sum to {sum(dims)}, expected sharp_dim={sharp_dim}"
        )
    if sharp_dim > 0:
        synthesis = _as_matrix(_get(obj, "V", "naimark"), "naimark.V", rows=dim, cols=sharp_dim)
    else:
        _get(obj, "V", "naimark")
        synthesis = np.zeros((dim, 0), dtype=np.complex128)
    space = DiscreteBorelSpace(labels)
    return NaimarkRepresentation(space, dim, dims, synthesis, None)


def _parse_report(obj: dict, tol: Tolerances) -> Report:
    command = _as_string(_get(obj, "command", "report"), "report.command")
    flags_obj = _as_object(_get(obj, "flags", "report"), "report.flags")
    flags = {
        key: _as_bool(value, f"report.flags[{key!r}]") for key, value in flags_obj.items()
    }
    residuals_obj = _as_object(_get(obj, "residuals", "report"), "report.residuals")
    residuals = {
        key: _as_real(value, f"report.residuals[{key!r}]")
        for key, value in residuals_obj.items()
    }
    bounds = None
    if "bounds" in obj:
        items = _as_list(obj["bounds"], "report.bounds")
        if len(items) != 2:
            raise SchemaError("report.bounds: expected [A, B]")
        bounds = (_as_real(items[0], "report.bounds[0]"), _as_real(items[1], "report.bounds[1]"))
    return Report(command=command, flags=flags, residuals=residuals, bounds=bounds)


_PARSERS = {
    "frame": _parse_frame,
    "fusion_frame": _parse_fusion_frame,
    "sampled_generalized_frame": _parse_sampled,
    "povm": _parse_povm,
    "measure": _parse_measure,
    "naimark": _parse_naimark,
    "report": _parse_report,
}


def parse(text: str, tol: Tolerances = DEFAULT_TOLERANCES) -> Document:
    """Parse and validate one document; numbers become double precision."""
    data = _load_json(text)
    obj = _as_object(data, "document")
    kind = _as_string(_get(obj, "kind", "document"), "document.kind")
    if kind not in _PARSERS:
        raise SchemaError(f"document.kind: unknown kind {kind!r}")
    payload = _PARSERS[kind](obj, tol)
    return Document(kind, payload)


# ---------------------------------------------------------------------------
# per-kind emission

def _emit_frame(frame: Frame) -> dict:
    return {
        "kind": "frame",
        "dim": frame.dim,
        "atoms": list(frame.space.atoms),
        "vectors": [_vector_out(v) for v in frame.vectors],
    }


def _emit_fusion_frame(fusion: FusionFrame) -> dict:
    return {
        "kind": "fusion_frame",
        "dim": fusion.dim,
        "members": [
            {"atom": atom, "weight": float(weight), "basis": _matrix_out(basis)}
            for atom, basis, weight in zip(fusion.space.atoms, fusion.bases, fusion.weights)
        ],
    }


def _emit_sampled(sampled: SampledGeneralizedFrame) -> dict:
    return {
        "kind": "sampled_generalized_frame",
        "dim": sampled.dim,
        "atoms": list(sampled.space.atoms),
        "mu": [float(w) for w in sampled.quadrature.weights],
        "samples": [_vector_out(v) for v in sampled.samples],
    }


def _emit_povm(povm: FramedPOVM) -> dict:
    return {
        "kind": "povm",
        "dim": povm.dim,
        "atoms": list(povm.space.atoms),
        "effects": {
            label: _matrix_out(op.matrix)
            for label, op in zip(povm.space.atoms, povm.effects)
        },
    }


def _emit_measure(measure: ScalarMeasure) -> dict:
    return {
        "kind": "measure",
        "atoms": list(measure.space.atoms),
        "weights": [float(w) for w in measure.weights],
    }


def _emit_naimark(rep: NaimarkRepresentation) -> dict:
    return {
        "kind": "naimark",
        "dim": rep.dim,
        "sharp_dim": rep.sharp_dim,
        "blocks": {
            label: int(block_dim)
            for label, block_dim in zip(rep.space.atoms, rep.block_dims)
        },
        "V": _matrix_out(rep.synthesis_map) if rep.sharp_dim else [],
    }


def _emit_report(report: Report) -> dict:
    out = {
        "kind": "report",
        "command": report.command,
        "flags": {key: bool(report.flags[key]) for key in sorted(report.flags)},
        "residuals": {key: float(report.residuals[key]) for key in sorted(report.residuals)},
    }
    if report.bounds is not None:
        out["bounds"] = [float(report.bounds[0]), float(report.bounds[1])]
    return out


_EMITTERS = {
    "frame": _emit_frame,
    "fusion_frame": _emit_fusion_frame,
    "sampled_generalized_frame": _emit_sampled,
    "povm": _emit_povm,
    "measure": _emit_measure,
    "naimark": _emit_naimark,
    "report": _emit_report,
}


def emit(document) -> str:
    """Canonical serialization of a document (or bare payload)."""
    if not isinstance(document, Document):
        document = document_for(document)
    return canonical_json(_EMITTERS[document.kind](document.payload))


# ---------------------------------------------------------------------------
# raw payloads for --vector / --unitary auxiliaries

def parse_vector_payload(text: str) -> np.ndarray:
    """A bare complex vector: [[re, im], ...]."""
    return _as_vector(_load_json(text), "vector")


def parse_vector_list_payload(text: str) -> list[np.ndarray]:
    """A bare list of complex vectors."""
    items = _as_list(_load_json(text), "vectors")
    return [_as_vector(v, f"vectors[{i}]") for i, v in enumerate(items)]


def parse_matrix_payload(text: str) -> np.ndarray:
    """A bare complex matrix: rows of [re, im] pairs."""
    return _as_matrix(_load_json(text), "matrix")


def emit_vector_payload(vector) -> str:
    return canonical_json(_vector_out(vector))


def emit_vector_list_payload(vectors) -> str:
    return canonical_json([_vector_out(v) for v in vectors])
