"""Command-line pipeline over the document formats.

Every command reads one primary document (--in) plus optional auxiliaries
(--measure, --unitary, --vector) and writes one output to --out or stdout.
Exit codes: 0 success, 1 failed validation/verification, 2 unreadable input
(malformed JSON, schema violation, wrong kind, missing auxiliary), 3
numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace

import numpy as np

from .documents import (
    Document,
    Report,
    emit,
    emit_vector_list_payload,
    emit_vector_payload,
    parse,
    parse_matrix_payload,
    parse_vector_list_payload,
    parse_vector_payload,
)
from .duality import canonical_dual_povm
from .errors import (
    FramePovmError,
    NumericalFailure,
    ParseError,
    SchemaError,
    ValidationError,
)
from .frames import Frame, FusionFrame, canonical_dual, frame_operator
from .measure import ScalarMeasure
from .multiplicity import canonical_signature, decompose, verify_decomposition
from .naimark import (
    NaimarkRepresentation,
    VectorValuedMeasure,
    analysis_measure,
    minimal_dilation,
    synthesize_measure,
    transport,
    verify_dilation,
)
from .operators import (
    DEFAULT_TOLERANCES,
    Tolerances,
    hermitian_part,
    loewner_bounds,
    unitary_residual,
)
from .povm import (
    FramedPOVM,
    is_spectral,
    povm_from_frame,
    povm_from_fusion_frame,
    povm_from_sampled_generalized_frame,
    validate,
)
from .radon_nikodym import rn_derivative, verify_rn
from .frames import SampledGeneralizedFrame

COMMANDS = (
    "check",
    "bounds",
    "dual",
    "dilate",
    "decompose",
    "rn",
    "analyze",
    "synthesize",
    "isomorph",
)

_TOL_FLAGS = ("herm", "psd", "proj", "rank", "inv", "rec", "dil")


@dataclass(frozen=True)
class RunConfig:
    command: str
    in_path: str
    out_path: str | None = None
    measure_path: str | None = None
    unitary_path: str | None = None
    vector_path: str | None = None
    tolerances: Tolerances = DEFAULT_TOLERANCES
    seed: int = 0


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _write_output(text: str, config: RunConfig) -> None:
    if config.out_path:
        with open(config.out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_document(config: RunConfig) -> Document:
    return parse(_read_text(config.in_path), config.tolerances)


def _povm_of(document: Document, tol: Tolerances) -> FramedPOVM:
    payload = document.payload
    if isinstance(payload, FramedPOVM):
        return payload
    if isinstance(payload, Frame):
        return povm_from_frame(payload, tol)
    if isinstance(payload, FusionFrame):
        return povm_from_fusion_frame(payload, tol)
    if isinstance(payload, SampledGeneralizedFrame):
        return povm_from_sampled_generalized_frame(payload, tol)
    if isinstance(payload, NaimarkRepresentation):
        rep = payload
        effects = []
        for i in range(rep.space.size):
            block = rep.block_of_synthesis(i)
            effects.append(hermitian_part(block @ block.conj().T))
        return FramedPOVM(rep.dim, effects, atoms=rep.space.atoms, tol=tol)
    raise SchemaError(f"document kind {document.kind!r} cannot be interpreted as a POVM")


def _representation_of(document: Document, tol: Tolerances) -> NaimarkRepresentation:
    if isinstance(document.payload, NaimarkRepresentation):
        return document.payload
    return minimal_dilation(_povm_of(document, tol), tol)


def _cmd_check(document: Document, config: RunConfig) -> tuple[str, int]:
    tol = config.tolerances
    povm = _povm_of(document, tol)
    outcome = validate(povm, tol)
    spectral = is_spectral(povm, tol)
    report = Report(
        command="check",
        flags={
            "is_povm": outcome.is_povm,
            "framed": outcome.framed,
            "tight": outcome.tight,
            "probability": outcome.probability,
            "spectral": spectral.is_spectral,
        },
        residuals={
            "hermiticity": outcome.residuals["hermiticity"],
            "positivity": outcome.residuals["positivity"],
            "lambda_min": outcome.residuals["lambda_min"],
            "lambda_max": outcome.residuals["lambda_max"],
            "spectral_residual": spectral.residual,
        },
        bounds=(outcome.bounds.lower, outcome.bounds.upper) if outcome.bounds else None,
    )
    status = 0 if outcome.is_povm and outcome.framed else 1
    return emit(report), status


def _cmd_bounds(document: Document, config: RunConfig) -> tuple[str, int]:
    tol = config.tolerances
    payload = document.payload
    if isinstance(payload, (Frame, FusionFrame, SampledGeneralizedFrame)):
        lo, hi = loewner_bounds(frame_operator(payload, tol))
    else:
        povm = _povm_of(document, tol)
        lo, hi = loewner_bounds(sum(op.matrix for op in povm.effects))
    framed = hi > 0.0 and lo > tol.inv * hi
    tight = framed and abs(hi - lo) <= tol.psd * hi
    report = Report(
        command="bounds",
        flags={"framed": framed, "tight": tight},
        residuals={"lambda_min": lo, "lambda_max": hi},
        bounds=(lo, hi) if framed else None,
    )
    return emit(report), 0 if framed else 1


def _cmd_dual(document: Document, config: RunConfig) -> tuple[str, int]:
    tol = config.tolerances
    payload = document.payload
    if isinstance(payload, (Frame, FusionFrame)):
        return emit(canonical_dual(payload, tol)), 0
    pair = canonical_dual_povm(_povm_of(document, tol), tol)
    return emit(pair.dual), 0


def _cmd_dilate(document: Document, config: RunConfig) -> tuple[str, int]:
    tol = config.tolerances
    povm = _povm_of(document, tol)
    rep = minimal_dilation(povm, tol)
    outcome = verify_dilation(povm, rep, tol)
    if not (outcome.ok and outcome.minimal):
        print(
            f"error: dilation verification failed "
            f"(residual {outcome.max_effect_residual:.3e}, minimal={outcome.minimal})",
            file=sys.stderr,
        )
        return emit(rep), 1
    return emit(rep), 0


def _cmd_decompose(document: Document, config: RunConfig) -> tuple[str, int]:
    tol = config.tolerances
    povm = _povm_of(document, tol)
    components = decompose(povm, tol)
    signature = canonical_signature(povm, tol)
    outcome = verify_decomposition(povm, components, tol)
    multiplicity_of = {}
    for rank, support in signature.entries:
        for atom in support:
            multiplicity_of[atom] = float(rank)
    residuals = {
        "reassembly": outcome.max_reassembly_residual,
        "cross_orthogonality": outcome.max_cross_orthogonality,
        "bounds_violation": outcome.bounds_violation,
        "sum_lambda_min": outcome.sum_bounds[0],
        "sum_lambda_max": outcome.sum_bounds[1],
    }
    for atom in povm.space.atoms:
        residuals[f"multiplicity.{atom}"] = multiplicity_of.get(atom, 0.0)
    validation = validate(povm, tol)
    report = Report(
        command="decompose",
        flags={"ok": outcome.ok},
        residuals=residuals,
        bounds=(validation.bounds.lower, validation.bounds.upper) if validation.bounds else None,
    )
    return emit(report), 0 if outcome.ok else 1


def _cmd_rn(document: Document, config: RunConfig) -> tuple[str, int]:
    tol = config.tolerances
    povm = _povm_of(document, tol)
    measure = None
    if config.measure_path:
        measure_doc = parse(_read_text(config.measure_path), tol)
        if not isinstance(measure_doc.payload, ScalarMeasure):
            raise SchemaError("--measure must point to a measure document")
        measure = measure_doc.payload
    decomposition = rn_derivative(povm, measure, tol)
    outcome = verify_rn(povm, decomposition, tol)
    if not decomposition.derivative:
        raise ValidationError("derivative domain is empty: every atom is null")
    derivative_povm = FramedPOVM(
        povm.dim,
        {label: op.matrix for label, op in decomposition.derivative.items()},
        tol=tol,
    )
    if not outcome.ok:
        print(
            f"error: density verification failed (residual {outcome.max_atom_residual:.3e})",
            file=sys.stderr,
        )
        return emit(derivative_povm), 1
    return emit(derivative_povm), 0


def _require_vector_path(config: RunConfig) -> str:
    if not config.vector_path:
        raise SchemaError(f"{config.command} requires --vector")
    return config.vector_path


def _cmd_analyze(document: Document, config: RunConfig) -> tuple[str, int]:
    tol = config.tolerances
    text = _read_text(_require_vector_path(config))
    payload = document.payload
    if isinstance(payload, Frame):
        from .frames import analyze

        return emit_vector_payload(analyze(payload, parse_vector_payload(text))), 0
    if isinstance(payload, FusionFrame):
        from .frames import analyze

        return emit_vector_list_payload(analyze(payload, parse_vector_payload(text))), 0
    rep = _representation_of(document, tol)
    values = analysis_measure(rep, parse_vector_payload(text)).values
    return emit_vector_list_payload(values), 0


def _cmd_synthesize(document: Document, config: RunConfig) -> tuple[str, int]:
    tol = config.tolerances
    text = _read_text(_require_vector_path(config))
    payload = document.payload
    if isinstance(payload, Frame):
        from .frames import synthesize

        return emit_vector_payload(synthesize(payload, parse_vector_payload(text))), 0
    if isinstance(payload, FusionFrame):
        from .frames import synthesize

        return emit_vector_payload(synthesize(payload, parse_vector_list_payload(text))), 0
    rep = _representation_of(document, tol)
    values = parse_vector_list_payload(text)
    if len(values) != rep.space.size:
        raise SchemaError(
            f"expected {rep.space.size} per-atom values, got {len(values)}"
        )
    rho = VectorValuedMeasure(rep.space, tuple(np.asarray(v) for v in values))
    return emit_vector_payload(synthesize_measure(rep, rho)), 0


def _cmd_isomorph(document: Document, config: RunConfig) -> tuple[str, int]:
    tol = config.tolerances
    if not config.unitary_path:
        raise SchemaError("isomorph requires --unitary")
    unitary = parse_matrix_payload(_read_text(config.unitary_path))
    povm = _povm_of(document, tol)
    result = transport(unitary, povm, tol)
    validation = validate(povm, tol)
    scale = max(1.0, validation.residuals["lambda_max"])
    ok = (
        result.diagram_residual <= tol.dil * scale
        and result.spectral_residual <= tol.dil * scale
    )
    report = Report(
        command="isomorph",
        flags={"ok": ok},
        residuals={
            "diagram": result.diagram_residual,
            "spectral": result.spectral_residual,
            "unitarity": unitary_residual(unitary),
        },
    )
    return emit(report), 0 if ok else 1


_HANDLERS = {
    "check": _cmd_check,
    "bounds": _cmd_bounds,
    "dual": _cmd_dual,
    "dilate": _cmd_dilate,
    "decompose": _cmd_decompose,
    "rn": _cmd_rn,
    "analyze": _cmd_analyze,
    "synthesize": _cmd_synthesize,
    "isomorph": _cmd_isomorph,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    try:
        document = _load_document(config)
        text, status = _HANDLERS[config.command](document, config)
        _write_output(text, config)
        return status
    except (ParseError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FramePovmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framepovm",
        description="Validate and transform frame/POVM documents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        p = sub.add_parser(command)
        p.add_argument("--in", dest="in_path", required=True, help="primary input document")
        p.add_argument("--out", dest="out_path", help="output path (default: stdout)")
        p.add_argument("--measure", dest="measure_path", help="auxiliary measure document")
        p.add_argument("--unitary", dest="unitary_path", help="auxiliary unitary matrix payload")
        p.add_argument("--vector", dest="vector_path", help="auxiliary vector payload")
        for name in _TOL_FLAGS:
            p.add_argument(f"--tol-{name}", dest=f"tol_{name}", type=float)
    return parser


def main(argv=None) -> int:
    ns = _build_parser().parse_args(argv)
    overrides = {
        name: getattr(ns, f"tol_{name}")
        for name in _TOL_FLAGS
        if getattr(ns, f"tol_{name}") is not None
    }
    try:
        tolerances = replace(DEFAULT_TOLERANCES, **overrides)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    config = RunConfig(
        command=ns.command,
        in_path=ns.in_path,
        out_path=ns.out_path,
        measure_path=ns.measure_path,
        unitary_path=ns.unitary_path,
        vector_path=ns.vector_path,
        tolerances=tolerances,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
