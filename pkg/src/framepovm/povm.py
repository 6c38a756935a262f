"""Atom-indexed positive operator families and their axiom checks.

A framed POVM assigns a positive-semidefinite effect to every atom; the
effect of an event is the sum of its members' effects, recomputed in
canonical atom order on every call so that additivity never drifts through
caching. Framedness (a strictly positive lower bound on the total effect) is
a property reported by validate, not a construction invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .frames import Frame, FrameBounds, FusionFrame, SampledGeneralizedFrame
from .measure import DiscreteBorelSpace, Event, ScalarMeasure
from .operators import (
    DEFAULT_TOLERANCES,
    PositiveOperator,
    Tolerances,
    as_complex_vector,
    hermiticity_residual,
    loewner_bounds,
    operator_norm,
    _eigvalsh,
)


class FramedPOVM:
    """One positive effect per atom of a finite sample space."""

    __slots__ = ("space", "dim", "effects")

    def __init__(self, dim: int, effects, atoms=None, tol: Tolerances = DEFAULT_TOLERANCES):
        if dim < 1:
            raise ValidationError("operator dimension must be at least 1")
        if isinstance(effects, dict):
            labels = tuple(sorted(effects))
            mats = [effects[label] for label in labels]
        else:
            mats = list(effects)
            labels = tuple(atoms) if atoms is not None else tuple(str(i) for i in range(len(mats)))
            if len(labels) != len(mats):
                raise ValidationError("one atom label per effect is required")
            order = sorted(range(len(labels)), key=lambda i: labels[i])
            labels = tuple(labels[i] for i in order)
            mats = [mats[i] for i in order]
        if not mats:
            raise ValidationError("a POVM needs at least one effect")
        operators = []
        for label, mat in zip(labels, mats):
            op = mat if isinstance(mat, PositiveOperator) else PositiveOperator(mat, tol)
            if op.dim != dim:
                raise DimensionMismatchError(
                    f"effect at atom {label!r} has dimension {op.dim}, expected {dim}"
                )
            operators.append(op)
        self.space = DiscreteBorelSpace(labels)
        self.dim = int(dim)
        self.effects = tuple(operators)

    def effect_at(self, label: str) -> PositiveOperator:
        return self.effects[self.space.index(label)]

    def __repr__(self) -> str:
        return f"FramedPOVM(dim={self.dim}, atoms={self.space.size})"


@dataclass(frozen=True)
class PovmReport:
    """Outcome of the axiom checks; failures are fields, not exceptions."""

    is_povm: bool
    framed: bool
    bounds: FrameBounds | None
    tight: bool
    probability: bool
    spectral: bool | None
    residuals: dict[str, float]

    def __post_init__(self) -> None:
        if self.tight and not self.framed:
            raise ValidationError("report invariant: tight implies framed")
        if self.probability and not self.tight:
            raise ValidationError("report invariant: probability implies tight")


def povm_from_frame(frame: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> FramedPOVM:
    """Effect at atom k is the outer product phi_k phi_k*."""
    effects = [np.outer(v, v.conj()) for v in frame.vectors]
    return FramedPOVM(frame.dim, effects, atoms=frame.space.atoms, tol=tol)


def povm_from_fusion_frame(
    fusion: FusionFrame, tol: Tolerances = DEFAULT_TOLERANCES
) -> FramedPOVM:
    """Effect at atom k is w_k^2 times the projection onto the subspace."""
    effects = [
        (weight * weight) * (basis @ basis.conj().T)
        for basis, weight in zip(fusion.bases, fusion.weights)
    ]
    return FramedPOVM(fusion.dim, effects, atoms=fusion.space.atoms, tol=tol)


def povm_from_sampled_generalized_frame(
    sampled: SampledGeneralizedFrame, tol: Tolerances = DEFAULT_TOLERANCES
) -> FramedPOVM:
    """Effect at atom t is mu({t}) Phi(t) Phi(t)*, the quadrature discretization
    of the operator-valued integral over each event."""
    effects = [
        weight * np.outer(vec, vec.conj())
        for vec, weight in zip(sampled.samples, sampled.quadrature.weights)
    ]
    return FramedPOVM(sampled.dim, effects, atoms=sampled.space.atoms, tol=tol)


def effect(povm: FramedPOVM, event: Event) -> np.ndarray:
    """Sum of member effects in canonical atom order; zero for the empty event."""
    povm.space.require_same(event.space)
    total = np.zeros((povm.dim, povm.dim), dtype=np.complex128)
    for label, op in zip(povm.space.atoms, povm.effects):
        if label in event.members:
            total = total + op.matrix
    return total


def total_effect(povm: FramedPOVM) -> np.ndarray:
    return effect(povm, povm.space.whole())


def validate(povm: FramedPOVM, tol: Tolerances = DEFAULT_TOLERANCES) -> PovmReport:
    """Check positivity of every effect and the two-sided bound on the total.

    framed requires the lower bound to clear the invertibility floor; tight
    and probability refine framed. The spectral field is left unset here (see
    is_spectral).
    """
    worst_herm = 0.0
    worst_negative = 0.0
    is_povm = True
    for op in povm.effects:
        matrix = op.matrix
        herm = hermiticity_residual(matrix)
        worst_herm = max(worst_herm, herm)
        if herm > tol.herm * max(1.0, float(np.linalg.norm(matrix))):
            is_povm = False
        eigenvalues = _eigvalsh(matrix)
        scale = max(abs(float(eigenvalues[0])), abs(float(eigenvalues[-1])))
        negative = max(0.0, -float(eigenvalues[0]))
        worst_negative = max(worst_negative, negative)
        if float(eigenvalues[0]) < -tol.psd * max(1.0, scale):
            is_povm = False
    lo, hi = loewner_bounds(total_effect(povm))
    framed = is_povm and lo > tol.inv * hi and hi > 0.0
    tight = framed and abs(hi - lo) <= tol.psd * hi
    probability = tight and abs(lo - 1.0) <= tol.psd
    bounds = FrameBounds(lo, hi) if framed else None
    residuals = {
        "hermiticity": worst_herm,
        "positivity": worst_negative,
        "lambda_min": lo,
        "lambda_max": hi,
    }
    return PovmReport(
        is_povm=is_povm,
        framed=framed,
        bounds=bounds,
        tight=tight,
        probability=probability,
        spectral=None,
        residuals=residuals,
    )


@dataclass(frozen=True)
class SpectralCheck:
    is_spectral: bool
    residual: float


def is_spectral(povm: FramedPOVM, tol: Tolerances = DEFAULT_TOLERANCES) -> SpectralCheck:
    """Projection-valued, mutually orthogonal atoms summing to the identity.

    On a finite atomic space this is equivalent to multiplicativity of the
    measure over all event pairs.
    """
    worst = 0.0
    for op in povm.effects:
        m = op.matrix
        worst = max(worst, operator_norm(m @ m - m))
    for i, left in enumerate(povm.effects):
        for right in povm.effects[i + 1 :]:
            worst = max(worst, operator_norm(left.matrix @ right.matrix))
    eye = np.eye(povm.dim, dtype=np.complex128)
    worst = max(worst, operator_norm(total_effect(povm) - eye))
    return SpectralCheck(is_spectral=worst <= tol.proj, residual=worst)


def induced_scalar_measure(povm: FramedPOVM, signal) -> ScalarMeasure:
    """Weight at atom t is the quadratic form <f, M({t}) f>, clipped at 0."""
    f = as_complex_vector(signal)
    if f.shape[0] != povm.dim:
        raise DimensionMismatchError(f"signal has length {f.shape[0]}, expected {povm.dim}")
    weights = []
    for op in povm.effects:
        value = float(np.vdot(f, op.matrix @ f).real)
        weights.append(max(0.0, value))
    return ScalarMeasure(povm.space, tuple(weights))
