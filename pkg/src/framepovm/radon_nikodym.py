"""Base measure, operator-valued density, and rebasing of a POVM.

In finite dimensions every POVM factors through a scalar reference measure:
atom by atom, the effect is the density operator r(t) times the reference
weight. The trace of the effects is the canonical choice of reference (the
base measure), making every density trace-one. Rebasing against a
user-supplied measure is allowed whenever the measure's null atoms carry no
effect.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotAbsolutelyContinuousError
from .measure import ScalarMeasure
from .operators import (
    DEFAULT_TOLERANCES,
    PositiveOperator,
    Tolerances,
    hermitian_part,
    loewner_bounds,
    operator_norm,
)
from .povm import FramedPOVM, validate


@dataclass(frozen=True)
class RadonNikodymDecomposition:
    """Reference measure, densities on its support, and its null atoms."""

    base: ScalarMeasure
    derivative: dict[str, PositiveOperator]
    null_atoms: tuple[str, ...]

    def density_at(self, label: str) -> PositiveOperator:
        return self.derivative[label]


def base_measure(povm: FramedPOVM) -> ScalarMeasure:
    """Weight at atom t is the trace of the effect, clipped at zero."""
    weights = tuple(
        max(0.0, float(np.trace(op.matrix).real)) for op in povm.effects
    )
    return ScalarMeasure(povm.space, weights)


def rn_derivative(
    povm: FramedPOVM,
    measure: ScalarMeasure | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> RadonNikodymDecomposition:
    """Density r(t) = M({t}) / mu({t}) on atoms of positive weight.

    Defaults to the trace base measure, under which no atom with a nonzero
    effect can be null. A zero-weight atom with a nonzero effect breaks
    absolute continuity and is rejected by name.
    """
    if measure is None:
        measure = base_measure(povm)
    else:
        povm.space.require_same(measure.space)
    derivative: dict[str, PositiveOperator] = {}
    null_atoms: list[str] = []
    for label, op, weight in zip(povm.space.atoms, povm.effects, measure.weights):
        if weight > 0.0:
            derivative[label] = PositiveOperator(op.matrix / weight, tol)
        else:
            if operator_norm(op.matrix) > tol.psd:
                raise NotAbsolutelyContinuousError(
                    f"atom {label!r} has zero reference weight but a nonzero effect"
                )
            null_atoms.append(label)
    return RadonNikodymDecomposition(
        base=measure, derivative=derivative, null_atoms=tuple(null_atoms)
    )


@dataclass(frozen=True)
class RadonNikodymReport:
    """Atomwise reconstruction residuals and the bound check."""

    max_atom_residual: float
    max_null_norm: float
    reconstructed_bounds: tuple[float, float]
    povm_bounds: tuple[float, float]
    bounds_violation: float
    ok: bool


def verify_rn(
    povm: FramedPOVM,
    decomposition: RadonNikodymDecomposition,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> RadonNikodymReport:
    """Check M({t}) = r(t) mu({t}) atomwise and the reassembled bounds."""
    povm.space.require_same(decomposition.base.space)
    worst = 0.0
    worst_null = 0.0
    total = np.zeros((povm.dim, povm.dim), dtype=np.complex128)
    for label, op, weight in zip(
        povm.space.atoms, povm.effects, decomposition.base.weights
    ):
        if label in decomposition.derivative:
            density = decomposition.derivative[label].matrix
            total = total + density * weight
            worst = max(worst, operator_norm(op.matrix - density * weight))
        else:
            worst_null = max(worst_null, operator_norm(op.matrix))
    reconstructed = loewner_bounds(hermitian_part(total))
    report = validate(povm, tol)
    lo, hi = report.residuals["lambda_min"], report.residuals["lambda_max"]
    bounds_violation = max(0.0, lo - reconstructed[0], reconstructed[1] - hi)
    ok = worst <= tol.psd and worst_null <= tol.psd and bounds_violation <= tol.psd * max(1.0, hi)
    return RadonNikodymReport(
        max_atom_residual=worst,
        max_null_norm=worst_null,
        reconstructed_bounds=reconstructed,
        povm_bounds=(lo, hi),
        bounds_violation=bounds_violation,
        ok=ok,
    )
