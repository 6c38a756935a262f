"""Canonical dual POVMs and the perfect-reconstruction identities.

The dual of a framed POVM keeps the primal's spectral measure and analysis
space; only the synthesis map changes, to (V V*)^{-1} V. Analyzing with one
member of the pair and synthesizing with the other recovers the signal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NotAFrameError
from .operators import (
    DEFAULT_TOLERANCES,
    PositiveOperator,
    Tolerances,
    as_complex_vector,
    hermitian_part,
    invert_positive,
)
from .povm import FramedPOVM, validate
from .naimark import (
    NaimarkRepresentation,
    analysis_measure,
    minimal_dilation,
    synthesize_measure,
)


@dataclass(frozen=True)
class DualPair:
    """Primal and dual POVMs with dilations sharing one spectral measure."""

    primal: FramedPOVM
    primal_representation: NaimarkRepresentation
    dual: FramedPOVM
    dual_representation: NaimarkRepresentation
    gram_inverse: PositiveOperator


def canonical_dual_povm(
    povm: FramedPOVM, tol: Tolerances = DEFAULT_TOLERANCES
) -> DualPair:
    """Dual effect at atom t is G M({t}) G with G = (V V*)^{-1}.

    The dual representation reuses the primal blocks verbatim with synthesis
    map G V, so the two measures are dual over every event. The dual's total
    effect is the inverse of the primal's, giving bounds within [1/B, 1/A].
    """
    report = validate(povm, tol)
    if not report.framed:
        raise NotAFrameError("POVM is not framed; the dual requires an invertible total effect")
    rep = minimal_dilation(povm, tol)
    gram_inverse = invert_positive(hermitian_part(rep.gram()), tol)
    g = gram_inverse.matrix
    dual_effects = [hermitian_part(g @ op.matrix @ g) for op in povm.effects]
    dual = FramedPOVM(povm.dim, dual_effects, atoms=povm.space.atoms, tol=tol)
    dual_rep = NaimarkRepresentation(
        rep.space, rep.dim, rep.block_dims, g @ rep.synthesis_map, None
    )
    return DualPair(
        primal=povm,
        primal_representation=rep,
        dual=dual,
        dual_representation=dual_rep,
        gram_inverse=gram_inverse,
    )


@dataclass(frozen=True)
class DualityReport:
    """Residuals of the two reconstruction identities for one signal."""

    analyze_primal_residual: float
    analyze_dual_residual: float
    signal_norm: float
    ok: bool


def verify_duality(
    pair: DualPair, signal, tol: Tolerances = DEFAULT_TOLERANCES
) -> DualityReport:
    """Analyze with one member, synthesize with the other, both orders."""
    f = as_complex_vector(signal)
    if f.shape[0] != pair.primal.dim:
        raise DimensionMismatchError(
            f"signal has length {f.shape[0]}, expected {pair.primal.dim}"
        )
    by_primal = synthesize_measure(
        pair.dual_representation, analysis_measure(pair.primal_representation, f)
    )
    by_dual = synthesize_measure(
        pair.primal_representation, analysis_measure(pair.dual_representation, f)
    )
    norm = float(np.linalg.norm(f))
    first = float(np.linalg.norm(by_primal - f))
    second = float(np.linalg.norm(by_dual - f))
    threshold = tol.rec * max(norm, 1e-300)
    return DualityReport(
        analyze_primal_residual=first,
        analyze_dual_residual=second,
        signal_norm=norm,
        ok=first <= threshold and second <= threshold,
    )
