"""Minimal dilations: every framed POVM as a compressed spectral measure.

The dilation lives on an analysis space C^sharp_dim that is partitioned into
one coordinate block per atom, with block size equal to the rank of that
atom's effect. The spectral measure assigns to an event the coordinate
projection onto the union of its atoms' blocks, so it is projection-valued
and multiplicative exactly, by construction. The synthesis map V carries
block t isometrically scaled so that the t-block factor V_t satisfies
V_t V_t* = M({t}); stacking the blocks gives M(event) = V S(event) V*.

This finite block construction is minimal, and minimal representations are
unique up to a block unitary, which intertwining_unitary constructs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidPovmError,
    NumericalFailure,
    ValidationError,
)
from .measure import DiscreteBorelSpace, Event
from .operators import (
    DEFAULT_TOLERANCES,
    Tolerances,
    as_complex_matrix,
    as_complex_vector,
    hermitian_part,
    loewner_bounds,
    operator_norm,
    psd_sqrt,
    require_unitary,
    support_basis,
)
from .povm import FramedPOVM, validate


class NaimarkRepresentation:
    """Spectral measure on coordinate blocks plus the synthesis map V."""

    __slots__ = ("space", "dim", "sharp_dim", "block_dims", "synthesis_map", "block_isometries")

    def __init__(self, space: DiscreteBorelSpace, dim: int, block_dims, synthesis_map,
                 block_isometries=None):
        dims = tuple(int(b) for b in block_dims)
        if len(dims) != space.size:
            raise ValidationError("one block dimension per atom is required")
        if any(b < 0 for b in dims):
            raise ValidationError("block dimensions must be nonnegative")
        v = as_complex_matrix(synthesis_map)
        sharp_dim = sum(dims)
        if v.shape != (dim, sharp_dim):
            raise DimensionMismatchError(
                f"synthesis map has shape {v.shape}, expected ({dim}, {sharp_dim})"
            )
        v = v.copy()
        v.setflags(write=False)
        self.space = space
        self.dim = int(dim)
        self.sharp_dim = sharp_dim
        self.block_dims = dims
        self.synthesis_map = v
        self.block_isometries = (
            tuple(block_isometries) if block_isometries is not None else None
        )

    def block_range(self, index: int) -> slice:
        start = sum(self.block_dims[:index])
        return slice(start, start + self.block_dims[index])

    def block_of_synthesis(self, index: int) -> np.ndarray:
        return self.synthesis_map[:, self.block_range(index)]

    def spectral_indicator(self, event: Event) -> np.ndarray:
        """Diagonal of S(event): 1.0 on blocks of member atoms, else 0.0."""
        self.space.require_same(event.space)
        diag = np.zeros(self.sharp_dim)
        for i, label in enumerate(self.space.atoms):
            if label in event.members:
                diag[self.block_range(i)] = 1.0
        return diag

    def spectral_projection(self, event: Event) -> np.ndarray:
        return np.diag(self.spectral_indicator(event)).astype(np.complex128)

    def gram(self) -> np.ndarray:
        """V V*, which reproduces the total effect of the dilated POVM."""
        return self.synthesis_map @ self.synthesis_map.conj().T

    def __repr__(self) -> str:
        return f"NaimarkRepresentation(dim={self.dim}, sharp_dim={self.sharp_dim})"


@dataclass(frozen=True)
class VectorValuedMeasure:
    """One analysis-space vector per atom; events get the sum over members."""

    space: DiscreteBorelSpace
    values: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.space.size:
            raise ValidationError("one value per atom is required")

    def value_of(self, event: Event) -> np.ndarray:
        self.space.require_same(event.space)
        total = np.zeros_like(self.values[0])
        for label, value in zip(self.space.atoms, self.values):
            if label in event.members:
                total = total + value
        return total

    def total(self) -> np.ndarray:
        return self.value_of(self.space.whole())


def minimal_dilation(
    povm: FramedPOVM, tol: Tolerances = DEFAULT_TOLERANCES
) -> NaimarkRepresentation:
    """Construct the minimal representation, one block per atom.

    Block t has dimension rank(M({t})); its synthesis factor is
    psd_sqrt(M({t})) applied to the support basis, so V_t V_t* = M({t}).
    """
    report = validate(povm, tol)
    if not report.is_povm:
        raise InvalidPovmError("effects violate positivity within tolerance")
    blocks = []
    isometries = []
    dims = []
    for op in povm.effects:
        basis = support_basis(op, tol)
        root = psd_sqrt(op, tol)
        blocks.append(root.matrix @ basis)
        isometries.append(basis)
        dims.append(basis.shape[1])
    if sum(dims):
        synthesis = np.concatenate(blocks, axis=1)
    else:
        synthesis = np.zeros((povm.dim, 0), dtype=np.complex128)
    return NaimarkRepresentation(povm.space, povm.dim, dims, synthesis, isometries)


@dataclass(frozen=True)
class DilationReport:
    """Residuals of M(event) = V S(event) V* and the bound transport."""

    max_effect_residual: float
    total_residual: float
    gram_bounds: tuple[float, float]
    povm_bounds: tuple[float, float]
    bounds_violation: float
    tight_residual: float | None
    minimal: bool
    scale: float
    ok: bool


def verify_dilation(
    povm: FramedPOVM, rep: NaimarkRepresentation, tol: Tolerances = DEFAULT_TOLERANCES
) -> DilationReport:
    """Check the dilation identity atomwise and the Loewner bounds of V V*."""
    povm.space.require_same(rep.space)
    if povm.dim != rep.dim:
        raise DimensionMismatchError(
            f"POVM dimension {povm.dim} does not match representation dimension {rep.dim}"
        )
    worst = 0.0
    for i, op in enumerate(povm.effects):
        block = rep.block_of_synthesis(i)
        reconstructed = block @ block.conj().T
        worst = max(worst, operator_norm(op.matrix - reconstructed))
    gram = rep.gram()
    report = validate(povm, tol)
    lo, hi = report.residuals["lambda_min"], report.residuals["lambda_max"]
    glo, ghi = loewner_bounds(hermitian_part(gram))
    total_residual = operator_norm(gram - sum(op.matrix for op in povm.effects))
    bounds_violation = max(0.0, lo - glo, ghi - hi)
    scale = max(1.0, hi)
    tight_residual = None
    if report.tight and report.bounds is not None:
        eye = np.eye(povm.dim, dtype=np.complex128)
        tight_residual = operator_norm(gram - report.bounds.lower * eye)
    threshold = tol.dil * scale
    minimal = check_minimality(rep, tol)
    ok = (
        worst <= threshold
        and bounds_violation <= threshold
        and (tight_residual is None or tight_residual <= threshold)
    )
    return DilationReport(
        max_effect_residual=worst,
        total_residual=total_residual,
        gram_bounds=(glo, ghi),
        povm_bounds=(lo, hi),
        bounds_violation=bounds_violation,
        tight_residual=tight_residual,
        minimal=minimal,
        scale=scale,
        ok=ok,
    )


def check_minimality(rep: NaimarkRepresentation, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff every synthesis block has full column rank, i.e. the analysis
    vectors S(event) V* f span the whole analysis space."""
    for i, block_dim in enumerate(rep.block_dims):
        if block_dim == 0:
            continue
        block = rep.block_of_synthesis(i)
        singulars = np.linalg.svd(block, compute_uv=False)
        if singulars.size == 0 or singulars[0] <= 0.0:
            return False
        rank = int(np.count_nonzero(singulars > tol.rank * singulars[0]))
        if rank != block_dim:
            return False
    return True


def analysis_measure(rep: NaimarkRepresentation, signal) -> VectorValuedMeasure:
    """Measure whose value at atom t is the t-block component of V* f."""
    f = as_complex_vector(signal)
    if f.shape[0] != rep.dim:
        raise DimensionMismatchError(f"signal has length {f.shape[0]}, expected {rep.dim}")
    adjoint = rep.synthesis_map.conj().T @ f
    values = []
    for i in range(rep.space.size):
        value = np.zeros(rep.sharp_dim, dtype=np.complex128)
        block = rep.block_range(i)
        value[block] = adjoint[block]
        value.setflags(write=False)
        values.append(value)
    return VectorValuedMeasure(rep.space, tuple(values))


def synthesize_measure(rep: NaimarkRepresentation, rho: VectorValuedMeasure) -> np.ndarray:
    """Apply V to the total of the measure over the whole space."""
    rep.space.require_same(rho.space)
    total = rho.total()
    if total.shape[0] != rep.sharp_dim:
        raise DimensionMismatchError(
            f"measure values have length {total.shape[0]}, expected {rep.sharp_dim}"
        )
    return rep.synthesis_map @ total


def intertwining_unitary(
    rep1: NaimarkRepresentation,
    rep2: NaimarkRepresentation,
    unitary=None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Block unitary carrying rep1's analysis space onto rep2's.

    For minimal representations of POVMs conjugate under `unitary` (identity
    when omitted), each block of rep2's synthesis map equals the conjugated
    rep1 block up to a right unitary factor; the factor is recovered per block
    by a pseudo-inverse and snapped to the nearest unitary via its polar part.
    """
    rep1.space.require_same(rep2.space)
    if rep1.block_dims != rep2.block_dims:
        raise NumericalFailure(
            "block dimensions differ; the representations are not intertwinable"
        )
    if unitary is None:
        u = np.eye(rep1.dim, dtype=np.complex128)
    else:
        u = as_complex_matrix(unitary)
    if u.shape != (rep2.dim, rep1.dim):
        raise DimensionMismatchError(
            f"unitary has shape {u.shape}, expected ({rep2.dim}, {rep1.dim})"
        )
    result = np.zeros((rep2.sharp_dim, rep1.sharp_dim), dtype=np.complex128)
    for i, block_dim in enumerate(rep1.block_dims):
        if block_dim == 0:
            continue
        source = rep1.block_of_synthesis(i)
        target = rep2.block_of_synthesis(i)
        try:
            factor = np.linalg.pinv(target) @ (u @ source)
            left, _, right = np.linalg.svd(factor)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"intertwiner construction failed: {exc}") from exc
        result[rep2.block_range(i), rep1.block_range(i)] = left @ right
    return result


@dataclass(frozen=True)
class TransportResult:
    """Conjugated POVM, its dilation, and the analysis-space intertwiner."""

    povm: FramedPOVM
    representation: NaimarkRepresentation
    intertwiner: np.ndarray
    diagram_residual: float
    spectral_residual: float


def transport(
    unitary, povm: FramedPOVM, tol: Tolerances = DEFAULT_TOLERANCES
) -> TransportResult:
    """Conjugate a POVM by a unitary and rebuild its minimal dilation.

    Returns the conjugated POVM, its representation, and a unitary between
    the analysis spaces making the synthesis diagram commute:
    unitary . V1 = V2 . intertwiner.
    """
    u = require_unitary(unitary, tol)
    if u.shape[0] != povm.dim:
        raise DimensionMismatchError(
            f"unitary has dimension {u.shape[0]}, POVM has dimension {povm.dim}"
        )
    conjugated = FramedPOVM(
        povm.dim,
        [hermitian_part(u @ op.matrix @ u.conj().T) for op in povm.effects],
        atoms=povm.space.atoms,
        tol=tol,
    )
    rep1 = minimal_dilation(povm, tol)
    rep2 = minimal_dilation(conjugated, tol)
    inter = intertwining_unitary(rep1, rep2, u, tol)
    diagram = operator_norm(u @ rep1.synthesis_map - rep2.synthesis_map @ inter)
    spectral = 0.0
    for label in povm.space.atoms:
        event1 = rep1.space.atom_event(label)
        s1 = rep1.spectral_projection(event1)
        s2 = rep2.spectral_projection(rep2.space.atom_event(label))
        spectral = max(spectral, operator_norm(inter @ s1 @ inter.conj().T - s2))
    return TransportResult(
        povm=conjugated,
        representation=rep2,
        intertwiner=inter,
        diagram_residual=diagram,
        spectral_residual=spectral,
    )
