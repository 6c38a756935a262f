"""Uniform-multiplicity decomposition of a framed POVM.

Atoms are grouped by the rank of their effect; the analysis-space coordinates
of all blocks of rank n form an invariant subspace, and restricting the
synthesis map to it yields a component POVM whose every atom has block
dimension exactly n. The components reassemble the original measure and are
pairwise orthogonal in the analysis space. The multiset of (rank, atom set)
pairs is a unitary-conjugation invariant of the POVM.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .measure import ScalarMeasure
from .operators import (
    DEFAULT_TOLERANCES,
    Projection,
    Tolerances,
    hermitian_part,
    loewner_bounds,
    operator_norm,
    operator_rank,
)
from .povm import FramedPOVM, validate
from .naimark import NaimarkRepresentation, minimal_dilation


@dataclass(frozen=True)
class MultiplicityComponent:
    """One uniform-multiplicity summand of a POVM."""

    multiplicity: int
    atom_support: tuple[str, ...]
    coordinates: tuple[int, ...]
    projection: Projection
    synthesis_part: np.ndarray
    component_povm: FramedPOVM
    support_measure: ScalarMeasure


@dataclass(frozen=True)
class CanonicalSignature:
    """Sorted (multiplicity, atom support) pairs; unitarily invariant."""

    entries: tuple[tuple[int, tuple[str, ...]], ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for multiplicity, support in self.entries:
            if multiplicity < 1:
                raise ValidationError("signature multiplicities must be positive")
            if seen & set(support):
                raise ValidationError("signature supports must be disjoint")
            seen |= set(support)

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.entries)


def decompose(
    povm: FramedPOVM, tol: Tolerances = DEFAULT_TOLERANCES
) -> list[MultiplicityComponent]:
    """Split the POVM into components of uniform block dimension.

    Atoms with zero effect contribute no coordinates and appear in no
    component; verify_decomposition lists them.
    """
    rep = minimal_dilation(povm, tol)
    by_rank: dict[int, list[int]] = {}
    for i, block_dim in enumerate(rep.block_dims):
        if block_dim > 0:
            by_rank.setdefault(block_dim, []).append(i)
    components = []
    for rank in sorted(by_rank):
        atom_indices = by_rank[rank]
        support = tuple(rep.space.atoms[i] for i in atom_indices)
        coordinates: list[int] = []
        for i in atom_indices:
            block = rep.block_range(i)
            coordinates.extend(range(block.start, block.stop))
        indicator = np.zeros(rep.sharp_dim)
        indicator[coordinates] = 1.0
        projection = Projection(np.diag(indicator).astype(np.complex128), tol)
        synthesis_part = rep.synthesis_map * indicator
        effects = []
        for i in range(rep.space.size):
            block = rep.block_range(i)
            if i in atom_indices:
                factor = synthesis_part[:, block]
                effects.append(hermitian_part(factor @ factor.conj().T))
            else:
                effects.append(np.zeros((rep.dim, rep.dim), dtype=np.complex128))
        component_povm = FramedPOVM(rep.dim, effects, atoms=rep.space.atoms, tol=tol)
        counting = ScalarMeasure(
            rep.space,
            tuple(1.0 if a in support else 0.0 for a in rep.space.atoms),
        )
        components.append(
            MultiplicityComponent(
                multiplicity=rank,
                atom_support=support,
                coordinates=tuple(coordinates),
                projection=projection,
                synthesis_part=synthesis_part,
                component_povm=component_povm,
                support_measure=counting,
            )
        )
    return components


@dataclass(frozen=True)
class DecompositionReport:
    """Reassembly, orthogonality, and bound-sandwich residuals."""

    max_reassembly_residual: float
    max_cross_orthogonality: float
    sum_bounds: tuple[float, float]
    povm_bounds: tuple[float, float]
    bounds_violation: float
    zero_atoms: tuple[str, ...]
    scale: float
    ok: bool


def verify_decomposition(
    povm: FramedPOVM,
    components: list[MultiplicityComponent],
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> DecompositionReport:
    """Check atomwise reassembly, pairwise orthogonality of the synthesis
    parts, and that the summed totals stay inside the POVM's bounds."""
    worst_sum = 0.0
    for i, label in enumerate(povm.space.atoms):
        combined = np.zeros((povm.dim, povm.dim), dtype=np.complex128)
        for component in components:
            combined = combined + component.component_povm.effects[i].matrix
        worst_sum = max(worst_sum, operator_norm(povm.effects[i].matrix - combined))
    worst_cross = 0.0
    for a in range(len(components)):
        va = components[a].synthesis_part
        grama = va.conj().T @ va
        for b in range(a + 1, len(components)):
            vb = components[b].synthesis_part
            gramb = vb.conj().T @ vb
            worst_cross = max(worst_cross, operator_norm(grama @ gramb))
    total = np.zeros((povm.dim, povm.dim), dtype=np.complex128)
    for component in components:
        part = component.synthesis_part
        total = total + part @ part.conj().T
    sum_bounds = loewner_bounds(hermitian_part(total))
    report = validate(povm, tol)
    lo, hi = report.residuals["lambda_min"], report.residuals["lambda_max"]
    bounds_violation = max(0.0, lo - sum_bounds[0], sum_bounds[1] - hi)
    supported = set()
    for component in components:
        supported |= set(component.atom_support)
    zero_atoms = tuple(a for a in povm.space.atoms if a not in supported)
    scale = max(1.0, hi)
    threshold = tol.dil * scale
    ok = worst_sum <= threshold and worst_cross <= threshold and bounds_violation <= threshold
    return DecompositionReport(
        max_reassembly_residual=worst_sum,
        max_cross_orthogonality=worst_cross,
        sum_bounds=sum_bounds,
        povm_bounds=(lo, hi),
        bounds_violation=bounds_violation,
        zero_atoms=zero_atoms,
        scale=scale,
        ok=ok,
    )


def canonical_signature(
    povm: FramedPOVM, tol: Tolerances = DEFAULT_TOLERANCES
) -> CanonicalSignature:
    """Group atoms by effect rank; rank-0 atoms are omitted."""
    by_rank: dict[int, list[str]] = {}
    for label, op in zip(povm.space.atoms, povm.effects):
        rank = operator_rank(op, tol)
        if rank > 0:
            by_rank.setdefault(rank, []).append(label)
    entries = tuple((rank, tuple(by_rank[rank])) for rank in sorted(by_rank))
    return CanonicalSignature(entries)
