"""Randomized instance generation and naive oracles for cross-checking.

The oracles deliberately avoid the optimized code paths: frame operators are
accumulated entry by entry in explicit loops, and event-level properties are
checked by exhaustive enumeration of the event algebra. Additivity residuals
are computed with exact telescoping sums (math.fsum over atom terms), so a
measure that is additive by construction reports a worst residual of exactly
zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import EventSpaceTooLargeError, ValidationError
from .frames import Frame, FusionFrame, SampledGeneralizedFrame
from .measure import Event
from .naimark import NaimarkRepresentation, minimal_dilation
from .operators import DEFAULT_TOLERANCES, Tolerances
from .povm import (
    FramedPOVM,
    induced_scalar_measure,
    povm_from_frame,
    povm_from_fusion_frame,
    povm_from_sampled_generalized_frame,
)

MAX_EXHAUSTIVE_ATOMS = 12


class InstanceGenerator:
    """Deterministic source of random frames, fusion frames, and POVMs.

    Generated families always have a frame operator whose smallest eigenvalue
    clears the conditioning floor; draws that miss it are resampled.
    """

    def __init__(self, seed: int = 0, dim_range=(2, 8), atom_range=(2, 16),
                 conditioning_floor: float = 1e-2):
        self.seed = seed
        self.dim_range = dim_range
        self.atom_range = atom_range
        self.conditioning_floor = conditioning_floor
        self.rng = np.random.default_rng(seed)

    def _labels(self, count: int) -> tuple[str, ...]:
        width = len(str(count - 1)) if count > 1 else 1
        return tuple(f"t{i:0{width}d}" for i in range(count))

    def complex_gaussian(self, *shape) -> np.ndarray:
        return (self.rng.standard_normal(shape) + 1j * self.rng.standard_normal(shape)) / np.sqrt(2)

    def vector(self, dim: int) -> np.ndarray:
        return self.complex_gaussian(dim)

    def unitary(self, dim: int) -> np.ndarray:
        q, r = np.linalg.qr(self.complex_gaussian(dim, dim))
        phases = np.diag(r).copy()
        phases = phases / np.abs(phases)
        return q * phases

    def _dim(self, dim: int | None, cap: int | None = None) -> int:
        if dim is not None:
            return dim
        hi = self.dim_range[1] if cap is None else min(self.dim_range[1], cap)
        return int(self.rng.integers(self.dim_range[0], max(self.dim_range[0], hi) + 1))

    def _count(self, count: int | None, minimum: int) -> int:
        if count is not None:
            return count
        lo = max(minimum, self.atom_range[0])
        hi = max(lo, self.atom_range[1])
        return int(self.rng.integers(lo, hi + 1))

    def _min_eig(self, matrix: np.ndarray) -> float:
        return float(np.linalg.eigvalsh(matrix)[0])

    def frame(self, dim: int | None = None, count: int | None = None) -> Frame:
        dim = self._dim(dim, cap=count)
        count = self._count(count, dim)
        for _ in range(1000):
            vectors = [self.vector(dim) for _ in range(count)]
            gram = sum(np.outer(v, v.conj()) for v in vectors)
            if self._min_eig(gram) >= self.conditioning_floor:
                return Frame(dim, vectors, atoms=self._labels(count))
        raise ValidationError("failed to draw a well-conditioned frame")

    def orthonormal_basis_frame(self, dim: int | None = None) -> Frame:
        dim = self._dim(dim)
        u = self.unitary(dim)
        return Frame(dim, [u[:, k] for k in range(dim)], atoms=self._labels(dim))

    def fusion_frame(self, dim: int | None = None, count: int | None = None) -> FusionFrame:
        dim = self._dim(dim, cap=2 * count if count is not None else None)
        count = self._count(count, max(2, (dim + 1) // 2))
        for _ in range(1000):
            members = []
            total = np.zeros((dim, dim), dtype=np.complex128)
            for _ in range(count):
                rank = int(self.rng.integers(1, min(3, dim) + 1))
                q, _ = np.linalg.qr(self.complex_gaussian(dim, rank))
                weight = float(self.rng.uniform(0.5, 1.5))
                members.append((q, weight))
                total = total + (weight * weight) * (q @ q.conj().T)
            if self._min_eig(total) >= self.conditioning_floor:
                return FusionFrame(dim, members, atoms=self._labels(count))
        raise ValidationError("failed to draw a well-conditioned fusion frame")

    def sampled_frame(self, dim: int | None = None, count: int | None = None
                      ) -> SampledGeneralizedFrame:
        dim = self._dim(dim, cap=count)
        count = self._count(count, dim)
        for _ in range(1000):
            samples = [self.vector(dim) for _ in range(count)]
            weights = [float(self.rng.uniform(0.25, 2.0)) for _ in range(count)]
            total = sum(w * np.outer(v, v.conj()) for v, w in zip(samples, weights))
            if self._min_eig(total) >= self.conditioning_floor:
                return SampledGeneralizedFrame(
                    dim, samples, weights, atoms=self._labels(count)
                )
        raise ValidationError("failed to draw a well-conditioned sampled frame")

    def povm(self, dim: int | None = None, count: int | None = None,
             kind: str | None = None) -> FramedPOVM:
        if kind is None:
            kind = ("frame", "fusion", "sampled")[int(self.rng.integers(0, 3))]
        if kind == "frame":
            return povm_from_frame(self.frame(dim, count))
        if kind == "fusion":
            return povm_from_fusion_frame(self.fusion_frame(dim, count))
        if kind == "sampled":
            return povm_from_sampled_generalized_frame(self.sampled_frame(dim, count))
        raise ValidationError(f"unknown POVM kind {kind!r}")


def brute_force_frame_operator(frame) -> np.ndarray:
    """Entrywise accumulation of outer products / weighted projections.

    Independent of the frames module on purpose; used to freeze expected
    values for derived test cases.
    """
    dim = frame.dim
    total = np.zeros((dim, dim), dtype=np.complex128)
    if isinstance(frame, Frame):
        for vec in frame.vectors:
            for i in range(dim):
                for j in range(dim):
                    total[i, j] += vec[i] * np.conj(vec[j])
    elif isinstance(frame, FusionFrame):
        for basis, weight in zip(frame.bases, frame.weights):
            for i in range(dim):
                for j in range(dim):
                    acc = 0.0 + 0.0j
                    for c in range(basis.shape[1]):
                        acc += basis[i, c] * np.conj(basis[j, c])
                    total[i, j] += weight * weight * acc
    elif isinstance(frame, SampledGeneralizedFrame):
        for vec, weight in zip(frame.samples, frame.quadrature.weights):
            for i in range(dim):
                for j in range(dim):
                    total[i, j] += weight * vec[i] * np.conj(vec[j])
    else:
        raise TypeError(f"not a frame model: {type(frame).__name__}")
    return total


@dataclass(frozen=True)
class EventCheckReport:
    """Worst residual over the enumerated events, with a witness."""

    predicate: str
    worst_residual: float
    witness: tuple[tuple[str, ...], ...] | None
    events_checked: int


def _all_events(space) -> list[Event]:
    atoms = space.atoms
    events = []
    for mask in range(1 << len(atoms)):
        members = frozenset(a for i, a in enumerate(atoms) if mask >> i & 1)
        events.append(Event(space, members))
    return events


def _refuse_large(space) -> None:
    if space.size > MAX_EXHAUSTIVE_ATOMS:
        raise EventSpaceTooLargeError(
            f"exhaustive enumeration refused for {space.size} atoms "
            f"(limit {MAX_EXHAUSTIVE_ATOMS})"
        )


def _telescoped_entry_residual(groups: list[list[np.ndarray]]) -> float:
    """Exact residual of sum(groups[0]) - sum(groups[1]) - ... entry by entry."""
    plus = groups[0]
    minus = [m for g in groups[1:] for m in g]
    if not plus and not minus:
        return 0.0
    shape = (plus or minus)[0].shape
    worst = 0.0
    for index in np.ndindex(shape):
        real_terms = [float(m[index].real) for m in plus] + [-float(m[index].real) for m in minus]
        imag_terms = [float(m[index].imag) for m in plus] + [-float(m[index].imag) for m in minus]
        worst = max(worst, abs(math.fsum(real_terms)), abs(math.fsum(imag_terms)))
    return worst


def exhaustive_event_check(
    target,
    predicate: str,
    signal=None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> EventCheckReport:
    """Evaluate a measure-level property over the whole event algebra.

    Predicates:
      additivity          exact telescoping residual of atom effects over all
                          disjoint event pairs (target: FramedPOVM)
      multiplicativity    ||M(e1 & e2) - M(e1) M(e2)|| over all event pairs
                          (target: FramedPOVM or NaimarkRepresentation; the
                          latter uses its exact coordinate indicators)
      mu_f_additivity     exact telescoping residual of the induced scalar
                          measure's weights; requires `signal`
    """
    space = target.space
    _refuse_large(space)
    events = _all_events(space)
    worst = -1.0
    witness = None
    checked = 0

    if predicate == "additivity":
        if not isinstance(target, FramedPOVM):
            raise ValidationError("additivity predicate expects a FramedPOVM")
        mats = {a: op.matrix for a, op in zip(space.atoms, target.effects)}
        for e1, e2 in combinations(events, 2):
            if not e1.is_disjoint(e2):
                continue
            union = e1.union(e2)
            residual = _telescoped_entry_residual(
                [
                    [mats[a] for a in union.sorted_members()],
                    [mats[a] for a in e1.sorted_members()],
                    [mats[a] for a in e2.sorted_members()],
                ]
            )
            checked += 1
            if residual > worst:
                worst = residual
                witness = (e1.sorted_members(), e2.sorted_members())
        return EventCheckReport("additivity", max(worst, 0.0), witness, checked)

    if predicate == "mu_f_additivity":
        if signal is None:
            raise ValidationError("mu_f_additivity requires a signal")
        induced = induced_scalar_measure(target, signal)
        weights = dict(zip(space.atoms, induced.weights))
        for e1, e2 in combinations(events, 2):
            if not e1.is_disjoint(e2):
                continue
            union = e1.union(e2)
            terms = [weights[a] for a in union.sorted_members()]
            terms += [-weights[a] for a in e1.sorted_members()]
            terms += [-weights[a] for a in e2.sorted_members()]
            residual = abs(math.fsum(terms))
            checked += 1
            if residual > worst:
                worst = residual
                witness = (e1.sorted_members(), e2.sorted_members())
        return EventCheckReport("mu_f_additivity", max(worst, 0.0), witness, checked)

    if predicate == "multiplicativity":
        if isinstance(target, NaimarkRepresentation):
            indicators = {e: target.spectral_indicator(e) for e in events}
            for e1 in events:
                for e2 in events:
                    lhs = indicators[e1.intersect(e2)]
                    rhs = indicators[e1] * indicators[e2]
                    residual = float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0
                    checked += 1
                    if residual > worst:
                        worst = residual
                        witness = (e1.sorted_members(), e2.sorted_members())
            return EventCheckReport("multiplicativity", max(worst, 0.0), witness, checked)
        if isinstance(target, FramedPOVM):
            from .povm import effect

            values = {e: effect(target, e) for e in events}
            for e1 in events:
                for e2 in events:
                    lhs = values[e1.intersect(e2)]
                    rhs = values[e1] @ values[e2]
                    residual = float(np.linalg.norm(lhs - rhs, 2)) if lhs.size else 0.0
                    checked += 1
                    if residual > worst:
                        worst = residual
                        witness = (e1.sorted_members(), e2.sorted_members())
            return EventCheckReport("multiplicativity", max(worst, 0.0), witness, checked)
        raise ValidationError("multiplicativity expects a FramedPOVM or NaimarkRepresentation")

    raise ValidationError(f"unknown predicate {predicate!r}")


def shuffled_dilation(
    povm: FramedPOVM, rng: np.random.Generator, tol: Tolerances = DEFAULT_TOLERANCES
) -> NaimarkRepresentation:
    """Alternative minimal dilation of the same POVM: every block of the
    canonical construction is rotated by an independent random unitary."""
    rep = minimal_dilation(povm, tol)
    blocks = []
    isometries = []
    for i, block_dim in enumerate(rep.block_dims):
        source = rep.block_of_synthesis(i)
        basis = rep.block_isometries[i]
        if block_dim == 0:
            blocks.append(source)
            isometries.append(basis)
            continue
        gaussian = rng.standard_normal((block_dim, block_dim)) + 1j * rng.standard_normal(
            (block_dim, block_dim)
        )
        q, r = np.linalg.qr(gaussian)
        rotation = q * (np.diag(r) / np.abs(np.diag(r)))
        blocks.append(source @ rotation)
        isometries.append(basis @ rotation)
    synthesis = (
        np.concatenate(blocks, axis=1)
        if rep.sharp_dim
        else np.zeros((rep.dim, 0), dtype=np.complex128)
    )
    return NaimarkRepresentation(rep.space, rep.dim, rep.block_dims, synthesis, isometries)
