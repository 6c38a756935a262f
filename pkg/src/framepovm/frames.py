"""Frame models and their analysis/synthesis/dual machinery.

Three models: plain frames (families of nonzero vectors), fusion frames
(weighted subspaces), and sampled generalized frames (finitely many sample
vectors with quadrature weights standing in for an integral over a continuum
index set). Each is indexed by the atoms of a DiscreteBorelSpace and stores
its data in canonical atom order.

Inner products are conjugate-linear in the first argument, so the analysis
coefficient at atom k is <phi_k, f> = phi_k* f.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NotAFrameError, ValidationError
from .measure import DiscreteBorelSpace, ScalarMeasure
from .operators import (
    DEFAULT_TOLERANCES,
    PositiveOperator,
    Tolerances,
    as_complex_matrix,
    as_complex_vector,
    hermitian_part,
    invert_positive,
    loewner_bounds,
    operator_norm,
    orthonormalize_columns,
)


@dataclass(frozen=True)
class FrameBounds:
    """Optimal constants 0 < lower <= upper of the frame inequality."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not (0.0 < self.lower <= self.upper < float("inf")):
            raise ValidationError(
                f"frame bounds must satisfy 0 < A <= B < inf, got ({self.lower}, {self.upper})"
            )

    def is_tight(self, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        return abs(self.upper - self.lower) <= tol.psd * self.upper


def _default_atoms(count: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(count))


def _sorted_by_atom(atoms, payloads):
    pairs = sorted(zip(atoms, payloads), key=lambda pair: pair[0])
    return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)


class Frame:
    """Family of nonzero vectors in C^dim indexed by atoms."""

    __slots__ = ("dim", "space", "vectors")

    def __init__(self, dim: int, vectors, atoms=None):
        if dim < 1:
            raise ValidationError("frame dimension must be at least 1")
        vecs = [as_complex_vector(v, dim) for v in vectors]
        if not vecs:
            raise ValidationError("a frame needs at least one vector")
        labels = tuple(atoms) if atoms is not None else _default_atoms(len(vecs))
        if len(labels) != len(vecs):
            raise ValidationError("one atom label per frame vector is required")
        labels, vecs = _sorted_by_atom(labels, vecs)
        for label, vec in zip(labels, vecs):
            if float(np.linalg.norm(vec)) == 0.0:
                raise ValidationError(f"nonzero vector: frame vector at atom {label!r} is zero")
            vec.setflags(write=False)
        self.dim = int(dim)
        self.space = DiscreteBorelSpace(labels)
        self.vectors = tuple(vecs)

    def vector(self, label: str) -> np.ndarray:
        return self.vectors[self.space.index(label)]

    def __repr__(self) -> str:
        return f"Frame(dim={self.dim}, count={len(self.vectors)})"


class FusionFrame:
    """Weighted closed subspaces of C^dim, stored via orthonormal bases.

    Bases whose columns are merely independent are orthonormalized on
    ingestion (Gram-Schmidt in column order); already-orthonormal bases are
    stored unchanged.
    """

    __slots__ = ("dim", "space", "bases", "weights")

    def __init__(self, dim: int, members, atoms=None, tol: Tolerances = DEFAULT_TOLERANCES):
        if dim < 1:
            raise ValidationError("fusion frame dimension must be at least 1")
        entries = list(members)
        if not entries:
            raise ValidationError("a fusion frame needs at least one member")
        labels = tuple(atoms) if atoms is not None else _default_atoms(len(entries))
        if len(labels) != len(entries):
            raise ValidationError("one atom label per fusion member is required")
        labels, entries = _sorted_by_atom(labels, entries)
        bases: list[np.ndarray] = []
        weights: list[float] = []
        for label, (basis, weight) in zip(labels, entries):
            weight = float(weight)
            if not np.isfinite(weight) or weight < 0.0:
                raise ValidationError(f"nonnegative weight: atom {label!r} has {weight!r}")
            b = as_complex_matrix(basis)
            if b.shape[0] != dim:
                raise DimensionMismatchError(
                    f"basis at atom {label!r} has {b.shape[0]} rows, expected {dim}"
                )
            if b.shape[1] < 1 or b.shape[1] > dim:
                raise ValidationError(
                    f"basis at atom {label!r} must have between 1 and {dim} columns"
                )
            gram = b.conj().T @ b
            if operator_norm(gram - np.eye(b.shape[1])) > tol.proj:
                b = orthonormalize_columns(b, tol)
            else:
                b = b.copy()
            b.setflags(write=False)
            bases.append(b)
            weights.append(weight)
        self.dim = int(dim)
        self.space = DiscreteBorelSpace(labels)
        self.bases = tuple(bases)
        self.weights = tuple(weights)

    def basis(self, label: str) -> np.ndarray:
        return self.bases[self.space.index(label)]

    def weight(self, label: str) -> float:
        return self.weights[self.space.index(label)]

    def projection_matrix(self, label: str) -> np.ndarray:
        b = self.basis(label)
        return b @ b.conj().T

    def __repr__(self) -> str:
        return f"FusionFrame(dim={self.dim}, count={len(self.bases)})"


class SampledGeneralizedFrame:
    """Finite sampling of a continuum-indexed frame with quadrature weights.

    The caller owns quadrature accuracy; this class only carries the sampled
    vectors and the weights.
    """

    __slots__ = ("dim", "space", "quadrature", "samples")

    def __init__(self, dim: int, samples, quadrature, atoms=None):
        if dim < 1:
            raise ValidationError("sampled frame dimension must be at least 1")
        vecs = [as_complex_vector(v, dim) for v in samples]
        if not vecs:
            raise ValidationError("a sampled frame needs at least one sample")
        labels = tuple(atoms) if atoms is not None else _default_atoms(len(vecs))
        if len(labels) != len(vecs):
            raise ValidationError("one atom label per sample is required")
        if isinstance(quadrature, ScalarMeasure):
            space = DiscreteBorelSpace(labels)
            quadrature.space.require_same(space)
            labels, vecs = _sorted_by_atom(labels, vecs)
            measure = quadrature
        else:
            weights = tuple(float(w) for w in quadrature)
            if len(weights) != len(vecs):
                raise ValidationError("one quadrature weight per sample is required")
            labels, pairs = _sorted_by_atom(labels, list(zip(vecs, weights)))
            vecs = tuple(p[0] for p in pairs)
            measure = ScalarMeasure(DiscreteBorelSpace(labels), tuple(p[1] for p in pairs))
        for vec in vecs:
            vec.setflags(write=False)
        self.dim = int(dim)
        self.space = measure.space
        self.quadrature = measure
        self.samples = tuple(vecs)

    def sample(self, label: str) -> np.ndarray:
        return self.samples[self.space.index(label)]

    def __repr__(self) -> str:
        return f"SampledGeneralizedFrame(dim={self.dim}, count={len(self.samples)})"


FrameLike = Frame | FusionFrame | SampledGeneralizedFrame


def frame_operator(frame: FrameLike, tol: Tolerances = DEFAULT_TOLERANCES) -> PositiveOperator:
    """Sum of outer products (weighted projections for fusion frames)."""
    total = np.zeros((frame.dim, frame.dim), dtype=np.complex128)
    if isinstance(frame, Frame):
        for vec in frame.vectors:
            total = total + np.outer(vec, vec.conj())
    elif isinstance(frame, FusionFrame):
        for basis, weight in zip(frame.bases, frame.weights):
            total = total + (weight * weight) * (basis @ basis.conj().T)
    elif isinstance(frame, SampledGeneralizedFrame):
        for vec, weight in zip(frame.samples, frame.quadrature.weights):
            total = total + weight * np.outer(vec, vec.conj())
    else:
        raise TypeError(f"not a frame model: {type(frame).__name__}")
    return PositiveOperator(hermitian_part(total), tol)


def frame_bounds(frame: FrameLike, tol: Tolerances = DEFAULT_TOLERANCES) -> FrameBounds:
    """Optimal frame bounds: the extreme eigenvalues of the frame operator."""
    lo, hi = loewner_bounds(frame_operator(frame, tol))
    if hi <= 0.0 or lo <= tol.inv * hi:
        raise NotAFrameError(f"lower frame bound {lo:.3e} is zero within tolerance")
    return FrameBounds(lo, hi)


def analyze(frame: Frame | FusionFrame, signal) -> np.ndarray | tuple[np.ndarray, ...]:
    """Frame: coefficient <phi_k, f> per atom. Fusion frame: w_k P_k f per atom."""
    f = as_complex_vector(signal)
    if f.shape[0] != frame.dim:
        raise DimensionMismatchError(f"signal has length {f.shape[0]}, expected {frame.dim}")
    if isinstance(frame, Frame):
        return np.array([np.vdot(vec, f) for vec in frame.vectors], dtype=np.complex128)
    if isinstance(frame, FusionFrame):
        return tuple(
            weight * (basis @ (basis.conj().T @ f))
            for basis, weight in zip(frame.bases, frame.weights)
        )
    raise TypeError(f"analyze expects a Frame or FusionFrame, got {type(frame).__name__}")


def synthesize(frame: Frame | FusionFrame, coefficients) -> np.ndarray:
    """Frame: sum of a_k phi_k. Fusion frame: sum of w_k xi_k."""
    if isinstance(frame, Frame):
        coeffs = as_complex_vector(coefficients)
        if coeffs.shape[0] != len(frame.vectors):
            raise DimensionMismatchError(
                f"expected {len(frame.vectors)} coefficients, got {coeffs.shape[0]}"
            )
        total = np.zeros(frame.dim, dtype=np.complex128)
        for a, vec in zip(coeffs, frame.vectors):
            total = total + a * vec
        return total
    if isinstance(frame, FusionFrame):
        channels = [as_complex_vector(x, frame.dim) for x in coefficients]
        if len(channels) != len(frame.bases):
            raise DimensionMismatchError(
                f"expected {len(frame.bases)} channel signals, got {len(channels)}"
            )
        total = np.zeros(frame.dim, dtype=np.complex128)
        for weight, channel in zip(frame.weights, channels):
            total = total + weight * channel
        return total
    raise TypeError(f"synthesize expects a Frame or FusionFrame, got {type(frame).__name__}")


def canonical_dual(frame: Frame | FusionFrame, tol: Tolerances = DEFAULT_TOLERANCES):
    """Apply the inverse frame operator: dual vectors, or dual subspaces with
    the same weights. Together with the original family this gives perfect
    reconstruction in either analysis/synthesis order."""
    frame_bounds(frame, tol)  # raises NotAFrameError when singular
    inverse = invert_positive(frame_operator(frame, tol), tol).matrix
    if isinstance(frame, Frame):
        return Frame(frame.dim, [inverse @ v for v in frame.vectors], atoms=frame.space.atoms)
    if isinstance(frame, FusionFrame):
        members = [
            (orthonormalize_columns(inverse @ basis, tol), weight)
            for basis, weight in zip(frame.bases, frame.weights)
        ]
        return FusionFrame(frame.dim, members, atoms=frame.space.atoms, tol=tol)
    raise TypeError(f"canonical_dual expects a Frame or FusionFrame, got {type(frame).__name__}")
