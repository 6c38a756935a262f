"""Dense complex Hermitian / positive-semidefinite operator calculus.

All matrices are numpy complex128 arrays. Real inputs are embedded in the
complex field so there is a single arithmetic path. Value types freeze their
arrays after validation; every operation is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateBasisError,
    InvalidIsometryError,
    NotInvertibleError,
    NumericalFailure,
    ValidationError,
)

_TOLERANCE_FIELDS = ("herm", "psd", "proj", "rank", "inv", "rec", "dil")


@dataclass(frozen=True)
class Tolerances:
    """Relative numerical thresholds used throughout the package.

    herm: Hermiticity residual, Frobenius norm, relative to max(1, ||A||_F).
    psd:  allowed negative eigenvalue mass relative to max(1, ||A||_2).
    proj: idempotency/orthogonality residual for projections, operator norm.
    rank: eigen/singular values below rank*largest count as exactly zero.
    inv:  invertibility floor, lambda_min > inv*lambda_max.
    rec:  perfect-reconstruction residual relative to the signal norm.
    dil:  dilation residual relative to max(1, ||M(Omega)||_2).
    """

    herm: float = 1e-10
    psd: float = 1e-9
    proj: float = 1e-9
    rank: float = 1e-10
    inv: float = 1e-12
    rec: float = 1e-8
    dil: float = 1e-9

    def __post_init__(self) -> None:
        for name in _TOLERANCE_FIELDS:
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0.0 or value >= 1.0:
                raise ValidationError(
                    f"tolerance {name!r} must be finite, nonnegative and < 1, got {value!r}"
                )


DEFAULT_TOLERANCES = Tolerances()


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def as_complex_matrix(entries) -> np.ndarray:
    """Coerce to a 2-D complex128 array with finite entries."""
    matrix = np.array(entries, dtype=np.complex128)
    if matrix.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got ndim={matrix.ndim}")
    if matrix.size and not np.all(np.isfinite(matrix)):
        raise ValidationError("finite entries: matrix contains NaN or Inf")
    return matrix


def as_complex_vector(entries, dim: int | None = None) -> np.ndarray:
    """Coerce to a 1-D complex128 array, optionally checking its length."""
    vector = np.array(entries, dtype=np.complex128)
    if vector.ndim != 1:
        raise ValidationError(f"expected a vector, got ndim={vector.ndim}")
    if vector.size and not np.all(np.isfinite(vector)):
        raise ValidationError("finite entries: vector contains NaN or Inf")
    if dim is not None and vector.shape[0] != dim:
        raise ValidationError(f"expected a vector of length {dim}, got {vector.shape[0]}")
    return vector


def frobenius_norm(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix))


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value; 0 for empty matrices."""
    if matrix.size == 0:
        return 0.0
    try:
        return float(np.linalg.norm(matrix, 2))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy SVD rarely fails
        raise NumericalFailure(f"singular value computation failed: {exc}") from exc


def hermiticity_residual(matrix: np.ndarray) -> float:
    return frobenius_norm(matrix - matrix.conj().T)


def hermitian_part(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.conj().T) / 2.0


def _eigh(matrix: np.ndarray):
    try:
        return np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc


def _eigvalsh(matrix: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigenvalue computation failed: {exc}") from exc


def _require_square(matrix: np.ndarray) -> np.ndarray:
    if matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] == 0:
        raise ValidationError("operator dimension must be at least 1")
    return matrix


def _require_hermitian(matrix: np.ndarray, tol: Tolerances) -> None:
    residual = hermiticity_residual(matrix)
    if residual > tol.herm * max(1.0, frobenius_norm(matrix)):
        raise ValidationError(f"hermiticity: residual {residual:.3e} exceeds tolerance")


class PositiveOperator:
    """Hermitian positive-semidefinite operator on C^dim.

    Construction validates Hermiticity (Frobenius residual relative to
    max(1, ||A||_F)) and near-positivity (smallest eigenvalue no more negative
    than psd tolerance times max(1, ||A||_2)). The stored matrix is read-only.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol: Tolerances = DEFAULT_TOLERANCES):
        m = _require_square(as_complex_matrix(matrix))
        _require_hermitian(m, tol)
        eigenvalues = _eigvalsh(m)
        scale = max(abs(float(eigenvalues[0])), abs(float(eigenvalues[-1])))
        if eigenvalues[0] < -tol.psd * max(1.0, scale):
            raise ValidationError(
                f"positivity: smallest eigenvalue {eigenvalues[0]:.3e} below tolerance"
            )
        self.matrix = _frozen(m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"PositiveOperator(dim={self.dim})"


class Projection:
    """Orthogonal projection: Hermitian and idempotent within tolerance."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol: Tolerances = DEFAULT_TOLERANCES):
        m = _require_square(as_complex_matrix(matrix))
        _require_hermitian(m, tol)
        residual = operator_norm(m @ m - m)
        if residual > tol.proj:
            raise ValidationError(f"idempotency: residual {residual:.3e} exceeds tolerance")
        self.matrix = _frozen(m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(float(np.trace(self.matrix).real)))

    def __repr__(self) -> str:
        return f"Projection(dim={self.dim}, rank={self.rank})"


def _coerce(operator) -> np.ndarray:
    if isinstance(operator, (PositiveOperator, Projection)):
        return operator.matrix
    return _require_square(as_complex_matrix(operator))


def loewner_bounds(operator) -> tuple[float, float]:
    """Smallest and largest eigenvalues of a Hermitian operator.

    The pair (lo, hi) certifies lo*I <= A <= hi*I in the positive-semidefinite
    ordering; for a frame operator these are the optimal frame bounds.
    """
    eigenvalues = _eigvalsh(_coerce(operator))
    return float(eigenvalues[0]), float(eigenvalues[-1])


def psd_sqrt(operator, tol: Tolerances = DEFAULT_TOLERANCES) -> PositiveOperator:
    """Positive square root; eigenvalues are clipped at 0 before rooting."""
    matrix = _coerce(operator)
    eigenvalues, vectors = _eigh(matrix)
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    result = (vectors * roots) @ vectors.conj().T
    return PositiveOperator(hermitian_part(result), tol)


def _fix_column_phase(column: np.ndarray, tol: Tolerances) -> np.ndarray:
    magnitudes = np.abs(column)
    peak = float(magnitudes.max())
    anchor = int(np.argmax(magnitudes > tol.rank * peak))
    pivot = column[anchor]
    return column * (abs(pivot) / pivot)


def support_basis(operator, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Orthonormal basis of the range, as a dim x rank matrix (rank 0 allowed).

    Deterministic: eigenpairs are ordered by descending eigenvalue and each
    column's phase is fixed so its first significant entry is real positive.
    Eigenvalues at or below rank tolerance times the largest count as zero.
    """
    matrix = _coerce(operator)
    eigenvalues, vectors = _eigh(matrix)
    cutoff = tol.rank * float(eigenvalues[-1])
    order = np.argsort(-eigenvalues, kind="stable")
    kept = [i for i in order if eigenvalues[i] > cutoff and eigenvalues[i] > 0.0]
    if not kept:
        return _frozen(np.zeros((matrix.shape[0], 0), dtype=np.complex128))
    columns = [_fix_column_phase(vectors[:, i], tol) for i in kept]
    return _frozen(np.column_stack(columns))


def operator_rank(operator, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    """Count of eigenvalues above rank tolerance times the largest."""
    eigenvalues = _eigvalsh(_coerce(operator))
    cutoff = tol.rank * float(eigenvalues[-1])
    return int(np.count_nonzero((eigenvalues > cutoff) & (eigenvalues > 0.0)))


def invert_positive(operator, tol: Tolerances = DEFAULT_TOLERANCES) -> PositiveOperator:
    """Inverse of a positive operator; near-singular input is rejected."""
    matrix = _coerce(operator)
    eigenvalues, vectors = _eigh(matrix)
    smallest, largest = float(eigenvalues[0]), float(eigenvalues[-1])
    if smallest <= tol.inv * largest or largest <= 0.0:
        raise NotInvertibleError(
            f"not invertible: lambda_min={smallest:.3e} within tolerance of zero"
        )
    result = (vectors / eigenvalues) @ vectors.conj().T
    return PositiveOperator(hermitian_part(result), tol)


def projector_from_columns(columns, tol: Tolerances = DEFAULT_TOLERANCES) -> Projection:
    """Orthogonal projection onto the span of the given columns."""
    matrix = as_complex_matrix(columns)
    if matrix.shape[1] == 0 or matrix.shape[0] == 0:
        raise DegenerateBasisError("projector needs at least one column")
    try:
        left, singulars, _ = np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"singular value decomposition failed: {exc}") from exc
    if singulars[-1] <= tol.rank * singulars[0]:
        raise DegenerateBasisError(
            f"columns are linearly dependent within tolerance (sigma_min={singulars[-1]:.3e})"
        )
    basis = left[:, : matrix.shape[1]]
    return Projection(hermitian_part(basis @ basis.conj().T), tol)


def orthonormalize_columns(columns, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Gram-Schmidt in column order, with one re-orthogonalization pass.

    Deterministic for a fixed input. Columns that become dependent within rank
    tolerance are rejected.
    """
    matrix = as_complex_matrix(columns).copy()
    if matrix.shape[1] == 0:
        return _frozen(matrix)
    basis: list[np.ndarray] = []
    for j in range(matrix.shape[1]):
        column = matrix[:, j]
        original = float(np.linalg.norm(column))
        for _ in range(2):
            for q in basis:
                column = column - q * np.vdot(q, column)
        norm = float(np.linalg.norm(column))
        if norm <= tol.rank * max(1.0, original):
            raise DegenerateBasisError(f"column {j} is dependent on the preceding columns")
        basis.append(column / norm)
    return _frozen(np.column_stack(basis))


def unitary_residual(matrix: np.ndarray) -> float:
    """Operator-norm distance of U U* and U* U from the identity."""
    m = _require_square(as_complex_matrix(matrix))
    eye = np.eye(m.shape[0], dtype=np.complex128)
    return max(operator_norm(m @ m.conj().T - eye), operator_norm(m.conj().T @ m - eye))


def require_unitary(matrix, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    m = _require_square(as_complex_matrix(matrix))
    residual = unitary_residual(m)
    if residual > tol.proj:
        raise InvalidIsometryError(f"not unitary: residual {residual:.3e} exceeds tolerance")
    return m
