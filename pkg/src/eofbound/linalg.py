"""Complex bipartite linear algebra for 4xN states.

Subsystem A is always the 4-dimensional factor and always the first tensor
factor, so a composite index reads (a, b) -> a * dim_b + b.  Every function
here is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .validation import (
    HERMITICITY_TOL,
    ValidationError,
    as_complex_matrix,
    check_density_matrix,
    check_hermitian,
    check_unit_norm,
)

DIM_A = 4

# Eigenvalues of Gram matrices this far below zero are round-off, not signal.
GRAM_CLIP = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    """Validated bipartite density matrix with A the 4-dimensional factor."""

    matrix: np.ndarray = field(repr=False)
    dim_a: int
    dim_b: int

    @classmethod
    def from_matrix(cls, matrix, dim_b: int | None = None) -> "DensityMatrix":
        """Validate ``matrix`` as a (4N x 4N) state; infer N from the shape."""
        arr = as_complex_matrix(matrix, "density matrix")
        if dim_b is None:
            if arr.shape[0] % DIM_A != 0:
                raise ValidationError(
                    f"matrix dimension {arr.shape[0]} is not a multiple of {DIM_A}")
            dim_b = arr.shape[0] // DIM_A
        if dim_b < 1:
            raise ValidationError(f"dim_b must be >= 1, got {dim_b}")
        check_density_matrix(arr, DIM_A, dim_b)
        arr = arr.copy()
        arr.setflags(write=False)
        return cls(matrix=arr, dim_a=DIM_A, dim_b=dim_b)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)


def density_matrix(matrix, dim_b: int | None = None) -> DensityMatrix:
    """Shorthand for :meth:`DensityMatrix.from_matrix`."""
    return DensityMatrix.from_matrix(matrix, dim_b)


def hermitian_eigenvalues(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted descending.

    Rejects non-square or non-Hermitian input with a diagnostic.
    """
    arr = as_complex_matrix(m, "matrix")
    check_hermitian(arr, tol)
    return np.linalg.eigvalsh(arr)[::-1]


def singular_values(m) -> np.ndarray:
    """Singular values of a matrix, sorted descending.

    Computed by LAPACK SVD: the Gram-matrix square-root route loses half the
    digits on vanishing singular values (sqrt of eigenvalue round-off is
    ~1e-8), which is too coarse for the 1e-9 separability checks downstream.
    The Gram route survives as the independent oracle in the test suite.
    """
    arr = as_complex_matrix(m, "matrix")
    return np.linalg.svd(arr, compute_uv=False)


def gram_singular_values(m) -> np.ndarray:
    """Gram-matrix route: sqrt of Gram eigenvalues with tiny negatives clipped."""
    arr = as_complex_matrix(m, "matrix")
    if arr.shape[0] <= arr.shape[1]:
        gram = arr @ arr.conj().T
    else:
        gram = arr.conj().T @ arr
    eigs = np.linalg.eigvalsh(gram)
    if eigs.size and eigs.min() < -GRAM_CLIP:
        raise ValidationError(
            f"Gram matrix has eigenvalue {eigs.min():.3e} below -{GRAM_CLIP:.0e}")
    return np.sqrt(np.clip(eigs, 0.0, None))[::-1]


def trace_norm(m) -> float:
    """Sum of singular values; for Hermitian input the sum of |eigenvalues|."""
    arr = as_complex_matrix(m, "matrix")
    if arr.shape[0] == arr.shape[1] and np.abs(arr - arr.conj().T).max() <= HERMITICITY_TOL:
        return float(np.abs(np.linalg.eigvalsh(arr)).sum())
    return float(singular_values(arr).sum())


def partial_transpose_a(rho: DensityMatrix) -> np.ndarray:
    """Transpose the indices of subsystem A: out[(a,b),(a',b')] = rho[(a',b),(a,b')]."""
    da, db = rho.dims
    r4 = rho.matrix.reshape(da, db, da, db)
    return np.ascontiguousarray(r4.transpose(2, 1, 0, 3)).reshape(da * db, da * db)


def realign(rho: DensityMatrix) -> np.ndarray:
    """Reshuffle indices: out[(i,j),(k,l)] = rho[(i,k),(j,l)], shape (dimA^2, dimB^2)."""
    da, db = rho.dims
    r4 = rho.matrix.reshape(da, db, da, db)
    return np.ascontiguousarray(r4.transpose(0, 2, 1, 3)).reshape(da * da, db * db)


def apply_map_to_a(rho: DensityMatrix,
                   map_fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a linear map to the A factor blockwise.

    For each pair of B indices (b, b') the 4x4 block rho[(:,b),(:,b')] is
    passed through ``map_fn``.  Hermiticity-preserving maps yield Hermitian
    output.
    """
    da, db = rho.dims
    r4 = rho.matrix.reshape(da, db, da, db)
    out = np.zeros_like(r4)
    for b in range(db):
        for bp in range(db):
            block = map_fn(np.ascontiguousarray(r4[:, b, :, bp]))
            if block.shape != (da, da):
                raise ValidationError(
                    f"map returned shape {block.shape}, expected ({da}, {da})")
            out[:, b, :, bp] = block
    return out.reshape(da * db, da * db)


def schmidt_vector(psi, dims: tuple[int, int]) -> np.ndarray:
    """Schmidt coefficients of a pure 4xN state, sorted descending.

    These are the eigenvalues of the reduced density matrix of subsystem A.
    """
    da, db = dims
    if da != DIM_A:
        raise ValidationError(f"subsystem A must have dimension {DIM_A}, got {da}")
    vec = np.asarray(psi, dtype=complex).reshape(-1)
    if vec.size != da * db:
        raise ValidationError(
            f"state vector length {vec.size} does not match dims {dims}")
    if not np.all(np.isfinite(vec.real)) or not np.all(np.isfinite(vec.imag)):
        raise ValidationError("state vector contains non-finite entries")
    check_unit_norm(vec)
    amp = vec.reshape(da, db)
    reduced = amp @ amp.conj().T
    mu = np.linalg.eigvalsh(reduced)[::-1]
    mu = np.clip(mu.real, 0.0, 1.0)
    return mu / mu.sum()
