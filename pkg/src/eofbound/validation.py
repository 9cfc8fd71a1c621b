"""Input validation helpers shared across the package.

All structural checks raise :class:`ValidationError` so callers (library,
estimators, CLI) can distinguish bad input from internal failures.
"""

from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
STATE_NORM_TOL = 1e-9
SIMPLEX_SUM_TOL = 1e-12
MONOTONE_MAX = 1.5


class ValidationError(ValueError):
    """An input violates a structural invariant (shape, Hermiticity, ...)."""


class InternalInconsistencyError(RuntimeError):
    """A computed quantity violates a bound that valid inputs guarantee."""


def as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex ndarray with finite entries."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def check_square(m: np.ndarray, name: str = "matrix") -> None:
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")


def hermiticity_defect(m: np.ndarray) -> float:
    """Max elementwise absolute deviation from Hermiticity."""
    return float(np.abs(m - m.conj().T).max()) if m.size else 0.0


def check_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL,
                    name: str = "matrix") -> None:
    check_square(m, name)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise ValidationError(
            f"{name} is not Hermitian: max |m - m^dag| = {defect:.3e} > {tol:.1e}")


def check_density_matrix(m: np.ndarray, dim_a: int, dim_b: int,
                         hermiticity_tol: float = HERMITICITY_TOL,
                         trace_tol: float = TRACE_TOL,
                         psd_tol: float = PSD_TOL) -> None:
    """Validate Hermiticity, unit trace and positivity of a bipartite state."""
    check_hermitian(m, hermiticity_tol, "density matrix")
    d = dim_a * dim_b
    if m.shape != (d, d):
        raise ValidationError(
            f"density matrix shape {m.shape} does not match dims ({dim_a}, {dim_b})")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > trace_tol:
        raise ValidationError(f"trace deviates from 1: trace = {tr:.12g}")
    lowest = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min())
    if lowest < -psd_tol:
        raise ValidationError(
            f"density matrix is not positive semidefinite: min eigenvalue {lowest:.3e}")


def as_schmidt_vector(mu, tol: float = SIMPLEX_SUM_TOL) -> np.ndarray:
    """Validate four probabilities summing to 1; return them sorted descending."""
    arr = np.asarray(mu, dtype=float)
    if arr.shape != (4,):
        raise ValidationError(f"Schmidt vector must have 4 entries, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("Schmidt vector contains non-finite entries")
    if arr.min() < -tol or arr.max() > 1.0 + tol:
        raise ValidationError(f"Schmidt coefficients outside [0, 1]: {arr}")
    total = float(arr.sum())
    if abs(total - 1.0) > tol:
        raise ValidationError(f"Schmidt coefficients sum to {total!r}, expected 1")
    return np.sort(np.clip(arr, 0.0, 1.0))[::-1]


def check_unit_norm(psi: np.ndarray, tol: float = STATE_NORM_TOL) -> None:
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > tol:
        raise ValidationError(f"state vector norm {norm!r} outside [1-{tol:g}, 1+{tol:g}]")


def check_in_range(x: float, lo: float, hi: float, name: str,
                   tol: float = 0.0) -> float:
    x = float(x)
    if not np.isfinite(x) or x < lo - tol or x > hi + tol:
        raise ValidationError(f"{name} = {x!r} outside [{lo:g}, {hi:g}]")
    return min(max(x, lo), hi)


def clip_monotone(value: float, name: str, zero_tol: float = 1e-9,
                  max_tol: float = 1e-9) -> float:
    """Clip round-off outside [0, 3/2]; larger excursions are real errors."""
    if value < -zero_tol:
        raise InternalInconsistencyError(f"{name} = {value!r} is negative beyond round-off")
    if value > MONOTONE_MAX + max_tol:
        raise InternalInconsistencyError(
            f"{name} = {value!r} exceeds the 4xN ceiling {MONOTONE_MAX}")
    return min(max(value, 0.0), MONOTONE_MAX)
