"""Operational entanglement monotones for 4xN states.

Three monotones are provided, each with a mixed-state (operational) form and
a pure-state closed form in the Schmidt coefficients:

* negativity, from the trace norm of the partial transpose,
* the positive-map negativity built from the antisymmetric-kernel map on the
  4-dimensional subsystem,
* realignment negativity, from the trace norm of the reshuffled matrix.

The pure-state closed forms hold in the canonical Schmidt frame (descending
coefficients on the computational diagonal, A basis ordered m = 3/2 - k).
The map-based monotone is *not* invariant under arbitrary local unitaries on
A; rotated frames give values at or below the canonical closed form, which
keeps every bound built from it valid.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .linalg import (
    DIM_A,
    DensityMatrix,
    apply_map_to_a,
    partial_transpose_a,
    realign,
    trace_norm,
)
from .validation import (
    ValidationError,
    as_complex_matrix,
    as_schmidt_vector,
    clip_monotone,
)


class MonotonePair(NamedTuple):
    """A point in the (n_phi, n_t) constraint plane."""

    n_phi: float
    n_t: float


def breuer_v() -> np.ndarray:
    """The fixed 4x4 kernel V with <j,m|V|j,m'> = (-1)^(j-m) delta_{m,-m'}.

    In the computational basis k = 0..3 identified with m = 3/2 - k this is
    the antidiagonal (1, -1, 1, -1) from top-right to bottom-left; V is
    unitary and antisymmetric.
    """
    v = np.zeros((4, 4))
    for k in range(4):
        v[k, 3 - k] = (-1.0) ** k
    return v


_V = breuer_v()
_V.setflags(write=False)


def phi_map(sigma) -> np.ndarray:
    """Positive-map kernel: Phi(sigma) = Tr(sigma) I - sigma - V sigma^T V^dag.

    Linear on all 4x4 matrices (blockwise application needs the off-diagonal
    blocks too); maps Hermitian input to Hermitian output with
    Tr Phi(sigma) = 2 Tr sigma.
    """
    arr = as_complex_matrix(sigma, "sigma")
    if arr.shape != (DIM_A, DIM_A):
        raise ValidationError(f"phi_map expects a 4x4 matrix, got {arr.shape}")
    return np.trace(arr) * np.eye(DIM_A) - arr - _V @ arr.T @ _V.conj().T


def negativity(rho: DensityMatrix) -> float:
    """n_T(rho) = (||rho^{T_A}|| - 1) / 2."""
    value = (trace_norm(partial_transpose_a(rho)) - 1.0) / 2.0
    return clip_monotone(value, "negativity")


def negativity_pure(mu) -> float:
    """Pure-state negativity n_T = [(sum_j sqrt(mu_j))^2 - 1] / 2."""
    mu = as_schmidt_vector(mu)
    value = (np.sqrt(mu).sum() ** 2 - 1.0) / 2.0
    return clip_monotone(float(value), "negativity_pure")


def phi_negativity(rho: DensityMatrix) -> float:
    """Map-based negativity, D = 4: n_Phi = 3 (||(I x Phi)(rho)|| / 2 - 1)."""
    d = DIM_A
    norm = trace_norm(apply_map_to_a(rho, phi_map))
    value = d * (d - 1) / 4.0 * (norm / (d - 2) - 1.0)
    return clip_monotone(value, "phi_negativity")


def phi_negativity_pure(mu) -> float:
    """Pure-state closed form n_Phi = 3 sqrt((mu1+mu4)(mu2+mu3)), mu descending."""
    mu = as_schmidt_vector(mu)
    value = 3.0 * np.sqrt((mu[0] + mu[3]) * (mu[1] + mu[2]))
    return clip_monotone(float(value), "phi_negativity_pure")


def realignment_negativity(rho: DensityMatrix) -> float:
    """n_R = (||R(rho)|| - 1) / 2, clipped to >= 0.

    Separable states can have ||R|| < 1, so unlike the other two monotones
    the raw value is routinely negative there; the clip is part of the
    definition rather than round-off repair.
    """
    value = (trace_norm(realign(rho)) - 1.0) / 2.0
    return clip_monotone(max(value, 0.0), "realignment_negativity")


def monotone_pair(rho: DensityMatrix, use_realignment: bool = False) -> MonotonePair:
    """The constraint-plane point (n_phi, n_t), optionally with n_t -> max(n_t, n_r)."""
    n_t = negativity(rho)
    if use_realignment:
        n_t = max(n_t, realignment_negativity(rho))
    return MonotonePair(n_phi=phi_negativity(rho), n_t=n_t)
