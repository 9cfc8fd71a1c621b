"""Constructors and random generators for 4xN test states."""

from __future__ import annotations

import numpy as np

from .linalg import DIM_A, DensityMatrix
from .validation import ValidationError, as_schmidt_vector


def canonical_pure_state(mu, dim_b: int = 4) -> np.ndarray:
    """Embed Schmidt coefficients as psi = sum_k sqrt(mu_k) |k>|k>.

    The A basis index k corresponds to angular momentum m = 3/2 - k, so the
    descending Schmidt order fixes the frame in which the pure-state closed
    forms hold.
    """
    mu = as_schmidt_vector(mu)
    if dim_b < DIM_A:
        raise ValidationError(f"dim_b must be >= {DIM_A} to hold Schmidt rank 4")
    psi = np.zeros(DIM_A * dim_b, dtype=complex)
    for k in range(DIM_A):
        psi[k * dim_b + k] = np.sqrt(mu[k])
    return psi


def pure_density(psi, dim_b: int | None = None) -> DensityMatrix:
    """Density matrix |psi><psi| of a unit-norm pure state."""
    vec = np.asarray(psi, dtype=complex).reshape(-1)
    if dim_b is None:
        if vec.size % DIM_A != 0:
            raise ValidationError(f"state length {vec.size} not a multiple of {DIM_A}")
        dim_b = vec.size // DIM_A
    return DensityMatrix.from_matrix(np.outer(vec, vec.conj()), dim_b)


def maximally_entangled(dim_b: int = 4) -> np.ndarray:
    """The 4xN maximally entangled state (Schmidt vector (1/4,1/4,1/4,1/4))."""
    return canonical_pure_state(np.full(4, 0.25), dim_b)


def random_schmidt_vector(rng: np.random.Generator) -> np.ndarray:
    """Uniform (flat Dirichlet) sample from the simplex, sorted descending."""
    return np.sort(rng.dirichlet(np.ones(4)))[::-1]


def random_pure_state(rng: np.random.Generator, dim_b: int = 4) -> np.ndarray:
    """Haar-random unit vector on the 4*dim_b dimensional Hilbert space."""
    z = rng.standard_normal(DIM_A * dim_b) + 1j * rng.standard_normal(DIM_A * dim_b)
    return z / np.linalg.norm(z)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unitary via QR with the standard phase fix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_product_state(rng: np.random.Generator, dim_b: int = 4) -> np.ndarray:
    a = rng.standard_normal(DIM_A) + 1j * rng.standard_normal(DIM_A)
    b = rng.standard_normal(dim_b) + 1j * rng.standard_normal(dim_b)
    return np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))


def random_separable(rng: np.random.Generator, dim_b: int = 4,
                     max_terms: int = 10) -> DensityMatrix:
    """Random mixture of at most ``max_terms`` product pure states."""
    k = int(rng.integers(1, max_terms + 1))
    weights = rng.dirichlet(np.ones(k))
    d = DIM_A * dim_b
    rho = np.zeros((d, d), dtype=complex)
    for w in weights:
        v = random_product_state(rng, dim_b)
        rho += w * np.outer(v, v.conj())
    return DensityMatrix.from_matrix(rho, dim_b)


def random_density(rng: np.random.Generator, dim_b: int = 4,
                   rank: int | None = None) -> DensityMatrix:
    """Random mixed state as a normalized Wishart matrix of given rank."""
    d = DIM_A * dim_b
    rank = rank or d
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix.from_matrix(rho, dim_b)


def random_ensemble(rng: np.random.Generator, dim_b: int = 4,
                    max_members: int = 8) -> tuple[np.ndarray, list[np.ndarray]]:
    """Random pure-state ensemble: probabilities and unit vectors."""
    k = int(rng.integers(1, max_members + 1))
    probs = rng.dirichlet(np.ones(k))
    kets = [random_pure_state(rng, dim_b) for _ in range(k)]
    return probs, kets


def ensemble_density(probs, kets, dim_b: int) -> DensityMatrix:
    d = DIM_A * dim_b
    rho = np.zeros((d, d), dtype=complex)
    for p, ket in zip(probs, kets):
        rho += p * np.outer(ket, np.conj(ket))
    return DensityMatrix.from_matrix(rho, dim_b)
