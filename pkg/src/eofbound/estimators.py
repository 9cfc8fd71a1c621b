"""Scikit-learn compatible wrappers around the monotone and bound machinery.

``MonotoneFeatures`` is a stateless transformer mapping batches of density
matrices to monotone feature columns; ``FormationBound`` is an estimator
whose expensive ``fit`` builds (or loads) the bound surface and whose
``predict`` evaluates the EOF lower bound for states or precomputed
monotone pairs.  Both expose ``get_params``/``set_params`` through
``BaseEstimator`` so they compose with pipelines and model selection.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .bounds import BoundSurface, build_surface, load_or_build
from .linalg import DIM_A, DensityMatrix
from .monotones import (
    MonotonePair,
    monotone_pair,
    negativity,
    phi_negativity,
    realignment_negativity,
)
from .validation import ValidationError


def _as_states(X) -> list[DensityMatrix]:
    """Accept a DensityMatrix, a sequence of matrices, or an (n, d, d) array."""
    if isinstance(X, DensityMatrix):
        return [X]
    arr = np.asarray(X)
    if arr.ndim == 2:
        return [DensityMatrix.from_matrix(arr)]
    if arr.ndim == 3:
        return [DensityMatrix.from_matrix(m) for m in arr]
    if arr.ndim == 1 and arr.dtype == object:
        return [m if isinstance(m, DensityMatrix) else DensityMatrix.from_matrix(m)
                for m in X]
    raise ValidationError(
        "X must be a density matrix, a sequence of density matrices, or an "
        f"(n, d, d) array; got shape {arr.shape}")


class MonotoneFeatures(TransformerMixin, BaseEstimator):
    """Transform density matrices into monotone feature columns.

    Output columns are (n_phi, n_t, n_r); with ``use_realignment`` the n_t
    column is replaced by max(n_t, n_r), matching the refined constraint.
    """

    def __init__(self, use_realignment: bool = False):
        self.use_realignment = use_realignment

    def fit(self, X=None, y=None):
        # stateless; fit only validates the input when one is given
        if X is not None:
            _as_states(X)
        self.n_features_in_ = 0
        return self

    def transform(self, X) -> np.ndarray:
        states = _as_states(X)
        rows = np.empty((len(states), 3))
        for i, rho in enumerate(states):
            n_t = negativity(rho)
            n_r = realignment_negativity(rho)
            rows[i, 0] = phi_negativity(rho)
            rows[i, 1] = max(n_t, n_r) if self.use_realignment else n_t
            rows[i, 2] = n_r
        return rows

    def get_feature_names_out(self, input_features=None):
        middle = "n_t_max_n_r" if self.use_realignment else "n_t"
        return np.asarray(["n_phi", middle, "n_r"], dtype=object)


class FormationBound(BaseEstimator):
    """EOF lower-bound estimator backed by a precomputed bound surface.

    ``fit`` builds the surface from the grid parameters (or loads it from
    ``cache_dir``); it accepts and ignores ``X``/``y`` so it can sit in a
    pipeline.  ``predict`` maps density matrices, or an (n, 2) array of
    (n_phi, n_t) pairs, to certified lower bounds on the entanglement of
    formation.
    """

    def __init__(self, grid_n: int = 301, mu4_step: float = 1e-3,
                 use_realignment: bool = False, cache_dir=None,
                 workers: int | None = None):
        self.grid_n = grid_n
        self.mu4_step = mu4_step
        self.use_realignment = use_realignment
        self.cache_dir = cache_dir
        self.workers = workers

    def fit(self, X=None, y=None) -> "FormationBound":
        if self.cache_dir is not None:
            self.surface_ = load_or_build(self.cache_dir, self.grid_n,
                                          self.mu4_step, self.workers)
        else:
            self.surface_ = build_surface(self.grid_n, self.mu4_step, self.workers)
        return self

    @property
    def surface(self) -> BoundSurface:
        self._check_fitted()
        return self.surface_

    def _check_fitted(self) -> None:
        if not hasattr(self, "surface_"):
            raise NotFittedError(
                "This FormationBound instance is not fitted yet; call fit first.")

    def predict(self, X) -> np.ndarray:
        self._check_fitted()
        arr = np.asarray(X)
        if arr.ndim == 2 and arr.shape[1] == 2 and arr.dtype != object \
                and not np.iscomplexobj(arr):
            return np.asarray(self.surface_.evaluate(arr[:, 0], arr[:, 1]))
        states = _as_states(X)
        pairs = np.array([monotone_pair(rho, self.use_realignment) for rho in states])
        return np.asarray(self.surface_.evaluate(pairs[:, 0], pairs[:, 1]))

    def bound_for(self, rho: DensityMatrix) -> tuple[MonotonePair, float]:
        """Monotone pair and bound value for a single state."""
        self._check_fitted()
        pair = monotone_pair(rho, self.use_realignment)
        return pair, float(self.surface_.evaluate(pair.n_phi, pair.n_t))
