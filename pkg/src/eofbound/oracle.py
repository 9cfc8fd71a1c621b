"""Brute-force reference implementations over the Schmidt simplex.

Everything here validates closed forms and the sweep-based surface builder
by exhaustive search: entropy extrema over a dense grid of descending
probability 4-vectors, optionally refined by random perturbation with
re-projection onto the constraint manifolds.  The refinement never calls
the constraint solver being validated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .monotones import MonotonePair
from .validation import ValidationError

REFINE_ITERATIONS = 200
REFINE_HALVING = 25
POCS_ROUNDS = 30
TIGHT_FEASIBILITY = 1e-8
RESTART_SEEDS = 12
RESTART_CHAINS = 4


class InfeasibleError(RuntimeError):
    """No grid point satisfies every constraint within its band."""


class Constraint(NamedTuple):
    """A constraint F(mu) = target held within |F(mu) - target| <= band.

    ``fn`` must accept an (..., 4) array of descending Schmidt vectors.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    target: float
    band: float


def entropy_batch(mu: np.ndarray) -> np.ndarray:
    """Shannon entropy in bits along the last axis, 0 log 0 = 0."""
    mu = np.asarray(mu, dtype=float)
    safe = np.where(mu > 0.0, mu, 1.0)
    return -(np.where(mu > 0.0, mu * np.log2(safe), 0.0)).sum(axis=-1)


def negativity_batch(mu: np.ndarray) -> np.ndarray:
    """Pure-state negativity [(sum sqrt(mu))^2 - 1] / 2 along the last axis."""
    mu = np.asarray(mu, dtype=float)
    return (np.sqrt(np.clip(mu, 0.0, None)).sum(axis=-1) ** 2 - 1.0) / 2.0


def phi_negativity_batch(mu: np.ndarray) -> np.ndarray:
    """Pure-state map negativity 3 sqrt((m1+m4)(m2+m3)), rows descending."""
    mu = np.asarray(mu, dtype=float)
    return 3.0 * np.sqrt(np.clip((mu[..., 0] + mu[..., 3]) * (mu[..., 1] + mu[..., 2]),
                                 0.0, None))


def _pairing_batch(mu: np.ndarray, i: int, j: int) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    p = mu[..., i] + mu[..., j]
    return 3.0 * np.sqrt(np.clip(p * (1.0 - p), 0.0, None))


def phi_pairing_mid_batch(mu: np.ndarray) -> np.ndarray:
    """Map negativity с the (m1+m3)(m2+m4) coefficient grouping.

    Unsorted basis assignments realize these alternative groupings
    operationally, so region extremality scans all three.
    """
    return _pairing_batch(mu, 0, 2)


def phi_pairing_top_batch(mu: np.ndarray) -> np.ndarray:
    """Map negativity with the (m1+m2)(m3+m4) coefficient grouping."""
    return _pairing_batch(mu, 0, 1)


PHI_PAIRINGS = (phi_negativity_batch, phi_pairing_mid_batch, phi_pairing_top_batch)
_PAIRING_GROUPS = {
    phi_negativity_batch: ((0, 3), (1, 2)),
    phi_pairing_mid_batch: ((0, 2), (1, 3)),
    phi_pairing_top_batch: ((0, 1), (2, 3)),
}


def negativity_constraint(target: float, band: float) -> Constraint:
    return Constraint(negativity_batch, float(target), float(band))


def phi_negativity_constraint(target: float, band: float) -> Constraint:
    return Constraint(phi_negativity_batch, float(target), float(band))


def phi_band(n_phi: float, resolution: int) -> float:
    """A band wide enough to catch the map negativity's grid quantization.

    On the simplex grid the map negativity depends only on the pairing sum,
    a multiple of 1/resolution, so attainable values form discrete levels
    with spacing about (3 / 2 n_phi) sqrt(9 - 4 n_phi^2) / resolution; the
    default 2/resolution band can fall between levels at small n_phi.
    """
    base = 2.0 / resolution
    if n_phi <= 0.0:
        return base
    spacing = 1.5 * math.sqrt(max(9.0 - 4.0 * n_phi * n_phi, 0.0)) / n_phi \
        / resolution
    return max(base, 0.75 * spacing)


@dataclass(frozen=True)
class SimplexGrid:
    """All descending probability 4-vectors with components k/resolution."""

    resolution: int
    points: np.ndarray = field(repr=False)
    entropy: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, resolution: int) -> "SimplexGrid":
        if resolution < 4:
            raise ValidationError(f"resolution must be >= 4, got {resolution}")
        r = int(resolution)
        rows = []
        for i in range(-(-r // 4), r + 1):
            j_lo = -(-(r - i) // 3)
            for j in range(j_lo, min(i, r - i) + 1):
                rest = r - i - j
                k_lo = -(-rest // 2)
                k_hi = min(j, rest)
                if k_hi < k_lo:
                    continue
                ks = np.arange(k_lo, k_hi + 1)
                block = np.empty((ks.size, 4), dtype=float)
                block[:, 0] = i
                block[:, 1] = j
                block[:, 2] = ks
                block[:, 3] = rest - ks
                rows.append(block)
        points = np.vstack(rows) / float(r)
        return cls(resolution=r, points=points, entropy=entropy_batch(points))

    @property
    def default_band(self) -> float:
        # scales with grid spacing so smooth constraint manifolds stay populated
        return 2.0 / self.resolution


def _feasible_mask(grid: SimplexGrid, constraints) -> np.ndarray:
    mask = np.ones(grid.points.shape[0], dtype=bool)
    for fn, target, band in constraints:
        mask &= np.abs(fn(grid.points) - target) <= band
    return mask


def _project_negativity(mu: np.ndarray, target: float) -> np.ndarray:
    """Project onto {sum sqrt(mu) = sqrt(2 target + 1)} within the simplex."""
    s = np.sqrt(2.0 * target + 1.0)
    x = np.sqrt(np.clip(mu, 0.0, None))
    w = x - x.mean()
    norm = np.linalg.norm(w)
    if norm < 1e-14:
        w = np.array([1.0, 1.0, -1.0, -1.0]) / 2.0
        norm = 1.0
    radial = max(1.0 - s * s / 4.0, 0.0)
    y = s / 4.0 + w * (np.sqrt(radial) / norm)
    y = np.clip(y, 0.0, None)
    y /= np.linalg.norm(y)
    return np.sort(y * y)[::-1]


def _project_phi_pairing(mu: np.ndarray, target: float, groups) -> np.ndarray:
    """Rescale the two coefficient groups onto {prod of group sums = target^2/9}."""
    mu = np.sort(np.clip(mu, 0.0, None))[::-1]
    q = target * target / 9.0
    disc = max(1.0 - 4.0 * q, 0.0)
    roots = ((1.0 + np.sqrt(disc)) / 2.0, (1.0 - np.sqrt(disc)) / 2.0)
    first, second = groups
    p = mu[list(first)].sum()
    a = min(roots, key=lambda root: abs(root - p))
    out = mu.copy()
    if p > 1e-14 and 1.0 - p > 1e-14:
        out[list(first)] *= a / p
        out[list(second)] *= (1.0 - a) / (1.0 - p)
    else:
        out = np.zeros(4)
        out[first[0]], out[second[0]] = a, 1.0 - a
    return out


def _make_phi_projection(fn):
    groups = _PAIRING_GROUPS[fn]

    def project(mu, target):
        return _project_phi_pairing(mu, target, groups)

    return project


_PROJECTIONS = {negativity_batch: _project_negativity}
for _fn in PHI_PAIRINGS:
    _PROJECTIONS[_fn] = _make_phi_projection(_fn)


def _project_onto_constraints(mu: np.ndarray, constraints) -> np.ndarray:
    """Alternating projections; generic constraints only renormalize."""
    out = np.clip(mu, 0.0, None)
    total = out.sum()
    out = out / total if total > 0 else np.array([1.0, 0.0, 0.0, 0.0])
    for _ in range(POCS_ROUNDS):
        for fn, target, _band in constraints:
            proj = _PROJECTIONS.get(fn)
            if proj is not None:
                out = proj(out, target)
        out = np.sort(np.clip(out, 0.0, None))[::-1]
        s = out.sum()
        if s > 0:
            out = out / s
    return out


def _constraint_residual(mu: np.ndarray, constraints) -> float:
    return max((abs(float(fn(mu)) - target) for fn, target, _ in constraints),
               default=0.0)


def brute_constrained_extremum(objective: Callable[[np.ndarray], np.ndarray],
                               constraints, grid: SimplexGrid,
                               refine: bool = True, maximize: bool = False,
                               seed: int = 0) -> tuple[float, np.ndarray]:
    """Exhaustive extremum of ``objective`` over band-feasible grid points.

    Refinement runs 200 random perturbations around the incumbent, halving
    the radius every 25 iterations and re-projecting onto the constraint
    manifolds; refined candidates must satisfy every constraint within
    1e-8 to be accepted.
    """
    if not constraints:
        raise ValidationError("at least one constraint is required")
    mask = _feasible_mask(grid, constraints)
    if not mask.any():
        raise InfeasibleError(
            "no grid point satisfies all constraints; widen the bands or the grid")
    sign = -1.0 if maximize else 1.0
    values = sign * objective(grid.points[mask])
    pick = int(values.argmin())
    best_value = float(values[pick])
    best_mu = grid.points[mask][pick].copy()

    if refine:
        # band-feasible grid extrema are biased by ~band * |gradient|; the
        # projection moves incumbents onto the exact constraint manifolds
        # (replacing, not min-ing), and only tight-feasible moves count after.
        # Independent chains from several projected grid candidates dodge
        # shallow basins.
        tight = min(TIGHT_FEASIBILITY, *(band for _, _, band in constraints))
        order = np.argsort(values)
        starts = []
        for idx in order[:RESTART_SEEDS]:
            cand = _project_onto_constraints(grid.points[mask][idx], constraints)
            if _constraint_residual(cand, constraints) > tight:
                continue
            if any(np.abs(cand - s[1]).max() < 1e-6 for s in starts):
                continue
            starts.append((sign * float(objective(cand)), cand))
        if not starts:
            starts = [(best_value, best_mu)]
        best_value, best_mu = min(starts[:RESTART_CHAINS], key=lambda s: s[0])
        for chain, (val0, mu0) in enumerate(starts[:RESTART_CHAINS]):
            rng = np.random.default_rng([seed, chain])
            value, mu = val0, mu0
            radius = 2.0 / grid.resolution
            for it in range(REFINE_ITERATIONS):
                if it and it % REFINE_HALVING == 0:
                    radius *= 0.5
                cand = mu + rng.normal(scale=radius, size=4)
                cand = _project_onto_constraints(cand, constraints)
                if _constraint_residual(cand, constraints) > tight:
                    continue
                val = sign * float(objective(cand))
                if val < value:
                    value, mu = val, cand
            if value < best_value:
                best_value, best_mu = value, mu
    return sign * best_value, best_mu


def brute_min_entropy(constraints, grid: SimplexGrid,
                      refine: bool = True, seed: int = 0) -> tuple[float, np.ndarray]:
    """Reference constrained entropy minimum by exhaustive search.

    The reported value is an upper bound on the true constrained minimum,
    converging as the grid resolution grows.
    """
    return brute_constrained_extremum(entropy_batch, constraints, grid,
                                      refine=refine, seed=seed)


def scatter_point(mu) -> tuple[MonotonePair, float]:
    """Monotone pair and entropy of one descending Schmidt vector."""
    mu = np.sort(np.asarray(mu, dtype=float))[::-1]
    pair = MonotonePair(float(phi_negativity_batch(mu)), float(negativity_batch(mu)))
    return pair, float(entropy_batch(mu))


def pure_scatter(samples: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Uniform pure-state scatter of the constraint plane.

    Schmidt vectors are flat-Dirichlet samples sorted descending; returns
    ``(pairs, entropies)`` with pairs[:, 0] = n_phi, pairs[:, 1] = n_t.
    Deterministic for a given seed.
    """
    if samples < 1:
        raise ValidationError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    mu = np.sort(rng.dirichlet(np.ones(4), size=int(samples)), axis=1)[:, ::-1]
    pairs = np.column_stack([phi_negativity_batch(mu), negativity_batch(mu)])
    return pairs, entropy_batch(mu)
