"""Geometry of the pure-state region in the (n_phi, n_t) plane.

The region attainable by 4xN pure states is bounded below by n_t = n_phi/3
and above by n_t = 2 n_phi/3 + 1/2.  Between them runs the curve where the
entropy minimizer under the n_t constraint alone already satisfies the
n_phi constraint; it splits the region into a 2-constraint sector (below)
and a 1-constraint sector (above).

The constraint solver inverts the pair of constraint equations

    sum_j sqrt(mu_j) = sqrt(2 n_t + 1),
    3 sqrt((mu_1 + mu_4)(mu_2 + mu_3)) = n_phi,

together with normalization, for the three remaining Schmidt coefficients
given mu_4.  Setting a = mu_1 + mu_4 gives a(1 - a) = n_phi^2 / 9 with two
branches; mu_2 and mu_3 then follow from their sum and root-sum.  Candidates
are re-sorted and re-validated against the constraints, so spurious branch
combinations drop out.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .monotones import MonotonePair
from .validation import ValidationError, check_in_range

RANGE_TOL = 1e-9
BOUNDARY_BAND = 1e-9

# Component clip for round-off at simplex boundaries (reject below, snap to 0).
COMPONENT_CLIP = 1e-12
# Discriminants below this are treated as exact degeneracies; snapping keeps
# the sqrt from amplifying round-off into the sorted-constraint recheck.
DEGENERACY_SNAP = 1e-14
CANDIDATE_TOL = 1e-9
DUPLICATE_TOL = 1e-10


class RegionClass(enum.Enum):
    """Exhaustive classification of a constraint-plane point."""

    OUTSIDE_BELOW = "outside_below"
    LOWER_BOUNDARY = "lower_boundary"
    TWO_CONSTRAINT = "two_constraint"
    MONOTONE_BOUNDARY = "monotone_boundary"
    ONE_CONSTRAINT = "one_constraint"
    OUTSIDE_ABOVE = "outside_above"


def lower_pure_boundary(n_phi: float) -> float:
    """Lowest n_t attainable by pure states at this n_phi: n_phi / 3."""
    n_phi = check_in_range(n_phi, 0.0, 1.5, "n_phi", RANGE_TOL)
    return n_phi / 3.0


def upper_pure_boundary(n_phi: float) -> float:
    """Highest n_t attainable by pure states: 2 n_phi / 3 + 1/2."""
    n_phi = check_in_range(n_phi, 0.0, 1.5, "n_phi", RANGE_TOL)
    return 2.0 * n_phi / 3.0 + 0.5


def boundary_gamma(n_phi) -> np.ndarray | float:
    """Largest Schmidt coefficient of the minimizer family (g, g', g', g')
    sitting on the monotone boundary at this n_phi."""
    n_phi = np.asarray(n_phi, dtype=float)
    gamma = (1.0 + np.sqrt(np.clip(9.0 - 4.0 * n_phi * n_phi, 0.0, None))) / 4.0
    return gamma if gamma.ndim else float(gamma)


def _monotone_boundary_raw(n_phi) -> np.ndarray | float:
    gamma = np.asarray(boundary_gamma(n_phi))
    n_t = 1.0 - gamma + np.sqrt(np.clip(3.0 * gamma * (1.0 - gamma), 0.0, None))
    return n_t if n_t.ndim else float(n_t)


def monotone_boundary(n_phi: float) -> float:
    """n_t of the monotone boundary at this n_phi.

    Evaluated through the parametric family mu = (g, g', g', g') with
    g' = (1 - g)/3, whose closed inversion g = (1 + sqrt(9 - 4 n_phi^2))/4
    is valid on all of [0, 3/2]; the explicit radical form of the same curve
    is used as a cross-check in the test suite where its inner radicand is
    comfortably positive.
    """
    n_phi = check_in_range(n_phi, 0.0, 1.5, "n_phi", RANGE_TOL)
    return float(_monotone_boundary_raw(n_phi))


def parametric_boundary(gamma: float) -> MonotonePair:
    """Monotone-boundary point for gamma in [1/4, 1]."""
    gamma = check_in_range(gamma, 0.25, 1.0, "gamma", RANGE_TOL)
    gp = (1.0 - gamma) / 3.0
    n_phi = math.sqrt(max(2.0 * (2.0 * gamma + 1.0) * (1.0 - gamma), 0.0))
    n_t = ((math.sqrt(gamma) + 3.0 * math.sqrt(gp)) ** 2 - 1.0) / 2.0
    return MonotonePair(n_phi=min(n_phi, 1.5), n_t=min(n_t, 1.5))


def classify(n: MonotonePair, tol: float = BOUNDARY_BAND) -> RegionClass:
    """Locate a constraint-plane point relative to the three boundary curves.

    Boundary bands have half-width ``tol``; where curves meet, ties resolve
    to MONOTONE_BOUNDARY.
    """
    n_phi = check_in_range(n[0], 0.0, 1.5, "n_phi", RANGE_TOL)
    n_t = check_in_range(n[1], 0.0, 1.5, "n_t", RANGE_TOL)
    low = n_phi / 3.0
    up = 2.0 * n_phi / 3.0 + 0.5
    mono = float(_monotone_boundary_raw(n_phi))
    if n_t > up + tol:
        return RegionClass.OUTSIDE_ABOVE
    if n_t < low - tol:
        return RegionClass.OUTSIDE_BELOW
    if abs(n_t - mono) <= tol:
        return RegionClass.MONOTONE_BOUNDARY
    if abs(n_t - low) <= tol:
        return RegionClass.LOWER_BOUNDARY
    if n_t > mono:
        return RegionClass.ONE_CONSTRAINT
    return RegionClass.TWO_CONSTRAINT


def _candidates_batch(n_phi, n_t, mu4):
    """Vectorized two-branch constraint solve.

    Returns ``(mu, valid)`` where ``mu`` has shape ``broadcast + (2, 4)``
    holding descending-sorted candidates (NaN rows where invalid) and
    ``valid`` has shape ``broadcast + (2,)``.
    """
    n_phi, n_t, mu4 = np.broadcast_arrays(
        np.asarray(n_phi, dtype=float),
        np.asarray(n_t, dtype=float),
        np.asarray(mu4, dtype=float),
    )
    shape = n_phi.shape
    s = np.sqrt(2.0 * n_t + 1.0)
    r = np.sqrt(np.clip(1.0 - 4.0 * (n_phi * n_phi / 9.0), 0.0, None))
    sqrt_mu4 = np.sqrt(np.clip(mu4, 0.0, None))

    mu_out = np.full(shape + (2, 4), np.nan)
    valid = np.zeros(shape + (2,), dtype=bool)

    for branch, sign in enumerate((1.0, -1.0)):
        a = (1.0 + sign * r) / 2.0
        mu1 = a - mu4
        ok = mu1 >= -COMPONENT_CLIP
        mu1 = np.clip(mu1, 0.0, None)
        b = 1.0 - a
        t = s - np.sqrt(mu1) - sqrt_mu4
        ok &= t >= -COMPONENT_CLIP
        t = np.clip(t, 0.0, None)
        g = (t * t - b) / 2.0
        ok &= g >= -COMPONENT_CLIP
        d2 = 2.0 * b - t * t
        ok &= d2 >= -COMPONENT_CLIP
        root = np.sqrt(np.clip(d2, 0.0, None))
        root = np.where(d2 < DEGENERACY_SNAP, 0.0, root)
        xp = (t + root) / 2.0
        xm = np.clip((t - root) / 2.0, 0.0, None)

        cand = np.stack([mu1, xp * xp, xm * xm, np.clip(mu4, 0.0, None)], axis=-1)
        cand = np.sort(cand, axis=-1)[..., ::-1]

        ok &= cand[..., 0] <= 1.0 + COMPONENT_CLIP
        ok &= np.abs(cand.sum(axis=-1) - 1.0) <= CANDIDATE_TOL
        ok &= np.abs(np.sqrt(cand).sum(axis=-1) - s) <= CANDIDATE_TOL
        pair = 3.0 * np.sqrt(
            np.clip((cand[..., 0] + cand[..., 3]) * (cand[..., 1] + cand[..., 2]), 0.0, None))
        ok &= np.abs(pair - n_phi) <= CANDIDATE_TOL

        mu_out[..., branch, :] = np.where(ok[..., None], cand, np.nan)
        valid[..., branch] = ok

    return mu_out, valid


def _branch_margin(n_phi, n_t, mu4, sign: float):
    """Smooth feasibility indicator for one branch (>= 0 on the closure).

    Collects the binding inequalities mu_1 >= 0, t >= 0, g >= 0 and
    disc >= 0 into a single min; used only to locate feasibility edges, so
    the mixed scales of the terms do not matter.
    """
    n_phi = np.asarray(n_phi, dtype=float)
    n_t = np.asarray(n_t, dtype=float)
    mu4 = np.asarray(mu4, dtype=float)
    s = np.sqrt(2.0 * n_t + 1.0)
    r = np.sqrt(np.clip(1.0 - 4.0 * (n_phi * n_phi / 9.0), 0.0, None))
    a = (1.0 + sign * r) / 2.0
    mu1 = a - mu4
    t = s - np.sqrt(np.clip(mu1, 0.0, None)) - np.sqrt(np.clip(mu4, 0.0, None))
    b = 1.0 - a
    sb = np.sqrt(np.clip(b, 0.0, None))
    margin = np.minimum(t - sb, np.sqrt(2.0) * sb - t)
    margin = np.minimum(margin, np.minimum(mu1, t))
    return margin


def solve_schmidt(n: MonotonePair, mu4: float) -> list[np.ndarray]:
    """Schmidt vectors matching the constraint pair ``n`` with smallest
    coefficient pinned to ``mu4``.

    Returns up to two descending-sorted candidates; an empty list means the
    point is unreachable at this mu4.  Duplicate branch solutions (within
    1e-10) are merged.
    """
    cls = classify(n)
    if cls in (RegionClass.OUTSIDE_ABOVE, RegionClass.OUTSIDE_BELOW):
        raise ValidationError(
            f"point (n_phi={n[0]!r}, n_t={n[1]!r}) lies outside the pure-state region")
    mu4 = check_in_range(mu4, 0.0, 0.25, "mu4", RANGE_TOL)
    mu, valid = _candidates_batch(float(n[0]), float(n[1]), mu4)
    out: list[np.ndarray] = []
    for branch in range(2):
        if not valid[branch]:
            continue
        cand = mu[branch].copy()
        if any(np.abs(cand - prev).max() < DUPLICATE_TOL for prev in out):
            continue
        out.append(cand)
    return out


def coverage_map(mu4: float, grid_n: int = 151) -> tuple[np.ndarray, np.ndarray]:
    """Which 2-constraint grid nodes are reachable at this mu4.

    Returns ``(axis, mask)`` with ``mask[i, j]`` true when the node
    ``(axis[i], axis[j])`` lies in the 2-constraint sector (inclusive) and
    the solver returns at least one candidate there.
    """
    mu4 = check_in_range(mu4, 0.0, 0.25, "mu4", RANGE_TOL)
    if grid_n < 2:
        raise ValidationError(f"grid_n must be >= 2, got {grid_n}")
    axis = np.linspace(0.0, 1.5, grid_n)
    x = axis[:, None]
    t = axis[None, :]
    in_sector = (t >= x / 3.0 - BOUNDARY_BAND) & \
        (t <= np.asarray(_monotone_boundary_raw(x)) + BOUNDARY_BAND)
    _, valid = _candidates_batch(np.broadcast_to(x, (grid_n, grid_n)),
                                 np.broadcast_to(t, (grid_n, grid_n)),
                                 mu4)
    return axis, in_sector & valid.any(axis=-1)
