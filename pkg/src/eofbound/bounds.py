"""Lower bounds on the entanglement of formation of 4xN states.

Two closed-form singly constrained bounds (one per monotone) and the doubly
constrained bound surface built in four layers:

* ``h_tilde``: constrained entropy minimum on the 2-constraint sector, found
  by sweeping the smallest Schmidt coefficient and refining feasibility
  edges.  Minima routinely sit on the boundary of the feasible set (where
  two coefficients merge or one vanishes), and near the upper sector
  boundary the feasible set degenerates to an isolated point, so the sweep
  is backed by explicit edge detection rather than grid hits alone.
* ``h_up``: monotone completion over the pure region (the n_t-only closed
  form applies above the 2-constraint sector).
* ``h_hull``: lower convex envelope of ``h_up`` over the pure region.
* ``h_ext``: extension to the whole [0, 3/2]^2 square, constant along n_t
  below the region and constant along n_phi above it, preserving
  monotonicity.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .monotones import MonotonePair
from .region import (
    BOUNDARY_BAND,
    RegionClass,
    _branch_margin,
    _candidates_batch,
    _monotone_boundary_raw,
    classify,
)
from .validation import ValidationError, as_schmidt_vector

RANGE_TOL = 1e-9
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
MIN_GRID = 101
MAX_MU4_STEP = 1e-2
# Margin peaks further below feasibility than this cannot hide a window.
PEAK_FLOOR = -0.05
INFEASIBLE = float("inf")
# Penalty stand-in for infeasible points inside bracketed refinements.
BIG = 10.0
GOLDEN_ITERS = 46  # shrinks a 2e-3 bracket below 1e-12


class UnreachablePointError(RuntimeError):
    """No Schmidt vector satisfies the constraint pair at any swept mu4."""


def _xlog2(p):
    p = np.asarray(p, dtype=float)
    safe = np.where(p > 0.0, p, 1.0)
    return -(np.where(p > 0.0, p * np.log2(safe), 0.0))


def binary_entropy(x) -> np.ndarray | float:
    """H2(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0."""
    x = np.asarray(x, dtype=float)
    out = _xlog2(x) + _xlog2(1.0 - x)
    return out if out.ndim else float(out)


def eof_pure(mu) -> float:
    """Marginal entropy H(mu) of a pure state, in bits (range [0, 2])."""
    mu = as_schmidt_vector(mu)
    return float(_xlog2(mu).sum())


def gamma_of_nt(n_t) -> np.ndarray | float:
    """Largest coefficient of the n_t-constrained minimizer (g, g', g', g')."""
    n_t = np.asarray(n_t, dtype=float)
    g = (np.sqrt(2.0 * n_t + 1.0) + np.sqrt(np.clip(9.0 - 6.0 * n_t, 0.0, None))) ** 2 / 16.0
    return g if g.ndim else float(g)


def alpha_of_nphi(n_phi) -> np.ndarray | float:
    """Larger coefficient of the n_phi-constrained minimizer (a, 1-a, 0, 0)."""
    n_phi = np.asarray(n_phi, dtype=float)
    a = (1.0 + np.sqrt(np.clip(1.0 - 4.0 * n_phi * n_phi / 9.0, 0.0, None))) / 2.0
    return a if a.ndim else float(a)


def min_entropy_nt(n_t) -> np.ndarray | float:
    """Entropy minimum with only the negativity constrained: H2(g) + (1-g) log2 3.

    The minimizer is (g, g', g', g') with g = gamma_of_nt(n_t).  Monotone but
    not convex: above n_t = 1 it rises over the chord that ``bound_nt``
    substitutes, by up to ~4.8e-3.  This is the function the monotone
    completion uses and the one that equals the doubly constrained minimum on
    the upper sector boundary.
    """
    arr = np.asarray(n_t, dtype=float)
    _check_range_array(arr, "n_t")
    arr = np.clip(arr, 0.0, 1.5)
    g = np.asarray(gamma_of_nt(arr))
    out = np.asarray(binary_entropy(g)) + (1.0 - g) * math.log2(3.0)
    return out if out.ndim else float(out)


def bound_nt(n_t) -> np.ndarray | float:
    """Singly constrained bound from the negativity alone (convex).

    Piecewise: the constrained entropy minimum for n_t <= 1, then the linear
    continuation (n_t - 3/2) log2 3 + 2 on [1, 3/2], which is the convex
    hull of that minimum; the branches agree at n_t = 1.
    """
    arr = np.asarray(n_t, dtype=float)
    _check_range_array(arr, "n_t")
    arr = np.clip(arr, 0.0, 1.5)
    lowbranch = np.asarray(min_entropy_nt(arr))
    highbranch = (arr - 1.5) * math.log2(3.0) + 2.0
    out = np.where(arr <= 1.0, lowbranch, highbranch)
    return out if out.ndim else float(out)


def bound_nphi(n_phi) -> np.ndarray | float:
    """Singly constrained bound from the map-based monotone: H2(alpha)."""
    arr = np.asarray(n_phi, dtype=float)
    _check_range_array(arr, "n_phi")
    arr = np.clip(arr, 0.0, 1.5)
    out = np.asarray(binary_entropy(alpha_of_nphi(arr)))
    return out if out.ndim else float(out)


def _check_range_array(arr: np.ndarray, name: str) -> None:
    if arr.size == 0:
        return
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    if arr.min() < -RANGE_TOL or arr.max() > 1.5 + RANGE_TOL:
        raise ValidationError(f"{name} outside [0, 1.5]")


# ---------------------------------------------------------------------------
# Doubly constrained minimum via the mu4 sweep
# ---------------------------------------------------------------------------


def _entropy_min(n_phi, n_t, mu4) -> np.ndarray:
    """Min entropy over valid solver candidates; +inf where none."""
    mu, valid = _candidates_batch(n_phi, n_t, mu4)
    ent = _xlog2(np.where(np.isnan(mu), 0.0, mu)).sum(axis=-1)
    ent = np.where(valid, ent, INFEASIBLE)
    return ent.min(axis=-1)


def _branch_valid(n_phi, n_t, mu4, signs) -> np.ndarray:
    """Validity of the candidate on the branch selected per element."""
    _, valid = _candidates_batch(n_phi, n_t, mu4)
    return np.where(signs > 0, valid[..., 0], valid[..., 1])


def _margin_signed(n_phi, n_t, mu4, signs) -> np.ndarray:
    plus = _branch_margin(n_phi, n_t, mu4, 1.0)
    minus = _branch_margin(n_phi, n_t, mu4, -1.0)
    return np.where(signs > 0, plus, minus)


def _snap_to_sector(n_phi: np.ndarray, n_t: np.ndarray) -> np.ndarray:
    """Snap n_t onto the sector boundary curves within the boundary band."""
    low = n_phi / 3.0
    mono = np.asarray(_monotone_boundary_raw(n_phi))
    n_t = np.where(np.abs(n_t - mono) <= BOUNDARY_BAND, mono, n_t)
    n_t = np.where(np.abs(n_t - low) <= BOUNDARY_BAND, low, n_t)
    return n_t


def _bisect_bool(xs, ts, lo, hi, signs, lo_state, iters: int = 45):
    """Vector bisection pinning a flip of branch validity between lo and hi."""
    lo = lo.copy()
    hi = hi.copy()
    state = lo_state
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        vmid = _branch_valid(xs, ts, mid, signs)
        same = vmid == state
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return lo, hi


def _bisect_margin(xs, ts, lo, hi, signs, iters: int = 45):
    """Vector bisection pinning a sign change of the branch margin."""
    lo = lo.copy()
    hi = hi.copy()
    mlo = _margin_signed(xs, ts, lo, signs) >= 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        same = (_margin_signed(xs, ts, mid, signs) >= 0.0) == mlo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return lo, hi


def _golden_max_margin(xs, ts, lo, hi, signs, iters: int = 60):
    """Vector golden-section maximization of the branch margin.

    Recovers isolated feasible points where the constraint set degenerates
    to a single mu4 (the margin peaks at zero there).
    """
    a = lo.copy()
    b = hi.copy()
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1 = _margin_signed(xs, ts, x1, signs)
    f2 = _margin_signed(xs, ts, x2, signs)
    for _ in range(iters):
        take = f1 >= f2  # keep the left interval
        b = np.where(take, x2, b)
        a = np.where(take, a, x1)
        x1n = b - INVPHI * (b - a)
        x2n = a + INVPHI * (b - a)
        xq = np.where(take, x1n, x2n)
        fq = _margin_signed(xs, ts, xq, signs)
        x1, f1, x2, f2 = (np.where(take, x1n, x2),
                          np.where(take, fq, f2),
                          np.where(take, x1, x2n),
                          np.where(take, f1, fq))
    return 0.5 * (a + b)


def _golden_min_entropy(xs, ts, lo, hi, iters: int = GOLDEN_ITERS):
    """Vector golden-section minimization; returns the best value seen."""

    def f(x):
        e = _entropy_min(xs, ts, x)
        return np.where(np.isfinite(e), e, BIG)

    a = lo.copy()
    b = hi.copy()
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    best = np.minimum(f1, f2)
    for _ in range(iters):
        take = f1 <= f2
        b = np.where(take, x2, b)
        a = np.where(take, a, x1)
        x1n = b - INVPHI * (b - a)
        x2n = a + INVPHI * (b - a)
        xq = np.where(take, x1n, x2n)
        fq = f(xq)
        best = np.minimum(best, fq)
        x1, f1, x2, f2 = (np.where(take, x1n, x2),
                          np.where(take, fq, f2),
                          np.where(take, x1, x2n),
                          np.where(take, f1, fq))
    return best


def _h_tilde_batch(n_phi, n_t, mu4_step: float, chunk: int = 4096) -> np.ndarray:
    """Doubly constrained entropy minimum for arrays of sector points."""
    n_phi = np.atleast_1d(np.asarray(n_phi, dtype=float))
    n_t = _snap_to_sector(n_phi, np.atleast_1d(np.asarray(n_t, dtype=float)))
    out = np.empty_like(n_phi)
    for start in range(0, n_phi.size, chunk):
        sl = slice(start, min(start + chunk, n_phi.size))
        out[sl] = _h_tilde_chunk(n_phi[sl], n_t[sl], mu4_step)
    return out


SUBDIV = 64  # subdivision factor for cells flagged as structurally interesting


def _h_tilde_chunk(n_phi, n_t, mu4_step):
    m_pts = int(round(0.25 / mu4_step)) + 1
    grid = np.linspace(0.0, 0.25, m_pts)
    k = n_phi.size
    xs2 = np.broadcast_to(n_phi[:, None], (k, m_pts))
    ts2 = np.broadcast_to(n_t[:, None], (k, m_pts))
    gs2 = np.broadcast_to(grid[None, :], (k, m_pts))

    mu, valid = _candidates_batch(xs2, ts2, gs2)
    ent = _xlog2(np.where(np.isnan(mu), 0.0, mu)).sum(axis=-1)
    ent = np.where(valid, ent, INFEASIBLE)

    best = ent.min(axis=(1, 2))
    flat = ent.reshape(k, -1).argmin(axis=1)
    best_mu4 = grid[flat // 2]
    # half-width of the final refinement bracket around best_mu4
    spacing = np.full(k, mu4_step)

    margins = np.stack(
        [_branch_margin(xs2, ts2, gs2, 1.0), _branch_margin(xs2, ts2, gs2, -1.0)],
        axis=-1)

    def run_probes(nodes, probes, probe_spacing):
        for mu4_probe in probes:
            mu4_probe = np.clip(mu4_probe, 0.0, 0.25)
            e = _entropy_min(n_phi[nodes], n_t[nodes], mu4_probe)
            np.minimum.at(best, nodes, e)
            upd = e <= best[nodes]
            best_mu4[nodes[upd]] = mu4_probe[upd]
            spacing[nodes[upd]] = np.minimum(spacing[nodes[upd]], probe_spacing)

    # validity flips: bisect on candidate validity of the flipping branch
    vflip = valid[:, 1:, :] != valid[:, :-1, :]
    nodes, cols, branches = np.nonzero(vflip)
    if nodes.size:
        signs = np.where(branches == 0, 1.0, -1.0)
        lo_state = valid[nodes, cols, branches]
        lo, hi = _bisect_bool(n_phi[nodes], n_t[nodes], grid[cols], grid[cols + 1],
                              signs, lo_state)
        run_probes(nodes, [lo, hi], mu4_step / SUBDIV)

    # margin sign changes: cover degeneracy edges invisible to validity
    sgn = margins >= 0.0
    mflip = sgn[:, 1:, :] != sgn[:, :-1, :]
    nodes, cols, branches = np.nonzero(mflip)
    if nodes.size:
        signs = np.where(branches == 0, 1.0, -1.0)
        lo, hi = _bisect_margin(n_phi[nodes], n_t[nodes], grid[cols], grid[cols + 1],
                                signs)
        run_probes(nodes, [lo, hi], mu4_step / SUBDIV)

    # negative margin peaks: feasibility windows hiding between grid steps,
    # degenerating to isolated points on the upper sector boundary
    interior = margins[:, 1:-1, :]
    peak = ((interior > margins[:, :-2, :]) & (interior >= margins[:, 2:, :])
            & ~sgn[:, :-2, :] & ~sgn[:, 1:-1, :] & ~sgn[:, 2:, :]
            & (interior > PEAK_FLOOR))
    p_nodes, p_cols, p_branches = np.nonzero(peak)
    # a peak hiding in the first or last cell shows only a falling edge
    first = ~sgn[:, 0, :] & ~sgn[:, 1, :] & (margins[:, 0, :] > margins[:, 1, :]) \
        & (margins[:, 0, :] > PEAK_FLOOR)
    last = ~sgn[:, -1, :] & ~sgn[:, -2, :] & (margins[:, -1, :] > margins[:, -2, :]) \
        & (margins[:, -1, :] > PEAK_FLOOR)
    nf, bf = np.nonzero(first)
    nl, bl = np.nonzero(last)
    nodes = np.concatenate([p_nodes, nf, nl])
    lo_cols = np.concatenate([grid[p_cols], np.zeros(nf.size),
                              np.full(nl.size, grid[-2])])
    hi_cols = np.concatenate([grid[p_cols + 2], np.full(nf.size, grid[1]),
                              np.full(nl.size, grid[-1])])
    branches = np.concatenate([p_branches, bf, bl])
    if nodes.size:
        signs = np.where(branches == 0, 1.0, -1.0)
        top = _golden_max_margin(n_phi[nodes], n_t[nodes], lo_cols, hi_cols, signs)
        run_probes(nodes, [top], mu4_step / SUBDIV)
        # when the peak pokes above zero, probe both window edges too
        pos = _margin_signed(n_phi[nodes], n_t[nodes], top, signs) > 0.0
        if pos.any():
            sub = nodes[pos]
            ssig = signs[pos]
            for bra in ((lo_cols[pos], top[pos]), (top[pos], hi_cols[pos])):
                lo, hi = _bisect_margin(n_phi[sub], n_t[sub], bra[0], bra[1], ssig)
                run_probes(sub, [lo, hi], mu4_step / SUBDIV)

    # subdivide structurally interesting cells to expose sub-step windows
    cell_flags = np.zeros((k, m_pts - 1), dtype=bool)
    cell_flags |= vflip.any(axis=-1)
    cell_flags |= mflip.any(axis=-1)
    peak_cells = peak.any(axis=-1)
    cell_flags[:, :-1] |= peak_cells
    cell_flags[:, 1:] |= peak_cells
    cell_flags[:, 0] |= first.any(axis=-1)
    cell_flags[:, -1] |= last.any(axis=-1)
    grown = cell_flags.copy()
    grown[:, :-1] |= cell_flags[:, 1:]
    grown[:, 1:] |= cell_flags[:, :-1]
    c_nodes, c_cols = np.nonzero(grown)
    if c_nodes.size:
        offs = np.linspace(0.0, mu4_step, SUBDIV + 1)
        sub_x = np.repeat(n_phi[c_nodes], offs.size)
        sub_t = np.repeat(n_t[c_nodes], offs.size)
        sub_m = (grid[c_cols][:, None] + offs[None, :]).reshape(-1)
        sub_mu, sub_valid = _candidates_batch(sub_x, sub_t, sub_m)
        sub_ent = _xlog2(np.where(np.isnan(sub_mu), 0.0, sub_mu)).sum(axis=-1)
        sub_ent = np.where(sub_valid, sub_ent, INFEASIBLE).min(axis=-1)
        sub_ent = sub_ent.reshape(c_nodes.size, offs.size)
        row_best = sub_ent.min(axis=1)
        row_arg = sub_ent.argmin(axis=1)
        improved = row_best < best[c_nodes]
        if improved.any():
            np.minimum.at(best, c_nodes[improved], row_best[improved])
            upd = row_best <= best[c_nodes]
            best_mu4[c_nodes[upd]] = sub_m.reshape(c_nodes.size, offs.size)[
                np.arange(c_nodes.size), row_arg][upd]
            spacing[c_nodes[upd]] = np.minimum(spacing[c_nodes[upd]],
                                               mu4_step / SUBDIV)
        # validity flips on the subdivided samples
        sub_ok = sub_valid.reshape(c_nodes.size, offs.size, 2)
        sflip = sub_ok[:, 1:, :] != sub_ok[:, :-1, :]
        rows, scols, branches = np.nonzero(sflip)
        if rows.size:
            signs = np.where(branches == 0, 1.0, -1.0)
            base = grid[c_cols[rows]]
            lo = base + offs[scols]
            hi = base + offs[scols + 1]
            lo_state = sub_ok[rows, scols, branches]
            lo, hi = _bisect_bool(n_phi[c_nodes[rows]], n_t[c_nodes[rows]],
                                  lo, hi, signs, lo_state, iters=40)
            run_probes(c_nodes[rows], [lo, hi], mu4_step / SUBDIV)

    # golden refinement of the entropy around the best mu4 found
    reachable = np.isfinite(best)
    if reachable.any():
        lo = np.clip(best_mu4[reachable] - spacing[reachable], 0.0, 0.25)
        hi = np.clip(best_mu4[reachable] + spacing[reachable], 0.0, 0.25)
        refined = _golden_min_entropy(n_phi[reachable], n_t[reachable], lo, hi)
        best[reachable] = np.minimum(best[reachable], refined)
    return best


def h_tilde_2c(n: MonotonePair, mu4_step: float = 1e-3) -> float:
    """Doubly constrained entropy minimum at a 2-constraint sector point.

    Sweeps mu4 over [0, 1/4] at ``mu4_step``, refines feasibility edges and
    the best bracket, and returns the minimum entropy over all candidates.
    """
    if not 0.0 < mu4_step <= MAX_MU4_STEP:
        raise ValidationError(f"mu4_step must be in (0, {MAX_MU4_STEP}], got {mu4_step}")
    cls = classify(n)
    if cls not in (RegionClass.TWO_CONSTRAINT, RegionClass.LOWER_BOUNDARY,
                   RegionClass.MONOTONE_BOUNDARY):
        raise ValidationError(
            f"point (n_phi={n[0]!r}, n_t={n[1]!r}) is not in the 2-constraint sector "
            f"(classified {cls.name})")
    value = float(_h_tilde_batch(np.array([float(n[0])]), np.array([float(n[1])]),
                                 mu4_step)[0])
    if not np.isfinite(value):
        raise UnreachablePointError(
            f"no Schmidt vector reaches (n_phi={n[0]!r}, n_t={n[1]!r}) at any swept mu4")
    return value


def h_up(n: MonotonePair, mu4_step: float = 1e-3) -> float:
    """Monotone completion over the pure region.

    2-constraint sector (boundaries included): the doubly constrained
    minimum; 1-constraint sector above it: the n_t-only constrained minimum,
    which matches the sector value on the shared boundary and keeps the
    completion nondecreasing.  (Its convex hull ``bound_nt`` would dip below
    the boundary values above n_t = 1; convexification happens once, on the
    completed surface.)
    """
    cls = classify(n)
    if cls in (RegionClass.OUTSIDE_ABOVE, RegionClass.OUTSIDE_BELOW):
        raise ValidationError(
            f"point (n_phi={n[0]!r}, n_t={n[1]!r}) lies outside the pure-state region")
    if cls is RegionClass.ONE_CONSTRAINT:
        return float(min_entropy_nt(float(n[1])))
    return h_tilde_2c(n, mu4_step)


# ---------------------------------------------------------------------------
# Surface construction
# ---------------------------------------------------------------------------


@dataclass
class BoundSurface:
    """Gridded bound data over [0, 3/2]^2 with a bilinear evaluator.

    Arrays are indexed ``[i_phi, j_t]`` on the shared ``axis``; NaN marks
    nodes where a layer is undefined.  ``built_at`` is in-memory metadata
    only; persisted files depend solely on the build parameters.
    """

    axis: np.ndarray = field(repr=False)
    h_tilde: np.ndarray = field(repr=False)
    h_up: np.ndarray = field(repr=False)
    h_hull: np.ndarray = field(repr=False)
    h_ext: np.ndarray = field(repr=False)
    grid_n: int
    mu4_step: float
    built_at: float | None = None

    def evaluate(self, n_phi, n_t) -> np.ndarray | float:
        """Bilinear interpolation of h_ext; inputs must lie in [0, 3/2]."""
        x = np.asarray(n_phi, dtype=float)
        t = np.asarray(n_t, dtype=float)
        _check_range_array(np.atleast_1d(x), "n_phi")
        _check_range_array(np.atleast_1d(t), "n_t")
        step = self.axis[1] - self.axis[0]
        xi = np.clip(x, 0.0, 1.5) / step
        ti = np.clip(t, 0.0, 1.5) / step
        i0 = np.clip(np.floor(xi).astype(int), 0, self.grid_n - 2)
        j0 = np.clip(np.floor(ti).astype(int), 0, self.grid_n - 2)
        fx = xi - i0
        ft = ti - j0
        z = self.h_ext
        out = (z[i0, j0] * (1 - fx) * (1 - ft) + z[i0 + 1, j0] * fx * (1 - ft)
               + z[i0, j0 + 1] * (1 - fx) * ft + z[i0 + 1, j0 + 1] * fx * ft)
        return out if out.ndim else float(out)

    def max_hull_gap(self) -> tuple[float, MonotonePair]:
        """Largest h_up - h_hull over the pure region and its location."""
        gap = self.h_up - self.h_hull
        if not np.isfinite(gap).any():
            return 0.0, MonotonePair(0.0, 0.0)
        flat = np.nanargmax(gap)
        i, j = np.unravel_index(flat, gap.shape)
        return float(gap[i, j]), MonotonePair(float(self.axis[i]), float(self.axis[j]))


def eval_bound(surface: BoundSurface, n: MonotonePair) -> float:
    """Certified EOF lower bound at a constraint-plane point (no extrapolation)."""
    return float(surface.evaluate(float(n[0]), float(n[1])))


def _h_tilde_worker(args):
    xs, ts, mu4_step = args
    return _h_tilde_batch(xs, ts, mu4_step)


def build_surface(grid_n: int = 301, mu4_step: float = 1e-3,
                  workers: int | None = None) -> BoundSurface:
    """Build all four surface layers on a grid_n x grid_n grid.

    Deterministic for fixed parameters; ``workers`` only splits the sweep
    across processes (results are identical).  Honors the EOFBOUND_WORKERS
    environment variable when ``workers`` is None.
    """
    if grid_n < MIN_GRID:
        raise ValidationError(f"grid resolution must be >= {MIN_GRID}, got {grid_n}")
    if not 0.0 < mu4_step <= MAX_MU4_STEP:
        raise ValidationError(f"mu4_step must be in (0, {MAX_MU4_STEP}], got {mu4_step}")
    if workers is None:
        workers = int(os.environ.get("EOFBOUND_WORKERS", "1"))

    started = time.time()
    axis = np.linspace(0.0, 1.5, grid_n)
    x = axis[:, None]
    t = axis[None, :]
    low = x / 3.0
    up = 2.0 * x / 3.0 + 0.5
    mono = np.asarray(_monotone_boundary_raw(x))
    pure = (t >= low - BOUNDARY_BAND) & (t <= up + BOUNDARY_BAND)
    two_c = pure & (t <= mono + BOUNDARY_BAND)
    one_c = pure & ~two_c

    xg = np.broadcast_to(x, (grid_n, grid_n))
    tg = np.broadcast_to(t, (grid_n, grid_n))
    xs_2c, ts_2c = xg[two_c], tg[two_c]
    h_tilde_vals = _run_sweep(xs_2c, ts_2c, mu4_step, workers)
    if not np.all(np.isfinite(h_tilde_vals)):
        bad = int(np.argmin(np.isfinite(h_tilde_vals)))
        raise UnreachablePointError(
            f"sweep found no solution at grid node (n_phi={xs_2c[bad]!r}, "
            f"n_t={ts_2c[bad]!r}); refine mu4_step")

    h_tilde = np.full((grid_n, grid_n), np.nan)
    h_tilde[two_c] = h_tilde_vals
    h_up_arr = np.full((grid_n, grid_n), np.nan)
    h_up_arr[two_c] = h_tilde_vals
    h_up_arr[one_c] = np.asarray(min_entropy_nt(tg[one_c]))

    env = _EnvelopeEvaluator(_hull_cloud(axis, pure, xg, tg, h_up_arr))
    h_hull = np.full((grid_n, grid_n), np.nan)
    h_hull[pure] = env(xg[pure], tg[pure])
    h_ext = _extension_layer(env, pure, xg, tg, h_hull)

    layers = (h_tilde, h_up_arr, h_hull, h_ext)
    _pin_corner(layers, 0, 0, 0.0)
    _pin_corner(layers, grid_n - 1, grid_n - 1, 2.0)

    return BoundSurface(axis=axis, h_tilde=h_tilde, h_up=h_up_arr, h_hull=h_hull,
                        h_ext=h_ext, grid_n=grid_n, mu4_step=mu4_step,
                        built_at=started)


def _run_sweep(xs, ts, mu4_step, workers):
    if workers <= 1 or xs.size < 2048:
        return _h_tilde_batch(xs, ts, mu4_step)
    chunks = np.array_split(np.arange(xs.size), workers * 4)
    args = [(xs[c], ts[c], mu4_step) for c in chunks if c.size]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_h_tilde_worker, args))
    return np.concatenate(parts)


class _EnvelopeEvaluator:
    """Exact piecewise-linear evaluation of the lower convex envelope."""

    def __init__(self, points: np.ndarray):
        from matplotlib.tri import LinearTriInterpolator, Triangulation
        from scipy.spatial import ConvexHull

        hull = ConvexHull(points, qhull_options="Qt")
        lower = hull.equations[:, 2] < -1e-12
        self._planes = hull.equations[lower]
        tri_idx = hull.simplices[lower]
        px, py = points[:, 0], points[:, 1]
        areas = np.abs(
            (px[tri_idx[:, 1]] - px[tri_idx[:, 0]]) * (py[tri_idx[:, 2]] - py[tri_idx[:, 0]])
            - (px[tri_idx[:, 2]] - px[tri_idx[:, 0]]) * (py[tri_idx[:, 1]] - py[tri_idx[:, 0]]))
        tri_idx = tri_idx[areas > 1e-14]
        tri = Triangulation(px, py, triangles=tri_idx)
        self._interp = LinearTriInterpolator(tri, points[:, 2])

    def __call__(self, qx, qt) -> np.ndarray:
        qx = np.asarray(qx, dtype=float)
        qt = np.asarray(qt, dtype=float)
        out = np.ma.filled(self._interp(qx, qt), np.nan)
        missing = ~np.isfinite(out)
        if missing.any():
            out[missing] = self._plane_max(qx[missing], qt[missing])
        return out

    def _plane_max(self, qx, qt):
        # max over supporting planes equals the envelope for convex surfaces
        a, b, c, d = (self._planes[:, i] for i in range(4))
        z = -(a[None, :] * qx[:, None] + b[None, :] * qt[:, None] + d[None, :]) / c[None, :]
        return z.max(axis=1)


def _hull_cloud(axis, pure, xg, tg, h_up_arr) -> np.ndarray:
    """Pure-region graph points plus exact closed-form boundary anchors."""
    dense = np.linspace(0.0, 1.5, 4 * axis.size)
    xs = np.unique(np.concatenate([axis, dense]))
    upper_t = 2.0 * xs / 3.0 + 0.5
    mono = np.asarray(_monotone_boundary_raw(xs))
    t_rows = axis[axis >= 0.5 - 1e-12]
    x_edge = np.clip(3.0 * (t_rows - 0.5) / 2.0, 0.0, 1.5)
    cloud = np.vstack([
        np.column_stack([xg[pure], tg[pure], h_up_arr[pure]]),
        np.column_stack([xs, xs / 3.0, np.asarray(bound_nphi(xs))]),
        np.column_stack([xs, upper_t, np.asarray(min_entropy_nt(upper_t))]),
        np.column_stack([xs, mono, np.asarray(min_entropy_nt(mono))]),
        np.column_stack([x_edge, t_rows, np.asarray(min_entropy_nt(t_rows))]),
    ])
    return np.unique(cloud, axis=0)


def _extension_layer(env, pure, xg, tg, h_hull):
    h_ext = np.where(pure, h_hull, np.nan)
    below = ~pure & (tg < xg / 3.0)
    if below.any():
        h_ext[below] = env(xg[below], xg[below] / 3.0)
    above = ~pure & (tg > 2.0 * xg / 3.0 + 0.5)
    if above.any():
        x_edge = np.clip(3.0 * (tg[above] - 0.5) / 2.0, 0.0, 1.5)
        h_ext[above] = env(x_edge, tg[above])
    return h_ext


def _pin_corner(layers, i, j, target):
    # corner values are exact by construction; pin away solver/hull round-off
    for arr in layers:
        if abs(arr[i, j] - target) > 1e-9:
            raise UnreachablePointError(
                f"corner node ({i}, {j}) = {arr[i, j]!r}, expected {target}")
        arr[i, j] = target


def load_or_build(cache_dir, grid_n: int = 301, mu4_step: float = 1e-3,
                  workers: int | None = None) -> BoundSurface:
    """Load a cached surface for these parameters or build and cache one."""
    from . import io as io_mod

    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, f"surface_g{grid_n}_s{mu4_step:g}.tsv")
    if os.path.exists(path):
        return io_mod.load_surface(path)
    surface = build_surface(grid_n=grid_n, mu4_step=mu4_step, workers=workers)
    io_mod.save_surface(path, surface)
    return surface
