"""Cross-module verification checks shared by the CLI and the test suite.

Each check is a seeded, deterministic function returning a
:class:`CheckResult`; ``run_checks`` executes a selection and aggregates a
machine-readable summary.  Several checks accept injectable closed-form
callables so the test suite can demonstrate that a perturbed constant is
actually caught.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import bounds, monotones, oracle, region
from .linalg import (
    apply_map_to_a,
    hermitian_eigenvalues,
    partial_transpose_a,
    realign,
    schmidt_vector,
    trace_norm,
)
from .states import (
    canonical_pure_state,
    ensemble_density,
    maximally_entangled,
    pure_density,
    random_density,
    random_ensemble,
    random_pure_state,
    random_schmidt_vector,
    random_separable,
    random_unitary,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail}"


@dataclass
class VerifyReport:
    seed: int
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def as_dict(self) -> dict:
        # timings stay out so a fixed seed yields an identical report
        return {
            "seed": self.seed,
            "passed": self.passed,
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail}
                for r in self.results
            ],
        }


def _result(name, passed, detail, t0) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail,
                       elapsed=time.time() - t0)


def check_linalg_invariants(seed: int = 0, trials: int = 50) -> CheckResult:
    """Partial-transpose involution, trace-norm unitary invariance, local
    unitary invariance of Schmidt coefficients."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        rho = random_density(rng, dim_b=4)
        pt = partial_transpose_a(rho)
        rho2 = type(rho)(matrix=pt, dim_a=4, dim_b=4)
        worst = max(worst, float(np.abs(partial_transpose_a(rho2) - rho.matrix).max()))
        m = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        u = random_unitary(rng, 8)
        w = random_unitary(rng, 8)
        worst = max(worst, abs(trace_norm(u @ m @ w) - trace_norm(m)))
        psi = random_pure_state(rng, dim_b=5)
        ua = random_unitary(rng, 4)
        ub = random_unitary(rng, 5)
        mu1 = schmidt_vector(psi, (4, 5))
        mu2 = schmidt_vector(np.kron(ua, ub) @ psi, (4, 5))
        worst = max(worst, float(np.abs(mu1 - mu2).max()))
    return _result("linalg_invariants", worst <= 1e-9,
                   f"worst deviation {worst:.2e} (tol 1e-9)", t0)


def check_pure_state_formulas(seed: int = 0, samples: int = 1000) -> CheckResult:
    """Operational monotones match the Schmidt closed forms in the canonical
    frame, and realignment negativity equals negativity for pure states."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        mu = random_schmidt_vector(rng)
        dim_b = int(rng.choice([4, 6]))
        rho = pure_density(canonical_pure_state(mu, dim_b))
        n_t = monotones.negativity(rho)
        n_phi = monotones.phi_negativity(rho)
        n_r = monotones.realignment_negativity(rho)
        worst = max(worst, abs(n_t - monotones.negativity_pure(mu)),
                    abs(n_phi - monotones.phi_negativity_pure(mu)),
                    abs(n_r - n_t))
    return _result("pure_state_formulas", worst <= 1e-9,
                   f"{samples} canonical states, worst |op - closed form| "
                   f"{worst:.2e} (tol 1e-9)", t0)


def check_separable_states(seed: int = 0, samples: int = 1000,
                           surface=None) -> CheckResult:
    """Separable states: all monotones vanish, the map condition keeps the
    spectrum nonnegative, and the bound is zero."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst_mono = 0.0
    worst_eig = 0.0
    worst_bound = 0.0
    for _ in range(samples):
        rho = random_separable(rng, dim_b=4)
        pair = monotones.monotone_pair(rho, use_realignment=True)
        worst_mono = max(worst_mono, pair.n_phi, pair.n_t,
                         monotones.realignment_negativity(rho))
        eigs = hermitian_eigenvalues(apply_map_to_a(rho, monotones.phi_map))
        worst_eig = max(worst_eig, -float(eigs[-1]))
        if surface is not None:
            worst_bound = max(worst_bound, bounds.eval_bound(surface, pair))
    ok = worst_mono <= 1e-9 and worst_eig <= 1e-9 and worst_bound <= 1e-9
    return _result("separable_states", ok,
                   f"{samples} separable states: max monotone {worst_mono:.2e}, "
                   f"max negative eigenvalue {worst_eig:.2e}, "
                   f"max bound {worst_bound:.2e} (tol 1e-9)", t0)


def check_monotone_convexity(seed: int = 0, trials: int = 200) -> CheckResult:
    """f(p rho1 + (1-p) rho2) <= p f(rho1) + (1-p) f(rho2) for all three."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    fns = (monotones.negativity, monotones.phi_negativity,
           monotones.realignment_negativity)
    for _ in range(trials):
        r1 = random_density(rng, dim_b=4)
        r2 = random_density(rng, dim_b=4)
        p = float(rng.uniform())
        mix = type(r1)(matrix=p * r1.matrix + (1 - p) * r2.matrix, dim_a=4, dim_b=4)
        for fn in fns:
            worst = max(worst, fn(mix) - p * fn(r1) - (1 - p) * fn(r2))
    return _result("monotone_convexity", worst <= 1e-9,
                   f"worst convexity violation {worst:.2e} (tol 1e-9)", t0)


def check_region_soundness(seed: int = 0, samples: int = 10_000) -> CheckResult:
    """Random pure states land inside the pure-state region (inclusive)."""
    t0 = time.time()
    pairs, _ = oracle.pure_scatter(samples, seed=seed)
    low = pairs[:, 0] / 3.0
    up = 2.0 * pairs[:, 0] / 3.0 + 0.5
    worst = max(float((low - pairs[:, 1]).max()), float((pairs[:, 1] - up).max()))
    return _result("region_soundness", worst <= 1e-9,
                   f"{samples} samples, worst boundary violation {worst:.2e} "
                   "(tol 1e-9)", t0)


def check_lagrange_boundary(seed: int = 0, resolution: int = 400,
                            points: int = 8, grid=None) -> CheckResult:
    """Constrained maximization of n_t reproduces the upper boundary.

    The extremal states realize the constraint through unsorted coefficient
    groupings, so the search scans all three pairings.
    """
    t0 = time.time()
    grid = grid if grid is not None else oracle.SimplexGrid.build(resolution)
    worst = 0.0
    for n_phi in np.linspace(0.15, 1.45, points):
        band = oracle.phi_band(float(n_phi), grid.resolution)
        got = -np.inf
        for fn in oracle.PHI_PAIRINGS:
            try:
                val, _ = oracle.brute_constrained_extremum(
                    oracle.negativity_batch,
                    [oracle.Constraint(fn, float(n_phi), band)],
                    grid, refine=True, maximize=True, seed=seed)
            except oracle.InfeasibleError:
                continue
            got = max(got, val)
        worst = max(worst, abs(got - (2.0 * n_phi / 3.0 + 0.5)))
    return _result("lagrange_boundary", worst <= 1e-3,
                   f"{points} points, worst |max n_t - (2 n_phi/3 + 1/2)| "
                   f"{worst:.2e} (tol 1e-3)", t0)


def check_oracle_single_nt(seed: int = 0, resolution: int = 400,
                           points: int = 10, bound_fn=None, grid=None) -> CheckResult:
    """Brute n_t-only entropy minimum against the closed form."""
    t0 = time.time()
    fn = bound_fn if bound_fn is not None else bounds.min_entropy_nt
    grid = grid if grid is not None else oracle.SimplexGrid.build(resolution)
    worst = 0.0
    for n_t in np.linspace(0.12, 1.45, points):
        got, _ = oracle.brute_min_entropy(
            [oracle.negativity_constraint(float(n_t), grid.default_band)],
            grid, refine=True, seed=seed)
        worst = max(worst, abs(got - float(fn(float(n_t)))))
    return _result("oracle_single_nt", worst <= 5e-3,
                   f"{points} values, worst |brute - closed form| {worst:.2e} "
                   "(tol 5e-3)", t0)


def check_oracle_single_nphi(seed: int = 0, resolution: int = 400,
                             points: int = 10, bound_fn=None, grid=None) -> CheckResult:
    """Brute n_phi-only entropy minimum against the closed form."""
    t0 = time.time()
    fn = bound_fn if bound_fn is not None else bounds.bound_nphi
    grid = grid if grid is not None else oracle.SimplexGrid.build(resolution)
    worst = 0.0
    for n_phi in np.linspace(0.12, 1.45, points):
        band = oracle.phi_band(float(n_phi), grid.resolution)
        got, _ = oracle.brute_min_entropy(
            [oracle.phi_negativity_constraint(float(n_phi), band)],
            grid, refine=True, seed=seed)
        worst = max(worst, abs(got - float(fn(float(n_phi)))))
    return _result("oracle_single_nphi", worst <= 5e-3,
                   f"{points} values, worst |brute - closed form| {worst:.2e} "
                   "(tol 5e-3)", t0)


def check_oracle_double(seed: int = 0, resolution: int = 400,
                        points: int = 20, grid=None) -> CheckResult:
    """Sweep-based doubly constrained minimum against two-constraint brute
    force at interior sector points."""
    t0 = time.time()
    grid = grid if grid is not None else oracle.SimplexGrid.build(resolution)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        n_phi = float(rng.uniform(0.3, 1.4))
        low = n_phi / 3.0
        mono = region.monotone_boundary(n_phi)
        n_t = float(rng.uniform(low + 0.15 * (mono - low), low + 0.85 * (mono - low)))
        ht = bounds.h_tilde_2c(monotones.MonotonePair(n_phi, n_t))
        base_t = grid.default_band
        base_phi = oracle.phi_band(n_phi, grid.resolution)
        # the joint feasible set can be empty at the base bands; widening is
        # safe because refinement re-projects onto the exact manifolds
        for attempt in range(6):
            scale = 2.0 ** attempt
            try:
                brute, _ = oracle.brute_min_entropy(
                    [oracle.negativity_constraint(n_t, scale * base_t),
                     oracle.phi_negativity_constraint(n_phi, scale * base_phi)],
                    grid, refine=True, seed=seed)
            except oracle.InfeasibleError:
                continue
            break
        else:
            return _result("oracle_double", False,
                           f"empty feasible set at ({n_phi:.3f}, {n_t:.3f})", t0)
        worst = max(worst, abs(ht - brute))
    return _result("oracle_double", worst <= 5e-3,
                   f"{points} interior points, worst |sweep - brute| {worst:.2e} "
                   "(tol 5e-3)", t0)


def check_boundary_identity(points: int = 20) -> CheckResult:
    """On the upper sector boundary, the doubly constrained minimum equals
    the n_t-only constrained minimum."""
    t0 = time.time()
    worst = 0.0
    for gamma in np.linspace(0.2501, 0.9999, points):
        n = region.parametric_boundary(float(gamma))
        worst = max(worst, abs(bounds.h_tilde_2c(n)
                               - float(bounds.min_entropy_nt(n.n_t))))
    return _result("boundary_identity", worst <= 1e-4,
                   f"{points} boundary points, worst deviation {worst:.2e} "
                   "(tol 1e-4)", t0)


def check_bound_soundness(surface, seed: int = 0, pure_samples: int = 10_000,
                          ensembles: int = 1000) -> CheckResult:
    """Pure states and random ensembles never undercut the bound chain."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(pure_samples):
        dim_b = int(rng.choice([4, 8]))
        psi = random_pure_state(rng, dim_b)
        mu = schmidt_vector(psi, (4, dim_b))
        pair = monotones.monotone_pair(pure_density(psi))
        worst = max(worst, bounds.eval_bound(surface, pair) - bounds.eof_pure(mu))
    worst_ens = -np.inf
    for _ in range(ensembles):
        dim_b = 4
        probs, kets = random_ensemble(rng, dim_b)
        rho = ensemble_density(probs, kets, dim_b)
        avg = sum(p * bounds.eof_pure(schmidt_vector(k, (4, dim_b)))
                  for p, k in zip(probs, kets))
        pair = monotones.monotone_pair(rho)
        worst_ens = max(worst_ens, bounds.eval_bound(surface, pair) - avg)
    ok = worst <= 1e-6 and worst_ens <= 1e-6
    return _result("bound_soundness", ok,
                   f"{pure_samples} pure states (max excess {worst:.2e}), "
                   f"{ensembles} ensembles (max excess {worst_ens:.2e}) (tol 1e-6)",
                   t0)


def check_tightness(surface) -> CheckResult:
    """The doubly constrained surface dominates both singly constrained ones
    and strictly improves somewhere in the 2-constraint sector."""
    t0 = time.time()
    x = surface.axis[:, None]
    tt = surface.axis[None, :]
    singles = np.maximum(
        np.asarray(bounds.bound_nt(np.broadcast_to(tt, surface.h_ext.shape))),
        np.asarray(bounds.bound_nphi(np.broadcast_to(x, surface.h_ext.shape))))
    slack = float((surface.h_ext - singles).min())
    interior = np.isfinite(surface.h_tilde)
    improvement = float(np.nanmax(np.where(interior, surface.h_ext - singles,
                                           -np.inf)))
    ok = slack >= -1e-6 and improvement >= 0.01
    return _result("tightness", ok,
                   f"min slack over singles {slack:.2e} (tol -1e-6), best "
                   f"2-constraint improvement {improvement:.3f} (need >= 0.01)", t0)


def check_hull_gap(surface) -> CheckResult:
    """Hull gap within 5e-3 and localized near the maximally entangled corner."""
    t0 = time.time()
    gap, loc = surface.max_hull_gap()
    dist = float(np.hypot(loc.n_phi - 1.5, loc.n_t - 1.5))
    ok = gap <= 5e-3 and dist <= 0.3
    return _result("hull_gap", ok,
                   f"max gap {gap:.2e} (tol 5e-3) at ({loc.n_phi:.3f}, "
                   f"{loc.n_t:.3f}), distance {dist:.3f} from corner (tol 0.3)", t0)


def check_surface_shape(surface, seed: int = 0, pairs: int = 10_000) -> CheckResult:
    """Corners, axis monotonicity and midpoint convexity of the hull layer."""
    t0 = time.time()
    msgs = []
    ok = surface.h_ext[0, 0] == 0.0 and surface.h_ext[-1, -1] == 2.0
    msgs.append(f"corners ({surface.h_ext[0, 0]}, {surface.h_ext[-1, -1]})")
    worst_mono = min(float(np.diff(surface.h_ext, axis=0).min()),
                     float(np.diff(surface.h_ext, axis=1).min()))
    ok &= worst_mono >= -1e-9
    msgs.append(f"worst axis decrement {worst_mono:.2e} (tol -1e-9)")

    rng = np.random.default_rng(seed)
    pure_idx = np.argwhere(np.isfinite(surface.h_hull))
    sel = rng.integers(0, pure_idx.shape[0], size=(pairs, 2))
    a = pure_idx[sel[:, 0]]
    b = pure_idx[sel[:, 1]]
    worst_conv = -np.inf
    for lam in (0.25, 0.5, 0.75):
        mid = lam * a + (1 - lam) * b
        xm = surface.axis[0] + mid[:, 0] * (surface.axis[1] - surface.axis[0])
        tm = surface.axis[0] + mid[:, 1] * (surface.axis[1] - surface.axis[0])
        hmid = np.asarray(surface.evaluate(xm, tm))
        havg = (lam * surface.h_hull[a[:, 0], a[:, 1]]
                + (1 - lam) * surface.h_hull[b[:, 0], b[:, 1]])
        worst_conv = max(worst_conv, float((hmid - havg).max()))
    ok &= worst_conv <= 1e-4
    msgs.append(f"worst midpoint convexity excess {worst_conv:.2e} (tol 1e-4)")
    return _result("surface_shape", ok, "; ".join(msgs), t0)


def check_boundary_consistency(surface) -> CheckResult:
    """Surface values reproduce the closed forms along the boundary curves."""
    t0 = time.time()
    axis = surface.axis
    worst_low = 0.0
    worst_mono = 0.0
    for i, x in enumerate(axis):
        j = int(round(float(x) / 3.0 / (axis[1] - axis[0])))
        if abs(axis[j] - x / 3.0) <= 1e-12:
            worst_low = max(worst_low,
                            abs(surface.h_ext[i, j] - float(bounds.bound_nphi(x))))
        mono = region.monotone_boundary(float(x))
        jm = int(round(mono / (axis[1] - axis[0])))
        if abs(axis[jm] - mono) <= 1e-12 and np.isfinite(surface.h_up[i, jm]):
            worst_mono = max(worst_mono, abs(surface.h_up[i, jm]
                                             - float(bounds.min_entropy_nt(mono))))
    ok = worst_low <= 1e-4 and worst_mono <= 1e-4
    return _result("boundary_consistency", ok,
                   f"lower-boundary nodes |h_ext - closed form| {worst_low:.2e}, "
                   f"boundary nodes |h_up - closed form| {worst_mono:.2e} (tol 1e-4)",
                   t0)


def check_region_roundtrip(seed: int = 0, samples: int = 2000) -> CheckResult:
    """Solver candidates reproduce their constraint pair."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    misses = 0
    for _ in range(samples):
        mu = random_schmidt_vector(rng)
        pair, _ = oracle.scatter_point(mu)
        pair = monotones.MonotonePair(min(pair.n_phi, 1.5), min(pair.n_t, 1.5))
        cands = region.solve_schmidt(pair, float(mu[3]))
        if not cands:
            misses += 1
            continue
        err = min(float(np.abs(np.asarray(c) - mu).max()) for c in cands)
        worst = max(worst, err)
    ok = misses == 0 and worst <= 1e-9
    return _result("region_roundtrip", ok,
                   f"{samples} round trips, {misses} misses, worst recovery "
                   f"error {worst:.2e} (tol 1e-9)", t0)


def check_eq9_consistency(points: int = 100) -> CheckResult:
    """Radical closed form of the upper sector boundary against the
    parametric family, where the inner radicand is positive."""
    t0 = time.time()
    worst = 0.0
    for gamma in np.linspace(0.2501, 0.9999, points):
        n = region.parametric_boundary(float(gamma))
        u = 1.0 - 4.0 * n.n_phi ** 2 / 9.0
        inner = 4.0 * n.n_phi ** 2 / 3.0 + 2.0 * np.sqrt(u) - 2.0
        radical = 0.75 * (1.0 - np.sqrt(u) + np.sqrt(max(inner, 0.0)))
        worst = max(worst, abs(radical - region.monotone_boundary(n.n_phi)),
                    abs(radical - n.n_t))
    return _result("eq9_consistency", worst <= 1e-9,
                   f"{points} parameter values, worst |radical - parametric| "
                   f"{worst:.2e} (tol 1e-9)", t0)


def check_bound_latency(surface, seed: int = 0) -> CheckResult:
    """A cached-surface bound query for N = 16 completes within a second."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    rho = random_density(rng, dim_b=16)
    started = time.time()
    pair = monotones.monotone_pair(rho, use_realignment=True)
    bounds.eval_bound(surface, pair)
    elapsed = time.time() - started
    # keep the passing detail free of timings so reports are reproducible
    detail = "monotones + bound for N=16 within the 1s limit" if elapsed <= 1.0 \
        else f"monotones + bound for N=16 took {elapsed:.3f}s (limit 1s)"
    return _result("bound_latency", elapsed <= 1.0, detail, t0)


def run_checks(seed: int = 0, surface=None, resolution: int = 400,
               pure_samples: int = 10_000, separable_samples: int = 1000,
               ensembles: int = 1000, names=None) -> VerifyReport:
    """Run the verification suite; surface-dependent checks are skipped when
    no surface is supplied."""
    report = VerifyReport(seed=seed)
    oracle_names = {"lagrange_boundary", "oracle_single_nt", "oracle_single_nphi",
                    "oracle_double"}
    wanted = set(names) if names is not None else None
    grid = None
    if wanted is None or wanted & oracle_names:
        grid = oracle.SimplexGrid.build(resolution)
    checks = [
        ("linalg_invariants", lambda: check_linalg_invariants(seed)),
        ("pure_state_formulas", lambda: check_pure_state_formulas(seed)),
        ("monotone_convexity", lambda: check_monotone_convexity(seed)),
        ("separable_states", lambda: check_separable_states(
            seed, separable_samples, surface)),
        ("region_soundness", lambda: check_region_soundness(seed, pure_samples)),
        ("region_roundtrip", lambda: check_region_roundtrip(seed)),
        ("eq9_consistency", lambda: check_eq9_consistency()),
        ("lagrange_boundary", lambda: check_lagrange_boundary(
            seed, resolution, grid=grid)),
        ("oracle_single_nt", lambda: check_oracle_single_nt(
            seed, resolution, grid=grid)),
        ("oracle_single_nphi", lambda: check_oracle_single_nphi(
            seed, resolution, grid=grid)),
        ("oracle_double", lambda: check_oracle_double(seed, resolution, grid=grid)),
        ("boundary_identity", lambda: check_boundary_identity()),
    ]
    if surface is not None:
        checks += [
            ("bound_soundness", lambda: check_bound_soundness(
                surface, seed, pure_samples, ensembles)),
            ("tightness", lambda: check_tightness(surface)),
            ("hull_gap", lambda: check_hull_gap(surface)),
            ("surface_shape", lambda: check_surface_shape(surface, seed)),
            ("boundary_consistency", lambda: check_boundary_consistency(surface)),
            ("bound_latency", lambda: check_bound_latency(surface, seed)),
        ]
    for name, fn in checks:
        if wanted is not None and name not in wanted:
            continue
        report.results.append(fn())
    return report
