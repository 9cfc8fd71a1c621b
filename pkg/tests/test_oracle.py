import itertools
import math

import numpy as np
import pytest

from eofbound.bounds import bound_nphi, bound_nt, min_entropy_nt
from eofbound.oracle import (
    InfeasibleError,
    phi_band,
    SimplexGrid,
    brute_constrained_extremum,
    brute_min_entropy,
    entropy_batch,
    negativity_batch,
    negativity_constraint,
    phi_negativity_batch,
    phi_negativity_constraint,
    pure_scatter,
    scatter_point,
)
from eofbound.validation import ValidationError


class TestSimplexGrid:
    def test_resolution_4_enumeration(self):
        grid = SimplexGrid.build(4)
        expected = {(4, 0, 0, 0), (3, 1, 0, 0), (2, 2, 0, 0), (2, 1, 1, 0),
                    (1, 1, 1, 1)}
        got = {tuple(int(round(4 * v)) for v in row) for row in grid.points}
        assert got == expected

    def test_counts_match_itertools_enumeration(self):
        res = 20
        grid = SimplexGrid.build(res)
        ref = sum(1 for c in itertools.product(range(res + 1), repeat=3)
                  if c[0] >= c[1] >= c[2] >= res - sum(c) >= 0)
        assert grid.points.shape[0] == ref

    def test_points_are_valid_schmidt_vectors(self):
        grid = SimplexGrid.build(37)
        pts = grid.points
        np.testing.assert_allclose(pts.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(np.diff(pts, axis=1) <= 1e-15)
        assert pts.min() >= 0.0

    def test_entropy_precomputed(self):
        grid = SimplexGrid.build(10)
        np.testing.assert_allclose(grid.entropy, entropy_batch(grid.points),
                                   atol=0)

    def test_rejects_tiny_resolution(self):
        with pytest.raises(ValidationError):
            SimplexGrid.build(2)


class TestBruteMinEntropy:
    def test_max_negativity_forces_uniform(self, simplex_400):
        value, mu = brute_min_entropy(
            [negativity_constraint(1.5, simplex_400.default_band)], simplex_400)
        assert value == pytest.approx(2.0, abs=5e-3)
        np.testing.assert_allclose(mu, np.full(4, 0.25), atol=0.02)

    def test_max_phi_negativity_gives_bell(self, simplex_400):
        value, mu = brute_min_entropy(
            [phi_negativity_constraint(1.5, simplex_400.default_band)], simplex_400)
        assert value == pytest.approx(1.0, abs=5e-3)
        np.testing.assert_allclose(sorted(mu, reverse=True)[:2], [0.5, 0.5],
                                   atol=0.02)

    def test_double_constraint_boundary_point(self, simplex_400):
        value, mu = brute_min_entropy(
            [negativity_constraint(1.0, simplex_400.default_band),
             phi_negativity_constraint(math.sqrt(1.25), simplex_400.default_band)],
            simplex_400)
        assert value == pytest.approx(1.2075187496394222, abs=5e-3)
        np.testing.assert_allclose(mu, [0.75, 1 / 12, 1 / 12, 1 / 12], atol=0.02)

    def test_two_constraints_dominate_one(self, simplex_400):
        band = simplex_400.default_band
        pband = phi_band(1.0, simplex_400.resolution)
        both, _ = brute_min_entropy(
            [negativity_constraint(0.8, band),
             phi_negativity_constraint(1.0, pband)], simplex_400)
        only_t, _ = brute_min_entropy([negativity_constraint(0.8, band)],
                                      simplex_400)
        only_phi, _ = brute_min_entropy([phi_negativity_constraint(1.0, pband)],
                                        simplex_400)
        assert both >= only_t - 1e-12
        assert both >= only_phi - 1e-12

    def test_infeasible_raises(self, simplex_400):
        with pytest.raises(InfeasibleError):
            brute_min_entropy(
                [negativity_constraint(0.0, 1e-4),
                 phi_negativity_constraint(1.5, 1e-4)], simplex_400)

    def test_requires_constraints(self, simplex_400):
        with pytest.raises(ValidationError):
            brute_min_entropy([], simplex_400)

    def test_refinement_tightens(self):
        grid = SimplexGrid.build(150)
        coarse, _ = brute_min_entropy(
            [negativity_constraint(0.7, grid.default_band)], grid, refine=False)
        fine, _ = brute_min_entropy(
            [negativity_constraint(0.7, grid.default_band)], grid, refine=True)
        target = float(min_entropy_nt(0.7))
        assert abs(fine - target) <= abs(coarse - target) + 1e-12

    def test_single_nt_matches_closed_form(self, simplex_400):
        for n_t in (0.25, 0.6, 0.95, 1.2):
            value, _ = brute_min_entropy(
                [negativity_constraint(n_t, simplex_400.default_band)], simplex_400)
            assert value == pytest.approx(float(min_entropy_nt(n_t)), abs=5e-3)

    def test_single_nphi_matches_closed_form(self, simplex_400):
        for n_phi in (0.3, 0.8, 1.2, 1.45):
            value, _ = brute_min_entropy(
                [phi_negativity_constraint(
                    n_phi, phi_band(n_phi, simplex_400.resolution))],
                simplex_400)
            assert value == pytest.approx(float(bound_nphi(n_phi)), abs=5e-3)

    def test_deterministic_given_seed(self, simplex_400):
        c = [negativity_constraint(0.9, simplex_400.default_band)]
        a = brute_min_entropy(c, simplex_400, seed=7)
        b = brute_min_entropy(c, simplex_400, seed=7)
        assert a[0] == b[0]
        np.testing.assert_array_equal(a[1], b[1])


class TestConstrainedMaximum:
    def test_upper_boundary_recovered(self, simplex_400):
        # the extremal states realize the constraint through unsorted
        # coefficient groupings: scan all three pairings
        from eofbound.oracle import PHI_PAIRINGS, Constraint

        for n_phi in (0.4, 0.9, 1.3):
            band = phi_band(n_phi, simplex_400.resolution)
            got = -np.inf
            for fn in PHI_PAIRINGS:
                try:
                    val, _ = brute_constrained_extremum(
                        negativity_batch, [Constraint(fn, n_phi, band)],
                        simplex_400, maximize=True)
                except InfeasibleError:
                    continue
                got = max(got, val)
            assert got == pytest.approx(2 * n_phi / 3 + 0.5, abs=1e-3)

    def test_sorted_pairing_max_is_sector_boundary(self, simplex_400):
        # with the descending-order grouping alone, the reachable maximum is
        # the upper sector boundary, not the pure-region ceiling
        from eofbound.region import monotone_boundary

        n_phi = 0.9
        got, _ = brute_constrained_extremum(
            negativity_batch,
            [phi_negativity_constraint(n_phi, phi_band(n_phi, 400))],
            simplex_400, maximize=True)
        assert got == pytest.approx(monotone_boundary(n_phi), abs=2e-3)


class TestPureScatter:
    def test_deterministic(self):
        p1, e1 = pure_scatter(500, seed=3)
        p2, e2 = pure_scatter(500, seed=3)
        np.testing.assert_array_equal(p1, p2)
        np.testing.assert_array_equal(e1, e2)

    def test_region_containment(self):
        pairs, _ = pure_scatter(20_000, seed=1)
        low = pairs[:, 0] / 3.0
        up = 2.0 * pairs[:, 0] / 3.0 + 0.5
        assert (pairs[:, 1] - low).min() >= -1e-9
        assert (up - pairs[:, 1]).min() >= -1e-9

    def test_product_state_maps_to_origin(self):
        pair, entropy = scatter_point([1.0, 0.0, 0.0, 0.0])
        assert pair == (0.0, 0.0)
        assert entropy == 0.0

    def test_rejects_zero_samples(self):
        with pytest.raises(ValidationError):
            pure_scatter(0)

    def test_scatter_confined_to_two_constraint_sector(self):
        # the descending-order closed forms populate exactly the sector below
        # the upper monotone boundary: at fixed pairing sum the negativity is
        # maximized by the (g, g', g', g') family sitting on that curve
        from eofbound.region import _monotone_boundary_raw

        pairs, _ = pure_scatter(20_000, seed=2)
        excess = pairs[:, 1] - np.asarray(_monotone_boundary_raw(pairs[:, 0]))
        assert excess.max() <= 1e-9

    def test_scatter_hull_converges_to_sector_hull(self):
        # the scatter hull tracks the sector boundaries, limited by the
        # square-root-degenerate sampling measure near the lower boundary
        # (closest approach shrinks roughly like samples^(-1/3))
        from scipy.spatial import ConvexHull

        from eofbound.region import _monotone_boundary_raw

        xs = np.linspace(0.0, 1.5, 300)
        boundary = np.vstack([
            np.column_stack([xs, xs / 3.0]),
            np.column_stack([xs, np.asarray(_monotone_boundary_raw(xs))]),
        ])

        def hull_gap(samples):
            pairs, _ = pure_scatter(samples, seed=5)
            hull = ConvexHull(pairs)
            dist = (boundary @ hull.equations[:, :2].T
                    + hull.equations[:, 2]).max(axis=1)
            return float(dist.max())

        coarse = hull_gap(3_000)
        fine = hull_gap(100_000)
        assert fine < coarse
        assert fine <= 0.15
