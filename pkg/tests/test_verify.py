import numpy as np

from eofbound import verify
from eofbound.bounds import min_entropy_nt


def test_quick_checks_pass():
    report = verify.run_checks(
        seed=1, surface=None, resolution=150, pure_samples=500,
        separable_samples=50, ensembles=20,
        names=["linalg_invariants", "pure_state_formulas", "region_roundtrip",
               "eq9_consistency", "region_soundness"])
    assert report.passed
    assert len(report.results) == 5


def test_report_dict_is_deterministic():
    kwargs = dict(seed=3, surface=None, resolution=120, pure_samples=200,
                  names=["region_soundness", "eq9_consistency"])
    a = verify.run_checks(**kwargs).as_dict()
    b = verify.run_checks(**kwargs).as_dict()
    assert a == b


def test_perturbed_constant_is_caught():
    # mutation sanity: a wrong closed-form constant must fail the
    # oracle-comparison check
    def perturbed(n_t):
        return np.asarray(min_entropy_nt(n_t)) + 0.02

    result = verify.check_oracle_single_nt(seed=0, resolution=150,
                                           points=4, bound_fn=perturbed)
    assert not result.passed

    honest = verify.check_oracle_single_nt(seed=0, resolution=150, points=4)
    assert honest.passed


def test_surface_checks_pass_on_default_surface(surface_default):
    # gap and convexity tolerances are calibrated to the default resolution
    report = verify.run_checks(
        seed=0, surface=surface_default, pure_samples=300, separable_samples=30,
        ensembles=30,
        names=["tightness", "hull_gap", "surface_shape",
               "boundary_consistency", "bound_soundness"])
    assert report.passed, [r.line() for r in report.results]


def test_small_surface_keeps_structural_invariants(surface_small):
    # the minimum-resolution surface keeps exact corners, monotonicity and
    # boundary consistency even though its hull gap is resolution limited
    report = verify.run_checks(
        seed=0, surface=surface_small, pure_samples=100, separable_samples=10,
        ensembles=10, names=["tightness", "boundary_consistency"])
    assert report.passed, [r.line() for r in report.results]
