import numpy as np

from eofbound.figures import (
    export_boundaries,
    export_contours,
    export_coverage,
    export_figures,
    export_surface_grid,
)


def _load_rows(path):
    rows = []
    for line in open(path):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([float(v) for v in line.split("\t")])
    return np.asarray(rows)


def test_boundary_curves_ordered(tmp_path):
    path = export_boundaries(tmp_path)
    rows = _load_rows(path)
    assert rows.shape[1] == 4
    lower, mono, upper = rows[:, 1], rows[:, 2], rows[:, 3]
    assert np.all(lower <= mono + 1e-12)
    assert np.all(mono <= upper + 1e-12)


def test_coverage_file_includes_lower_boundary(tmp_path):
    path = export_coverage(tmp_path, 0.0, grid_n=61)
    rows = _load_rows(path)
    assert rows.size > 0
    on_lower = np.abs(rows[:, 1] - rows[:, 0] / 3.0) < 1e-9
    assert on_lower.any()


def test_surface_grid_export(tmp_path, surface_small):
    path = export_surface_grid(tmp_path, surface_small)
    rows = _load_rows(path)
    assert rows.shape == (surface_small.grid_n ** 2, 3)
    assert rows[0, 2] == 0.0
    assert rows[-1, 2] == 2.0


def test_contour_near_max_hugs_top_strip(tmp_path, surface_default):
    # the extension is constant along n_phi above the pure region, so the
    # super-level set near the maximum is a thin strip under n_t = 3/2 that
    # contains the maximally entangled corner
    paths = export_contours(tmp_path, surface_default, levels=(1.95,))
    pts = []
    for line in open(paths[0]):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        pts.append([float(v) for v in line.split("\t")])
    pts = np.asarray(pts)
    assert pts.size > 0
    assert pts[:, 1].min() >= 1.4
    assert np.hypot(pts[:, 0] - 1.5, pts[:, 1] - 1.5).min() <= 0.1


def test_export_figures_writes_everything(tmp_path, surface_small):
    written = export_figures(surface_small, tmp_path, mu4_values=(0.0, 0.25),
                             coverage_grid_n=61)
    names = [p.split("/")[-1] for p in map(str, written)]
    assert "boundaries.tsv" in names
    assert "coverage_mu4_0.tsv" in names
    assert "coverage_mu4_0.25.tsv" in names
    assert "surface_ext.tsv" in names
    assert sum(1 for n in names if n.startswith("contour_")) == 7
