"""Plot-data export: boundary curves, mu4 coverage masks, surface grids and
contour polylines, all as delimited text directly loadable by plotting tools.
"""

from __future__ import annotations

import os

import numpy as np

from .bounds import BoundSurface
from .region import _monotone_boundary_raw, coverage_map

DEFAULT_MU4_VALUES = (0.0, 0.05, 0.15, 0.25)
DEFAULT_LEVELS = tuple(np.arange(0.25, 2.0, 0.25))


def _write_rows(path, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# {header}\n")
        for row in rows:
            fh.write("\t".join(repr(float(v)) for v in row))
            fh.write("\n")


def export_boundaries(out_dir, samples: int = 601) -> str:
    """Lower, monotone and upper boundary curves on a dense n_phi axis."""
    xs = np.linspace(0.0, 1.5, samples)
    mono = np.asarray(_monotone_boundary_raw(xs))
    rows = np.column_stack([xs, xs / 3.0, mono, 2.0 * xs / 3.0 + 0.5])
    path = os.path.join(out_dir, "boundaries.tsv")
    _write_rows(path, "n_phi lower monotone upper", rows)
    return path


def export_coverage(out_dir, mu4: float, grid_n: int = 151) -> str:
    """Reachable 2-constraint nodes at one mu4, as (n_phi, n_t) rows."""
    axis, mask = coverage_map(mu4, grid_n)
    ii, jj = np.nonzero(mask)
    rows = np.column_stack([axis[ii], axis[jj]])
    path = os.path.join(out_dir, f"coverage_mu4_{mu4:g}.tsv")
    _write_rows(path, f"mu4={mu4:g} grid_n={grid_n}; columns: n_phi n_t", rows)
    return path


def export_surface_grid(out_dir, surface: BoundSurface) -> str:
    """Full-square bound surface in long format (n_phi, n_t, h_ext)."""
    g = surface.grid_n
    x = np.repeat(surface.axis, g)
    t = np.tile(surface.axis, g)
    rows = np.column_stack([x, t, surface.h_ext.reshape(-1)])
    path = os.path.join(out_dir, "surface_ext.tsv")
    _write_rows(path, "n_phi n_t h_ext", rows)
    return path


def export_contours(out_dir, surface: BoundSurface, levels=DEFAULT_LEVELS) -> list[str]:
    """Contour polylines of h_ext; blank lines separate polyline segments."""
    from skimage import measure

    step = surface.axis[1] - surface.axis[0]
    paths = []
    for level in levels:
        segments = measure.find_contours(surface.h_ext, float(level))
        path = os.path.join(out_dir, f"contour_{level:g}.tsv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# level={level:g}; columns: n_phi n_t\n")
            for seg in segments:
                for i, j in seg:
                    fh.write(f"{repr(float(i * step))}\t{repr(float(j * step))}\n")
                fh.write("\n")
        paths.append(path)
    return paths


def export_figures(surface: BoundSurface, out_dir,
                   mu4_values=DEFAULT_MU4_VALUES,
                   coverage_grid_n: int = 151,
                   levels=DEFAULT_LEVELS) -> list[str]:
    """Write every figure-data file; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = [export_boundaries(out_dir)]
    for mu4 in mu4_values:
        written.append(export_coverage(out_dir, float(mu4), coverage_grid_n))
    written.append(export_surface_grid(out_dir, surface))
    written.extend(export_contours(out_dir, surface, levels))
    return written
