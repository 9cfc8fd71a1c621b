"""File formats: density-matrix state files and bound-surface files.

Both formats are human-readable text.  State files are JSON with explicit
"re"/"im" blocks; surface files are tab-separated node tables under a
commented header, with "NA" marking layers that are undefined at a node.
Floats are written with ``repr``, which round-trips doubles exactly, so a
save/load/save cycle is byte-stable and rebuilds with identical parameters
produce identical files.
"""

from __future__ import annotations

import json
from typing import NamedTuple

import numpy as np

from .bounds import BoundSurface
from .linalg import DensityMatrix
from .validation import ValidationError

STATE_FORMAT = "eofbound-state"
STATE_VERSION = 1
SURFACE_MAGIC = "# eofbound-surface"
SURFACE_VERSION = 1
_SENTINEL = "NA"


class ParseError(Exception):
    """A file is malformed (as opposed to describing an invalid state)."""


class StateRecord(NamedTuple):
    rho: DensityMatrix
    label: str | None


def save_state(path, rho: DensityMatrix, label: str | None = None) -> None:
    payload = {
        "format": STATE_FORMAT,
        "version": STATE_VERSION,
        "dims": [rho.dim_a, rho.dim_b],
        "re": rho.matrix.real.tolist(),
        "im": rho.matrix.imag.tolist(),
    }
    if label is not None:
        payload["label"] = label
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_state(path) -> StateRecord:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot parse state file {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != STATE_FORMAT:
        raise ParseError(f"{path} is not an {STATE_FORMAT} file")
    if payload.get("version") != STATE_VERSION:
        raise ParseError(f"unsupported state file version {payload.get('version')!r}")
    try:
        dims = payload["dims"]
        re = np.asarray(payload["re"], dtype=float)
        im = np.asarray(payload["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"state file {path} is missing or has malformed fields: {exc}") from exc
    if not (isinstance(dims, list) and len(dims) == 2):
        raise ParseError(f"state file {path} has malformed dims {dims!r}")
    if dims[0] != 4:
        raise ValidationError(f"subsystem A must have dimension 4, got {dims[0]}")
    if re.shape != im.shape:
        raise ParseError(f"state file {path}: re/im shapes differ: {re.shape} vs {im.shape}")
    rho = DensityMatrix.from_matrix(re + 1j * im, int(dims[1]))
    label = payload.get("label")
    return StateRecord(rho=rho, label=label)


def _fmt(value: float) -> str:
    return _SENTINEL if np.isnan(value) else repr(float(value))


def save_surface(path, surface: BoundSurface) -> None:
    lines = [
        f"{SURFACE_MAGIC} v{SURFACE_VERSION}",
        f"# grid_n={surface.grid_n}",
        f"# mu4_step={repr(float(surface.mu4_step))}",
        "# columns: n_phi n_t h_tilde h_up h_hull h_ext",
    ]
    axis = surface.axis
    for i in range(surface.grid_n):
        xi = repr(float(axis[i]))
        for j in range(surface.grid_n):
            lines.append("\t".join((
                xi,
                repr(float(axis[j])),
                _fmt(surface.h_tilde[i, j]),
                _fmt(surface.h_up[i, j]),
                _fmt(surface.h_hull[i, j]),
                _fmt(surface.h_ext[i, j]),
            )))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def _parse_cell(token: str) -> float:
    return np.nan if token == _SENTINEL else float(token)


def load_surface(path) -> BoundSurface:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read surface file {path}: {exc}") from exc
    if not lines or not lines[0].startswith(SURFACE_MAGIC):
        raise ParseError(f"{path} is not an eofbound surface file")
    if lines[0] != f"{SURFACE_MAGIC} v{SURFACE_VERSION}":
        raise ParseError(f"unsupported surface version line {lines[0]!r}")
    header = {}
    body_start = None
    for idx, line in enumerate(lines[1:], start=1):
        if not line.startswith("#"):
            body_start = idx
            break
        text = line.lstrip("# ")
        if "=" in text:
            key, _, value = text.partition("=")
            header[key.strip()] = value.strip()
    try:
        grid_n = int(header["grid_n"])
        mu4_step = float(header["mu4_step"])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"surface file {path} header is malformed: {exc}") from exc
    if body_start is None:
        raise ParseError(f"surface file {path} has no node table")
    rows = lines[body_start:]
    if len(rows) != grid_n * grid_n:
        raise ParseError(
            f"surface file {path} has {len(rows)} rows, expected {grid_n * grid_n}")

    axis = np.linspace(0.0, 1.5, grid_n)
    try:
        table = np.asarray([row.split("\t") for row in rows], dtype=object)
    except ValueError as exc:
        raise ParseError(f"surface file {path} node table is ragged: {exc}") from exc
    if table.ndim != 2 or table.shape[1] != 6:
        raise ParseError(
            f"surface file {path} rows must have 6 columns, got shape {table.shape}")
    cells = table[:, 2:].astype("U32")
    cells[cells == _SENTINEL] = "nan"
    try:
        values = cells.astype(float)
    except ValueError as exc:
        raise ParseError(f"surface file {path} has a malformed number: {exc}") from exc
    shape = (grid_n, grid_n)
    h_tilde = values[:, 0].reshape(shape)
    h_up = values[:, 1].reshape(shape)
    h_hull = values[:, 2].reshape(shape)
    h_ext = values[:, 3].reshape(shape)
    if np.isnan(h_ext).any():
        raise ParseError(f"surface file {path} has NA entries in h_ext")
    return BoundSurface(axis=axis, h_tilde=h_tilde, h_up=h_up, h_hull=h_hull,
                        h_ext=h_ext, grid_n=grid_n, mu4_step=mu4_step)
