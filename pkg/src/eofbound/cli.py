"""Command-line front end.

Verbs: monotones, bound, build-surface, export-figures, coverage, verify.
Exit codes: 0 success, 2 usage (argparse), 3 file parse error, 4 validation
error, 5 missing surface file, 6 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import bounds, figures, io, monotones, region, verify
from .validation import InternalInconsistencyError, ValidationError

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_MISSING_SURFACE = 5
EXIT_VERIFY_FAILED = 6

DEFAULT_DIM_B_CAP = 16


def _load_state(path, dim_b_cap: int):
    record = io.load_state(path)
    if record.rho.dim_b > dim_b_cap:
        print(f"warning: N = {record.rho.dim_b} exceeds the default cap "
              f"{DEFAULT_DIM_B_CAP}; dense eigensolves may be slow",
              file=sys.stderr)
    return record


def _load_surface(path):
    if not os.path.exists(path):
        print(f"error: surface file {path} not found; "
              "run `eofbound build-surface --output <path>` first", file=sys.stderr)
        raise SystemExit(EXIT_MISSING_SURFACE)
    return io.load_surface(path)


def cmd_monotones(args) -> int:
    record = _load_state(args.state, args.dim_b_cap)
    rho = record.rho
    n_t = monotones.negativity(rho)
    n_phi = monotones.phi_negativity(rho)
    n_r = monotones.realignment_negativity(rho)
    pair = monotones.monotone_pair(rho, use_realignment=args.use_realignment)
    cls = region.classify(pair)
    if record.label:
        print(f"state: {record.label}")
    print(f"dims: 4 x {rho.dim_b}")
    print(f"negativity            n_T   = {n_t:.12f}")
    print(f"map negativity        n_Phi = {n_phi:.12f}")
    print(f"realignment           n_R   = {n_r:.12f}")
    print(f"max(n_T, n_R)               = {max(n_t, n_r):.12f}")
    print(f"constraint pair (n_Phi, n_T){' with realignment' if args.use_realignment else ''}"
          f" = ({pair.n_phi:.12f}, {pair.n_t:.12f})")
    print(f"region classification: {cls.name}")
    return EXIT_OK


def cmd_bound(args) -> int:
    record = _load_state(args.state, args.dim_b_cap)
    surface = _load_surface(args.surface)
    pair = monotones.monotone_pair(record.rho, use_realignment=args.use_realignment)
    value = bounds.eval_bound(surface, pair)
    single_t = float(bounds.bound_nt(pair.n_t))
    single_phi = float(bounds.bound_nphi(pair.n_phi))
    if record.label:
        print(f"state: {record.label}")
    print(f"constraint pair (n_Phi, n_T) = ({pair.n_phi:.12f}, {pair.n_t:.12f})")
    print(f"EOF lower bound (doubly constrained) = {value:.12f}")
    print(f"singly constrained (n_T only)        = {single_t:.12f}")
    print(f"singly constrained (n_Phi only)      = {single_phi:.12f}")
    return EXIT_OK


def cmd_build_surface(args) -> int:
    started = time.time()
    surface = bounds.build_surface(grid_n=args.grid, mu4_step=args.mu4_step,
                                   workers=args.workers)
    io.save_surface(args.output, surface)
    gap, loc = surface.max_hull_gap()
    print(f"built {args.grid}x{args.grid} surface (mu4 step {args.mu4_step:g}) "
          f"in {time.time() - started:.1f}s")
    print(f"max hull gap {gap:.3e} at (n_Phi, n_T) = ({loc.n_phi:.4f}, {loc.n_t:.4f})")
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_export_figures(args) -> int:
    surface = _load_surface(args.surface)
    mu4_values = [float(v) for v in args.mu4_list.split(",")] if args.mu4_list \
        else list(figures.DEFAULT_MU4_VALUES)
    written = figures.export_figures(surface, args.output, mu4_values=mu4_values,
                                     coverage_grid_n=args.coverage_grid)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_coverage(args) -> int:
    axis, mask = region.coverage_map(args.mu4, args.grid)
    ii, jj = np.nonzero(mask)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# mu4={args.mu4:g} grid_n={args.grid}; columns: n_phi n_t\n")
            for i, j in zip(ii, jj):
                fh.write(f"{axis[i]!r}\t{axis[j]!r}\n")
        print(f"wrote {args.output} ({ii.size} reachable nodes)")
    else:
        print(f"# mu4={args.mu4:g}: {ii.size} reachable grid nodes")
        for i, j in zip(ii, jj):
            print(f"{axis[i]:.6f}\t{axis[j]:.6f}")
    return EXIT_OK


def cmd_verify(args) -> int:
    surface = None
    if args.surface:
        surface = _load_surface(args.surface)
    elif not args.skip_surface:
        cache = args.cache_dir or os.path.join(os.getcwd(), ".eofbound-cache")
        print(f"building/loading default surface in {cache} ...")
        surface = bounds.load_or_build(cache, workers=args.workers)
    report = verify.run_checks(seed=args.seed, surface=surface,
                               resolution=args.resolution,
                               pure_samples=args.pure_samples,
                               separable_samples=args.separable_samples,
                               ensembles=args.ensembles)
    for result in report.results:
        print(result.line())
    print(f"verification {'PASSED' if report.passed else 'FAILED'} "
          f"({sum(r.passed for r in report.results)}/{len(report.results)} checks)")
    if args.json:
        with open(args.json, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(report.as_dict(), fh, indent=1)
            fh.write("\n")
        print(f"wrote {args.json}")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eofbound",
        description="Entanglement monotones and doubly constrained EOF lower "
                    "bounds for 4xN states.",
        epilog="exit codes: 0 ok, 2 usage, 3 parse error, 4 validation error, "
               "5 missing surface, 6 verification failure")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("monotones", help="print the three monotones of a state file")
    p.add_argument("state", help="state file (JSON with re/im blocks)")
    p.add_argument("--use-realignment", action="store_true",
                   help="report the pair with n_T replaced by max(n_T, n_R)")
    p.add_argument("--dim-b-cap", type=int, default=DEFAULT_DIM_B_CAP)
    p.set_defaults(fn=cmd_monotones)

    p = sub.add_parser("bound", help="evaluate the EOF lower bound for a state file")
    p.add_argument("state")
    p.add_argument("--surface", required=True, help="surface file path")
    p.add_argument("--use-realignment", action="store_true")
    p.add_argument("--dim-b-cap", type=int, default=DEFAULT_DIM_B_CAP)
    p.set_defaults(fn=cmd_bound)

    p = sub.add_parser("build-surface", help="build and save the bound surface")
    p.add_argument("--grid", type=int, default=301, help="grid nodes per axis (>= 101)")
    p.add_argument("--mu4-step", type=float, default=1e-3, help="sweep step (<= 1e-2)")
    p.add_argument("--output", required=True)
    p.add_argument("--workers", type=int, default=None,
                   help="sweep worker processes (default: EOFBOUND_WORKERS or 1)")
    p.set_defaults(fn=cmd_build_surface)

    p = sub.add_parser("export-figures", help="export plot data files")
    p.add_argument("--surface", required=True)
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--mu4-list", default=None,
                   help="comma-separated mu4 values for coverage masks")
    p.add_argument("--coverage-grid", type=int, default=151)
    p.set_defaults(fn=cmd_export_figures)

    p = sub.add_parser("coverage", help="reachable sector nodes at one mu4")
    p.add_argument("--mu4", type=float, required=True)
    p.add_argument("--grid", type=int, default=151)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_coverage)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--surface", default=None,
                   help="surface file (default: build/load a cached default)")
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--skip-surface", action="store_true",
                   help="run only surface-independent checks")
    p.add_argument("--resolution", type=int, default=400,
                   help="oracle simplex resolution")
    p.add_argument("--pure-samples", type=int, default=10_000)
    p.add_argument("--separable-samples", type=int, default=1000)
    p.add_argument("--ensembles", type=int, default=1000)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--json", default=None, help="write a JSON summary here")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except io.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, InternalInconsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
