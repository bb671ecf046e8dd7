"""Command-line front end: solve from files, verification suites, timing sweeps, flow demo.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 I/O or file-format error, 4 allocation failure, 5 flow instability.
Every run writes a manifest JSON next to its outputs with the fully resolved
configuration, so results are reproducible from the manifest alone.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .fieldio import FieldFormatError, read_field, write_field
from .grid import (
    Approximation,
    BoundaryCondition,
    ConfigurationError,
    GridKind,
    GridSpec,
)
from .solver import SolverConfig, SolverPlan
from . import verifysuite

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_ALLOC = 4
EXIT_UNSTABLE = 5

_BC = {"periodic": BoundaryCondition.PERIODIC, "dirichlet": BoundaryCondition.DIRICHLET,
       "neumann": BoundaryCondition.NEUMANN}
_KIND = {"regular": GridKind.REGULAR, "staggered": GridKind.STAGGERED}
_APPROX = {"spectral": Approximation.PSEUDO_SPECTRAL, "fd2": Approximation.FINITE_DIFFERENCE_2}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FieldFormatError, FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MemoryError:
        print("error: allocation failed", file=sys.stderr)
        return EXIT_ALLOC
    except FloatingPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fastpoisson",
                                     description="Fast direct Poisson solver toolkit")
    parser.add_argument("--version", action="version", version=f"fastpoisson {__version__}")
    sub = parser.add_subparsers(dest="subcommand")

    ps = sub.add_parser("solve", help="solve a Poisson problem stored in a field file")
    _add_config_flags(ps)
    ps.add_argument("--in", dest="input", required=True, help="input field header (.json)")
    ps.add_argument("--out", required=True, help="output directory")
    ps.set_defaults(func=cmd_solve)

    pv = sub.add_parser("verify", help="run the verification suites")
    pv.add_argument("--bc", help="restrict to one boundary condition")
    pv.add_argument("--grid", help="restrict to one grid kind")
    pv.add_argument("--approx", help="restrict to one approximation")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--threads", type=int, default=1)
    pv.add_argument("--out", help="write the JSON summary here (default: stdout)")
    pv.add_argument("--inject-eigenvalue-fault", action="store_true",
                    help=argparse.SUPPRESS)  # test hook: perturb one eigenvalue by 1+1e-6
    pv.set_defaults(func=cmd_verify)

    pb = sub.add_parser("bench", help="timing sweep over problem sizes")
    _add_config_flags(pb, need_size=False)
    pb.add_argument("--sizes", required=True,
                    help="comma list of per-axis sizes, e.g. 64,128,256")
    pb.add_argument("--dims", type=int, default=3, choices=(1, 2, 3))
    pb.add_argument("--reps", type=int, default=3)
    pb.add_argument("--out", help="CSV output path (default: stdout)")
    pb.set_defaults(func=cmd_bench)

    pd = sub.add_parser("demo-flow", help="incompressible-flow projection demo")
    pd.add_argument("--case", choices=("taylor-green", "channel"), default="taylor-green")
    pd.add_argument("--cells", default="64", help="cells per axis, e.g. 64 or 64,32")
    pd.add_argument("--length", default=None, help="domain lengths (channel case; default 1,1)")
    pd.add_argument("--nu", type=float, default=0.01)
    pd.add_argument("--dt", type=float, default=0.01)
    pd.add_argument("--steps", type=int, default=100)
    pd.add_argument("--forcing", type=float, default=0.0, help="streamwise body force (channel)")
    pd.add_argument("--snapshot-every", type=int, default=0, help="0 disables snapshots")
    pd.add_argument("--threads", type=int, default=1)
    pd.add_argument("--seed", type=int, default=0)
    pd.add_argument("--out", required=True, help="output directory")
    pd.set_defaults(func=cmd_demo_flow)
    return parser


def _add_config_flags(p, need_size=True):
    p.add_argument("--size", help="points per axis, e.g. 64 or 64,32,16" if need_size else argparse.SUPPRESS)
    p.add_argument("--length", help="physical lengths per axis (default 1 each)")
    p.add_argument("--bc", default="periodic",
                   help="boundary condition per axis: periodic|dirichlet|neumann")
    p.add_argument("--grid", default="regular", help="grid kind per axis: regular|staggered")
    p.add_argument("--approx", default="fd2", choices=sorted(_APPROX),
                   help="approximation (default fd2)")
    p.add_argument("--precision", default=None, choices=("double", "single"))
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format-version", type=int, default=1)


def _split(text, count, convert, what):
    parts = [s.strip() for s in str(text).split(",") if s.strip()]
    try:
        values = [convert(s) for s in parts]
    except (KeyError, ValueError):
        raise ConfigurationError(f"cannot parse {what} list {text!r}")
    if len(values) == 1 and count > 1:
        values = values * count
    if len(values) != count:
        raise ConfigurationError(f"{what}: expected {count} entries, got {len(values)} in {text!r}")
    return values


def _grids_from_flags(args, dims, sizes):
    lengths = _split(args.length, dims, float, "length") if args.length else [1.0] * dims
    bcs = _split(args.bc, dims, lambda s: _BC[s], "bc")
    kinds = _split(args.grid, dims, lambda s: _KIND[s], "grid")
    return tuple(GridSpec(n, L, bc, kind) for n, L, bc, kind in zip(sizes, lengths, bcs, kinds))


def _write_manifest(outdir: Path, args, outputs):
    resolved = {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in vars(args).items()
        if k != "func"
    }
    manifest = {
        "subcommand": args.subcommand,
        "configuration": resolved,
        "seed": getattr(args, "seed", 0),
        "outputs": [str(o) for o in outputs],
        "library_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    path = outdir / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


# -- solve --------------------------------------------------------------------


def cmd_solve(args) -> int:
    from .fieldio import FORMAT_VERSION

    if args.format_version != FORMAT_VERSION:
        raise ConfigurationError(
            f"unsupported field format version {args.format_version}; this build writes {FORMAT_VERSION}"
        )
    rhs, header_grids = read_field(args.input)
    dims = rhs.ndim
    if args.size:
        sizes = _split(args.size, dims, int, "size")
        if tuple(sizes) != rhs.shape:
            print(
                f"error: flag extents {tuple(sizes)} do not match header extents {rhs.shape}",
                file=sys.stderr,
            )
            return EXIT_CONFIG
    if args.length or args.bc != "periodic" or args.grid != "regular" or header_grids is None:
        grids = _grids_from_flags(args, dims, rhs.shape)
    else:
        grids = header_grids
    precision = args.precision or ("single" if rhs.dtype == np.float32 else "double")
    config = SolverConfig(grids, _APPROX[args.approx], precision=precision)
    plan = SolverPlan(config, threads=args.threads)
    solution, report = plan.solve(rhs)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    sol_header = write_field(outdir / "solution", solution, grids)
    report_path = outdir / "report.json"
    with open(report_path, "w") as fh:
        json.dump(
            {
                "removed_mean": report.removed_mean,
                "mode": report.mode,
                "periodic_axes": list(report.periodic_axes),
                "timing_seconds": report.timing,
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    _write_manifest(outdir, args, [sol_header, outdir / "solution.bin", report_path])
    return EXIT_OK


# -- verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    bc = _BC[args.bc] if args.bc else None
    kind = _KIND[args.grid] if args.grid else None
    approx = _APPROX[args.approx] if args.approx else None
    if args.bc and args.bc not in _BC:
        raise ConfigurationError(f"unknown bc {args.bc!r}")
    results = verifysuite.run_suites(
        bc=bc,
        kind=kind,
        approximation=approx,
        seed=args.seed,
        threads=args.threads,
        eigenvalue_fault=1e-6 if args.inject_eigenvalue_fault else 0.0,
    )
    summary = {
        "passed": all(r["passed"] for r in results),
        "cases": results,
        "num_cases": len(results),
        "num_failed": sum(not r["passed"] for r in results),
    }
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if args.out:
        outpath = Path(args.out)
        outpath.parent.mkdir(parents=True, exist_ok=True)
        outpath.write_text(text)
        _write_manifest(outpath.parent, args, [outpath])
    else:
        sys.stdout.write(text)
    return EXIT_OK if summary["passed"] else EXIT_FAILED


# -- bench --------------------------------------------------------------------


def cmd_bench(args) -> int:
    sizes = [int(s) for s in str(args.sizes).split(",") if s.strip()]
    if not sizes or any(s < 1 for s in sizes):
        raise ConfigurationError(f"sizes must be positive, got {args.sizes!r}")
    if args.reps < 1:
        raise ConfigurationError("reps must be >= 1")
    rows = []
    rng = np.random.default_rng(args.seed)
    for n in sizes:
        shape = (n,) * args.dims
        grids = _grids_from_flags(args, args.dims, shape)
        config = SolverConfig(grids, _APPROX[args.approx],
                              precision=args.precision or "double")
        plan = SolverPlan(config, threads=args.threads)
        rhs = rng.standard_normal(shape)
        plan.solve(rhs)  # warm-up excluded from timing
        samples = {"forward": [], "diagonal": [], "backward": [], "total": []}
        for _ in range(args.reps):
            t0 = time.perf_counter()
            _, report = plan.solve(rhs)
            total = time.perf_counter() - t0
            for phase, seconds in report.timing.items():
                samples[phase].append(seconds)
            samples["total"].append(total)
        for phase, values in samples.items():
            rows.append(
                {
                    "size": n,
                    "phase": phase,
                    "median_seconds": statistics.median(values),
                    "min_seconds": min(values),
                    "threads": args.threads,
                }
            )
    fieldnames = ["size", "phase", "median_seconds", "min_seconds", "threads"]
    if args.out:
        outpath = Path(args.out)
        outpath.parent.mkdir(parents=True, exist_ok=True)
        with open(outpath, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames)
            writer.writeheader()
            writer.writerows(rows)
        _write_manifest(outpath.parent, args, [outpath])
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    return EXIT_OK


# -- demo-flow ----------------------------------------------------------------


def cmd_demo_flow(args) -> int:
    from .flow import channel, taylor_green

    cells = [int(s) for s in str(args.cells).split(",") if s.strip()]
    if len(cells) == 1:
        cells = cells * 2
    if len(cells) != 2 or any(c < 2 for c in cells):
        raise ConfigurationError(f"demo runs on a 2D grid with >= 2 cells per axis, got {args.cells!r}")
    if args.case == "taylor-green":
        if cells[0] != cells[1]:
            raise ConfigurationError("taylor-green uses a square grid")
        flow = taylor_green(cells[0], nu=args.nu)
    else:
        lengths = _split(args.length, 2, float, "length") if args.length else (1.0, 1.0)
        flow = channel(tuple(cells), tuple(lengths), nu=args.nu, forcing_x=args.forcing)

    print(
        f"advisory: advective CFL = {flow.cfl_advisory(args.dt):.4f} at dt = {args.dt}"
        " (fixed step; stability is the caller's choice)",
        file=sys.stderr,
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    outputs = []
    series_path = outdir / "series.csv"
    with open(series_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "time", "kinetic_energy", "max_divergence", "max_stage_divergence"])
        writer.writerow([0, 0.0, flow.kinetic_energy(), flow.max_divergence(), 0.0])
        for step in range(1, args.steps + 1):
            try:
                flow.rk3_step(args.dt)
            except FloatingPointError as exc:
                print(f"error: instability at step {step}: {exc}", file=sys.stderr)
                return EXIT_UNSTABLE
            writer.writerow(
                [
                    step,
                    flow.time,
                    flow.kinetic_energy(),
                    flow.max_divergence(),
                    max(flow.stage_divergence),
                ]
            )
            if args.snapshot_every and step % args.snapshot_every == 0:
                for name, data in (
                    ("u", flow.velocity.u),
                    ("w", flow.velocity.w),
                    ("p", flow.pressure.p),
                ):
                    outputs.append(write_field(outdir / f"{name}_{step:06d}", data))
    outputs.append(series_path)
    _write_manifest(outdir, args, outputs)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
