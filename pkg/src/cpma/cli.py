"""Command-line front end.

Exit codes: 0 success, 1 runtime failure, 2 flag validation failure.
Data and summaries go to stdout; diagnostics go to stderr.
"""

import argparse
import logging
import os
import sys

import numpy as np

from . import bench
from .core import CpmaConfig, connect_cpma, extract_cpma
from .errors import CpmaError
from .grid import BinaryGrid, load_grid, save_grid
from .metrics import dubuisson_jain, hausdorff, jaccard
from .perturb import RotationSpec
from .ply import DEFAULT_RESOLUTION, parse_ply, voxelize
from .skeleton import Method, reconstruct

_METHOD_PARAM_FLAGS = {
    Method.GIMA: "--gamma",
    Method.BEMA: "--theta",
    Method.SAT: "--scale",
    Method.SFEMA: "--scale",
}


def _build_method(parser, args):
    name = args.method.lower()
    if name in ("cpma", "ccpma"):
        cfg = CpmaConfig(tau=args.tau, max_freq=args.max_freq)
        return bench.SkeletonMethod(name, cfg=cfg)
    try:
        method = Method(name)
    except ValueError:
        parser.error(f"unknown method {args.method!r}")
    if method in (Method.POISSON, Method.TEASAR):
        parser.error(f"method not implemented: {name}")
    flag = _METHOD_PARAM_FLAGS.get(method)
    if flag is not None and getattr(args, flag.lstrip("-")) is None:
        parser.error(f"method {name!r} requires {flag}")
    from .skeleton import PrunerSpec

    kwargs = {}
    if method is Method.GIMA:
        kwargs["gamma"] = args.gamma
    elif method is Method.BEMA:
        kwargs["theta"] = args.theta
    elif method in (Method.SAT, Method.SFEMA):
        kwargs["scale"] = args.scale
    return bench.SkeletonMethod(name, pruner=PrunerSpec(method=method, **kwargs))


def _write_skeleton(mat, dims, path):
    save_grid(BinaryGrid(mat.as_mask()), path)


def _write_score_csv(field, path):
    field = np.asarray(field)
    with open(path, "w") as fh:
        axes = "z,y,x" if field.ndim == 3 else "y,x"
        fh.write(f"{axes},value\n")
        for idx in np.ndindex(field.shape):
            fh.write(",".join(str(i) for i in idx) + f",{field[idx]:.9g}\n")


def cmd_skeletonize(parser, args):
    grid = bench.load_item(args.input, ply_resolution=args.resolution)
    method = _build_method(parser, args)
    if method.cfg is not None:
        mat, field = extract_cpma(grid, method.cfg)
        if args.connect or method.name == "ccpma":
            result = connect_cpma(mat, field, grid, method.cfg)
            mat = result.mat
            if not result.connected:
                print("warning: connectivity enforcement incomplete", file=sys.stderr)
        if args.score_output:
            _write_score_csv(field, args.score_output)
    else:
        if args.connect:
            parser.error("--connect applies to cpma/ccpma only")
        if args.score_output:
            parser.error("--score-output applies to cpma/ccpma only")
        mat = method.extract(grid)
    _write_skeleton(mat, grid.dims, args.output)
    print(f"{len(mat)} skeleton points -> {args.output}")
    return 0


def cmd_reconstruct(parser, args):
    grid = bench.load_item(args.input, ply_resolution=args.resolution)
    method = _build_method(parser, args)
    if method.cfg is not None and (args.connect or method.name == "ccpma"):
        mat, field = extract_cpma(grid, method.cfg)
        mat = connect_cpma(mat, field, grid, method.cfg).mat
    else:
        mat = method.extract(grid)
    rec = reconstruct(mat, grid.dims)
    save_grid(rec, args.output)
    print(f"jaccard={jaccard(rec, grid):.6f} -> {args.output}")
    return 0


def cmd_metrics(parser, args):
    a = bench.load_item(args.a, ply_resolution=args.resolution)
    b = bench.load_item(args.b, ply_resolution=args.resolution)
    pa, pb = np.argwhere(a.data), np.argwhere(b.data)
    print(f"hausdorff={hausdorff(pa, pb):.6f}")
    print(f"dubuisson_jain={dubuisson_jain(pa, pb):.6f}")
    if a.dims == b.dims:
        print(f"jaccard={jaccard(a, b):.6f}")
    return 0


def cmd_voxelize(parser, args):
    grid = voxelize(parse_ply(args.input), resolution=args.resolution)
    save_grid(grid, args.output)
    print(f"{grid.count()} foreground voxels -> {args.output}")
    return 0


def _parse_methods(parser, text):
    try:
        return [bench.SkeletonMethod.from_string(m) for m in text.split(",") if m]
    except CpmaError as exc:
        parser.error(str(exc))


def _parse_range(parser, text):
    """Parse "1..5", "0..90:3", or comma lists into a number list."""
    values = []
    for part in text.split(","):
        if ".." in part:
            lo, _, rest = part.partition("..")
            hi, _, step = rest.partition(":")
            step = float(step) if step else 1.0
            v = float(lo)
            while v <= float(hi) + 1e-9:
                values.append(v)
                v += step
        elif part:
            values.append(float(part))
    if not values:
        parser.error(f"empty range {text!r}")
    return values


def cmd_noise_bench(parser, args):
    methods = _parse_methods(parser, args.methods)
    levels = [int(v) for v in _parse_range(parser, args.levels)]
    records = bench.run_noise_experiment(
        args.dataset, methods, levels, seed=args.seed, jobs=args.jobs,
        ply_resolution=args.resolution,
    )
    bench.emit_results(records, args.out, args.format)
    _print_averages(records)
    return 0


def cmd_rotation_bench(parser, args):
    methods = _parse_methods(parser, args.methods)
    angles = [RotationSpec(angle2d=a, azimuth=a, elevation=args.elevation)
              for a in _parse_range(parser, args.angles)]
    records = bench.run_rotation_experiment(
        args.dataset, methods, angles, seed=args.seed, jobs=args.jobs,
        ply_resolution=args.resolution,
    )
    bench.emit_results(records, args.out, args.format)
    _print_averages(records)
    return 0


def cmd_tau_sweep(parser, args):
    taus = _parse_range(parser, args.taus)
    scales = _parse_range(parser, args.scales)
    records = bench.run_tau_sweep(
        args.dataset, taus, scales, seed=args.seed, jobs=args.jobs,
        ply_resolution=args.resolution,
    )
    bench.emit_results(records, args.out, args.format)
    _print_averages(records)
    return 0


def _print_averages(records):
    for r in records:
        if r.item == bench.AVERAGE_ITEM:
            print(f"{r.method}[{r.params}] {r.perturbation} {r.metric}: {r.value:.4f}")


def _add_method_flags(sp):
    sp.add_argument("--method", default="cpma", help="mat|thinning|gima|bema|sat|sfema|cpma|ccpma")
    sp.add_argument("--gamma", type=float, default=None, help="GIMA separation (pixels)")
    sp.add_argument("--theta", type=float, default=None, help="BEMA angle (degrees)")
    sp.add_argument("--scale", type=float, default=None, help="SAT/SFEMA ball scale")
    sp.add_argument("--tau", type=float, default=0.47, help="CPMA score threshold")
    sp.add_argument("--max-freq", type=int, default=None, help="frequencies aggregated (default M/2)")
    sp.add_argument("--connect", action="store_true", help="enforce skeleton connectivity")
    sp.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION, help="PLY voxelization resolution")


def _add_bench_flags(sp):
    sp.add_argument("--dataset", required=True, help="flat directory of .pbm/.vox/.ply files")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="output results file")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sp.add_argument("--resolution", type=int, default=64, help="PLY voxelization resolution")


def build_parser():
    parser = argparse.ArgumentParser(prog="cpma", description="Cosine-pruned medial axis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("skeletonize", help="extract a skeleton from a shape file")
    sp.add_argument("input")
    _add_method_flags(sp)
    sp.add_argument("--output", required=True)
    sp.add_argument("--score-output", default=None, help="also write the score field as CSV")
    sp.set_defaults(func=cmd_skeletonize)

    sp = sub.add_parser("reconstruct", help="skeletonize then reconstruct the shape")
    sp.add_argument("input")
    _add_method_flags(sp)
    sp.add_argument("--output", required=True)
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("metrics", help="distances between two shape files")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--resolution", type=int, default=64)
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("voxelize", help="voxelize an ASCII PLY mesh")
    sp.add_argument("input")
    sp.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    sp.add_argument("--output", required=True)
    sp.set_defaults(func=cmd_voxelize)

    sp = sub.add_parser("noise-bench", help="noise sensitivity experiment")
    _add_bench_flags(sp)
    sp.add_argument("--methods", default="cpma,mat")
    sp.add_argument("--levels", default="1..20")
    sp.set_defaults(func=cmd_noise_bench)

    sp = sub.add_parser("rotation-bench", help="rotation equivariance experiment")
    _add_bench_flags(sp)
    sp.add_argument("--methods", default="cpma,mat")
    sp.add_argument("--angles", default="0..90:3")
    sp.add_argument("--elevation", type=float, default=0.0, help="3D elevation angle (degrees)")
    sp.set_defaults(func=cmd_rotation_bench)

    sp = sub.add_parser("tau-sweep", help="reconstruction quality across thresholds")
    _add_bench_flags(sp)
    sp.add_argument("--taus", default="0.1..0.9:0.1")
    sp.add_argument("--scales", default="1")
    sp.set_defaults(func=cmd_tau_sweep)

    return parser


def main(argv=None):
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except CpmaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
