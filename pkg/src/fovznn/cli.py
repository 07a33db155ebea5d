"""Command-line front end: ``fovznn <verb> ...``.

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import shlex
import sys
import time

import numpy as np

from . import bench as _bench
from . import io as _io
from .decomp import DEFAULT_TA, DEFAULT_TB, DEFAULT_TOL_PATTERN, DEFAULT_TOL_VERIFY
from .decomp import DecompositionSettings, decompose
from .fov import DEFAULT_GRID, assemble_fov
from .gallery import FAMILIES, PRESETS, GallerySpec, gallery
from .matflow import InputError, NumericalError
from .svg import write_svg
from .znn import ZnnConfig

EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _ks(text):
    try:
        k, s = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected k,s (e.g. 4,5), got {text!r}") from None
    return k, s


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_source(p):
    p.add_argument("matrix", nargs="?", help="Matrix Market or n=<dim> CSV file")
    g = p.add_argument_group("generated input (used when no file is given)")
    g.add_argument("--family", choices=FAMILIES)
    g.add_argument("--n", type=int)
    g.add_argument("--sizes", type=_int_list, help="block sizes for block-random")
    g.add_argument("--recipe", choices=sorted(PRESETS), help="block-random preset")
    g.add_argument("--eig", type=complex, default=0j, help="Jordan eigenvalue")
    g.add_argument("--alpha", type=float, default=-1.0, help="hanowa-like diagonal shift")
    g.add_argument("--real", action="store_true", help="real Gaussian blocks")
    g.add_argument("--bare", action="store_true", help="skip the unitary similarity")
    p.add_argument("--seed", type=int, default=0)


def _add_znn(p):
    p.add_argument("--tau", type=float, default=2e-4)
    p.add_argument("--eta", type=float, default=100.0)
    p.add_argument("--ks", type=_ks, default=(4, 5), help="look-ahead formula type k,s")
    p.add_argument("--parallel", type=int, default=0, help="worker processes for blocks")


def _add_decomp(p):
    p.add_argument("--tol-pattern", type=float, default=DEFAULT_TOL_PATTERN)
    p.add_argument("--tol-verify", type=float, default=DEFAULT_TOL_VERIFY)
    p.add_argument("--ta", type=float, default=DEFAULT_TA)
    p.add_argument("--tb", type=float, default=DEFAULT_TB)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fovznn",
                                 description="Field-of-values boundaries by block ZNN path following.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fov", help="compute the FoV boundary")
    _add_source(p)
    _add_znn(p)
    _add_decomp(p)
    p.add_argument("--out", help="boundary CSV (hull goes to <out>.hull.csv)")
    p.add_argument("--svg", help="SVG plot path")

    p = sub.add_parser("decompose", help="unitary block-diagonalization")
    _add_source(p)
    _add_decomp(p)
    p.add_argument("--out", help="write the unitary U as Matrix Market")

    p = sub.add_parser("eigencurves", help="export eigencurves of F(t)")
    _add_source(p)
    _add_decomp(p)
    p.add_argument("--grid", type=int, default=360)
    p.add_argument("--out", required=True, help="CSV path (SVG goes next to it)")

    p = sub.add_parser("bench", help="ZNN pipeline vs grid baseline")
    _add_source(p)
    _add_znn(p)
    _add_decomp(p)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--out", help="write the report as a manifest file")

    p = sub.add_parser("gallery", help="generate a test matrix")
    _add_source(p)
    p.add_argument("--out", help="Matrix Market (or .csv) output; default prints the shape")

    p = sub.add_parser("bounds", help="best/worst blockwise cost fractions")
    p.add_argument("alpha", type=float, help="largest block size over n, in (0, 1]")
    return ap


def _load(args):
    if args.matrix:
        return _io.read_matrix(args.matrix), args.matrix
    if not args.family:
        raise InputError("give a matrix file or --family")
    params = {"bare": args.bare, "real": args.real}
    if args.sizes:
        params["sizes"] = args.sizes
    if args.recipe:
        params["recipe"] = args.recipe
    if args.family == "jordan":
        params["eig"] = args.eig
    if args.family == "hanowa-like":
        params["alpha"] = args.alpha
    spec = GallerySpec(args.family, args.n, args.seed, params)
    desc = f"{args.family}:" + ",".join(f"{k}={v}" for k, v in sorted(params.items()))
    return gallery(spec), desc


def _dcfg(args):
    return DecompositionSettings(args.ta, args.tb, args.tol_pattern, args.tol_verify, args.seed)


def _cfg(args):
    return ZnnConfig(tau=args.tau, eta=args.eta, k=args.ks[0], s=args.ks[1])


def _base_manifest(args, argv, source):
    m = {"command": args.command, "argv": shlex.join(argv), "input": source,
         "seed": args.seed}
    for key in ("tau", "eta", "ks", "tol_pattern", "tol_verify", "ta", "tb", "grid"):
        if hasattr(args, key):
            m[key] = getattr(args, key)
    return m


def _cmd_fov(args, argv):
    A, source = _load(args)
    res = assemble_fov(A, _cfg(args), _dcfg(args), parallel=args.parallel)
    print(f"blocks: {res.decomposition.block_sizes} (normal {len(res.normal_blocks)}, "
          f"fallback {len(res.fallback_blocks)})")
    print(f"points: {res.point_counts[0]}, on hull: {res.point_counts[1]}")
    print(f"numerical radius: {res.numerical_radius:.15g}")
    print(f"crawford number: {res.crawford_number:.15g}")
    m = _base_manifest(args, argv, source)
    outs = []
    if args.out:
        outs += [str(p) for p in _io.write_boundary_csv(res, args.out)]
    if args.svg:
        outs.append(str(write_svg(res, args.svg)))
    m.update(outputs=outs, points=res.point_counts[0], hull_points=res.point_counts[1],
             block_sizes=res.decomposition.block_sizes,
             numerical_radius=res.numerical_radius, crawford_number=res.crawford_number)
    m.update({f"time_{k}": v for k, v in res.timings.items()})
    if args.out:
        _io.write_manifest(f"{args.out}.manifest", m)


def _cmd_decompose(args, argv):
    A, _ = _load(args)
    d = decompose(A, args.ta, args.tb, args.tol_pattern, args.tol_verify, args.seed)
    print(f"block sizes: {d.block_sizes}")
    print(f"residual: {d.residual:.3e}{' (retried)' if d.retried else ''}")
    if args.out:
        _io.write_matrix(d.U, args.out)


def _cmd_eigencurves(args, argv):
    A, source = _load(args)
    csv_path, svg_path, _, _, labels = _bench.eigencurves(A, args.grid, args.out, _dcfg(args))
    print(f"wrote {csv_path} and {svg_path} ({len(set(labels.tolist()))} block colours)")
    m = _base_manifest(args, argv, source)
    m["outputs"] = [str(csv_path), str(svg_path)]
    _io.write_manifest(f"{args.out}.manifest", m)


def _cmd_bench(args, argv):
    A, source = _load(args)
    rep = _bench.bench(A, _cfg(args), args.grid, _dcfg(args), args.repeats, args.parallel)
    for line in rep.lines():
        print(line)
    if args.out:
        m = _base_manifest(args, argv, source)
        m.update(speedup=rep.speedup, znn_seconds=rep.znn_seconds,
                 baseline_seconds=rep.baseline_seconds, hausdorff=rep.hausdorff,
                 relative_hausdorff=rep.relative_hausdorff, points=rep.point_counts[0],
                 hull_points=rep.point_counts[1], block_sizes=rep.block_sizes)
        _io.write_manifest(args.out, m)


def _cmd_gallery(args, argv):
    A, source = _load(args)
    if args.out:
        _io.write_matrix(A, args.out)
        print(f"wrote {A.shape[0]}x{A.shape[1]} matrix to {args.out}")
    else:
        print(f"{source}: {A.shape[0]}x{A.shape[1]}, ||A||_F = {np.linalg.norm(A):.6g}")


def _cmd_bounds(args, argv):
    best, worst = _bench.speedup_bounds(args.alpha)
    print(f"best fraction {best:.6g} (savings {100 * (1 - best):.2f}%)")
    print(f"worst fraction {worst:.6g} (savings {100 * (1 - worst):.2f}%)")


COMMANDS = {"fov": _cmd_fov, "decompose": _cmd_decompose, "eigencurves": _cmd_eigencurves,
            "bench": _cmd_bench, "gallery": _cmd_gallery, "bounds": _cmd_bounds}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        COMMANDS[args.command](args, argv)
    except (InputError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"done in {time.perf_counter() - t0:.2f} s", file=sys.stderr)
    return 0


def replay(manifest_path) -> int:
    """Re-run the command recorded in a manifest."""
    m = _io.read_manifest(manifest_path)
    return main(shlex.split(m["argv"]))


if __name__ == "__main__":
    sys.exit(main())
