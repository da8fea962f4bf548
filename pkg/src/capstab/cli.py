"""Command-line front end: ``capstab {meridian,analyze,sweep,verify}``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import delaunay as dl
from . import report as rp
from . import surface as sf
from . import verify as vf
from .errors import ConstructionError, PrecisionError

log = logging.getLogger("capstab")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONSTRUCTION = 3
EXIT_PRECISION = 4
EXIT_GATE = 5


class UsageError(Exception):
    pass


def _tol_eig(text: str):
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a float or 'auto'") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _dimension(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("n must be at least 2")
    return value


def parse_range(text: str) -> np.ndarray:
    """``a:b:step`` to the inclusive grid ``a, a+step, ..., b``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"malformed range {text!r}; expected a:b:step")
    try:
        a, b, h = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"malformed range {text!r}") from None
    if not (np.isfinite([a, b, h]).all() and h > 0 and b >= a):
        raise UsageError(f"malformed range {text!r}; need a <= b and step > 0")
    count = int(np.floor((b - a) / h + 1e-9)) + 1
    # rounding to 12 digits keeps grid values free of accumulated noise
    return np.round(a + h * np.arange(count), 12)


def _add_surface_flags(p, required=True):
    p.add_argument("--n", type=_dimension, default=2)
    p.add_argument("--H", type=float, required=required)
    p.add_argument("--F", type=float, required=required)
    p.add_argument("--step", type=_positive, default=1e-3)


def _add_analysis_flags(p):
    p.add_argument("--tol-centroid", type=_positive, default=1e-6)
    p.add_argument("--tol-eig", type=_tol_eig, default=None, metavar="auto|FLOAT")
    p.add_argument("--offset", type=float, default=0.0, help="axial centre of a sphere, offset of a disk")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capstab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("meridian", help="integrate a meridian and write it as CSV")
    _add_surface_flags(p)
    p.add_argument("--length", type=_positive, default=10.0)
    p.add_argument("--out")

    p = sub.add_parser("analyze", help="stability report for one surface as JSON")
    _add_surface_flags(p, required=False)
    _add_analysis_flags(p)
    p.add_argument("--closed", action="store_true", help="centred closed sphere")
    p.add_argument("--sphere-radius", type=_positive)

    p = sub.add_parser("sweep", help="verdict table over an (H, F) grid as CSV")
    p.add_argument("--n", type=_dimension, default=2)
    p.add_argument("--step", type=_positive, default=1e-3)
    p.add_argument("--H-range", required=True)
    p.add_argument("--F-range", required=True)
    _add_analysis_flags(p)

    p = sub.add_parser("verify", help="run the residual gates over the example battery")
    p.add_argument("--suite", choices=("all",) + vf.SUITES, default="all")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--inject-q-error", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_meridian(args) -> int:
    kind = dl.classify(args.H, args.F, n=args.n)
    if kind in (dl.DelaunayKind.HYPERPLANE, dl.DelaunayKind.SPHERE):
        print(f"kind={kind.value}")
        print(f"analytic path: {kind.value.lower()} meridians meet the axis; "
              "no ODE integration (use `capstab analyze` to build the surface)")
        return EXIT_OK
    start = dl.symmetric_start(args.n, args.H, args.F)
    curve = dl.integrate(args.n, args.H, start, args.step, args.length)
    kind = dl.classify(args.H, args.F, n=args.n, state=start)
    if curve.axis_touching:
        raise ConstructionError("meridian reaches the axis")
    if args.out:
        _write(curve.to_csv(), args.out)
    else:
        sys.stdout.write(curve.to_csv())
    print(f"kind={kind.value}", file=sys.stdout if args.out else sys.stderr)
    print(f"drift={curve.force_drift():.3e}", file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def _surface(args):
    if args.closed:
        radius = args.sphere_radius
        if radius is None:
            if args.H is None:
                raise UsageError("--closed needs --sphere-radius or --H")
            radius = 1.0 / abs(args.H)
        return sf.closed_sphere(args.n, radius, args.step)
    if args.H is None or args.F is None:
        raise UsageError("--H and --F are required unless --closed is given")
    return sf.from_parameters(args.n, args.H, args.F, args.step, offset=args.offset)


def cmd_analyze(args, q_scale: float = 1.0) -> int:
    surf = _surface(args)
    report = rp.analyze(surf, tol_centroid=args.tol_centroid, tol_eig=args.tol_eig,
                        levels=args.levels, q_scale=q_scale)
    _write(rp.report_json(report), args.out)
    return EXIT_OK


def _sweep_point(args, H, F):
    try:
        surf = sf.from_parameters(args.n, H, F, args.step, offset=args.offset)
        report = rp.analyze(surf, tol_centroid=args.tol_centroid, tol_eig=args.tol_eig, residuals=False)
    except (ConstructionError, PrecisionError) as exc:
        return None, f"(H, F) = ({H:g}, {F:g}) skipped: {exc}"
    return rp.sweep_row(report), None


def cmd_sweep(args) -> int:
    Hs, Fs = parse_range(args.H_range), parse_range(args.F_range)
    points = [(float(H), float(F)) for H in Hs for F in Fs]
    threads = max(1, int(os.environ.get("CAPSTAB_THREADS", "1") or 1))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda p: _sweep_point(args, *p), points))
    rows = [rp.SWEEP_HEADER]
    skipped = 0
    for row, warning in results:
        if row is None:
            skipped += 1
            log.warning(warning)
        else:
            rows.append(row)
    if skipped:
        log.warning("%d of %d grid points skipped", skipped, len(points))
    _write("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def _fmt(v):
    return "-" if v is None else f"{v:.3e}"


def cmd_verify(args) -> int:
    gates = vf.run_suite(args.suite, levels=args.levels, q_scale=1.0 + args.inject_q_error)
    width = max(len(g.target) for g in gates)
    cwidth = max(len(g.check) for g in gates)
    for g in gates:
        status = "PASS" if g.passed else "FAIL"
        print(f"{status}  {g.suite:<9} {g.target:<{width}}  {g.check:<{cwidth}}  {_fmt(g.value):>10}  {g.limit}")
    failed = [g for g in gates if not g.passed]
    if failed:
        for g in failed:
            print(f"failed: {g.check} on {g.target} (value {_fmt(g.value)}, limit {g.limit})", file=sys.stderr)
        return EXIT_GATE
    print(f"all {len(gates)} gates passed")
    return EXIT_OK


COMMANDS = {"meridian": cmd_meridian, "analyze": cmd_analyze, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"capstab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConstructionError as exc:
        print(f"capstab: construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except PrecisionError as exc:
        print(f"capstab: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
