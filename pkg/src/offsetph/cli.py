"""Command-line interface: ``offsetph <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .determinantal import additive_compound, determinantal_offset, eigen_sum_check, read_matrix_csv
from .discriminants import discriminant_at, discriminant_degree_bound
from .exactpoly import MPoly, parse_poly
from .exactpoly import PolySyntaxError, UnknownVariableError, format_poly
from .groebner import Caps, ResourceLimitError
from .offsets import EPS, OffsetFamily, VarietyInput, ed_degree_probe, offset_family, y_vars
from .persistence import (
    Barcode,
    betti_at,
    cech_filtration,
    compute_barcode,
    vr_filtration,
)
from .presets import PRESETS, get_preset
from .reach import NSWInput, federer_reach, nsw_bound, polynomial_jacobians, read_jacobian_csv
from .sampling import CloudFormatError, Window, read_cloud, sample_plane_curve, write_cloud
from ._io import write_atomic
from .svg import barcode_svg, curve_slices_svg, level_curves


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# polynomial files


def write_poly_file(path, poly: MPoly, meta: dict) -> None:
    head = [f"# offsetph {__version__}"]
    head += [f"# {k}: {v}" for k, v in meta.items()]
    head.append(f"# variables: {','.join(poly.context)}")
    write_atomic(path, "\n".join(head) + "\n" + format_poly(poly) + "\n")


def read_poly_file(path) -> MPoly:
    variables = None
    body = []
    with open(path) as fh:
        for line in fh:
            s = line.strip()
            if s.startswith("#"):
                if s[1:].strip().startswith("variables:"):
                    variables = [v.strip() for v in s.split(":", 1)[1].split(",") if v.strip()]
                continue
            if s:
                body.append(s)
    if variables is None:
        raise UsageError(f"{path}: missing '# variables:' header")
    if not body:
        raise UsageError(f"{path}: no polynomial")
    return parse_poly("".join(body), variables)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _point(text: str) -> tuple:
    return tuple(_fraction(t) for t in text.split(","))


def _caps(args) -> Caps:
    return Caps.limited(args.max_pairs, args.max_degree, args.max_seconds)


def _variety(args) -> VarietyInput:
    if args.preset:
        return get_preset(args.preset).variety()
    if not args.poly:
        raise UsageError("give --preset or --poly")
    n = args.nvars
    if n is None:
        raise UsageError("--poly needs --nvars")
    return VarietyInput.from_text(args.poly, n, name="custom")


def _family(args) -> OffsetFamily:
    if getattr(args, "family", None):
        poly = read_poly_file(args.family)
        n = len(poly.context) - 1
        expected = y_vars(n) + (EPS,)
        if tuple(poly.context) != expected:
            raise UsageError(f"family variables must be {','.join(expected)}")
        return OffsetFamily(poly, None)
    return offset_family(_variety(args), _caps(args))


def _check_exists(*paths):
    for p in paths:
        if p is not None and not os.path.exists(p):
            raise UsageError(f"no such file: {p}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_offset(args):
    F = _family(args)
    if args.out:
        meta = {"preset": args.preset or "custom", "seed": args.seed}
        if args.poly:
            meta["generators"] = "; ".join(args.poly)
        write_poly_file(args.out, F.poly, meta)
    print(f"deg_y={F.deg_y} deg_eps={F.deg_eps} terms={len(F.poly)}")
    if not args.out:
        print(format_poly(F.poly))


def cmd_degrees(args):
    F = _family(args)
    print(f"deg_y={F.deg_y} deg_eps={F.deg_eps}")


def cmd_ed_degree(args):
    F = _family(args)
    y0 = _point(args.point) if args.point else None
    print(ed_degree_probe(F, y0, seed=args.seed))


def cmd_disc_at(args):
    F = _family(args)
    rep = discriminant_at(F, _point(args.point))
    print(f"disc={rep.disc_value}")
    print(f"on_discriminant={str(rep.on_discriminant).lower()} "
          f"distinct_roots={rep.distinct_roots} degree={rep.expected_roots}")


def cmd_disc_bound(args):
    print(discriminant_degree_bound(args.degy, args.eddeg, args.formula))


def cmd_compound(args):
    U = read_matrix_csv(args.matrix)
    if not U:
        raise UsageError("empty matrix")
    if args.check_eigen:
        ok = eigen_sum_check(np.array(U, dtype=float), args.r, args.tol)
        print(f"eigen_sum_check={str(ok).lower()}")
        return
    if args.compound_only:
        C = additive_compound(U, args.r)
        for row in C:
            print(",".join(str(x) for x in row))
        return
    p = determinantal_offset(U, args.r)
    poly = MPoly(("e",), {(k,): c for k, c in enumerate(p.coeffs) if c})
    if args.out:
        write_poly_file(args.out, poly, {"matrix": os.path.basename(args.matrix), "r": args.r})
    print(f"deg_eps={p.degree}")
    print(format_poly(poly))


def _window_arg(text: str, dims: int) -> Window:
    vals = [_fraction(t) for t in text.split(",")]
    if len(vals) != 2 * dims:
        raise UsageError(f"--window needs {2 * dims} comma-separated bounds")
    return Window(tuple((vals[2 * i], vals[2 * i + 1]) for i in range(dims)))


def cmd_sample(args):
    if args.preset:
        pre = get_preset(args.preset)
        if pre.n != 2:
            raise UsageError(f"preset {pre.name} is not a plane curve")
        f = pre.polys()[0]
        w = _window_arg(args.window, 2) if args.window else pre.sampling_window()
        slices = args.slices or pre.slices
    else:
        if not args.poly or len(args.poly) != 1:
            raise UsageError("give --preset or one --poly")
        f = parse_poly(args.poly[0], ("x1", "x2"))
        if not args.window:
            raise UsageError("--poly needs --window")
        w = _window_arg(args.window, 2)
        slices = args.slices or 100
    cloud = sample_plane_curve(f, w, slices, args.tol)
    write_cloud(cloud, args.out)
    print(f"points={len(cloud)} lipschitz={cloud.provenance['lipschitz']:.6g}")


def cmd_barcode(args):
    cloud = read_cloud(args.cloud)
    build = cech_filtration if args.filtration == "cech" else vr_filtration
    K = build(cloud, args.maxdim, args.maxradius)
    B = compute_barcode(K, args.maxdim)
    write_atomic(args.out, B.to_json() + "\n")
    for k in range(args.maxdim + 1):
        bars = B.dim(k)
        ess = sum(1 for _, d in bars if math.isinf(d))
        print(f"H{k}: {len(bars)} intervals ({ess} infinite)")


def cmd_betti(args):
    with open(args.barcode) as fh:
        B = Barcode.from_json(fh.read())
    print(betti_at(B, args.dim, tuple(args.interval)))


def cmd_reach(args):
    cloud = read_cloud(args.cloud)
    if args.jacobian:
        J = read_jacobian_csv(args.jacobian, len(cloud), cloud.dim)
    else:
        if args.preset:
            gens = get_preset(args.preset).polys()
        elif args.poly:
            from .offsets import x_vars
            gens = [parse_poly(t, x_vars(cloud.dim)) for t in args.poly]
        else:
            raise UsageError("give --jacobian, --preset or --poly")
        if len(gens[0].context) != cloud.dim:
            raise UsageError("polynomial and cloud dimensions differ")
        J = polynomial_jacobians(gens, cloud.points)
    est = federer_reach(cloud, J, args.delta_floor)
    print(f"tau_hat={est.tau_hat!r}")
    if est.u is not None:
        print(f"u={','.join(repr(float(x)) for x in est.u)} v={','.join(repr(float(x)) for x in est.v)} "
              f"delta={est.delta!r}")
    print(f"pairs_used={est.pairs_used}")


def cmd_nsw(args):
    p = NSWInput(args.tau, args.volume, args.k, args.epsilon, args.delta, args.convention)
    print(nsw_bound(p))


def cmd_plot(args):
    if args.kind == "barcode":
        if not args.barcode:
            raise UsageError("plot --kind barcode needs --barcode")
        with open(args.barcode) as fh:
            B = Barcode.from_json(fh.read())
        write_atomic(args.out, barcode_svg(B, args.title or ""))
        return
    F = _family(args)
    if F.n != 2:
        raise UsageError("curve slices need a plane-curve family")
    if args.window:
        w = _window_arg(args.window, 2).intervals
    elif args.preset and get_preset(args.preset).window:
        w = get_preset(args.preset).sampling_window().intervals
    else:
        w = ((Fraction(-3), Fraction(3)), (Fraction(-3), Fraction(3)))
    eps = args.eps or ["1"]
    layers = []
    if args.preset:
        base = get_preset(args.preset).polys()[0]
        layers.append((level_curves(base, w, args.grid), "#000000"))
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
    for i, e in enumerate(eps):
        sl = F.poly.evaluate({EPS: _fraction(e)}).with_context(F.y_names)
        layers.append((level_curves(sl, w, args.grid), colors[i % len(colors)]))
    title = args.title or f"{args.preset or 'family'} offsets at e = {', '.join(eps)}"
    write_atomic(args.out, curve_slices_svg(layers, w, title))


# ---------------------------------------------------------------------------
# parser


def _common(p, caps=False):
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    if caps:
        p.add_argument("--max-degree", type=int, default=None, help="Groebner degree cap")
        p.add_argument("--max-pairs", type=int, default=None, help="Groebner S-pair cap")
        p.add_argument("--max-seconds", type=float, default=None, help="Groebner time cap")


def _variety_args(p, family=True):
    p.add_argument("--preset", choices=sorted(PRESETS), help="named example variety")
    p.add_argument("--poly", action="append", help="generator in x1..xn (repeatable)")
    p.add_argument("--nvars", type=int, help="number of variables for --poly")
    if family:
        p.add_argument("--family", help="offset family .poly file instead of computing one")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="offsetph", description="Offset hypersurfaces, ED degrees "
                                 "and persistent homology of real varieties.")
    ap.add_argument("--version", action="version", version=f"offsetph {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="subcommand")

    p = sub.add_parser("offset", help="compute the offset family polynomial f(y, e)")
    _variety_args(p, family=False)
    p.add_argument("--out", help="write the polynomial to this .poly file")
    _common(p, caps=True)
    p.set_defaults(func=cmd_offset)

    p = sub.add_parser("degrees", help="degrees of the offset family in y and in e")
    _variety_args(p)
    _common(p, caps=True)
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("ed-degree", help="ED degree from the roots of f(y0, e)")
    _variety_args(p)
    p.add_argument("--point", help="probe point y0 as comma-separated rationals")
    _common(p, caps=True)
    p.set_defaults(func=cmd_ed_degree)

    p = sub.add_parser("disc-at", help="e-discriminant of the family at a rational point")
    _variety_args(p)
    p.add_argument("--point", required=True, help="point y0 as comma-separated rationals")
    _common(p, caps=True)
    p.set_defaults(func=cmd_disc_at)

    p = sub.add_parser("disc-bound", help="degree bound for the offset discriminant")
    p.add_argument("--degy", type=int, required=True)
    p.add_argument("--eddeg", type=int, required=True)
    p.add_argument("--formula", choices=["table", "corollary"], default="table")
    _common(p)
    p.set_defaults(func=cmd_disc_bound)

    p = sub.add_parser("compound", help="determinantal offset det(C_r(U U^T) - e^2 I)")
    p.add_argument("--matrix", required=True, help="CSV matrix, entries may be p/q")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out", help="write the polynomial in e to this .poly file")
    p.add_argument("--compound-only", action="store_true", help="print the additive compound of the matrix")
    p.add_argument("--check-eigen", action="store_true",
                   help="check compound eigenvalues against r-fold eigenvalue sums")
    p.add_argument("--tol", type=float, default=1e-8)
    _common(p)
    p.set_defaults(func=cmd_compound)

    p = sub.add_parser("sample", help="sample a plane curve into a CSV point cloud")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--poly", action="append", help="polynomial in x1, x2")
    p.add_argument("--window", help="x0,x1,y0,y1")
    p.add_argument("--slices", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", required=True)
    _common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("barcode", help="persistence barcode of a point cloud")
    p.add_argument("--cloud", required=True)
    p.add_argument("--filtration", choices=["cech", "vr"], default="cech")
    p.add_argument("--maxdim", type=int, default=1, choices=[0, 1, 2])
    p.add_argument("--maxradius", type=float, default=math.inf)
    p.add_argument("--out", required=True)
    _common(p)
    p.set_defaults(func=cmd_barcode)

    p = sub.add_parser("betti", help="persistent Betti number from a barcode file")
    p.add_argument("--barcode", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--interval", nargs=2, type=float, required=True, metavar=("A", "B"))
    _common(p)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("reach", help="Federer reach estimate of a sampled variety")
    p.add_argument("--cloud", required=True)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--poly", action="append")
    p.add_argument("--jacobian", help="CSV with one flattened Jacobian per point")
    p.add_argument("--delta-floor", type=float, default=1e-9)
    _common(p)
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("nsw", help="Niyogi-Smale-Weinberger sample size")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--volume", type=float, required=True)
    p.add_argument("--k", type=int, required=True, help="intrinsic dimension")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True, help="failure probability")
    p.add_argument("--convention", choices=["ratio", "as-printed"], default="ratio")
    _common(p)
    p.set_defaults(func=cmd_nsw)

    p = sub.add_parser("plot", help="SVG of offset curve slices or of a barcode")
    p.add_argument("--kind", choices=["curve-slices", "barcode"], default="curve-slices")
    _variety_args(p)
    p.add_argument("--barcode", help="barcode JSON for --kind barcode")
    p.add_argument("--eps", action="append", help="slice value e0 (repeatable, rational)")
    p.add_argument("--window", help="x0,x1,y0,y1")
    p.add_argument("--grid", type=int, default=400)
    p.add_argument("--title")
    p.add_argument("--out", required=True)
    _common(p, caps=True)
    p.set_defaults(func=cmd_plot)
    return ap


def _input_paths(args):
    return [getattr(args, k, None) for k in ("family", "matrix", "cloud", "barcode", "jacobian")]


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_exists(*_input_paths(args))
        args.func(args)
    except ResourceLimitError as exc:
        print(f"offsetph: resource limit: {exc}", file=sys.stderr)
        return 3
    except (UsageError, PolySyntaxError, UnknownVariableError, CloudFormatError, KeyError,
            ValueError, json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"offsetph: error: {msg}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"offsetph: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
