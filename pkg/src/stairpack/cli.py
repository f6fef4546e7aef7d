"""Command line interface.

Exit codes: 0 success, 1 parse or usage error, 2 semantic rejection (invalid
or non-normal packing), 3 a theorem-level check failed (a bug).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .extremal import LatticeNotFound, certify_bound, lattice_clip, optimal_lattice
from .fileformat import ParseError, parse_rational, read_packing, serialize_packing
from .geom import Point, fmt
from .packing import PackingInstance, describe, is_normal, normalize, search, validate
from .shadow import sample_multiplicity, sample_points, triangle_translate
from .stair import audit, build_stairs
from .svg import render_svg

EXIT_OK, EXIT_USAGE, EXIT_REJECT, EXIT_BUG = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _load(path: str) -> PackingInstance:
    try:
        return read_packing(path)
    except ParseError as e:
        raise CliError(EXIT_USAGE, f"{path}: {e}") from None
    except OSError as e:
        raise CliError(EXIT_USAGE, f"{path}: {e.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _require_normal_valid(p: PackingInstance) -> None:
    if not is_normal(p):
        raise CliError(EXIT_REJECT, "not normal; run normalize")
    v = validate(p)
    if v is not None:
        raise CliError(EXIT_REJECT, str(v))


def _approx(q) -> str:
    return f"{fmt(q)} ({float(q):.6f})"


def cmd_validate(args) -> int:
    p = _load(args.file)
    v = validate(p)
    if v is None:
        print("OK")
        return EXIT_OK
    print(v)
    return EXIT_REJECT


def cmd_stairify(args) -> int:
    p = _load(args.file)
    _require_normal_valid(p)
    fam = build_stairs(p)
    rep = audit(p, fam)
    print(f"# k={p.k} l={p.l} N={p.N}")
    print("i\toffset\tr\tn\tn*\tarea")
    for i, o in enumerate(p.offsets):
        print(f"{i}\t{o}\t{fam.r[i]}\t{fam.n[i]}\t{fam.n_star[i]}\t{fmt(fam.stairs[i].area)}")
    sr, cap = sum(fam.r), (2 * p.k - 1) * p.N
    print(f"sum r = {sr} <= (2k-1)N = {cap}")
    print(rep.to_text())
    if args.svg:
        Path(args.svg).write_text(render_svg(p, fam), encoding="utf-8")
    return EXIT_OK if rep.passed else EXIT_BUG


def cmd_certify(args) -> int:
    p = _load(args.file)
    _require_normal_valid(p)
    if p.N == 0:
        raise CliError(EXIT_REJECT, "empty packing; nothing to certify")
    cert = certify_bound(p)
    print(cert.to_text())
    return EXIT_OK if cert.verdict else EXIT_BUG


def cmd_lattice(args) -> int:
    if not 1 <= args.k <= 8:
        raise CliError(EXIT_USAGE, "-k must lie in 1..8")
    try:
        b = optimal_lattice(args.k)
    except LatticeNotFound as e:
        raise CliError(EXIT_BUG, str(e)) from None
    print(f"u = {b.u}")
    print(f"w = {b.w}")
    print(f"det = {_approx(b.det)}")
    print(f"density = {_approx(b.density)}")
    if args.window is not None:
        p = lattice_clip(b, args.k, args.window)
        if validate(p) is not None:
            raise CliError(EXIT_BUG, "clipped lattice packing failed validation")
        print(f"# {describe(p)}")
        _emit(serialize_packing(p), args.out)
    return EXIT_OK


def cmd_search(args) -> int:
    if args.k < 1 or args.l < 1 or args.iters < 0:
        raise CliError(EXIT_USAGE, "-k and -l must be positive, --iters non-negative")
    p = search(args.k, args.l, args.seed, args.iters)
    _emit(serialize_packing(p), args.out)
    print(f"# {describe(p)}", file=sys.stderr)
    return EXIT_OK


def cmd_normalize(args) -> int:
    p = _load(args.file)
    try:
        eps = parse_rational(args.epsilon)
    except ValueError as e:
        raise CliError(EXIT_USAGE, str(e)) from None
    if not 0 < eps < 1:
        raise CliError(EXIT_USAGE, "--epsilon must lie in (0, 1)")
    v = validate(p)
    if v is not None:
        raise CliError(EXIT_REJECT, str(v))
    unit = normalize(p, eps).to_unit()
    _emit(serialize_packing(unit), args.out)
    return EXIT_OK


def cmd_shadow(args) -> int:
    p = _load(args.file)
    try:
        vx, vy = (parse_rational(t.strip()) for t in args.dir.split(","))
    except ValueError:
        raise CliError(EXIT_USAGE, f"--dir expects 'vx,vy', got {args.dir!r}") from None
    if vx == 0 and vy == 0:
        raise CliError(EXIT_USAGE, "--dir must be nonzero")
    v = validate(p)
    if v is not None:
        raise CliError(EXIT_REJECT, str(v))
    if p.N == 0:
        raise CliError(EXIT_REJECT, "empty packing")
    fam = [triangle_translate(o) for o in p.offsets]
    pts = sample_points(fam, args.samples, args.seed)
    m = sample_multiplicity(fam, p.k, Point(vx, vy), pts, strict=args.strict)
    variant = "strict" if args.strict else "non-strict"
    print(f"variant {variant} dir {Point(vx, vy)} samples {len(pts)} seed {args.seed}")
    print(f"max multiplicity {m} {'<=' if m <= p.k else '>'} k={p.k}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stairpack", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check k-fold validity of a packing file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("stairify", help="build stair polygons and audit their properties")
    s.add_argument("file")
    s.add_argument("--svg", metavar="PATH")
    s.set_defaults(func=cmd_stairify)

    s = sub.add_parser("certify", help="print the exact density bound certificate")
    s.add_argument("file")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("lattice", help="synthesize and verify the optimal k-fold lattice")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--window", type=int, metavar="L")
    s.add_argument("--out", metavar="FILE")
    s.set_defaults(func=cmd_lattice)

    s = sub.add_parser("search", help="seeded local search for a dense valid packing")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("-l", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--iters", type=int, default=1000)
    s.add_argument("--out", metavar="FILE")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("normalize", help="make a packing normal by shrinking and spreading duplicates")
    s.add_argument("file")
    s.add_argument("--epsilon", default="1/10")
    s.add_argument("--out", metavar="FILE")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("shadow", help="sample k-fold shadow-cell multiplicity")
    s.add_argument("file")
    s.add_argument("--dir", default="1,0")
    s.add_argument("--samples", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--strict", action="store_true")
    s.set_defaults(func=cmd_shadow)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as e:
        print(e, file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
