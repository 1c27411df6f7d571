"""Command-line entry point ``twv``.

Subcommands: ``verify``, ``invariant``, ``volume`` and ``examples``.
Exit codes are 0 on success, 1 on a mathematical failure and 2 on an input
or schema problem.
"""
from __future__ import annotations

import argparse
import cmath
import logging
import math
import re
import sys
from pathlib import Path

from . import __version__
from .fixtures import EXAMPLES
from .io import SchemaError, emit_document, example_document, resolve_input
from .laurent import PrecisionError, precision_bits, to_complex, working_precision
from .reps import RepresentationError, SignAssignment, lift_rep, verify_rep
from .volume import ParityError, Pipeline, SeriesConfig, run_series
from .wada import DegenerateDenominator, PoleError
from .words import PresentationError, validate_presentation

EXIT_OK, EXIT_MATH, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def parse_point(text: str) -> complex:
    """``1``, ``-1``, ``re,im``, a Python complex literal, or ``e(k/m)`` for exp(2 pi i k/m)."""
    text = text.strip()
    m = re.fullmatch(r"e\((-?\d+)/(\d+)\)", text)
    if m:
        k, n = int(m.group(1)), int(m.group(2))
        if n == 0:
            raise InputError("root of unity with denominator 0")
        if (2 * k) % n == 0:
            return complex((-1) ** (2 * k // n))
        return cmath.exp(2j * math.pi * k / n)
    if "," in text:
        re_, im_ = text.split(",", 1)
        return complex(float(re_), float(im_))
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise InputError(f"cannot parse evaluation point {text!r}") from None


def parse_signs(text: str | None, b: int, default: list[SignAssignment]) -> list[SignAssignment]:
    if text is None:
        return default
    if text == "all":
        return SignAssignment.enumerate(b)
    out = []
    for part in text.split(","):
        try:
            eps = SignAssignment.parse(part)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        if len(eps) != b:
            raise InputError(f"sign assignment {part!r} needs {b} entries")
        out.append(eps)
    return out


def _load(spec: str):
    try:
        return resolve_input(spec)
    except (SchemaError, PresentationError) as exc:
        raise InputError(str(exc)) from None


def _branch(data, index: int) -> int:
    if not 0 <= index < len(data.representations):
        raise InputError(f"branch {index} out of range (document has {len(data.representations)})")
    return index


def cmd_verify(args) -> int:
    data = _load(args.input)
    p = data.presentation
    report = validate_presentation(p, data.alpha)
    failed = False
    print(f"{data.name}: {len(p.generators)} generators, {len(p.relators)} relators, "
          f"{p.component_count} component(s), deficiency {report.deficiency}, alpha gcd {report.alpha_gcd}")
    for f in report.failures:
        print(f"FAIL presentation: {f}")
        failed = True
    signs = parse_signs(args.signs, p.component_count, data.signs)
    ns = [int(x) for x in args.n.split(",")]
    bits = precision_bits(args.precision) or 128
    with working_precision(bits):
        for bi, rho2 in enumerate(data.representations):
            for eps in signs:
                for n in ns:
                    try:
                        rep = verify_rep(p, lift_rep(n, rho2, eps, p), tol=args.tol)
                    except RepresentationError as exc:
                        print(f"FAIL branch {bi} signs {eps} n={n}: {exc}")
                        failed = True
                        continue
                    status = "ok" if rep.ok else "FAIL"
                    print(f"{status:4} branch {bi} [{rho2.branch}] signs {eps} n={n}: "
                          f"max relator residual {rep.max_residual:.3g}, "
                          f"traces {', '.join(f'{complex(t).real:.6g}' for t in rep.traces)}")
                    for f in rep.failures:
                        print(f"     {f}")
                    failed |= not rep.ok
    print("verify: " + ("FAILED" if failed else "passed"))
    return EXIT_MATH if failed else EXIT_OK


def cmd_invariant(args) -> int:
    data = _load(args.input)
    p = data.presentation
    eps = parse_signs(args.signs, p.component_count, [data.signs[0] if data.signs else
                                                      SignAssignment.all_plus(p.component_count)])[0]
    pipe = Pipeline(data, _branch(data, args.branch), args.precision)
    if args.print == "poly":
        w = pipe.certified_invariant(args.n, eps)
        with working_precision(w.bits):
            print(f"# {data.name} n={args.n} signs={eps} branch={args.branch} "
                  f"deleted generator {p.generators[w.deleted_index].name} (normalized up to +-t^p)")
            num, den = (w.num, w.den) if args.raw else w.reduced()
            print(f"num: {num.normalized().format(args.digits)}")
            print(f"den: {den.normalized().format(args.digits)}")
        return EXIT_OK
    point = parse_point(args.at)
    pair = pipe.local(args.n, eps, point)
    with working_precision(pair.bits):
        order = pair.order
        value = to_complex(pair.value)
    print(f"# {data.name} n={args.n} signs={eps} at t={point}")
    print(f"zero_order: {order}")
    if abs(value.imag) <= 1e-25 * abs(value):
        value = complex(value.real, 0.0)
    print(f"leading value: {value.real:.{args.digits}g}{value.imag:+.{args.digits}g}i")
    print(f"|leading value|: {abs(value):.{args.digits}g}")
    return EXIT_OK


def cmd_volume(args) -> int:
    data = _load(args.input)
    p = data.presentation
    default_signs = [SignAssignment.all_plus(p.component_count)]
    signs = parse_signs(args.signs, p.component_count, default_signs)
    try:
        config = SeriesConfig(n_max=args.nmax, n_min=args.nmin, parity=args.parity,
                              point=parse_point(args.at), signs=signs, mode=args.mode,
                              precision=args.precision, accel=args.accel,
                              exploratory=args.exploratory, rep_index=_branch(data, args.branch),
                              ns=[int(x) for x in args.n.split(",")] if args.n else None)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    table = run_series(config, data)
    print(table.render())
    if args.csv:
        text = table.to_csv()
        if args.csv == "-":
            sys.stdout.write(text)
        else:
            Path(args.csv).write_text(text)
    return EXIT_OK if any(r.ok for r in table.rows) else EXIT_MATH


def cmd_examples(args) -> int:
    if args.action == "list":
        for name in EXAMPLES:
            print(name)
        return EXIT_OK
    if args.name not in EXAMPLES:
        raise InputError(f"unknown example {args.name!r}; available: {', '.join(EXAMPLES)}")
    text = emit_document(example_document(args.name, args.digits))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twv", description="Twisted Alexander invariants and volume estimates.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("input", help="built-in example name or path to a .twv document")
        sp.add_argument("--precision", default=None,
                        help="auto, f64, dd or a bit count (default: $TWV_PRECISION, else auto)")
        sp.add_argument("--branch", type=int, default=0, help="index of the holonomy branch")
        sp.add_argument("--signs", default=None, help="sign lift(s), e.g. '+-', '++,--' or 'all'")

    sp = sub.add_parser("verify", help="check the presentation and the lifted representations")
    common(sp)
    sp.add_argument("--n", default="2,3,4", help="comma-separated dimensions to check")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("invariant", help="print the twisted Alexander invariant or its value")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--print", choices=("poly", "value"), default="poly")
    sp.add_argument("--at", default="1")
    sp.add_argument("--digits", type=int, default=12)
    sp.add_argument("--raw", action="store_true",
                    help="print the Fox-matrix determinants without cancelling common factors")
    sp.set_defaults(func=cmd_invariant)

    sp = sub.add_parser("volume", help="volume estimator series")
    common(sp)
    sp.add_argument("--nmax", type=int, default=20)
    sp.add_argument("--nmin", type=int, default=2)
    sp.add_argument("--n", default=None, help="explicit comma-separated dimensions")
    sp.add_argument("--parity", choices=("even", "odd", "both"), default="both")
    sp.add_argument("--at", default="1", help="1, -1, 're,im' or e(k/m)")
    sp.add_argument("--mode", choices=("ratio", "plain", "tilde"), default="ratio")
    sp.add_argument("--accel", action="store_true", help="add an Aitken column (not from the source tables)")
    sp.add_argument("--exploratory", action="store_true",
                    help="allow unimodular points other than +-1 (conjectural output)")
    sp.add_argument("--csv", default=None, help="write CSV to this path ('-' for stdout)")
    sp.set_defaults(func=cmd_volume)

    sp = sub.add_parser("examples", help="list or emit built-in example documents")
    sp.add_argument("action", choices=("list", "emit"))
    sp.add_argument("name", nargs="?")
    sp.add_argument("-o", "--output", default=None)
    sp.add_argument("--digits", type=int, default=None)
    sp.set_defaults(func=cmd_examples)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "examples" and args.action == "emit" and not args.name:
        print("examples emit: a name is required", file=sys.stderr)
        return EXIT_INPUT
    try:
        if getattr(args, "precision", None) is not None:
            try:
                precision_bits(args.precision)
            except ValueError as exc:
                raise InputError(str(exc)) from None
        return args.func(args)
    except (InputError, SchemaError, PresentationError, RepresentationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (DegenerateDenominator, PoleError, ParityError, PrecisionError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
