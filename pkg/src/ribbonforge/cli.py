"""Command-line front end.

Verbs:

* ``build``       construct a diagram, save it as JSON, print its measurements
* ``verify``      re-check a saved diagram against its family's promises
* ``table``       print the small-knot ribbonlength table, re-verified live
* ``render``      write an SVG figure of a saved diagram
* ``invariants``  print components, writhe, linking number, bracket, Jones, PD

Exit codes: 0 success, 1 verification failure, 2 inconclusive (for example
the bracket crossing cap was hit), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Optional

from . import docio
from .constructions import realize_family
from .errors import FormatError, ParameterError, RibbonError, TooLarge
from .families import (
    Exploded,
    FamilySpec,
    Hopf,
    PentagonTrefoil,
    Pretzel,
    Tight,
    Torus2,
    Twist,
    Unknot,
)
from .geometry import RibbonDiagram
from .metrics import LengthValue, bound_table, measure
from .svg import RenderOptions, to_svg
from .topology import (
    OrientationAssignment,
    Verdict,
    canonical_pd,
    components,
    declared_pd,
    extract_pd,
    jones_in_A,
    kauffman_bracket,
    linking_number,
    pd_to_text,
    same_type,
    writhe,
)

__all__ = ["main"]

EX_OK = 0
EX_FAIL = 1
EX_INCONCLUSIVE = 2
EX_USAGE = 64

_CHECK = "✓"
_CROSS = "✗"


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems with exit code 64."""

    def error(self, message):
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ribbonforge",
        description="Folded ribbon diagrams: constructions, measurements, invariants.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    build = sub.add_parser("build", help="construct a diagram and write it as JSON")
    build.add_argument(
        "family", choices=["torus", "twist", "pretzel", "pentagon", "hopf"]
    )
    build.add_argument("--q", type=int, help="torus parameter (q >= 2)")
    build.add_argument("--n", type=int, help="twist parameter (n >= 1)")
    build.add_argument("--twists", help="pretzel twists, e.g. 3,1,-2")
    build.add_argument("--mode", choices=["tight", "exploded"], default="tight")
    build.add_argument("--delta", default="1/64", help="explode offset as p/q")
    build.add_argument("--out", help="output path (default: derived from params)")

    verify = sub.add_parser("verify", help="re-check a saved diagram")
    verify.add_argument("path")

    table = sub.add_parser("table", help="print the ribbonlength table")
    table.add_argument("--json", action="store_true", dest="as_json")

    render = sub.add_parser("render", help="write an SVG figure")
    render.add_argument("path")
    render.add_argument("--out", help="output path (default: input with .svg)")
    render.add_argument("--scale", type=float, default=48.0)
    render.add_argument("--opacity", type=float, default=0.85)
    render.add_argument("--centerline", action="store_true")
    render.add_argument("--no-fold-lines", action="store_true", dest="no_fold_lines")
    render.add_argument("--labels", action="store_true")

    invariants = sub.add_parser("invariants", help="print diagram invariants")
    invariants.add_argument("path")
    return parser


def _fmt_value(value: LengthValue) -> str:
    if value.is_exact:
        if value.root_two == 0:
            return str(value.rational)
        if value.rational == 0:
            return f"{value.root_two}*sqrt(2)"
        return f"{value.rational} + {value.root_two}*sqrt(2)"
    return f"{float(value):.10g}"


def _parse_twists(raw: str) -> tuple[int, ...]:
    try:
        return tuple(int(part.strip()) for part in raw.split(","))
    except ValueError:
        raise ParameterError(f"cannot parse twist list {raw!r}; expected e.g. 3,1,-2")


def _family_from_args(args) -> FamilySpec:
    provided = {
        "--q": args.q is not None,
        "--n": args.n is not None,
        "--twists": args.twists is not None,
    }
    allowed = {"torus": "--q", "twist": "--n", "pretzel": "--twists"}.get(args.family)
    for flag, given in provided.items():
        if given and flag != allowed:
            raise ParameterError(f"{flag} does not apply to '{args.family}'")
    if args.family == "torus":
        if args.q is None:
            raise ParameterError("build torus requires --q")
        return Torus2(args.q)
    if args.family == "twist":
        if args.n is None:
            raise ParameterError("build twist requires --n")
        return Twist(args.n)
    if args.family == "pretzel":
        if args.twists is None:
            raise ParameterError("build pretzel requires --twists")
        return Pretzel(_parse_twists(args.twists))
    if args.family == "pentagon":
        return PentagonTrefoil()
    return Hopf()


def _mode_from_args(args):
    if args.mode == "tight":
        return Tight()
    try:
        delta = Fraction(args.delta)
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"cannot parse --delta {args.delta!r} as a rational")
    return Exploded(delta)


def _default_build_path(family: FamilySpec, mode) -> str:
    if isinstance(family, Torus2):
        stem = f"torus-q{family.q}"
    elif isinstance(family, Twist):
        stem = f"twist-n{family.n}"
    elif isinstance(family, Pretzel):
        stem = "pretzel-" + "_".join(str(t) for t in family.twists)
    elif isinstance(family, PentagonTrefoil):
        stem = "pentagon"
    else:
        stem = "hopf"
    if isinstance(mode, Exploded):
        stem += f"-exploded-{mode.delta.numerator}-{mode.delta.denominator}"
    return stem + ".json"


def _cmd_build(args) -> int:
    try:
        family = _family_from_args(args)
        mode = _mode_from_args(args)
        diagram = realize_family(family, mode)
    except ParameterError as exc:
        print(f"ribbonforge build: error: {exc}", file=sys.stderr)
        return EX_USAGE
    out = args.out if args.out else _default_build_path(family, mode)
    docio.save(diagram, out)
    report = measure(diagram)
    print(f"wrote {out}")
    print(
        f"Rib = {_fmt_value(report.ribbonlength)}, sticks = {report.sticks}, "
        f"components = {report.components}"
    )
    return EX_OK


def _load_for(args, command: str) -> Optional[RibbonDiagram]:
    """Load a document, reporting problems in the command's voice."""
    path = Path(args.path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"ribbonforge {command}: error: {exc}", file=sys.stderr)
        return None
    try:
        return docio.loads(text)
    except FormatError as exc:
        print(f"ribbonforge {command}: error: {path}: {exc}", file=sys.stderr)
        return None


def _expected_sticks_text(twists: tuple[int, ...]) -> tuple[int, str]:
    total = sum(abs(t) for t in twists)
    nonzero = sum(1 for t in twists if t != 0)
    zero = len(twists) - nonzero
    expected = total + 4 * nonzero + 2 * zero
    text = f"{total}+{4 * nonzero}"
    if zero:
        text += f"+{2 * zero}"
    return expected, text


def _metric_lines(diagram: RibbonDiagram, family: FamilySpec) -> tuple[list[str], bool]:
    """Formula-vs-measured lines for a tight diagram; (lines, all_ok)."""
    report = measure(diagram)
    rib = report.ribbonlength
    checks: list[tuple[str, object, object, str]] = []
    if isinstance(family, Torus2):
        q = family.q
        checks = [("Rib", rib, q + 3, f"{q}+3"), ("sticks", report.sticks, q + 5, f"{q}+5")]
    elif isinstance(family, Twist):
        n = family.n
        checks = [("Rib", rib, n + 6, f"{n}+6"), ("sticks", report.sticks, n + 8, f"{n}+8")]
    elif isinstance(family, Pretzel):
        total = sum(abs(t) for t in family.twists)
        k = len(family.twists)
        sticks_expected, sticks_text = _expected_sticks_text(family.twists)
        checks = [
            ("Rib", rib, total + 2 * k, f"{total}+{2 * k}"),
            ("sticks", report.sticks, sticks_expected, sticks_text),
        ]
    elif isinstance(family, Hopf):
        checks = [("Rib", rib, 4, "4"), ("sticks", report.sticks, 4, "4")]
    elif isinstance(family, PentagonTrefoil):
        target = 5.0 / math.tan(math.pi / 5.0)
        ok = abs(float(rib) - target) < 1e-9 and report.sticks == 5
        mark = _CHECK if ok else _CROSS
        line = (
            f"Rib {_fmt_value(rib)} = 5*cot(pi/5) within 1e-9 {mark}, "
            f"sticks {report.sticks} = 5 {mark}"
        )
        return [line], ok
    else:
        return [f"Rib {_fmt_value(rib)} (no formula for this family)"], True
    lines = []
    all_ok = True
    for label, got, want, formula in checks:
        ok = got == want
        all_ok = all_ok and ok
        shown = _fmt_value(got) if isinstance(got, LengthValue) else str(got)
        lines.append(f"{label} {shown} = {formula} {_CHECK if ok else _CROSS}")
    return lines, all_ok


def _pd_consistency(diagram: RibbonDiagram, family: FamilySpec) -> tuple[str, bool]:
    """Declared-versus-extracted PD comparison, on whatever geometry supports it."""
    if isinstance(diagram.layout_mode, Exploded):
        target = diagram
        label = f"declared PD = extracted PD (delta={diagram.layout_mode.delta})"
    elif isinstance(family, (Torus2, Twist, Pretzel)):
        target = realize_family(family, Exploded(Fraction(1, 64)))
        label = "declared PD = extracted PD (re-laid out exploded, delta=1/64)"
    else:
        return ("declared/extracted comparison n/a (tight-only construction)", True)
    try:
        ok = canonical_pd(extract_pd(target)) == canonical_pd(declared_pd(target))
    except RibbonError as exc:
        return (f"{label} {_CROSS} ({exc})", False)
    return (f"{label} {_CHECK if ok else _CROSS}", ok)


def _cmd_verify(args) -> int:
    diagram = _load_for(args, "verify")
    if diagram is None:
        return EX_USAGE
    family = diagram.family
    if family is None:
        print("verify: the file records no family; nothing to verify against")
        return EX_INCONCLUSIVE
    failed = False
    inconclusive = False

    if isinstance(diagram.layout_mode, Exploded):
        report = measure(diagram)
        print(
            f"Rib {_fmt_value(report.ribbonlength)}, sticks {report.sticks} "
            "(exploded layout: tight equalities not applicable)"
        )
    else:
        lines, ok = _metric_lines(diagram, family)
        for line in lines:
            print(line)
        failed = failed or not ok

    pd_line, pd_ok = _pd_consistency(diagram, family)
    print(pd_line)
    failed = failed or not pd_ok

    check = same_type(diagram, family)
    print(f"type {check.verdict.value} — {check.detail}")
    if check.verdict == Verdict.FAILED:
        failed = True
    elif check.verdict == Verdict.INCONCLUSIVE:
        inconclusive = True

    if failed:
        print("verify: FAIL")
        return EX_FAIL
    if inconclusive:
        print("verify: INCONCLUSIVE")
        return EX_INCONCLUSIVE
    print("verify: OK")
    return EX_OK


def _family_label(family: Optional[FamilySpec]) -> str:
    if family is None:
        return "analytic, no construction"
    if isinstance(family, Torus2):
        return f"(2,{family.q})-torus"
    if isinstance(family, Twist):
        return f"twist-{family.n}"
    if isinstance(family, Pretzel):
        return "P(" + ",".join(str(t) for t in family.twists) + ")"
    if isinstance(family, Hopf):
        return "Hopf"
    if isinstance(family, PentagonTrefoil):
        return "pentagon trefoil"
    return "unknot"


def _cmd_table(args) -> int:
    rows = bound_table()
    bad = []
    for row in rows:
        if row.family is None:
            continue
        report = measure(realize_family(row.family))
        if not (report.exact and report.ribbonlength == row.bound):
            bad.append((row, report))
    if args.as_json:
        payload = [
            {
                "table_name": row.table_name,
                "family": docio.family_to_obj(row.family),
                "bound": row.bound,
                "note": row.note,
            }
            for row in rows
        ]
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for row in rows:
            print(f"{row.table_name} | {_family_label(row.family)} | {row.bound}")
    if bad:
        for row, report in bad:
            print(
                f"table: {row.table_name}: measured {_fmt_value(report.ribbonlength)}"
                f" != bound {row.bound}",
                file=sys.stderr,
            )
        return EX_FAIL
    return EX_OK


def _cmd_render(args) -> int:
    diagram = _load_for(args, "render")
    if diagram is None:
        return EX_USAGE
    try:
        opts = RenderOptions(
            mode=diagram.layout_mode,
            scale=args.scale,
            show_fold_lines=not args.no_fold_lines,
            show_centerline=args.centerline,
            opacity=args.opacity,
            label_ends=args.labels,
        )
    except ParameterError as exc:
        print(f"ribbonforge render: error: {exc}", file=sys.stderr)
        return EX_USAGE
    out = args.out if args.out else str(Path(args.path).with_suffix(".svg"))
    text = to_svg(diagram, opts)
    Path(out).write_text(text, encoding="utf-8")
    print(f"wrote {out}")
    return EX_OK


def _cmd_invariants(args) -> int:
    diagram = _load_for(args, "invariants")
    if diagram is None:
        return EX_USAGE
    pd = declared_pd(diagram)
    ncomp = components(pd)
    print(f"components {ncomp}")
    print(f"crossings {len(pd.crossings)}")
    if ncomp == 2:
        print(f"|Lk| = {abs(linking_number(pd))}")
    try:
        bracket = kauffman_bracket(pd)
    except TooLarge as exc:
        print(f"bracket not computed: {exc}", file=sys.stderr)
        return EX_INCONCLUSIVE
    print(f"bracket = {bracket}")
    walked = len(pd.components)
    for flags in product((False, True), repeat=walked):
        orientation = OrientationAssignment(flags)
        tag = "".join("-" if f else "+" for f in flags) or "()"
        w = writhe(pd, orientation)
        jones = jones_in_A(pd, orientation)
        print(f"writhe({tag}) = {w}, jones(A) = {jones}")
    print("pd:")
    print(pd_to_text(pd), end="")
    return EX_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    handlers = {
        "build": _cmd_build,
        "verify": _cmd_verify,
        "table": _cmd_table,
        "render": _cmd_render,
        "invariants": _cmd_invariants,
    }
    try:
        return handlers[args.command](args)
    except RibbonError as exc:
        print(f"ribbonforge {args.command}: error: {exc}", file=sys.stderr)
        return EX_FAIL


if __name__ == "__main__":
    sys.exit(main())
