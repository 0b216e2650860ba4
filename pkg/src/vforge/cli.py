"""Command-line front end.

Exit codes: 0 value printed / expected outcome, 1 unexpected violation or
failed check, 2 undecided, 64 usage error, 65 unparsable rational.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from typing import Optional, Sequence

from . import suite as suite_mod
from .equiconnect import axioms_check, get_connector, sample_triples
from .errors import DomainError, RationalParseError, Undecided, UnknownConstruction, VforgeError
from .gallery import DIAGONAL_EXPECTATION, FAMILIES, GLUED, assemble, family
from .gluing import DEFAULT_MAX_DEPTH, GluedMapping, eval_glued
from .hyperspace import Profile
from .lab import (
    DEFAULT_RESOLUTION,
    convergence_probe,
    diagonal_preimage_exact,
    hausdorff_gap,
    joint_diagonal_witness,
    separate_probe,
)
from .rat import fmt_rat, parse_rat
from .report import NoViolationAtResolution, Report, ViolationWitness, to_jsonable

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_UNDECIDED = 2
EXIT_USAGE = 64
EXIT_PARSE = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))


def _range(text: str) -> tuple[Fraction, Fraction]:
    if ":" not in text:
        raise UsageError(f"range must look like lo:hi, got {text!r}")
    lo, hi = text.split(":", 1)
    lo, hi = parse_rat(lo), parse_rat(hi)
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def default_depth() -> int:
    env = os.environ.get("VFORGE_DEPTH")
    if env is None:
        return DEFAULT_MAX_DEPTH
    try:
        depth = int(env)
    except ValueError:
        raise UsageError(f"VFORGE_DEPTH must be an integer, got {env!r}") from None
    if depth < 1:
        raise UsageError("VFORGE_DEPTH must be positive")
    return depth


# --------------------------------------------------------------------------
# grids


def _lattice(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    out = []
    k = 0
    while lo + k * step <= hi:
        out.append(lo + k * step)
        k += 1
    return out


def grid_rows(m: GluedMapping, x_range, y_range, step) -> list[dict]:
    step = parse_rat(step)
    if step <= 0:
        raise UsageError("grid step must be positive")
    xs = _lattice(*x_range, step)
    ys = _lattice(*y_range, step)
    for v in (*x_range, *y_range):
        if v not in m.domain:
            raise DomainError(f"grid bound {v} outside {m.domain}")
    rows = []
    for x in xs:
        for y in ys:
            value = eval_glued(m, x, y)
            gap = fmt_rat(hausdorff_gap(m, x, y)) if isinstance(value, Profile) else ""
            rows.append({"x": fmt_rat(x), "y": fmt_rat(y), "value": _dumps(value), "gap": gap})
    return rows


def emit_grid(m: GluedMapping, x_range, y_range, step, fmt: str = "csv") -> str:
    rows = grid_rows(m, x_range, y_range, step)
    if fmt == "json":
        return json.dumps(rows, sort_keys=True, separators=(",", ":"))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["x", "y", "value", "gap"], lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


# --------------------------------------------------------------------------
# commands


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for {args.command}")


def _glued(args) -> GluedMapping:
    if args.construction not in GLUED:
        raise UsageError(f"{args.command} needs one of {', '.join(GLUED)}")
    return assemble(args.construction, max_depth=args.depth or default_depth())


def cmd_eval(args) -> tuple[int, str]:
    _need(args, "x", "y")
    m = _glued(args)
    try:
        value = eval_glued(m, parse_rat(args.x), parse_rat(args.y))
    except Undecided as exc:
        return EXIT_UNDECIDED, _dumps({"undecided": {"depth": exc.depth}})
    return EXIT_OK, _dumps(value)


def cmd_grid(args) -> tuple[int, str]:
    m = _glued(args)
    lo, hi = m.domain.lo, m.domain.hi
    default = f"{fmt_rat(lo if m.domain.lo_closed else Fraction(1, 4))}:{fmt_rat(hi if m.domain.hi_closed else Fraction(3, 4))}"
    x_range = _range(args.x_range or default)
    y_range = _range(args.y_range or default)
    step = parse_rat(args.step or "1/8")
    return EXIT_OK, emit_grid(m, x_range, y_range, step, args.format or "csv")


def cmd_check_separate(args) -> tuple[int, str]:
    _need(args, "x", "y")
    m = _glued(args)
    x, y = parse_rat(args.x), parse_rat(args.y)
    resolution = parse_rat(args.resolution) if args.resolution else DEFAULT_RESOLUTION
    axes = ("x", "y") if args.axis == "both" else (args.axis,)
    reports = [separate_probe(m, x, y, axis, resolution) for axis in axes]
    code = EXIT_OK
    if any(r.undecided for r in reports):
        code = EXIT_UNDECIDED
    if any(r.violations for r in reports):
        code = EXIT_VIOLATION
    payload = reports[0].to_json() if len(reports) == 1 else [r.to_json() for r in reports]
    return code, _dumps(payload)


def cmd_check_diagonal(args) -> tuple[int, str]:
    _need(args, "x0")
    m = _glued(args)
    x0 = parse_rat(args.x0)
    verdict = joint_diagonal_witness(m, x0)
    expected = DIAGONAL_EXPECTATION[m.name]
    if expected == "discontinuous":
        passed = isinstance(verdict, ViolationWitness)
    else:
        passed = isinstance(verdict, NoViolationAtResolution)
    params = {"x0": x0, "expect": expected}
    if m.name == "thm":
        seg, nbhd = diagonal_preimage_exact(x0)
        params["halo_preimage"] = seg
        params["preimage_is_neighborhood"] = nbhd
    report = Report(m.name, "check-diagonal", params, [verdict], passed)
    if not passed:
        return (EXIT_UNDECIDED if verdict.kind == "undecided" else EXIT_VIOLATION), report.dumps()
    return EXIT_OK, report.dumps()


def cmd_convergence(args) -> tuple[int, str]:
    _need(args, "x")
    fam = family(args.construction)
    resolution = parse_rat(args.resolution) if args.resolution else DEFAULT_RESOLUTION
    report = convergence_probe(fam, parse_rat(args.x), depth=args.depth or 200, resolution=resolution)
    return (EXIT_OK if report.passed else EXIT_UNDECIDED), report.dumps()


def cmd_axioms(args) -> tuple[int, str]:
    try:
        c = get_connector(args.connector)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    report = axioms_check(c, sample_triples(c, args.samples, args.seed))
    return (EXIT_OK if report.passed else EXIT_VIOLATION), report.dumps()


def cmd_suite(args) -> tuple[int, str]:
    only = None
    if args.only:
        try:
            only = {int(k) for k in args.only.split(",")}
        except ValueError:
            raise UsageError(f"--only takes comma-separated criterion numbers, got {args.only!r}") from None
        if not only <= set(suite_mod.CRITERIA):
            raise UsageError(f"criteria are numbered {min(suite_mod.CRITERIA)}..{max(suite_mod.CRITERIA)}")
    results = suite_mod.run_suite(args.seed, only)
    for r in results:
        print(r.line(), file=sys.stderr)
    payload = _dumps([r.to_json() for r in results])
    return (EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION), payload


COMMANDS = {
    "eval": cmd_eval,
    "grid": cmd_grid,
    "check-separate": cmd_check_separate,
    "check-diagonal": cmd_check_diagonal,
    "convergence": cmd_convergence,
    "axioms": cmd_axioms,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("construction_pos", nargs="?", metavar="construction")
        p.add_argument("--construction", dest="construction_opt")
        p.add_argument("--x")
        p.add_argument("--y")
        p.add_argument("--x0")
        p.add_argument("--resolution")
        p.add_argument("--depth", type=int)
        p.add_argument("--seed", type=int, default=suite_mod.DEFAULT_SEED)
        p.add_argument("--out")
        p.add_argument("--format", choices=("json", "csv"))
        if name == "check-separate":
            p.add_argument("--axis", choices=("x", "y", "both"), default="both")
        if name == "grid":
            p.add_argument("--x-range")
            p.add_argument("--y-range")
            p.add_argument("--step")
        if name == "axioms":
            p.add_argument("--connector", default="profile")
            p.add_argument("--samples", type=int, default=500)
        if name == "suite":
            p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".vforge-")
    with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.construction = args.construction_opt or args.construction_pos
        if args.command not in ("axioms", "suite") and args.construction is None:
            parser.error(f"{args.command} needs a construction ({', '.join(sorted(FAMILIES))})")
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        code, text = COMMANDS[args.command](args)
    except RationalParseError as exc:
        print(f"vforge: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, UnknownConstruction, DomainError) as exc:
        print(f"vforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VforgeError as exc:
        print(f"vforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        _write_atomic(args.out, text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
