"""Command-line interface: ``dcat check|build|paste|examples|extract``.

Exit codes: 0 everything passed (or was vacuous), 1 violations found,
2 the input could not be read or is structurally unusable.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from . import __version__, kernels
from .category import FiniteCategory, validate_category
from .double import (
    DEFAULT_SAMPLE,
    SquareGrid,
    check_interchange_equiv,
    default_max_grids,
    extract_crossed_module_h,
    extract_crossed_module_v,
    is_square,
    pasting_orders,
    square_space,
    validate_double_category,
)
from .errors import DcatError, ParseError
from .fixtures import EXAMPLES
from .module import DoubleModule, check_crossed_module, validate_double_module
from .report import DiagnosticReport
from .serialize import CrossedModule, dumps, load_structure, save_structure, to_dict

log = logging.getLogger("doublecat")

EXIT_OK, EXIT_VIOLATIONS, EXIT_ERROR = 0, 1, 2
U64 = (1 << 64) - 1

AXIOM_CHECKS = ("axiom_i_H", "axiom_i_V", "axiom_ii")


class Failure(Exception):
    """Exit with code 2 after printing ``message``."""

    def __init__(self, message: str, error: DcatError | None = None):
        super().__init__(message)
        self.error = error


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v <= U64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


# global options are accepted before or after the subcommand
GLOBAL_DEFAULTS = {"seed": 0, "sample": DEFAULT_SAMPLE, "max_grids": None, "format": "text",
                   "backend": None, "verbose": False}


def _global_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    S = argparse.SUPPRESS
    g.add_argument("--seed", type=_u64, default=S, help="seed for grid/triple sampling (default 0)")
    g.add_argument("--sample", type=_positive, default=S,
                   help=f"sample size when exhaustive checking is over the cap (default {DEFAULT_SAMPLE})")
    g.add_argument("--max-grids", type=_positive, default=S,
                   help="check every 2x2 grid up to this many, else sample (default $DCAT_MAX_GRIDS or 1000000)")
    g.add_argument("--format", choices=("text", "json"), default=S, help="output format (default text)")
    g.add_argument("--backend", choices=("numba", "numpy"), default=S,
                   help="kernel backend (default $DCAT_BACKEND or numba)")
    g.add_argument("-v", "--verbose", action="store_true", default=S, help="show all witnesses and notes")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(
        prog="dcat", parents=[common],
        description="Build and check double categories of squares from finite double modules.",
        epilog="Exit codes: 0 pass, 1 violations, 2 parse or structural error.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate a structure file")
    p.add_argument("file", help="structure file, '-' for stdin, or a built-in example name")
    p.add_argument("--dm", help="double module to check a grid file against")
    p.add_argument("--module-only", action="store_true", help="skip the double-category checks")

    p = sub.add_parser("build", parents=[common], help="enumerate the squares of a double module")
    p.add_argument("file", help="double module file, '-', or a built-in example name")
    p.add_argument("--emit", choices=("squares", "counts"), default="counts")

    p = sub.add_parser("paste", parents=[common], help="composite of a grid of squares")
    p.add_argument("file", help="double module file or built-in example name")
    p.add_argument("grid", help="grid file")
    p.add_argument("--verify-interchange", action="store_true",
                   help="also paste columns first and fail if the results differ")

    p = sub.add_parser("examples", parents=[common], help="emit a built-in instance")
    p.add_argument("name", nargs="?", choices=sorted(EXAMPLES), help="omit to list the names")
    p.add_argument("-o", "--output", default="-", help="output file (default stdout)")

    p = sub.add_parser("extract", parents=[common], help="crossed module from a double groupoid")
    p.add_argument("file", help="double module file or built-in example name")
    p.add_argument("--direction", choices=("h", "v"), required=True)
    p.add_argument("--object", help="base object (default: the only object of P)")
    p.add_argument("-o", "--output", help="also write the crossed module to this file")
    return parser


# helpers


def _load(source: str):
    if source != "-" and not Path(source).exists() and source in EXAMPLES:
        return EXAMPLES[source]()
    return load_structure(source)


def _load_dm(source: str) -> DoubleModule:
    obj = _load(source)
    if not isinstance(obj, DoubleModule):
        raise Failure(f"{source}: expected a double_module file, got {type(obj).__name__}")
    return obj


def _structurally_sound(rep: DiagnosticReport) -> bool:
    return all(c.ok for c in rep.checks if c.name not in AXIOM_CHECKS)


def _sq(q) -> dict[str, str]:
    return q._asdict()


class Output:
    """Collects results; prints text as it goes or one JSON object at the end."""

    def __init__(self, args):
        self.args = args
        self.json = args.format == "json"
        self.payload: dict[str, Any] = {"command": args.command}
        self.reports: list[DiagnosticReport] = []

    def text(self, line: str = "") -> None:
        if not self.json:
            print(line)

    def report(self, rep: DiagnosticReport) -> None:
        self.reports.append(rep)
        self.text(rep.render(verbose=self.args.verbose))

    def finish(self, code: int, error: Exception | None = None) -> int:
        if self.json:
            out = dict(self.payload)
            if self.reports:
                out["reports"] = [r.to_dict() for r in self.reports]
            if error is not None:
                out["status"] = "error"
                out["error"] = {"type": type(error).__name__, "message": str(error),
                                "line": getattr(error, "line", None), "field": getattr(error, "field", None)}
            else:
                out["status"] = self._status(code)
            out["exit_code"] = code
            print(json.dumps(out, indent=2, ensure_ascii=False))
        elif error is not None:
            print(f"error: {error}", file=sys.stderr)
        return code

    def _status(self, code: int) -> str:
        if code:
            return "fail"
        if any(r.status == "vacuous" for r in self.reports):
            return "vacuous"
        return "pass"


def _exit_for(reports: list[DiagnosticReport]) -> int:
    return EXIT_VIOLATIONS if any(not r.ok for r in reports) else EXIT_OK


# commands


def cmd_check(args, out: Output) -> int:
    obj = _load(args.file)
    out.payload["kind"] = to_dict(obj)["kind"]
    if isinstance(obj, FiniteCategory):
        out.report(validate_category(obj))
    elif isinstance(obj, CrossedModule):
        out.report(check_crossed_module(obj.boundary, obj.action))
    elif isinstance(obj, SquareGrid):
        out.report(_check_grid(args, obj))
    else:
        mod = validate_double_module(obj)
        out.report(mod)
        if args.module_only:
            pass
        elif mod.ok:
            out.report(validate_double_category(obj, args.max_grids, args.sample, args.seed))
        elif _structurally_sound(mod):
            # the module axioms fail but squares still make sense; show where interchange breaks
            out.report(check_interchange_equiv(obj, args.max_grids, args.sample, args.seed))
    code = _exit_for(out.reports)
    out.text(f"status: {out._status(code).upper()}")
    return code


def _check_grid(args, grid: SquareGrid) -> DiagnosticReport:
    rep = DiagnosticReport("grid")
    adj = rep.check("adjacency", instances=max(0, sum(len(r) for r in grid.rows) - 1))
    for e in grid.adjacency_errors():
        adj.add({"position": str(getattr(e, "position", "")), "problem": str(e)})
    if not args.dm:
        return rep
    dm = _load_dm(args.dm)
    sq = rep.check("squares")
    for i, row in enumerate(grid.rows):
        for j, q in enumerate(row):
            sq.instances += 1
            if not is_square(dm, q):
                sq.add({"position": f"({i}, {j})", "square": str(q)})
    if rep.ok:
        inter = rep.check("interchange", instances=1)
        a, b = pasting_orders(dm, grid)
        if a != b:
            inter.add({"rows_first": str(a), "cols_first": str(b)})
    return rep


def cmd_build(args, out: Output) -> int:
    dm = _load_dm(args.file)
    space = square_space(dm)
    n = len(space.Q)
    if args.emit == "counts":
        out.payload["counts"] = {"squares": n, "candidates": int(space.candidates),
                                 "composable_grids": int(space.grid_count())}
        out.text(str(n))
    else:
        squares = space.squares()
        out.payload["squares"] = [_sq(q) for q in squares]
        for q in squares:
            out.text(str(q))
    return EXIT_OK


def cmd_paste(args, out: Output) -> int:
    dm = _load_dm(args.file)
    grid = _load(args.grid)
    if not isinstance(grid, SquareGrid):
        raise Failure(f"{args.grid}: expected a grid file")
    for i, row in enumerate(grid.rows):
        for j, q in enumerate(row):
            if not is_square(dm, q):
                raise Failure(f"entry ({i}, {j}) is not a square of {dm.name or 'the module'}: {q}")
    if not args.verify_interchange:
        a, b = pasting_orders(dm, grid)
        out.payload["square"] = _sq(a)
        out.text(str(a))
        return EXIT_OK
    a, b = pasting_orders(dm, grid)
    out.payload.update(square=_sq(a), rows_first=_sq(a), cols_first=_sq(b))
    out.text(f"rows first:    {a}")
    out.text(f"columns first: {b}")
    if a != b:
        out.text("interchange FAILS")
        return EXIT_VIOLATIONS
    out.text("interchange holds")
    return EXIT_OK


def cmd_examples(args, out: Output) -> int:
    if args.name is None:
        out.payload["examples"] = sorted(EXAMPLES)
        for name in sorted(EXAMPLES):
            out.text(f"{name:15s} {(EXAMPLES[name].__doc__ or '').strip().splitlines()[0]}")
        return EXIT_OK
    dm = EXAMPLES[args.name]()
    if args.output == "-":
        # the structure itself is the output; --format json does not wrap it
        sys.stdout.write(dumps(dm))
        out.json = False
        return EXIT_OK
    save_structure(dm, args.output)
    out.payload["output"] = args.output
    log.info("wrote %s to %s", args.name, args.output)
    return EXIT_OK


def cmd_extract(args, out: Output) -> int:
    dm = _load_dm(args.file)
    x = args.object
    if x is None:
        if len(dm.P.objects) != 1:
            raise Failure(f"P has {len(dm.P.objects)} objects; pass --object")
        x = dm.P.objects[0]
    fn = extract_crossed_module_h if args.direction == "h" else extract_crossed_module_v
    ext = fn(dm, x)
    cm = CrossedModule(ext.boundary, ext.action)
    out.payload["crossed_module"] = to_dict(cm)
    out.payload["elements"] = {k: str(q) for k, q in ext.elements.items()}
    out.text(f"group of order {len(ext.group.arrows)} over {ext.base.name} (order {len(ext.base.arrows)})")
    for k, q in ext.elements.items():
        out.text(f"  {k} = {q} -> {ext.boundary(k)}")
    out.report(ext.report)
    if args.output:
        save_structure(cm, args.output)
    return _exit_for([ext.report])


COMMANDS = {"check": cmd_check, "build": cmd_build, "paste": cmd_paste,
            "examples": cmd_examples, "extract": cmd_extract}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    if args.max_grids is None:
        args.max_grids = default_max_grids()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = Output(args)
    try:
        if args.backend:
            with kernels.use_backend(args.backend):
                code = COMMANDS[args.command](args, out)
        else:
            code = COMMANDS[args.command](args, out)
    except (Failure, ParseError) as e:
        return out.finish(EXIT_ERROR, e)
    except DcatError as e:
        # ReferenceError, NotComposable, SizeLimitExceeded and friends: input is unusable
        return out.finish(EXIT_ERROR, e)
    return out.finish(code)


if __name__ == "__main__":
    sys.exit(main())
