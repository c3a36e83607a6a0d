"""Command-line front end.

    mrdp divergence FILE [--output PATH]
    mrdp solve FILE [--output PATH]
    mrdp cp --p1 R --p2 R [--verify TOL] [--output PATH]

Results are JSON on standard output (or ``--output``); diagnostics go to
standard error. Exit statuses:

    0  success
    2  invalid input (unreadable file, bad JSON, unknown or invalid field)
    3  infeasible problem (including no admissible grid point in oracle mode)
    4  Newton iteration limit reached; residuals are still written
    5  ``cp --verify`` residuals exceed the tolerance
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .chain import make_chain, make_grading_function
from .conditional import CpInstance, solve_cp, verify_cp_identity
from .divergence import relative_divergence
from .errors import (
    Infeasible,
    LengthMismatch,
    MaxIterationsExceeded,
    MrdpError,
    NoFeasibleGridPoint,
)
from .solver import MrdpProblem, SolveResult, grid_oracle, solve_constrained, solve_pinned

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_MAX_ITER = 4
EXIT_VERIFY_FAILED = 5

PROBLEM_FIELDS = {
    "chain", "null_gf", "base_value", "target_range", "pins",
    "constraints", "mode", "oracle_resolution",
}
PROBLEM_REQUIRED = {"chain", "null_gf", "target_range"}
DIVERGENCE_FIELDS = {"chain", "F_values", "G_values"}
MODES = ("pinned", "constrained", "oracle")
DEFAULT_ORACLE_RESOLUTION = 1e-3


class InputError(Exception):
    """Bad input document; the message names the offending field."""


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return doc


def _check_fields(doc: dict, allowed: set, required: set) -> None:
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise InputError(f"{unknown[0]}: unknown field")
    missing = sorted(required - set(doc))
    if missing:
        raise InputError(f"{missing[0]}: required field is missing")


def _number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{name}: expected a number, got {value!r}")
    return float(value)


def _numbers(value, name: str) -> list[float]:
    if not isinstance(value, list):
        raise InputError(f"{name}: expected a list of numbers")
    return [_number(v, f"{name}[{i}]") for i, v in enumerate(value)]


def _field(name: str, build, *args):
    """Run a constructor, tagging any validation error with the field name."""
    try:
        return build(*args)
    except MrdpError as exc:
        raise InputError(f"{name}: {type(exc).__name__}: {exc}") from None


def _chain(doc: dict):
    labels = doc["chain"]
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise InputError("chain: expected a list of strings")
    return _field("chain", make_chain, labels)


def parse_problem(doc: dict) -> tuple[MrdpProblem, str, float]:
    """Decode a problem document into ``(problem, mode, oracle_resolution)``."""
    _check_fields(doc, PROBLEM_FIELDS, PROBLEM_REQUIRED)
    chain = _chain(doc)
    G = _field("null_gf", make_grading_function, chain, _numbers(doc["null_gf"], "null_gf"))
    base = _number(doc.get("base_value", 0.0), "base_value")
    span = _number(doc["target_range"], "target_range")
    if not (math.isfinite(span) and span > 0):
        raise InputError(f"target_range: must be > 0, got {span!r}")

    pins = []
    raw_pins = doc.get("pins", [])
    if not isinstance(raw_pins, list):
        raise InputError("pins: expected a list of [position, value] pairs")
    for i, pin in enumerate(raw_pins):
        if not (isinstance(pin, list) and len(pin) == 2):
            raise InputError(f"pins[{i}]: expected [position, value]")
        pos = pin[0]
        if isinstance(pos, bool) or not isinstance(pos, int):
            raise InputError(f"pins[{i}]: position must be an integer")
        pins.append((pos, _number(pin[1], f"pins[{i}]")))

    moments = []
    raw_constraints = doc.get("constraints", [])
    if not isinstance(raw_constraints, list):
        raise InputError("constraints: expected a list of objects")
    for j, item in enumerate(raw_constraints):
        name = f"constraints[{j}]"
        if not isinstance(item, dict):
            raise InputError(f"{name}: expected an object")
        _check_fields(item, {"coefficients", "target"}, {"coefficients", "target"})
        moments.append((
            _numbers(item["coefficients"], f"{name}.coefficients"),
            _number(item["target"], f"{name}.target"),
        ))

    mode = doc.get("mode")
    if mode is not None and mode not in MODES:
        raise InputError(f"mode: must be one of {', '.join(MODES)}, got {mode!r}")
    if mode is None:
        mode = "constrained" if moments else "pinned"
    if mode == "pinned" and moments:
        raise InputError("mode: 'pinned' cannot take moment constraints")
    resolution = _number(doc.get("oracle_resolution", DEFAULT_ORACLE_RESOLUTION),
                         "oracle_resolution")
    if not resolution > 0:
        raise InputError("oracle_resolution: must be > 0")

    try:
        problem = MrdpProblem(G, base, span, tuple(pins), tuple(moments))
    except MrdpError as exc:
        field = "constraints" if isinstance(exc, LengthMismatch) else "pins"
        raise InputError(f"{field}: {type(exc).__name__}: {exc}") from None
    return problem, mode, resolution


def result_document(result: SolveResult, solver: str) -> dict:
    return {
        "maximizer_values": [float(v) for v in result.maximizer.values],
        "divergence_nats": float(result.divergence),
        "multipliers": [float(v) for v in result.multipliers],
        "iterations": int(result.iterations),
        "residuals": {
            "stationarity": float(result.stationarity_residual),
            "constraints": float(result.constraint_residual),
        },
        "solver": solver,
    }


def cmd_divergence(args) -> tuple[int, dict]:
    doc = _load(args.file)
    _check_fields(doc, DIVERGENCE_FIELDS, DIVERGENCE_FIELDS)
    chain = _chain(doc)
    F = _field("F_values", make_grading_function, chain, _numbers(doc["F_values"], "F_values"))
    G = _field("G_values", make_grading_function, chain, _numbers(doc["G_values"], "G_values"))
    return EXIT_OK, {"divergence_nats": relative_divergence(F, G)}


def cmd_solve(args) -> tuple[int, dict]:
    problem, mode, resolution = parse_problem(_load(args.file))
    try:
        if mode == "oracle":
            try:
                result = grid_oracle(problem, resolution)
            except MrdpError as exc:
                if isinstance(exc, NoFeasibleGridPoint):
                    raise
                raise InputError(f"mode: {type(exc).__name__}: {exc}") from None
            solver = "grid_oracle"
        elif mode == "constrained":
            result = solve_constrained(problem)
            solver = "solve_constrained"
        else:
            result = solve_pinned(problem)
            solver = "solve_pinned"
    except (Infeasible, NoFeasibleGridPoint) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE, None
    except MaxIterationsExceeded as exc:
        print(f"error: MaxIterationsExceeded: {exc}", file=sys.stderr)
        doc = result_document(exc.result, "solve_constrained") if exc.result else None
        return EXIT_MAX_ITER, doc
    return EXIT_OK, result_document(result, solver)


def cmd_cp(args) -> tuple[int, dict]:
    try:
        inst = CpInstance(args.p1, args.p2)
    except MrdpError as exc:
        raise InputError(f"p1/p2: {exc}") from None
    doc = {"p1": inst.p1, "p2": inst.p2}
    result = solve_cp(inst)
    doc["conditional_probability"] = float(result.maximizer.values[1])
    doc.update(result_document(result, "solve_pinned"))
    status = EXIT_OK
    if args.verify is not None:
        if not args.verify > 0:
            raise InputError("verify: tolerance must be > 0")
        report = verify_cp_identity(inst, args.verify)
        doc["verification"] = report.as_dict()
        if not report.passed:
            print("error: verification residuals exceed tolerance", file=sys.stderr)
            status = EXIT_VERIFY_FAILED
    return status, doc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mrdp", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("divergence", help="relative divergence D(F||G) of two grading functions")
    p.add_argument("file")
    p.set_defaults(func=cmd_divergence)

    p = sub.add_parser("solve", help="solve a maximum relative divergence problem")
    p.add_argument("file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("cp", help="derive P(B|A) from P(A&B) and P(A)")
    p.add_argument("--p1", type=float, required=True, help="P(A and B)")
    p.add_argument("--p2", type=float, required=True, help="P(A)")
    p.add_argument("--verify", type=float, metavar="TOL",
                   help="cross-check against q, q', q'' at this tolerance")
    p.set_defaults(func=cmd_cp)

    for name in ("divergence", "solve", "cp"):
        sub.choices[name].add_argument("--output", metavar="PATH",
                                       help="write the result here instead of stdout")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        status, doc = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if doc is not None:
        text = dumps(doc) + "\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
