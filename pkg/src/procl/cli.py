"""Command-line entry point.

Exit status: 0 when the input is valid / the project conforms, 1 when it
does not (violations or undetermined mandatory rules), 2 for usage, IO,
parse and schema errors.  Reports go to standard output, diagnostics to
standard error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path

from procl.conformance import (
    evaluate_process,
    report_to_json,
    report_to_text,
)
from procl.dsl.parser import parse_source
from procl.dsl.printer import expr_to_text
from procl.errors import ProclError, ResolveError
from procl.ingest import dump_project, load_project
from procl.library import builtin_registry
from procl.ontology import check_invariants
from procl.process import Process, resolve_process
from procl.simulate import GenParams, generate_trace, mutate_trace

EXIT_OK = 0
EXIT_UNSATISFIED = 1
EXIT_ERROR = 2


def _read_document(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load_project_arg(path: str, lenient: bool):
    document = _read_document(path)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        project = load_project(document, lenient=lenient)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return project


def _looks_like_path(value: str) -> bool:
    if value.endswith(".procl"):
        return True
    if os.sep in value or (os.altsep and os.altsep in value):
        return True
    return Path(value).is_file()


def _resolve_process_arg(value: str) -> Process:
    """Accept a built-in process name or a .procl file path.

    File definitions join the built-in registry (so a file variant may
    extend a built-in) and shadow same-named built-ins; the last process
    defined in the file is the one checked.
    """
    registry = dict(builtin_registry())
    name = value
    if _looks_like_path(value):
        ast = parse_source(Path(value).read_text(encoding="utf-8"))
        if not ast.defs:
            raise ResolveError(f"'{value}' defines no process")
        for d in ast.defs:
            registry[d.name] = d
        name = ast.defs[-1].name
    elif value not in registry:
        known = ", ".join(sorted(registry))
        raise ResolveError(f"unknown process '{value}' (known: {known})")
    return resolve_process(name, registry)


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        print(text)
    else:
        Path(out).write_text(text + "\n", encoding="utf-8")


def _cmd_validate(args) -> int:
    from procl.errors import LoadError

    try:
        project = _load_project_arg(args.project_file, args.lenient)
    except LoadError as exc:
        if args.format == "json":
            print(json.dumps({
                "project": None, "valid": False,
                "schema_errors": [{"path": e.path, "message": e.message}
                                  for e in exc.errors],
                "invariant_violations": [],
            }, indent=2))
        else:
            for e in exc.errors:
                print(f"schema error at {e.path or '<root>'}: {e.message}",
                      file=sys.stderr)
        return EXIT_ERROR
    violations = check_invariants(project)
    if args.format == "json":
        print(json.dumps({
            "project": project.name,
            "valid": not violations,
            "schema_errors": [],
            "invariant_violations": [
                {"code": v.code, "entity_ids": list(v.entity_ids),
                 "message": v.message} for v in violations],
        }, indent=2))
    else:
        if violations:
            for v in violations:
                print(f"[{v.code}] {v.message}")
            print(f"project '{project.name}': {len(violations)} violation(s)")
        else:
            print(f"project '{project.name}': ok")
    return EXIT_UNSATISFIED if violations else EXIT_OK


def _cmd_check(args) -> int:
    process = _resolve_process_arg(args.process)
    project = _load_project_arg(args.project_file, args.lenient)
    report = evaluate_process(process, project)
    if args.format == "json":
        print(report_to_json(report))
    else:
        print(report_to_text(report))
    return EXIT_OK if report.satisfied else EXIT_UNSATISFIED


def _cmd_rules(args) -> int:
    process = _resolve_process_arg(args.process)
    if args.format == "json":
        print(json.dumps([
            {"name": r.name, "origin": r.origin, "mandatory": r.mandatory,
             "expr": expr_to_text(r.expr)}
            for r in process.rules.values()
        ], indent=2))
    else:
        print(f"process {process.name} (lineage: {' -> '.join(process.lineage)})")
        for b in process.bindings:
            suffix = " (optional)" if b.optional else ""
            print(f"  requires {b.kind} {b.name}{suffix}")
        for r in process.rules.values():
            tag = "rule" if r.mandatory else "optional rule"
            print(f"  {tag} {r.name} [from {r.origin}]: {expr_to_text(r.expr)}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    process = _resolve_process_arg(args.process)
    params = GenParams(seed=args.seed, n_products=args.products,
                       n_milestones=args.milestones,
                       phase_gap_max=args.phase_gap_max,
                       sprint_count=args.sprints)
    project = generate_trace(process, params)
    _write_output(dump_project(project), args.out)
    return EXIT_OK


def _cmd_mutate(args) -> int:
    process = _resolve_process_arg(args.process)
    project = _load_project_arg(args.project_file, args.lenient)
    mutated = mutate_trace(project, process, args.seed)
    print(f"mutation: {mutated.description}", file=sys.stderr)
    print(f"expected: {mutated.expected.kind} {mutated.expected.name}",
          file=sys.stderr)
    _write_output(dump_project(mutated.project), args.out)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procl",
        description="Check recorded software project traces against "
                    "process models written in the PROCL rule language.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text",
                       help="report format (default: text)")

    def add_lenient(p):
        p.add_argument("--lenient", action="store_true",
                       help="downgrade unknown trace keys to warnings")

    p = sub.add_parser("validate",
                       help="schema-validate a trace and check the axioms")
    p.add_argument("project_file", help="trace file, or - for stdin")
    add_format(p)
    add_lenient(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("check", help="check a trace against a process")
    p.add_argument("--process", required=True,
                   help="built-in process name or .procl file path")
    p.add_argument("project_file", help="trace file, or - for stdin")
    add_format(p)
    add_lenient(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("rules",
                       help="show a process's flattened rule set with origins")
    p.add_argument("--process", required=True)
    add_format(p)
    p.set_defaults(func=_cmd_rules)

    p = sub.add_parser("simulate",
                       help="generate a conformant trace for a process")
    p.add_argument("--process", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--products", type=int, default=3)
    p.add_argument("--milestones", type=int, default=2)
    p.add_argument("--sprints", type=int, default=3)
    p.add_argument("--phase-gap-max", type=int, default=5)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("mutate",
                       help="apply one conformance-breaking edit to a trace")
    p.add_argument("--process", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("project_file", help="trace file, or - for stdin")
    p.add_argument("--out", help="output file (default: stdout)")
    add_lenient(p)
    p.set_defaults(func=_cmd_mutate)

    return parser


def run(argv: list[str]) -> int:
    """Dispatch a command line; returns the exit status instead of exiting."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except ProclError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
