"""Evaluating a resolved process against a loaded project.

The report answers one question, `satisfied`: were all bindings matched,
all built-in axioms observed, and every mandatory rule satisfied?
Undetermined mandatory rules block satisfaction (a conformance claim must
not rest on missing evidence), but the per-rule verdicts keep violated
and undetermined apart so the reader can see the difference.  Invariant
violations also block satisfaction, yet rules are still evaluated
best-effort for their diagnostic value.

Reports are deterministic: equal inputs produce byte-identical JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from procl import ontology
from procl.dsl import schema
from procl.dsl.evaluator import (
    Bool,
    Environment,
    Undetermined,
    eval_expr,
    quantifier_elements,
)
from procl.dsl.nodes import Quantifier
from procl.dsl.printer import expr_to_text
from procl.ingest import BindingError, try_bind_entities
from procl.process import Process, ProcessRule

SATISFIED = "satisfied"
VIOLATED = "violated"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class RuleVerdict:
    rule_name: str
    origin: str
    verdict: str  # satisfied | violated | undetermined
    reason: str = ""  # nonempty iff verdict != satisfied
    witness: tuple[str, ...] | None = None


@dataclass(frozen=True)
class ConformanceReport:
    process_name: str
    project_name: str
    invariant_violations: tuple[ontology.InvariantViolation, ...]
    rule_verdicts: tuple[RuleVerdict, ...]
    binding_errors: tuple[BindingError, ...]
    satisfied: bool


def _witness(rule: ProcessRule, env: Environment) -> tuple[str, ...] | None:
    """First falsifying element of a violated top-level forall.

    Only top-level quantifiers are inspected; a violated exists has no
    single counterexample element to point at.
    """
    expr = rule.expr
    if not isinstance(expr, Quantifier) or expr.kind != "forall":
        return None
    entry = env.lookup(expr.collection[0])
    for entity, value in quantifier_elements(expr, env):
        if isinstance(value, Bool) and not value.value:
            return (schema.entity_ref(entry.entity_kind, entity),)
    return None


def evaluate_rule(rule: ProcessRule, env: Environment) -> RuleVerdict:
    value = eval_expr(rule.expr, env)
    if isinstance(value, Undetermined):
        return RuleVerdict(rule.name, rule.origin, UNDETERMINED,
                           reason=value.reason)
    assert isinstance(value, Bool)
    if value.value:
        return RuleVerdict(rule.name, rule.origin, SATISFIED)
    return RuleVerdict(
        rule.name, rule.origin, VIOLATED,
        reason=f"constraint evaluated to false: {expr_to_text(rule.expr)}",
        witness=_witness(rule, env))


def evaluate_process(process: Process,
                     project: ontology.Project) -> ConformanceReport:
    """Full conformance check: axioms, bindings, then every rule in
    rule_set order."""
    violations = tuple(ontology.check_invariants(project))
    env, binding_errors = try_bind_entities(project, process)
    verdicts = tuple(evaluate_rule(rule, env)
                     for rule in process.rules.values())
    satisfied = (not binding_errors
                 and not violations
                 and all(v.verdict == SATISFIED
                         for v, rule in zip(verdicts, process.rules.values())
                         if rule.mandatory))
    return ConformanceReport(
        process_name=process.name,
        project_name=project.name,
        invariant_violations=violations,
        rule_verdicts=verdicts,
        binding_errors=tuple(binding_errors),
        satisfied=satisfied,
    )


def is_satisfied(report: ConformanceReport) -> bool:
    return report.satisfied


def report_to_dict(report: ConformanceReport) -> dict:
    return {
        "process": report.process_name,
        "project": report.project_name,
        "satisfied": report.satisfied,
        "invariant_violations": [
            {"code": v.code, "entity_ids": list(v.entity_ids),
             "message": v.message}
            for v in report.invariant_violations
        ],
        "binding_errors": [
            {"binding": e.binding, "reason": e.reason}
            for e in report.binding_errors
        ],
        "rules": [
            {"name": v.rule_name, "origin": v.origin, "verdict": v.verdict,
             "reason": v.reason,
             "witness": list(v.witness) if v.witness is not None else None}
            for v in report.rule_verdicts
        ],
    }


def report_to_json(report: ConformanceReport) -> str:
    """Machine-readable report; stable key order, byte-identical for
    equal inputs."""
    return json.dumps(report_to_dict(report), indent=2)


_MARK = {SATISFIED: "PASS", VIOLATED: "FAIL", UNDETERMINED: "????"}


def report_to_text(report: ConformanceReport) -> str:
    lines = [
        f"process:  {report.process_name}",
        f"project:  {report.project_name}",
    ]
    if report.invariant_violations:
        lines.append(f"invariants: {len(report.invariant_violations)} violation(s)")
        for v in report.invariant_violations:
            lines.append(f"  [{v.code}] {v.message}")
    else:
        lines.append("invariants: ok")
    if report.binding_errors:
        lines.append(f"bindings: {len(report.binding_errors)} error(s)")
        for e in report.binding_errors:
            lines.append(f"  binding '{e.binding}': {e.reason}")
    else:
        lines.append("bindings: ok")
    lines.append("rules:")
    for v in report.rule_verdicts:
        mark = _MARK[v.verdict]
        suffix = f": {v.reason}" if v.reason else ""
        if v.witness:
            suffix += f" (witness: {', '.join(v.witness)})"
        lines.append(f"  [{mark}] {v.rule_name} (from {v.origin}){suffix}")
    if not report.rule_verdicts:
        lines.append("  (none)")
    lines.append(f"result: {'SATISFIED' if report.satisfied else 'NOT SATISFIED'}")
    return "\n".join(lines)
