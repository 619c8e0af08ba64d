"""Processes as named collections of boolean-constraint rules.

A raw definition (ProcessDef, from the DSL) may extend another; resolving
a name against a registry flattens the whole chain into a Process:
ancestor rules first, then each descendant's edits in declaration order.
Overriding replaces a rule's expression in place (keeping its position,
so reports stay stably ordered across variants); removing deletes it;
adding appends.  Each rule records the process that contributed its
current version as `origin`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from procl.errors import ResolveError
from procl.dsl.nodes import (
    Binding,
    Expr,
    OverrideRule,
    ProcessDef,
    RemoveRule,
    RuleDef,
    SpecAst,
)
from procl.dsl.typecheck import typecheck_expr


@dataclass(frozen=True)
class EntityBinding:
    kind: str  # phase | sprints | meetings | milestones | products | increments | work
    name: str
    optional: bool = False


@dataclass(frozen=True)
class ProcessRule:
    name: str
    expr: Expr  # typechecked, boolean
    mandatory: bool = True  # advisory rules are reported but do not gate is_satisfied
    origin: str = ""


@dataclass(frozen=True)
class Process:
    name: str
    bindings: tuple[EntityBinding, ...]
    rules: dict[str, ProcessRule]  # insertion order is the report order
    lineage: tuple[str, ...]  # root ancestor first, self last


@dataclass(frozen=True)
class VariantEdit:
    """One named-rule edit a definition applies to its (possibly empty)
    inherited state."""

    action: str  # add_rule | override_rule | remove_rule | add_binding
    payload: object


def variant_edits(definition: ProcessDef) -> tuple[VariantEdit, ...]:
    edits = []
    for item in definition.items:
        if isinstance(item, Binding):
            edits.append(VariantEdit("add_binding", item))
        elif isinstance(item, RuleDef):
            edits.append(VariantEdit("add_rule", item))
        elif isinstance(item, OverrideRule):
            edits.append(VariantEdit("override_rule", item))
        elif isinstance(item, RemoveRule):
            edits.append(VariantEdit("remove_rule", item))
        else:
            raise ResolveError(f"unknown item {type(item).__name__}")
    return tuple(edits)


def build_registry(asts: Iterable[SpecAst]) -> dict[str, ProcessDef]:
    """Collect raw definitions from parsed sources; names must be unique."""
    registry: dict[str, ProcessDef] = {}
    for ast in asts:
        for d in ast.defs:
            if d.name in registry:
                raise ResolveError(f"process '{d.name}' defined twice")
            registry[d.name] = d
    return registry


def _extends_chain(name: str,
                   registry: Mapping[str, ProcessDef]) -> list[ProcessDef]:
    chain: list[ProcessDef] = []
    seen: set[str] = set()
    current = name
    while True:
        if current in seen:
            raise ResolveError(f"cyclic extends chain through '{current}'")
        seen.add(current)
        definition = registry.get(current)
        if definition is None:
            raise ResolveError(f"unknown process '{current}'")
        chain.append(definition)
        if definition.extends is None:
            break
        current = definition.extends
    chain.reverse()  # root ancestor first
    return chain


def resolve_process(name: str, registry: Mapping[str, ProcessDef]) -> Process:
    """Flatten a definition chain into a Process, typechecking every rule.

    Raises ResolveError for unknown names, cycles, overrides/removes of
    nonexistent rules, and duplicate adds; TypeCheckError for ill-typed
    rule expressions.
    """
    chain = _extends_chain(name, registry)
    bindings: dict[str, EntityBinding] = {}
    rules: dict[str, ProcessRule] = {}
    for definition in chain:
        for edit in variant_edits(definition):
            item = edit.payload
            if edit.action == "add_binding":
                if item.name in bindings:
                    raise ResolveError(
                        f"'{definition.name}' redeclares binding '{item.name}'")
                bindings[item.name] = EntityBinding(item.kind, item.name,
                                                    item.optional)
                continue
            table = {b.name: b.kind for b in bindings.values()}
            if edit.action == "add_rule":
                if item.name in rules:
                    raise ResolveError(
                        f"'{definition.name}' adds rule '{item.name}', which "
                        f"already exists (use 'override rule')")
                typecheck_expr(item.expr, table)
                rules[item.name] = ProcessRule(item.name, item.expr,
                                               mandatory=not item.optional,
                                               origin=definition.name)
            elif edit.action == "override_rule":
                existing = rules.get(item.name)
                if existing is None:
                    raise ResolveError(
                        f"'{definition.name}' overrides unknown rule "
                        f"'{item.name}'")
                typecheck_expr(item.expr, table)
                # position and mandatory flag survive the override
                rules[item.name] = ProcessRule(item.name, item.expr,
                                               mandatory=existing.mandatory,
                                               origin=definition.name)
            elif edit.action == "remove_rule":
                if item.name not in rules:
                    raise ResolveError(
                        f"'{definition.name}' removes unknown rule "
                        f"'{item.name}'")
                del rules[item.name]
    lineage = tuple(d.name for d in chain)
    return Process(name, tuple(bindings.values()), rules, lineage)


def rule_set(process: Process) -> list[tuple[str, str, bool]]:
    """(name, origin, mandatory) triples in report order: inherited rules
    in ancestor order, added rules in declaration order."""
    return [(r.name, r.origin, r.mandatory) for r in process.rules.values()]
