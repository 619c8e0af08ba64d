"""Random generators for DSL tests.

AstGen produces grammatical (not necessarily well-typed) trees for the
parse/pretty-print round-trip.  TypedGen produces well-typed expressions
against a fixed binding context, together with matching environments, for
checking the evaluator against the reference interpreter.
"""

from __future__ import annotations

import random
from dataclasses import replace

from procl import ontology
from procl.dsl import schema
from procl.dsl.evaluator import (
    AbsentEntity,
    BoundCollection,
    BoundEntity,
    Environment,
)
from procl.dsl.nodes import (
    BinOp,
    Binding,
    BoolLit,
    CountExpr,
    ExistsEntity,
    IntLit,
    Not,
    OverrideRule,
    PathExpr,
    ProcessDef,
    Quantifier,
    RemoveRule,
    RuleDef,
    SpecAst,
    StrLit,
)

IDENTS = ["alpha", "beta", "gamma", "delta", "x1", "x2", "review",
          "budget", "speed", "track_a", "track_b", "zz"]
STRINGS = ["", "daily", "retrospective", "a b", 'quo"te', "back\\slash",
           "plain", "1and2"]
CMP_OPS = ["<", "<=", ">", ">=", "==", "!="]
BOOL_OPS = ["and", "or", "implies"]


class AstGen:
    """Grammar-directed generator; depth bounds the expression tree."""

    def __init__(self, rng: random.Random):
        self.rng = rng

    def ident(self) -> str:
        return self.rng.choice(IDENTS)

    def path(self) -> tuple[str, ...]:
        return tuple(self.ident()
                     for _ in range(self.rng.randint(1, 3)))

    def expr(self, depth: int):
        leaf_kinds = ["int", "string", "bool", "path", "count", "exists_entity"]
        inner_kinds = leaf_kinds + ["binop", "binop", "binop", "not", "quant"]
        kind = self.rng.choice(leaf_kinds if depth <= 0 else inner_kinds)
        if kind == "int":
            return IntLit(self.rng.randint(0, 999))
        if kind == "string":
            return StrLit(self.rng.choice(STRINGS))
        if kind == "bool":
            return BoolLit(self.rng.random() < 0.5)
        if kind == "path":
            return PathExpr(self.path())
        if kind == "count":
            return CountExpr((self.ident(),))
        if kind == "exists_entity":
            return ExistsEntity(self.ident())
        if kind == "binop":
            op = self.rng.choice(CMP_OPS + BOOL_OPS + ["+", "-"])
            return BinOp(op, self.expr(depth - 1), self.expr(depth - 1))
        if kind == "not":
            return Not(self.expr(depth - 1))
        return Quantifier(self.rng.choice(["forall", "exists"]),
                          self.ident(), (self.ident(),),
                          self.expr(depth - 1))

    def item(self, depth: int):
        kind = self.rng.choice(["binding", "rule", "rule", "override", "remove"])
        if kind == "binding":
            return Binding(self.rng.choice(list(schema.BINDING_TO_ENTITY)),
                           self.ident(), self.rng.random() < 0.3)
        if kind == "rule":
            return RuleDef(self.ident(), self.expr(depth),
                           self.rng.random() < 0.2)
        if kind == "override":
            return OverrideRule(self.ident(), self.expr(depth))
        return RemoveRule(self.ident())

    def spec(self, depth: int = 6) -> SpecAst:
        count = self.rng.randint(1, 3)
        names = self.rng.sample(IDENTS, count)
        defs = []
        for i, name in enumerate(names):
            extends = None
            if i > 0 and self.rng.random() < 0.5:
                extends = names[self.rng.randrange(i)]
            items = tuple(self.item(depth)
                          for _ in range(self.rng.randint(0, 5)))
            defs.append(ProcessDef(name, extends, items))
        return SpecAst(tuple(defs))


# ---------------------------------------------------------------------------
# well-typed expressions plus environments

# Binding context used by the evaluator-oracle tests: a couple of phases
# (one optional), plus every collection kind.
CONTEXT = {
    "requirements": "phase",
    "design": "phase",
    "maintenance": "phase",
    "sprints": "sprints",
    "meetings": "meetings",
    "milestones": "milestones",
    "products": "products",
    "increments": "increments",
    "work": "work",
}
OPTIONAL_PHASES = ("maintenance",)

_STR_VALUES = ["daily", "retrospective", "planning", "p1", "p2", "s1", "s2"]


def _entity(kind: str, rng: random.Random, index: int):
    t = rng.randint(0, 40)
    if kind == "phase":
        return ontology.Phase(f"ph{index}", f"label{index}", t,
                              t + rng.randint(0, 20))
    if kind == "sprint":
        return ontology.Sprint(f"s{index}", t, t + rng.randint(1, 20))
    if kind == "meeting":
        return ontology.Meeting(f"mt{index}", rng.choice(_STR_VALUES), t,
                                rng.choice(["s1", "s2"]))
    if kind == "milestone":
        return ontology.Milestone(f"m{index}", f"m{index}", t)
    if kind == "product":
        return ontology.Product(f"p{index}", f"p{index}",
                                rng.choice(_STR_VALUES))
    if kind == "increment":
        return ontology.ProductIncrement(rng.choice(["creation", "update"]),
                                         rng.choice(["p1", "p2"]))
    if kind == "work":
        return ontology.WorkAssignment(f"dev{index}", rng.choice(["p1", "p2"]),
                                       t, t + rng.randint(0, 15))
    raise AssertionError(kind)


def random_environment(rng: random.Random) -> Environment:
    """Fully determined environment for CONTEXT: every optional attribute
    present, every optional phase bound."""
    entries: dict[str, object] = {}
    for name, kind in CONTEXT.items():
        element_kind, many = schema.BINDING_TO_ENTITY[kind]
        if many:
            entities = tuple(_entity(element_kind, rng, i)
                             for i in range(rng.randint(0, 4)))
            entries[name] = BoundCollection(element_kind, entities)
        else:
            entries[name] = BoundEntity(element_kind, _entity("phase", rng, name))
    return Environment(entries)


_OPTIONAL_ATTR = {"phase": "end_time", "meeting": "sprint_id", "work": "end_time"}


def mask_environment(env: Environment, rng: random.Random,
                     p_absent: float = 0.4) -> Environment:
    """Blank out optional attributes at random; entity presence is kept
    identical so the masked/full pair is an attribute refinement."""
    entries: dict[str, object] = {}
    for name, entry in env.bindings.items():
        if isinstance(entry, BoundEntity):
            entity = entry.entity
            attr = _OPTIONAL_ATTR.get(entry.entity_kind)
            if attr and rng.random() < p_absent:
                entity = replace(entity, **{attr: None})
            entries[name] = BoundEntity(entry.entity_kind, entity)
        elif isinstance(entry, BoundCollection):
            masked = []
            attr = _OPTIONAL_ATTR.get(entry.entity_kind)
            for entity in entry.entities:
                if attr and rng.random() < p_absent:
                    entity = replace(entity, **{attr: None})
                masked.append(entity)
            entries[name] = BoundCollection(entry.entity_kind, tuple(masked))
        else:
            entries[name] = entry
    return Environment(entries, project=env.project)


def drop_optional_phases(env: Environment, rng: random.Random) -> Environment:
    """Unbind optional phases at random (entity-level absence)."""
    entries = dict(env.bindings)
    for name in OPTIONAL_PHASES:
        if rng.random() < 0.5:
            entries[name] = AbsentEntity(
                "phase", f"optional phase '{name}' absent")
    return Environment(entries, project=env.project)


class TypedGen:
    """Well-typed expression generator over CONTEXT."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self._fresh = 0

    def expr(self, ty: str, depth: int, vars_: dict[str, str] | None = None):
        vars_ = vars_ or {}
        if ty == "int":
            return self._int(depth, vars_)
        if ty == "string":
            return self._string(depth, vars_)
        return self._bool(depth, vars_)

    def _scalar_heads(self, vars_: dict[str, str]) -> list[tuple[str, str]]:
        heads = [(n, "phase") for n, k in CONTEXT.items() if k == "phase"]
        heads.extend(vars_.items())
        return heads

    def _attr_path(self, ty: str, vars_: dict[str, str]):
        options = []
        for head, entity_kind in self._scalar_heads(vars_):
            for attr, spec in schema.ATTRIBUTES[entity_kind].items():
                if spec.type == ty:
                    options.append(PathExpr((head, attr)))
        return self.rng.choice(options) if options else None

    def _int(self, depth: int, vars_):
        choices = ["lit", "path", "count"]
        if depth > 0:
            choices += ["arith", "arith"]
        kind = self.rng.choice(choices)
        if kind == "path":
            path = self._attr_path("int", vars_)
            if path is not None:
                return path
            kind = "lit"
        if kind == "lit":
            return IntLit(self.rng.randint(0, 60))
        if kind == "count":
            collections = [n for n, k in CONTEXT.items()
                           if k in schema.COLLECTION_KINDS]
            return CountExpr((self.rng.choice(collections),))
        op = self.rng.choice(["+", "-"])
        return BinOp(op, self._int(depth - 1, vars_),
                     self._int(depth - 1, vars_))

    def _string(self, depth: int, vars_):
        if self.rng.random() < 0.5:
            path = self._attr_path("string", vars_)
            if path is not None:
                return path
        return StrLit(self.rng.choice(_STR_VALUES))

    def _bool(self, depth: int, vars_):
        choices = ["lit", "cmp", "exists_entity"]
        if depth > 0:
            choices += ["cmp", "connective", "connective", "not", "quant"]
        kind = self.rng.choice(choices)
        if kind == "lit":
            return BoolLit(self.rng.random() < 0.5)
        if kind == "exists_entity":
            return ExistsEntity(self.rng.choice(list(CONTEXT)))
        if kind == "cmp":
            if self.rng.random() < 0.7:
                op = self.rng.choice(CMP_OPS)
                return BinOp(op, self._int(max(depth - 1, 0), vars_),
                             self._int(max(depth - 1, 0), vars_))
            op = self.rng.choice(["==", "!="])
            return BinOp(op, self._string(max(depth - 1, 0), vars_),
                         self._string(max(depth - 1, 0), vars_))
        if kind == "connective":
            op = self.rng.choice(BOOL_OPS)
            return BinOp(op, self._bool(depth - 1, vars_),
                         self._bool(depth - 1, vars_))
        if kind == "not":
            return Not(self._bool(depth - 1, vars_))
        collections = [n for n, k in CONTEXT.items()
                       if k in schema.COLLECTION_KINDS]
        collection = self.rng.choice(collections)
        element_kind, _ = schema.BINDING_TO_ENTITY[CONTEXT[collection]]
        self._fresh += 1
        var = f"it{self._fresh}"
        inner = dict(vars_)
        inner[var] = element_kind
        return Quantifier(self.rng.choice(["forall", "exists"]), var,
                          (collection,), self._bool(depth - 1, inner))
