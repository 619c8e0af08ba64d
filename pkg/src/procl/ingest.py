"""Loading, validating and writing project trace files.

A trace is a UTF-8 JSON document, one project per file, with top-level
keys name, time_unit, targets, products, milestones, people, phases,
sprints, meetings, work_assignments.  Validation is strict by default:
unknown keys, wrong scalar types, negative timestamps and duplicate ids
are collected as SchemaError records and raised together as LoadError.
In lenient mode unknown keys only produce TraceWarning warnings, so
real-world exports with extra fields can still be analyzed.

`dump_project` writes the same format back; load(dump(p)) reproduces p
exactly, and the output is byte-stable for equal projects.

This module also builds the binding environment a resolved process needs:
phase bindings are matched by role label (exact, case-sensitive), and
collection bindings map to the corresponding project section in input
order.
"""

from __future__ import annotations

import json
import sys
import warnings
from dataclasses import dataclass

from procl import ontology
from procl.dsl import schema
from procl.dsl.evaluator import (
    AbsentEntity,
    BoundCollection,
    BoundEntity,
    Environment,
)
from procl.errors import BindingFailure, LoadError
from procl.process import Process


class TraceWarning(UserWarning):
    """Non-fatal oddity in a trace document (lenient mode only)."""


@dataclass(frozen=True)
class SchemaError:
    path: str  # slash-separated location in the document, e.g. milestones/0/due_time
    message: str


@dataclass(frozen=True)
class BindingError:
    binding: str
    reason: str  # "missing" | "ambiguous"


_TOP_KEYS = ("name", "time_unit", "targets", "products", "milestones",
             "people", "phases", "sprints", "meetings", "work_assignments")


class _Validator:
    """Walks the raw document, collecting SchemaErrors instead of failing
    at the first problem."""

    def __init__(self, lenient: bool):
        self.lenient = lenient
        self.errors: list[SchemaError] = []

    def error(self, path: str, message: str) -> None:
        self.errors.append(SchemaError(path, message))

    def unknown_keys(self, obj: dict, known: tuple[str, ...], path: str) -> None:
        for key in obj:
            if key not in known:
                where = f"{path}/{key}" if path else key
                if self.lenient:
                    warnings.warn(f"ignoring unknown key '{where}'",
                                  TraceWarning, stacklevel=4)
                else:
                    self.error(where, "unknown key")

    def string(self, obj: dict, key: str, path: str,
               default: str | None = None) -> str:
        if key not in obj:
            if default is not None:
                return default
            self.error(f"{path}/{key}" if path else key,
                       "missing required field")
            return ""
        value = obj[key]
        if not isinstance(value, str):
            self.error(f"{path}/{key}" if path else key, "expected a string")
            return ""
        return value

    def ident(self, obj: dict, key: str, path: str,
              default: str | None = None) -> str:
        value = self.string(obj, key, path, default)
        if value == "" and (key in obj or default is None):
            if isinstance(obj.get(key), str):
                self.error(f"{path}/{key}", "identifier must be non-empty")
        return sys.intern(value)

    def boolean(self, obj: dict, key: str, path: str, default: bool) -> bool:
        if key not in obj:
            return default
        value = obj[key]
        if not isinstance(value, bool):
            self.error(f"{path}/{key}", "expected a boolean")
            return default
        return value

    def timestamp(self, obj: dict, key: str, path: str,
                  required: bool = True) -> int | None:
        if key not in obj:
            if required:
                self.error(f"{path}/{key}", "missing required field")
            return None
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, int):
            self.error(f"{path}/{key}", "expected an integer timestamp")
            return None
        if value < 0:
            self.error(f"{path}/{key}", "timestamp must be non-negative")
            return None
        return value

    def id_list(self, obj: dict, key: str, path: str) -> tuple[str, ...]:
        raw = obj.get(key, [])
        if not isinstance(raw, list):
            self.error(f"{path}/{key}" if path else key, "expected a list")
            return ()
        out: list[str] = []
        seen: set[str] = set()
        for i, value in enumerate(raw):
            at = f"{path}/{key}/{i}" if path else f"{key}/{i}"
            if not isinstance(value, str):
                self.error(at, "expected a string id")
                continue
            if value in seen:
                self.error(at, f"duplicate id '{value}'")
                continue
            seen.add(value)
            out.append(sys.intern(value))
        return tuple(out)

    def section(self, doc: dict, key: str) -> list[tuple[dict, str]]:
        raw = doc.get(key, [])
        if not isinstance(raw, list):
            self.error(key, "expected a list")
            return []
        out = []
        for i, value in enumerate(raw):
            if not isinstance(value, dict):
                self.error(f"{key}/{i}", "expected an object")
                continue
            out.append((value, f"{key}/{i}"))
        return out

    def check_unique(self, ids: list[str], section: str) -> None:
        seen: set[str] = set()
        for i, entity_id in enumerate(ids):
            if entity_id in seen:
                self.error(f"{section}/{i}/id",
                           f"duplicate id '{entity_id}' within section")
            seen.add(entity_id)


def load_project(document: str, *, lenient: bool = False) -> ontology.Project:
    """Parse and validate a trace document into a Project.

    Raises LoadError carrying all SchemaErrors found.  With lenient=True,
    unknown keys become TraceWarning warnings instead of errors.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise LoadError([SchemaError("", f"not valid JSON: {exc}")]) from exc
    if not isinstance(doc, dict):
        raise LoadError([SchemaError("", "top level must be an object")])

    v = _Validator(lenient)
    v.unknown_keys(doc, _TOP_KEYS, "")
    name = v.string(doc, "name", "")
    time_unit = v.string(doc, "time_unit", "", default="tick")
    targets = v.id_list(doc, "targets", "")

    products: dict[str, ontology.Product] = {}
    product_ids: list[str] = []
    for obj, path in v.section(doc, "products"):
        v.unknown_keys(obj, ("id", "name", "kind", "sub_products",
                             "pre_existing"), path)
        pid = v.ident(obj, "id", path)
        product_ids.append(pid)
        products[pid] = ontology.Product(
            id=pid,
            name=v.string(obj, "name", path, default=pid),
            kind=v.string(obj, "kind", path, default="other"),
            sub_products=v.id_list(obj, "sub_products", path),
            pre_existing=v.boolean(obj, "pre_existing", path, default=False),
        )
    v.check_unique(product_ids, "products")

    milestones: list[ontology.Milestone] = []
    for obj, path in v.section(doc, "milestones"):
        v.unknown_keys(obj, ("id", "name", "due_time", "elements"), path)
        mid = v.ident(obj, "id", path)
        elements = []
        raw_elements = obj.get("elements", [])
        if not isinstance(raw_elements, list):
            v.error(f"{path}/elements", "expected a list")
            raw_elements = []
        for i, inc in enumerate(raw_elements):
            at = f"{path}/elements/{i}"
            if not isinstance(inc, dict):
                v.error(at, "expected an object")
                continue
            v.unknown_keys(inc, ("variant", "product_id"), at)
            elements.append(ontology.ProductIncrement(
                variant=v.string(inc, "variant", at),
                product_id=v.ident(inc, "product_id", at),
            ))
        milestones.append(ontology.Milestone(
            id=mid,
            name=v.string(obj, "name", path, default=mid),
            due_time=v.timestamp(obj, "due_time", path) or 0,
            elements=tuple(elements),
        ))
    v.check_unique([m.id for m in milestones], "milestones")

    people: dict[str, ontology.Person] = {}
    person_ids: list[str] = []
    for obj, path in v.section(doc, "people"):
        v.unknown_keys(obj, ("id", "name", "role"), path)
        pid = v.ident(obj, "id", path)
        person_ids.append(pid)
        people[pid] = ontology.Person(
            id=pid,
            name=v.string(obj, "name", path, default=pid),
            role=v.string(obj, "role", path, default="team_member"),
        )
    v.check_unique(person_ids, "people")

    phases: list[ontology.Phase] = []
    for obj, path in v.section(doc, "phases"):
        v.unknown_keys(obj, ("id", "role_label", "start_time", "end_time"), path)
        pid = v.ident(obj, "id", path)
        phases.append(ontology.Phase(
            id=pid,
            role_label=v.string(obj, "role_label", path, default=pid),
            start_time=v.timestamp(obj, "start_time", path) or 0,
            end_time=v.timestamp(obj, "end_time", path, required=False),
        ))
    v.check_unique([p.id for p in phases], "phases")

    sprints: list[ontology.Sprint] = []
    for obj, path in v.section(doc, "sprints"):
        v.unknown_keys(obj, ("id", "start_time", "end_time"), path)
        sprints.append(ontology.Sprint(
            id=v.ident(obj, "id", path),
            start_time=v.timestamp(obj, "start_time", path) or 0,
            end_time=v.timestamp(obj, "end_time", path) or 0,
        ))
    v.check_unique([s.id for s in sprints], "sprints")

    meetings: list[ontology.Meeting] = []
    for obj, path in v.section(doc, "meetings"):
        v.unknown_keys(obj, ("id", "kind", "time", "sprint_id"), path)
        sprint_id = obj.get("sprint_id")
        if sprint_id is not None and not isinstance(sprint_id, str):
            v.error(f"{path}/sprint_id", "expected a string")
            sprint_id = None
        meetings.append(ontology.Meeting(
            id=v.ident(obj, "id", path),
            kind=v.string(obj, "kind", path),
            time=v.timestamp(obj, "time", path) or 0,
            sprint_id=sys.intern(sprint_id) if sprint_id is not None else None,
        ))
    v.check_unique([m.id for m in meetings], "meetings")

    work: list[ontology.WorkAssignment] = []
    for obj, path in v.section(doc, "work_assignments"):
        v.unknown_keys(obj, ("person_id", "product_id", "start_time",
                             "end_time"), path)
        work.append(ontology.WorkAssignment(
            person_id=v.ident(obj, "person_id", path),
            product_id=v.ident(obj, "product_id", path),
            start_time=v.timestamp(obj, "start_time", path) or 0,
            end_time=v.timestamp(obj, "end_time", path, required=False),
        ))

    if v.errors:
        raise LoadError(v.errors)

    return ontology.Project(
        id=name,  # the trace format carries no separate project id
        name=name,
        targets=targets,
        products=products,
        milestones=tuple(milestones),
        people=people,
        phases=tuple(phases),
        sprints=tuple(sprints),
        meetings=tuple(meetings),
        work_assignments=tuple(work),
        time_unit=time_unit,
    )


def project_to_dict(project: ontology.Project) -> dict:
    """Plain-dict form of a project in canonical key order.

    Optional fields (phase/work end_time, meeting sprint_id) are omitted
    when absent, matching what load_project reconstructs.
    """
    def _phase(p: ontology.Phase) -> dict:
        out = {"id": p.id, "role_label": p.role_label,
               "start_time": p.start_time}
        if p.end_time is not None:
            out["end_time"] = p.end_time
        return out

    def _meeting(m: ontology.Meeting) -> dict:
        out = {"id": m.id, "kind": m.kind, "time": m.time}
        if m.sprint_id is not None:
            out["sprint_id"] = m.sprint_id
        return out

    def _work(w: ontology.WorkAssignment) -> dict:
        out = {"person_id": w.person_id, "product_id": w.product_id,
               "start_time": w.start_time}
        if w.end_time is not None:
            out["end_time"] = w.end_time
        return out

    return {
        "name": project.name,
        "time_unit": project.time_unit,
        "targets": list(project.targets),
        "products": [
            {"id": p.id, "name": p.name, "kind": p.kind,
             "sub_products": list(p.sub_products),
             "pre_existing": p.pre_existing}
            for p in project.products.values()
        ],
        "milestones": [
            {"id": m.id, "name": m.name, "due_time": m.due_time,
             "elements": [{"variant": e.variant, "product_id": e.product_id}
                          for e in m.elements]}
            for m in project.milestones
        ],
        "people": [
            {"id": p.id, "name": p.name, "role": p.role}
            for p in project.people.values()
        ],
        "phases": [_phase(p) for p in project.phases],
        "sprints": [
            {"id": s.id, "start_time": s.start_time, "end_time": s.end_time}
            for s in project.sprints
        ],
        "meetings": [_meeting(m) for m in project.meetings],
        "work_assignments": [_work(w) for w in project.work_assignments],
    }


def dump_project(project: ontology.Project) -> str:
    """Canonical JSON text; byte-stable for equal projects."""
    return json.dumps(project_to_dict(project), indent=2)


def try_bind_entities(project: ontology.Project,
                      process: Process) -> tuple[Environment, list[BindingError]]:
    """Best-effort binding: failed bindings become absent entries whose
    reason surfaces as Undetermined during evaluation, so every rule still
    receives a verdict."""
    entries: dict[str, object] = {}
    errors: list[BindingError] = []
    for binding in process.bindings:
        if binding.kind == "phase":
            matches = [p for p in project.phases
                       if p.role_label == binding.name]
            if len(matches) == 1:
                entries[binding.name] = BoundEntity("phase", matches[0])
            elif len(matches) > 1:
                errors.append(BindingError(binding.name, "ambiguous"))
                entries[binding.name] = AbsentEntity(
                    "phase",
                    f"phase binding '{binding.name}' is ambiguous "
                    f"({len(matches)} matches)")
            elif binding.optional:
                entries[binding.name] = AbsentEntity(
                    "phase", f"optional phase '{binding.name}' absent")
            else:
                errors.append(BindingError(binding.name, "missing"))
                entries[binding.name] = AbsentEntity(
                    "phase", f"required phase '{binding.name}' missing")
        else:
            element_kind, _ = schema.BINDING_TO_ENTITY[binding.kind]
            entities = schema.project_collection(project, binding.kind)
            entries[binding.name] = BoundCollection(element_kind, entities)
    return Environment(entries, project=project), errors


def bind_entities(project: ontology.Project, process: Process) -> Environment:
    """Strict binding; raises BindingFailure if any binding is missing or
    ambiguous."""
    env, errors = try_bind_entities(project, process)
    if errors:
        raise BindingFailure(errors)
    return env
