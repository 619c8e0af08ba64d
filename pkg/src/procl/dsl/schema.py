"""Fixed attribute schema the type checker and evaluator share.

Each binding kind maps to an entity kind; each entity kind exposes a flat
set of typed attributes.  Attributes marked optional may be absent on a
concrete entity (an unfinished phase has no end_time yet); reading an
absent attribute evaluates to Undetermined rather than failing.

`id` is exposed where rules need to correlate entities: a retrospective
meeting carries the sprint_id of the sprint it closes, and an increment
carries the product_id of the product it covers.
"""

from __future__ import annotations

from dataclasses import dataclass

from procl import ontology


@dataclass(frozen=True)
class Attribute:
    type: str  # "int" | "string"
    optional: bool = False


# binding kind -> (entity kind, is_collection)
BINDING_TO_ENTITY = {
    "phase": ("phase", False),
    "sprints": ("sprint", True),
    "meetings": ("meeting", True),
    "milestones": ("milestone", True),
    "products": ("product", True),
    "increments": ("increment", True),
    "work": ("work", True),
}

COLLECTION_KINDS = frozenset(k for k, (_, many) in BINDING_TO_ENTITY.items() if many)

ATTRIBUTES: dict[str, dict[str, Attribute]] = {
    "phase": {
        "start_time": Attribute("int"),
        "end_time": Attribute("int", optional=True),
    },
    "sprint": {
        "id": Attribute("string"),
        "start_time": Attribute("int"),
        "end_time": Attribute("int"),
    },
    "meeting": {
        "kind": Attribute("string"),
        "time": Attribute("int"),
        "sprint_id": Attribute("string", optional=True),
    },
    "milestone": {
        "due_time": Attribute("int"),
    },
    "product": {
        "id": Attribute("string"),
        "kind": Attribute("string"),
    },
    "increment": {
        "product_id": Attribute("string"),
        "variant": Attribute("string"),
    },
    "work": {
        "person_id": Attribute("string"),
        "product_id": Attribute("string"),
        "start_time": Attribute("int"),
        "end_time": Attribute("int", optional=True),
    },
}

# Entity kind as shown in diagnostics.
ENTITY_LABEL = {
    "phase": "phase",
    "sprint": "sprint",
    "meeting": "meeting",
    "milestone": "milestone",
    "product": "product",
    "increment": "increment",
    "work": "work item",
}


def entity_ref(entity_kind: str, entity) -> str:
    """Stable identifier used in diagnostics and quantifier witnesses."""
    if entity_kind == "phase":
        return entity.role_label
    if entity_kind == "increment":
        return entity.product_id
    if entity_kind == "work":
        return f"{entity.person_id}:{entity.product_id}"
    return entity.id


def attribute_value(entity_kind: str, entity, attr: str):
    """Raw attribute value; identical names on the entity dataclasses."""
    assert attr in ATTRIBUTES[entity_kind], f"attribute {attr!r} not in schema"
    return getattr(entity, attr)


def project_collection(project: ontology.Project, binding_kind: str) -> tuple:
    """The project section a collection binding maps to, in input order."""
    if binding_kind == "sprints":
        return project.sprints
    if binding_kind == "meetings":
        return project.meetings
    if binding_kind == "milestones":
        return project.milestones
    if binding_kind == "products":
        return tuple(project.products.values())
    if binding_kind == "increments":
        return tuple(inc for m in project.milestones for inc in m.elements)
    if binding_kind == "work":
        return project.work_assignments
    raise ValueError(f"not a collection binding kind: {binding_kind!r}")
