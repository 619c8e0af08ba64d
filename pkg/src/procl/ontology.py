"""Entity model for recorded software projects, with its consistency axioms.

A Project is a snapshot of what a project produced and when: products
(with sub-product structure), milestones carrying product increments,
people and their work assignments, and the time-stamped phases, sprints
and meetings the project went through.  Times are non-negative integer
ticks; the tick unit is the uninterpreted ``time_unit`` label.

All types are immutable after construction and all operations are pure,
so distinct projects can be analyzed concurrently without locking.

``check_invariants`` reports violations of the built-in axiom catalog as
data instead of raising, so partially inconsistent real-world traces can
still be loaded, inspected and reported on.

Invariant catalog
-----------------
INV-ID-UNIQUE           ids are unique within each entity section, mapping
                        keys agree with entity ids, and a milestone lists
                        each product at most once among its increments
INV-SUBPRODUCT-ACYCLIC  the sub-product relation contains no cycles
INV-MILESTONE-ORDER     milestone due times strictly increase
INV-INCREMENT-TARGET    every increment's product lies in the closure of
                        the project's targets
INV-UPDATE-EXISTS       an update increment needs a pre-existing product
                        or a creation at a strictly earlier milestone
INV-CREATE-ONCE         at most one creation increment per product
INV-WORK-DELIVERY       work assignments point at delivered products
INV-PHASE-TIMES         phase and work-assignment end times do not precede
                        their start times; sprints have positive length
INV-REF-EXISTS          no dangling references between sections
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

ProductId = str
PersonId = str
Timestamp = int  # non-negative tick count; unit is Project.time_unit

VARIANT_CREATION = "creation"
VARIANT_UPDATE = "update"

# `kind` and `role` are open label sets: these are the ones the model
# names, but unknown labels are accepted and ignored by the invariants.
KNOWN_PRODUCT_KINDS = frozenset({"module", "test_plan", "document"})
KNOWN_PERSON_ROLES = frozenset({"team_member", "stakeholder"})

INVARIANT_CATALOG = (
    "INV-ID-UNIQUE",
    "INV-SUBPRODUCT-ACYCLIC",
    "INV-MILESTONE-ORDER",
    "INV-INCREMENT-TARGET",
    "INV-UPDATE-EXISTS",
    "INV-CREATE-ONCE",
    "INV-WORK-DELIVERY",
    "INV-PHASE-TIMES",
    "INV-REF-EXISTS",
)

_CATALOG_ORDER = {code: i for i, code in enumerate(INVARIANT_CATALOG)}


@dataclass(frozen=True)
class Product:
    id: ProductId
    name: str
    kind: str = "other"
    sub_products: tuple[ProductId, ...] = ()
    pre_existing: bool = False  # existed before the project's first milestone


@dataclass(frozen=True)
class ProductIncrement:
    """A creation or update of a product, attached to a milestone.

    `variant` is an open label set: "creation" and "update" are the two
    built-in kinds, but other labels are accepted, preserved, and simply
    ignored by the built-in invariants.
    """

    variant: str
    product_id: ProductId


@dataclass(frozen=True)
class Milestone:
    id: str
    name: str
    due_time: Timestamp
    elements: tuple[ProductIncrement, ...] = ()


@dataclass(frozen=True)
class Person:
    id: PersonId
    name: str
    role: str = "team_member"


@dataclass(frozen=True)
class WorkAssignment:
    person_id: PersonId
    product_id: ProductId
    start_time: Timestamp
    end_time: Timestamp | None = None


@dataclass(frozen=True)
class Phase:
    id: str
    role_label: str  # matched against `requires phase <name>` bindings
    start_time: Timestamp
    end_time: Timestamp | None = None  # absent while the phase is running


@dataclass(frozen=True)
class Sprint:
    id: str
    start_time: Timestamp
    end_time: Timestamp


@dataclass(frozen=True)
class Meeting:
    id: str
    kind: str  # e.g. "daily", "retrospective"
    time: Timestamp
    sprint_id: str | None = None


@dataclass(frozen=True)
class Project:
    id: str
    name: str
    targets: tuple[ProductId, ...] = ()
    products: Mapping[ProductId, Product] = field(default_factory=dict)
    milestones: tuple[Milestone, ...] = ()
    people: Mapping[PersonId, Person] = field(default_factory=dict)
    phases: tuple[Phase, ...] = ()
    sprints: tuple[Sprint, ...] = ()
    meetings: tuple[Meeting, ...] = ()
    work_assignments: tuple[WorkAssignment, ...] = ()
    time_unit: str = "tick"


@dataclass(frozen=True)
class InvariantViolation:
    code: str  # one of INVARIANT_CATALOG
    entity_ids: tuple[str, ...]
    message: str


def _reach(products: Mapping[ProductId, Product], root: ProductId) -> set[ProductId]:
    """Root plus everything transitively reachable over sub_products.

    Tolerates dangling ids (kept in the result, treated as leaves) and
    cycles, so the invariant checks stay total on inconsistent data.
    """
    seen = {root}
    frontier = [root]
    while frontier:
        prod = products.get(frontier.pop())
        if prod is None:
            continue
        for child in prod.sub_products:
            if child not in seen:
                seen.add(child)
                frontier.append(child)
    return seen


def product_closure(project: Project, root: ProductId) -> set[ProductId]:
    """The product together with all its transitive sub-products.

    The root must exist; the result only contains ids present in the
    project (dangling sub-product ids are reported by check_invariants,
    not here).
    """
    if root not in project.products:
        raise LookupError(f"unknown product id '{root}'")
    return {pid for pid in _reach(project.products, root) if pid in project.products}


def delivered_products(project: Project) -> set[ProductId]:
    """Every product covered by some milestone increment, closure-expanded."""
    out: set[ProductId] = set()
    for milestone in project.milestones:
        for inc in milestone.elements:
            out |= _reach(project.products, inc.product_id)
    return out


def target_closure(project: Project) -> set[ProductId]:
    """Every product some project target reaches, closure-expanded.

    Tolerates dangling targets (kept in the result) so that the axiom
    checks remain total on inconsistent data.
    """
    out: set[ProductId] = set()
    for target in project.targets:
        out |= _reach(project.products, target)
    return out


def check_invariants(project: Project) -> list[InvariantViolation]:
    """All violations of the invariant catalog, in deterministic order.

    Violations are data, not failures: an empty result means the project
    is consistent with every axiom.  Ordering is catalog order, then
    entity ids.
    """
    found: list[InvariantViolation] = []
    found.extend(_check_id_unique(project))
    found.extend(_check_subproduct_acyclic(project))
    found.extend(_check_milestone_order(project))
    found.extend(_check_increment_target(project))
    found.extend(_check_update_exists(project))
    found.extend(_check_create_once(project))
    found.extend(_check_work_delivery(project))
    found.extend(_check_phase_times(project))
    found.extend(_check_ref_exists(project))
    found.sort(key=lambda v: (_CATALOG_ORDER[v.code], v.entity_ids, v.message))
    return found


def _dup_ids(ids: Iterable[str]) -> list[str]:
    seen: set[str] = set()
    dups: list[str] = []
    for i in ids:
        if i in seen and i not in dups:
            dups.append(i)
        seen.add(i)
    return dups


def _check_id_unique(project: Project) -> list[InvariantViolation]:
    out = []
    sections = (
        ("milestone", [m.id for m in project.milestones]),
        ("phase", [p.id for p in project.phases]),
        ("sprint", [s.id for s in project.sprints]),
        ("meeting", [m.id for m in project.meetings]),
    )
    for label, ids in sections:
        for dup in _dup_ids(ids):
            out.append(InvariantViolation(
                "INV-ID-UNIQUE", (dup,), f"duplicate {label} id '{dup}'"))
    for key, prod in project.products.items():
        if prod.id != key:
            out.append(InvariantViolation(
                "INV-ID-UNIQUE", (key, prod.id),
                f"product keyed '{key}' carries id '{prod.id}'"))
    for key, person in project.people.items():
        if person.id != key:
            out.append(InvariantViolation(
                "INV-ID-UNIQUE", (key, person.id),
                f"person keyed '{key}' carries id '{person.id}'"))
    for milestone in project.milestones:
        for dup in _dup_ids(inc.product_id for inc in milestone.elements):
            out.append(InvariantViolation(
                "INV-ID-UNIQUE", (milestone.id, dup),
                f"milestone '{milestone.id}' lists product '{dup}' more than once"))
    return out


def _check_subproduct_acyclic(project: Project) -> list[InvariantViolation]:
    out = []
    for pid, prod in project.products.items():
        on_cycle = any(pid in _reach(project.products, child)
                       for child in prod.sub_products)
        if on_cycle:
            out.append(InvariantViolation(
                "INV-SUBPRODUCT-ACYCLIC", (pid,),
                f"product '{pid}' is its own transitive sub-product"))
    return out


def _check_milestone_order(project: Project) -> list[InvariantViolation]:
    out = []
    ms = project.milestones
    for before, after in zip(ms, ms[1:]):
        if after.due_time <= before.due_time:
            out.append(InvariantViolation(
                "INV-MILESTONE-ORDER", (before.id, after.id),
                f"milestone '{after.id}' (due {after.due_time}) does not come "
                f"after '{before.id}' (due {before.due_time})"))
    return out


def _check_increment_target(project: Project) -> list[InvariantViolation]:
    reach = target_closure(project)
    out = []
    for milestone in project.milestones:
        for inc in milestone.elements:
            if inc.product_id not in reach:
                out.append(InvariantViolation(
                    "INV-INCREMENT-TARGET", (milestone.id, inc.product_id),
                    f"increment at milestone '{milestone.id}' covers product "
                    f"'{inc.product_id}', which no project target reaches"))
    return out


def _created_before(project: Project, index: int) -> set[ProductId]:
    created: set[ProductId] = set()
    for milestone in project.milestones[:index]:
        for inc in milestone.elements:
            if inc.variant == VARIANT_CREATION:
                created.add(inc.product_id)
    return created


def _check_update_exists(project: Project) -> list[InvariantViolation]:
    out = []
    for index, milestone in enumerate(project.milestones):
        created = _created_before(project, index)
        for inc in milestone.elements:
            if inc.variant != VARIANT_UPDATE:
                continue
            prod = project.products.get(inc.product_id)
            pre_existing = prod.pre_existing if prod is not None else False
            if not pre_existing and inc.product_id not in created:
                out.append(InvariantViolation(
                    "INV-UPDATE-EXISTS", (milestone.id, inc.product_id),
                    f"update of '{inc.product_id}' at milestone '{milestone.id}' "
                    f"has no earlier creation and the product is not pre-existing"))
    return out


def _check_create_once(project: Project) -> list[InvariantViolation]:
    creations: dict[ProductId, list[str]] = {}
    for milestone in project.milestones:
        for inc in milestone.elements:
            if inc.variant == VARIANT_CREATION:
                creations.setdefault(inc.product_id, []).append(milestone.id)
    out = []
    for pid, milestone_ids in creations.items():
        if len(milestone_ids) > 1:
            unique = list(dict.fromkeys(milestone_ids))
            out.append(InvariantViolation(
                "INV-CREATE-ONCE", (pid, *unique),
                f"product '{pid}' is created more than once "
                f"(milestones {', '.join(unique)})"))
    return out


def _check_work_delivery(project: Project) -> list[InvariantViolation]:
    delivered = delivered_products(project)
    out = []
    for work in project.work_assignments:
        if work.product_id not in delivered:
            out.append(InvariantViolation(
                "INV-WORK-DELIVERY", (work.person_id, work.product_id),
                f"'{work.person_id}' works on '{work.product_id}', which is "
                f"not part of any planned delivery"))
    return out


def _check_phase_times(project: Project) -> list[InvariantViolation]:
    out = []
    for phase in project.phases:
        if phase.end_time is not None and phase.end_time < phase.start_time:
            out.append(InvariantViolation(
                "INV-PHASE-TIMES", (phase.id,),
                f"phase '{phase.id}' ends at {phase.end_time}, before its "
                f"start {phase.start_time}"))
    for sprint in project.sprints:
        if sprint.end_time <= sprint.start_time:
            out.append(InvariantViolation(
                "INV-PHASE-TIMES", (sprint.id,),
                f"sprint '{sprint.id}' does not end after its start"))
    for work in project.work_assignments:
        if work.end_time is not None and work.end_time < work.start_time:
            out.append(InvariantViolation(
                "INV-PHASE-TIMES", (work.person_id, work.product_id),
                f"work of '{work.person_id}' on '{work.product_id}' ends at "
                f"{work.end_time}, before its start {work.start_time}"))
    return out


def _check_ref_exists(project: Project) -> list[InvariantViolation]:
    out = []
    products = project.products
    for target in project.targets:
        if target not in products:
            out.append(InvariantViolation(
                "INV-REF-EXISTS", (target,),
                f"target '{target}' is not a product of the project"))
    for pid, prod in products.items():
        for sub in prod.sub_products:
            if sub not in products:
                out.append(InvariantViolation(
                    "INV-REF-EXISTS", (pid, sub),
                    f"product '{pid}' lists unknown sub-product '{sub}'"))
    for milestone in project.milestones:
        for inc in milestone.elements:
            if inc.product_id not in products:
                out.append(InvariantViolation(
                    "INV-REF-EXISTS", (milestone.id, inc.product_id),
                    f"milestone '{milestone.id}' has an increment for unknown "
                    f"product '{inc.product_id}'"))
    for work in project.work_assignments:
        if work.person_id not in project.people:
            out.append(InvariantViolation(
                "INV-REF-EXISTS", (work.person_id,),
                f"work assignment names unknown person '{work.person_id}'"))
        if work.product_id not in products:
            out.append(InvariantViolation(
                "INV-REF-EXISTS", (work.person_id, work.product_id),
                f"work assignment of '{work.person_id}' names unknown product "
                f"'{work.product_id}'"))
    sprint_ids = {s.id for s in project.sprints}
    for meeting in project.meetings:
        if meeting.sprint_id is not None and meeting.sprint_id not in sprint_ids:
            out.append(InvariantViolation(
                "INV-REF-EXISTS", (meeting.id, meeting.sprint_id),
                f"meeting '{meeting.id}' references unknown sprint "
                f"'{meeting.sprint_id}'"))
    return out
