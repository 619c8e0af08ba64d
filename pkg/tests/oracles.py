"""Brute-force oracle for the invariant checker, plus a random project
generator that deliberately produces both consistent and broken
structures.

The oracle recomputes every catalog code with naive nested loops and a
Warshall-style closure, sharing no code with procl.ontology's checker.
"""

from __future__ import annotations

import random

from procl import ontology

Violation = tuple[str, tuple[str, ...]]


def _naive_closure(project, roots) -> set[str]:
    """Fixpoint expansion of sub_products starting from `roots`."""
    result = set(roots)
    changed = True
    while changed:
        changed = False
        for pid in list(result):
            prod = project.products.get(pid)
            if prod is None:
                continue
            for sub in prod.sub_products:
                if sub not in result:
                    result.add(sub)
                    changed = True
    return result


def oracle_violations(project: ontology.Project) -> list[Violation]:
    out: list[Violation] = []

    # INV-ID-UNIQUE
    for ids in ([m.id for m in project.milestones],
                [p.id for p in project.phases],
                [s.id for s in project.sprints],
                [m.id for m in project.meetings]):
        reported = set()
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                if ids[i] == ids[j] and ids[i] not in reported:
                    reported.add(ids[i])
                    out.append(("INV-ID-UNIQUE", (ids[i],)))
    for key, prod in project.products.items():
        if prod.id != key:
            out.append(("INV-ID-UNIQUE", (key, prod.id)))
    for key, person in project.people.items():
        if person.id != key:
            out.append(("INV-ID-UNIQUE", (key, person.id)))
    for m in project.milestones:
        pids = [e.product_id for e in m.elements]
        reported = set()
        for i in range(len(pids)):
            for j in range(i + 1, len(pids)):
                if pids[i] == pids[j] and pids[i] not in reported:
                    reported.add(pids[i])
                    out.append(("INV-ID-UNIQUE", (m.id, pids[i])))

    # INV-SUBPRODUCT-ACYCLIC: p lies on a cycle iff p is reachable from
    # one of its own children
    for pid, prod in project.products.items():
        if pid in _naive_closure(project, list(prod.sub_products)):
            out.append(("INV-SUBPRODUCT-ACYCLIC", (pid,)))

    # INV-MILESTONE-ORDER
    for i in range(len(project.milestones) - 1):
        a, b = project.milestones[i], project.milestones[i + 1]
        if b.due_time <= a.due_time:
            out.append(("INV-MILESTONE-ORDER", (a.id, b.id)))

    # INV-INCREMENT-TARGET
    reach = _naive_closure(project, list(project.targets))
    for m in project.milestones:
        for e in m.elements:
            if e.product_id not in reach:
                out.append(("INV-INCREMENT-TARGET", (m.id, e.product_id)))

    # INV-UPDATE-EXISTS
    for k, m in enumerate(project.milestones):
        for e in m.elements:
            if e.variant != "update":
                continue
            prod = project.products.get(e.product_id)
            if prod is not None and prod.pre_existing:
                continue
            created_earlier = any(
                other.variant == "creation"
                and other.product_id == e.product_id
                for earlier in project.milestones[:k]
                for other in earlier.elements)
            if not created_earlier:
                out.append(("INV-UPDATE-EXISTS", (m.id, e.product_id)))

    # INV-CREATE-ONCE: violated iff more than one creation increment
    # exists; ids name the distinct milestones of those creations
    seen_products: list[str] = []
    for m in project.milestones:
        for e in m.elements:
            if e.variant == "creation" and e.product_id not in seen_products:
                seen_products.append(e.product_id)
    for pid in seen_products:
        count = sum(1 for m in project.milestones for e in m.elements
                    if e.variant == "creation" and e.product_id == pid)
        where: list[str] = []
        for m in project.milestones:
            if any(e.variant == "creation" and e.product_id == pid
                   for e in m.elements) and m.id not in where:
                where.append(m.id)
        if count > 1:
            out.append(("INV-CREATE-ONCE", (pid, *where)))

    # INV-WORK-DELIVERY
    delivered = _naive_closure(
        project,
        [e.product_id for m in project.milestones for e in m.elements])
    for w in project.work_assignments:
        if w.product_id not in delivered:
            out.append(("INV-WORK-DELIVERY", (w.person_id, w.product_id)))

    # INV-PHASE-TIMES
    for p in project.phases:
        if p.end_time is not None and p.end_time < p.start_time:
            out.append(("INV-PHASE-TIMES", (p.id,)))
    for s in project.sprints:
        if s.end_time <= s.start_time:
            out.append(("INV-PHASE-TIMES", (s.id,)))
    for w in project.work_assignments:
        if w.end_time is not None and w.end_time < w.start_time:
            out.append(("INV-PHASE-TIMES", (w.person_id, w.product_id)))

    # INV-REF-EXISTS
    for t in project.targets:
        if t not in project.products:
            out.append(("INV-REF-EXISTS", (t,)))
    for pid, prod in project.products.items():
        for sub in prod.sub_products:
            if sub not in project.products:
                out.append(("INV-REF-EXISTS", (pid, sub)))
    for m in project.milestones:
        for e in m.elements:
            if e.product_id not in project.products:
                out.append(("INV-REF-EXISTS", (m.id, e.product_id)))
    for w in project.work_assignments:
        if w.person_id not in project.people:
            out.append(("INV-REF-EXISTS", (w.person_id,)))
        if w.product_id not in project.products:
            out.append(("INV-REF-EXISTS", (w.person_id, w.product_id)))
    sprint_ids = [s.id for s in project.sprints]
    for m in project.meetings:
        if m.sprint_id is not None and m.sprint_id not in sprint_ids:
            out.append(("INV-REF-EXISTS", (m.id, m.sprint_id)))

    return out


# ---------------------------------------------------------------------------

_PRODUCT_POOL = ["p0", "p1", "p2", "p3", "p4", "ghost"]
_PERSON_POOL = ["dev_a", "dev_b", "nobody"]
_VARIANTS = ["creation", "creation", "update", "rework"]


def random_project(rng: random.Random) -> ontology.Project:
    """Up to ~20 entities; references may dangle, times may be out of
    order, the sub-product graph may contain cycles."""
    real_products = rng.sample(_PRODUCT_POOL[:5], rng.randint(0, 5))
    products = {}
    for pid in real_products:
        subs = tuple(rng.sample(_PRODUCT_POOL,
                                rng.randint(0, 2)))  # may dangle or cycle
        key = pid
        if rng.random() < 0.05:
            key = pid + "_key"  # mapping key that disagrees with the id
        products[key] = ontology.Product(pid, pid, "module", subs,
                                         pre_existing=rng.random() < 0.3)
    targets = tuple(rng.sample(_PRODUCT_POOL, rng.randint(0, 3)))

    milestone_ids = []
    milestones = []
    for k in range(rng.randint(0, 4)):
        mid = f"m{k}"
        if milestone_ids and rng.random() < 0.1:
            mid = rng.choice(milestone_ids)  # duplicate id
        milestone_ids.append(mid)
        elements = []
        for _ in range(rng.randint(0, 3)):
            elements.append(ontology.ProductIncrement(
                rng.choice(_VARIANTS), rng.choice(_PRODUCT_POOL)))
        milestones.append(ontology.Milestone(
            mid, mid, rng.randint(0, 30), tuple(elements)))

    people = {}
    for pid in rng.sample(_PERSON_POOL[:2], rng.randint(0, 2)):
        people[pid] = ontology.Person(pid, pid)

    phases = []
    for k in range(rng.randint(0, 3)):
        start = rng.randint(0, 20)
        end = None
        if rng.random() < 0.8:
            end = start + rng.randint(-5, 10)  # sometimes ends before start
        if end is not None and end < 0:
            end = 0
        phases.append(ontology.Phase(f"ph{k}", f"label{k}", start, end))

    sprints = []
    for k in range(rng.randint(0, 2)):
        start = rng.randint(0, 20)
        end = max(0, start + rng.randint(-2, 10))
        sprints.append(ontology.Sprint(f"s{k}", start, end))

    meetings = []
    for k in range(rng.randint(0, 2)):
        sprint_id = rng.choice([None, "s0", "s1", "s9"])
        meetings.append(ontology.Meeting(
            f"mt{k}", rng.choice(["daily", "retrospective"]),
            rng.randint(0, 30), sprint_id))

    work = []
    for _ in range(rng.randint(0, 2)):
        start = rng.randint(0, 20)
        end = None if rng.random() < 0.3 else start + rng.randint(-4, 8)
        if end is not None and end < 0:
            end = 0
        work.append(ontology.WorkAssignment(
            rng.choice(_PERSON_POOL), rng.choice(_PRODUCT_POOL), start, end))

    return ontology.Project(
        id="scrambled", name="scrambled",
        targets=targets, products=products, milestones=tuple(milestones),
        people=people, phases=tuple(phases), sprints=tuple(sprints),
        meetings=tuple(meetings), work_assignments=tuple(work))


def violation_pairs(violations) -> list[Violation]:
    """Project InvariantViolation records down to comparable pairs."""
    return sorted((v.code, v.entity_ids) for v in violations)
