"""Synthetic project traces: conformant by construction, or mutated to
violate one chosen rule or axiom.

Generation is template-based per built-in process family (sequential
phases for the waterfall family, a sprint ladder with daily and
retrospective meetings for the scrum family), wrapped in a bounded
generate-evaluate-repair loop for variant rules the template does not
know about.  A process whose rules the template cannot satisfy within
100 attempts fails loudly instead of returning a nonconformant trace.

Mutation applies exactly one semantic edit from a fixed catalog and
verifies, by re-running the conformance check, that the edit produces the
expected violated rule or invariant code before returning it.

Randomness comes from a self-contained 64-bit linear congruential
generator (see Lcg), so identical seeds yield identical traces on every
platform and Python version.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from procl import ontology
from procl.conformance import VIOLATED, evaluate_process
from procl.dsl.nodes import BinOp, Expr, Not, PathExpr, Quantifier, StrLit
from procl.errors import GenerationError, MutationError
from procl.process import Process

_MASK64 = (1 << 64) - 1


def _fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK64
    return h


class Lcg:
    """64-bit linear congruential generator.

    State transition (MMIX constants):

        state' = (state * 6364136223846793005 + 1442695040888963407) mod 2**64

    Each draw advances the state once and uses the top 32 bits, which
    have the longest period of the low-order-weak LCG bits.
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u32(self) -> int:
        self.state = (self.state * 6364136223846793005
                      + 1442695040888963407) & _MASK64
        return self.state >> 32

    def randint(self, low: int, high: int) -> int:
        """Uniform-ish integer in [low, high]; the tiny modulo bias does
        not matter here, determinism does."""
        assert low <= high
        return low + self.next_u32() % (high - low + 1)

    def chance(self, one_in: int) -> bool:
        return self.randint(1, one_in) == 1

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]


def _stream(seed: int, label: str) -> Lcg:
    rng = Lcg(seed ^ _fnv1a64(label))
    rng.next_u32()  # decorrelate nearby seeds
    return rng


@dataclass(frozen=True)
class GenParams:
    """Knobs for trace generation; defaults give small, readable traces."""

    seed: int = 1
    n_products: int = 3
    n_milestones: int = 2
    phase_gap_max: int = 5
    sprint_count: int = 3

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 1 <= self.n_products <= 50:
            raise ValueError("n_products must be in 1..50")
        if not 1 <= self.n_milestones <= 20:
            raise ValueError("n_milestones must be in 1..20")
        if not 0 <= self.phase_gap_max <= 1000:
            raise ValueError("phase_gap_max must be in 0..1000")
        if not 0 <= self.sprint_count <= 50:
            raise ValueError("sprint_count must be in 0..50")


@dataclass(frozen=True)
class ExpectedTarget:
    kind: str  # "rule" | "invariant"
    name: str  # rule name, or invariant catalog code


@dataclass(frozen=True)
class MutatedTrace:
    project: ontology.Project
    expected: ExpectedTarget
    description: str  # the single edit that was applied


# ---------------------------------------------------------------------------
# generation templates


def _make_products(params: GenParams, rng: Lcg,
                   with_burndown: bool) -> tuple[dict, tuple[str, ...]]:
    """Products plus target list.  Always includes one unlisted spare
    product ('p_extra') that no target reaches and no milestone delivers,
    which the mutation catalog uses as an illegal retarget destination."""
    products: dict[str, ontology.Product] = {}
    main_ids = [f"p{i + 1}" for i in range(params.n_products)]
    for i, pid in enumerate(main_ids):
        parent = None
        if i >= 1 and rng.chance(3):
            parent = main_ids[rng.randint(0, i - 1)]
        products[pid] = ontology.Product(
            id=pid,
            name=f"product {i + 1}",
            kind=rng.choice(("module", "module", "test_plan", "document")),
            sub_products=(),
            pre_existing=rng.chance(5),
        )
        if parent is not None:
            # edges point from an earlier product to a later one, so the
            # relation stays acyclic by construction
            products[parent] = replace(
                products[parent],
                sub_products=products[parent].sub_products + (pid,))
    targets = list(main_ids)
    if with_burndown and rng.chance(2):
        products["p_burndown"] = ontology.Product(
            id="p_burndown", name="burndown chart", kind="burndown_chart")
        targets.append("p_burndown")
    products["p_extra"] = ontology.Product(
        id="p_extra", name="spare product", kind="other")
    return products, tuple(targets)


def _make_milestones(params: GenParams, rng: Lcg,
                     products: dict) -> tuple[ontology.Milestone, ...]:
    candidate_ids = [pid for pid in products if pid != "p_extra"]
    milestones = []
    created: set[str] = set()
    due = rng.randint(5, 15)
    for k in range(params.n_milestones):
        elements = []
        newly_created: set[str] = set()
        for pid in candidate_ids:
            updatable = pid in created or products[pid].pre_existing
            if updatable and rng.chance(3):
                elements.append(ontology.ProductIncrement("update", pid))
            elif pid not in created and not products[pid].pre_existing \
                    and rng.chance(2):
                elements.append(ontology.ProductIncrement("creation", pid))
                newly_created.add(pid)
        if k == 0 and not elements:
            pid = candidate_ids[0]
            variant = "update" if products[pid].pre_existing else "creation"
            elements.append(ontology.ProductIncrement(variant, pid))
            if variant == "creation":
                newly_created.add(pid)
        milestones.append(ontology.Milestone(
            id=f"m{k + 1}", name=f"milestone {k + 1}", due_time=due,
            elements=tuple(elements)))
        created |= newly_created
        due += rng.randint(1, 10)
    return tuple(milestones)


def _make_people(rng: Lcg) -> dict:
    people = {
        "alice": ontology.Person("alice", "Alice", "team_member"),
        "bob": ontology.Person("bob", "Bob", "team_member"),
    }
    if rng.chance(2):
        people["carol"] = ontology.Person("carol", "Carol", "stakeholder")
    return people


def _make_work(rng: Lcg, people: dict, products: dict,
               milestones) -> tuple[ontology.WorkAssignment, ...]:
    deliverable: list[str] = []
    for milestone in milestones:
        for inc in milestone.elements:
            if inc.product_id not in deliverable:
                deliverable.append(inc.product_id)
            for sub in products[inc.product_id].sub_products:
                if sub not in deliverable:
                    deliverable.append(sub)
    if not deliverable:
        return ()
    person_ids = list(people)
    work = []
    for _ in range(rng.randint(1, 3)):
        start = rng.randint(0, 30)
        end = None if rng.chance(4) else start + rng.randint(0, 10)
        work.append(ontology.WorkAssignment(
            person_id=rng.choice(person_ids),
            product_id=rng.choice(deliverable),
            start_time=start,
            end_time=end,
        ))
    return tuple(work)


def _waterfall_template(process: Process, params: GenParams,
                        rng: Lcg) -> ontology.Project:
    phase_names = ["requirements", "design", "implementation", "verification"]
    if rng.chance(2):
        phase_names.append("maintenance")
    phases = []
    t = rng.randint(0, 3)
    for i, name in enumerate(phase_names):
        start = t if i == 0 else t + rng.randint(0, params.phase_gap_max)
        end = start + rng.randint(1, 10)
        phases.append(ontology.Phase(
            id=f"ph_{name}", role_label=name, start_time=start, end_time=end))
        t = end
    products, targets = _make_products(params, rng, with_burndown=False)
    milestones = _make_milestones(params, rng, products)
    people = _make_people(rng)
    return ontology.Project(
        id=f"{process.name}_seed{params.seed}",
        name=f"{process.name}_seed{params.seed}",
        targets=targets,
        products=products,
        milestones=milestones,
        people=people,
        phases=tuple(phases),
        work_assignments=_make_work(rng, people, products, milestones),
        time_unit="day",
    )


def _scrum_template(process: Process, params: GenParams,
                    rng: Lcg) -> ontology.Project:
    sprints = []
    meetings = []
    t = rng.randint(0, 3)
    for i in range(params.sprint_count):
        start = t + rng.randint(0, 2)
        # 5..14 ticks keeps both the classic 30-tick cap and the shipped
        # two-week variant satisfiable without repair attempts
        end = start + rng.randint(5, 14)
        sid = f"sprint{i + 1}"
        sprints.append(ontology.Sprint(sid, start, end))
        for d in range(rng.randint(2, 4)):
            meetings.append(ontology.Meeting(
                id=f"daily{i + 1}_{d + 1}", kind="daily",
                time=rng.randint(start, end), sprint_id=sid))
        meetings.append(ontology.Meeting(
            id=f"retro{i + 1}", kind="retrospective", time=end, sprint_id=sid))
        t = end
    products, targets = _make_products(params, rng, with_burndown=True)
    milestones = _make_milestones(params, rng, products)
    people = _make_people(rng)
    return ontology.Project(
        id=f"{process.name}_seed{params.seed}",
        name=f"{process.name}_seed{params.seed}",
        targets=targets,
        products=products,
        milestones=milestones,
        people=people,
        sprints=tuple(sprints),
        meetings=tuple(meetings),
        work_assignments=_make_work(rng, people, products, milestones),
        time_unit="day",
    )


_TEMPLATES = {
    "waterfall": _waterfall_template,
    "scrum": _scrum_template,
}

_MAX_ATTEMPTS = 100


def generate_trace(process: Process, params: GenParams) -> ontology.Project:
    """A project trace that conforms to `process`; deterministic in
    (process name, params).

    The template is chosen by the process's root ancestor; variant rules
    the template cannot satisfy by luck within 100 attempts raise
    GenerationError instead of ever returning a nonconformant trace.
    """
    template = _TEMPLATES.get(process.lineage[0])
    if template is None:
        raise GenerationError(
            f"process '{process.name}' is unsatisfiable under template: no "
            f"generation template for family '{process.lineage[0]}'")
    for attempt in range(_MAX_ATTEMPTS):
        rng = _stream(params.seed, f"{process.name}/{attempt}")
        project = template(process, params, rng)
        if evaluate_process(process, project).satisfied:
            return project
    raise GenerationError(
        f"process '{process.name}' is unsatisfiable under template "
        f"(no conformant trace in {_MAX_ATTEMPTS} attempts, seed {params.seed})")


# ---------------------------------------------------------------------------
# mutation catalog


def _mentions_retrospective(expr: Expr) -> bool:
    if isinstance(expr, StrLit):
        return expr.value == "retrospective"
    if isinstance(expr, BinOp):
        return (_mentions_retrospective(expr.left)
                or _mentions_retrospective(expr.right))
    if isinstance(expr, Not):
        return _mentions_retrospective(expr.operand)
    if isinstance(expr, Quantifier):
        return _mentions_retrospective(expr.body)
    return False


def _phase_order_rules(process: Process) -> list[tuple[str, str, str]]:
    """Rules of the shape `a.start_time >= b.end_time` over phase
    bindings, as (rule name, a, b)."""
    kinds = {b.name: b.kind for b in process.bindings}
    out = []
    for rule in process.rules.values():
        expr = rule.expr
        if not (isinstance(expr, BinOp) and expr.op == ">="):
            continue
        left, right = expr.left, expr.right
        if not (isinstance(left, PathExpr) and len(left.parts) == 2
                and left.parts[1] == "start_time"
                and isinstance(right, PathExpr) and len(right.parts) == 2
                and right.parts[1] == "end_time"):
            continue
        a, b = left.parts[0], right.parts[0]
        if kinds.get(a) == "phase" and kinds.get(b) == "phase":
            out.append((rule.name, a, b))
    return out


def _single_phase(project: ontology.Project, label: str) -> ontology.Phase | None:
    matches = [p for p in project.phases if p.role_label == label]
    return matches[0] if len(matches) == 1 else None


def _candidates(project: ontology.Project, process: Process) -> list[tuple]:
    """Applicable mutation candidates, in fixed catalog order."""
    cands: list[tuple] = []
    for rule_name, a, b in _phase_order_rules(process):
        pa = _single_phase(project, a)
        pb = _single_phase(project, b)
        if (pa is not None and pb is not None
                and pb.end_time is not None and pb.end_time >= 1):
            cands.append(("shift_phase", rule_name, a, b))
    retro_rules = [r.name for r in process.rules.values()
                   if _mentions_retrospective(r.expr)]
    attached_retros = [m for m in project.meetings
                       if m.kind == "retrospective" and m.sprint_id is not None]
    if retro_rules and attached_retros:
        cands.append(("delete_retrospective", retro_rules[0]))
    reach = ontology.target_closure(project)
    off_target = sorted(pid for pid in project.products if pid not in reach)
    has_increments = any(m.elements for m in project.milestones)
    if off_target and has_increments:
        cands.append(("retarget_increment",))
    undelivered = sorted(pid for pid in project.products
                         if pid not in ontology.delivered_products(project))
    if undelivered and project.work_assignments:
        cands.append(("retarget_work",))
    if len(project.milestones) >= 2:
        cands.append(("swap_milestones",))
    return cands


def _apply(cand: tuple, project: ontology.Project,
           rng: Lcg) -> tuple[ontology.Project, ExpectedTarget, str]:
    kind = cand[0]
    if kind == "shift_phase":
        _, rule_name, a, b = cand
        pa = _single_phase(project, a)
        pb = _single_phase(project, b)
        new_start = pb.end_time - 1
        new_end = (None if pa.end_time is None
                   else new_start + (pa.end_time - pa.start_time))
        phases = tuple(replace(p, start_time=new_start, end_time=new_end)
                       if p is pa else p
                       for p in project.phases)
        mutated = replace(project, phases=phases)
        return mutated, ExpectedTarget("rule", rule_name), (
            f"moved phase '{a}' to start at {new_start}, before phase "
            f"'{b}' ends at {pb.end_time}")
    if kind == "delete_retrospective":
        _, rule_name = cand
        attached = [m for m in project.meetings
                    if m.kind == "retrospective" and m.sprint_id is not None]
        victim = rng.choice(attached)
        meetings = tuple(m for m in project.meetings if m is not victim)
        mutated = replace(project, meetings=meetings)
        return mutated, ExpectedTarget("rule", rule_name), (
            f"deleted retrospective meeting '{victim.id}' of sprint "
            f"'{victim.sprint_id}'")
    if kind == "retarget_increment":
        reach = ontology.target_closure(project)
        off_target = sorted(p for p in project.products if p not in reach)
        new_pid = rng.choice(off_target)
        spots = [(mi, ei)
                 for mi, m in enumerate(project.milestones)
                 for ei in range(len(m.elements))]
        mi, ei = rng.choice(spots)
        milestone = project.milestones[mi]
        old = milestone.elements[ei]
        elements = tuple(replace(e, product_id=new_pid) if i == ei else e
                         for i, e in enumerate(milestone.elements))
        milestones = tuple(replace(m, elements=elements) if i == mi else m
                           for i, m in enumerate(project.milestones))
        mutated = replace(project, milestones=milestones)
        return mutated, ExpectedTarget("invariant", "INV-INCREMENT-TARGET"), (
            f"retargeted an increment at milestone '{milestone.id}' from "
            f"'{old.product_id}' to non-target product '{new_pid}'")
    if kind == "retarget_work":
        undelivered = sorted(p for p in project.products
                             if p not in ontology.delivered_products(project))
        new_pid = rng.choice(undelivered)
        wi = rng.randint(0, len(project.work_assignments) - 1)
        old = project.work_assignments[wi]
        work = tuple(replace(w, product_id=new_pid) if i == wi else w
                     for i, w in enumerate(project.work_assignments))
        mutated = replace(project, work_assignments=work)
        return mutated, ExpectedTarget("invariant", "INV-WORK-DELIVERY"), (
            f"pointed the work of '{old.person_id}' at undelivered product "
            f"'{new_pid}' instead of '{old.product_id}'")
    if kind == "swap_milestones":
        i = rng.randint(0, len(project.milestones) - 2)
        first, second = project.milestones[i], project.milestones[i + 1]
        swapped = list(project.milestones)
        swapped[i] = replace(first, due_time=second.due_time)
        swapped[i + 1] = replace(second, due_time=first.due_time)
        mutated = replace(project, milestones=tuple(swapped))
        return mutated, ExpectedTarget("invariant", "INV-MILESTONE-ORDER"), (
            f"swapped the due times of milestones '{first.id}' and "
            f"'{second.id}'")
    raise AssertionError(f"unknown mutation kind {kind!r}")


def _expected_present(report, expected: ExpectedTarget) -> bool:
    if expected.kind == "rule":
        return any(v.rule_name == expected.name and v.verdict == VIOLATED
                   for v in report.rule_verdicts)
    return any(v.code == expected.name for v in report.invariant_violations)


def mutate_trace(project: ontology.Project, process: Process,
                 seed: int) -> MutatedTrace:
    """Apply one catalog edit that breaks conformance in a known way.

    The input project is expected to conform to the process.  Each
    candidate edit is verified by re-running the conformance check; an
    edit only counts if the report turns unsatisfied AND names the
    expected rule/invariant (unrelated incidental violations are
    tolerated).  Deterministic in (project, process, seed).
    """
    cands = _candidates(project, process)
    if not cands:
        raise MutationError(
            "no applicable mutation for this project/process pair")
    rng = _stream(seed, f"mutate/{process.name}/{project.name}")
    start = rng.randint(0, len(cands) - 1)
    rotated = cands[start:] + cands[:start]
    for cand in rotated:
        mutated, expected, description = _apply(cand, project, rng)
        report = evaluate_process(process, mutated)
        if not report.satisfied and _expected_present(report, expected):
            return MutatedTrace(mutated, expected, description)
    raise MutationError(
        "no applicable mutation for this project/process pair "
        "(catalog edits did not produce their expected violations)")
