from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from procl import ontology
from procl.ontology import (
    Milestone,
    Product,
    ProductIncrement,
    Project,
    WorkAssignment,
    check_invariants,
    delivered_products,
    product_closure,
)

from oracles import oracle_violations, random_project, violation_pairs


def project_with_products(products: dict[str, tuple[str, ...]],
                          **kwargs) -> Project:
    return Project(
        id="t", name="t",
        products={pid: Product(pid, pid, "module", subs)
                  for pid, subs in products.items()},
        **kwargs)


def test_closure_single_product():
    p = project_with_products({"P": ()})
    assert product_closure(p, "P") == {"P"}


def test_closure_chain():
    # oracle: breadth-first reachability over P -> Q -> R by hand
    p = project_with_products({"P": ("Q",), "Q": ("R",), "R": ()})
    assert product_closure(p, "P") == {"P", "Q", "R"}


def test_closure_diamond_has_no_duplicates():
    p = project_with_products({"P": ("Q", "R"), "Q": ("R",), "R": ()})
    assert product_closure(p, "P") == {"P", "Q", "R"}


def test_closure_unknown_root_names_the_id():
    p = project_with_products({"P": ()})
    with pytest.raises(LookupError, match="nosuch"):
        product_closure(p, "nosuch")


def test_closure_tolerates_cycles():
    p = project_with_products({"P": ("Q",), "Q": ("P",)})
    assert product_closure(p, "P") == {"P", "Q"}


def test_closure_result_stays_within_known_products():
    p = project_with_products({"P": ("missing",)})
    assert product_closure(p, "P") == {"P"}


def test_delivered_products_empty_project():
    assert delivered_products(Project(id="t", name="t")) == set()


def test_delivered_products_expands_closure():
    p = project_with_products(
        {"P": ("Q",), "Q": ()},
        milestones=(Milestone("m1", "m1", 5,
                              (ProductIncrement("creation", "P"),)),))
    assert delivered_products(p) == {"P", "Q"}


def test_delivered_products_union_is_idempotent():
    p = project_with_products(
        {"P": ()},
        milestones=(
            Milestone("m1", "m1", 5, (ProductIncrement("creation", "P"),)),
            Milestone("m2", "m2", 9, (ProductIncrement("update", "P"),)),
        ))
    assert delivered_products(p) == {"P"}


def test_check_invariants_empty_project_is_clean():
    assert check_invariants(Project(id="t", name="t")) == []


def test_increment_outside_target_closure_is_flagged():
    # the axiom: an increment's product must belong to a planned target
    p = project_with_products(
        {"X": (), "T": ()},
        targets=("T",),
        milestones=(Milestone("m1", "m1", 5,
                              (ProductIncrement("creation", "X"),)),))
    codes = [v.code for v in check_invariants(p)]
    assert codes == ["INV-INCREMENT-TARGET"]
    [violation] = check_invariants(p)
    assert "X" in violation.entity_ids


def test_work_on_undelivered_product_is_flagged():
    p = Project(
        id="t", name="t",
        targets=("T", "W"),
        products={pid: Product(pid, pid) for pid in ("W", "T")},
        milestones=(Milestone("m1", "m1", 5,
                              (ProductIncrement("creation", "T"),)),),
        people={"dev": ontology.Person("dev", "dev")},
        work_assignments=(WorkAssignment("dev", "W", 0, 4),))
    codes = [v.code for v in check_invariants(p)]
    assert codes == ["INV-WORK-DELIVERY"]


def test_update_without_creation_is_flagged_and_pre_existing_is_not():
    fresh = Product("F", "F")
    legacy = Product("L", "L", pre_existing=True)
    p = Project(
        id="t", name="t", targets=("F", "L"),
        products={"F": fresh, "L": legacy},
        milestones=(Milestone("m1", "m1", 5, (
            ProductIncrement("update", "F"),
            ProductIncrement("update", "L"),
        )),))
    codes = [v.code for v in check_invariants(p)]
    assert codes == ["INV-UPDATE-EXISTS"]
    [violation] = check_invariants(p)
    assert "F" in violation.entity_ids


def test_creation_in_same_milestone_does_not_legitimize_update():
    p = Project(
        id="t", name="t", targets=("F",),
        products={"F": Product("F", "F")},
        milestones=(
            Milestone("m1", "m1", 5, (ProductIncrement("creation", "F"),)),
            Milestone("m2", "m2", 9, (ProductIncrement("update", "F"),)),
        ))
    assert check_invariants(p) == []


def test_second_creation_is_flagged():
    p = Project(
        id="t", name="t", targets=("F",),
        products={"F": Product("F", "F")},
        milestones=(
            Milestone("m1", "m1", 5, (ProductIncrement("creation", "F"),)),
            Milestone("m2", "m2", 9, (ProductIncrement("creation", "F"),)),
        ))
    codes = [v.code for v in check_invariants(p)]
    assert codes == ["INV-CREATE-ONCE"]


def test_unknown_increment_variants_are_preserved_and_ignored():
    p = Project(
        id="t", name="t", targets=("F",),
        products={"F": Product("F", "F")},
        milestones=(Milestone("m1", "m1", 5,
                              (ProductIncrement("refactoring", "F"),)),))
    assert check_invariants(p) == []


def test_violation_order_is_catalog_then_entity_ids():
    p = Project(
        id="t", name="t",
        targets=("zz", "aa"),  # both dangle
        milestones=(
            Milestone("m2", "m2", 9, ()),
            Milestone("m1", "m1", 5, ()),  # out of order
        ))
    codes = [(v.code, v.entity_ids) for v in check_invariants(p)]
    assert codes == [
        ("INV-MILESTONE-ORDER", ("m2", "m1")),
        ("INV-REF-EXISTS", ("aa",)),
        ("INV-REF-EXISTS", ("zz",)),
    ]


def test_check_invariants_is_pure():
    rng = random.Random(42)
    for _ in range(25):
        p = random_project(rng)
        assert check_invariants(p) == check_invariants(p)


def test_agrees_with_brute_force_oracle_on_random_projects():
    rng = random.Random(2024)
    for _ in range(200):
        p = random_project(rng)
        assert violation_pairs(check_invariants(p)) == sorted(oracle_violations(p))


def test_clean_projects_satisfy_the_target_axiom():
    # consequence check: no violations -> every increment product inside
    # the target closure
    rng = random.Random(7)
    seen = 0
    for _ in range(500):
        p = random_project(rng)
        if check_invariants(p):
            continue
        seen += 1
        reach = ontology.target_closure(p)
        for m in p.milestones:
            for e in m.elements:
                assert e.product_id in reach
    assert seen > 0


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_closure_is_monotone_under_new_edges(data):
    ids = [f"p{i}" for i in range(5)]
    subs = {pid: tuple(data.draw(st.lists(st.sampled_from(ids), max_size=2),
                                 label=f"subs_{pid}"))
            for pid in ids}
    before = project_with_products(subs)
    parent = data.draw(st.sampled_from(ids), label="parent")
    child = data.draw(st.sampled_from(ids), label="child")
    grown = dict(subs)
    grown[parent] = grown[parent] + (child,)
    after = project_with_products(grown)
    for root in ids:
        assert product_closure(before, root) <= product_closure(after, root)
