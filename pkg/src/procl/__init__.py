"""procl: conformance checking of software project traces against process
models written in the PROCL rule language.

The pieces, bottom to top: `ontology` (the entity model and its axioms),
`dsl` (the PROCL language), `process` (flattening process definitions and
variants), `ingest` (trace files and binding environments), `conformance`
(per-rule verdicts and the aggregate answer), `simulate` (trace
generation and mutation), `library` (the shipped process assets), `cli`.
"""

from procl.conformance import (
    ConformanceReport,
    RuleVerdict,
    evaluate_process,
    evaluate_rule,
    is_satisfied,
    report_to_json,
    report_to_text,
)
from procl.ingest import (
    BindingError,
    SchemaError,
    bind_entities,
    dump_project,
    load_project,
    try_bind_entities,
)
from procl.library import builtin_process, builtin_registry
from procl.ontology import (
    INVARIANT_CATALOG,
    InvariantViolation,
    Meeting,
    Milestone,
    Person,
    Phase,
    Product,
    ProductIncrement,
    Project,
    Sprint,
    WorkAssignment,
    check_invariants,
    delivered_products,
    product_closure,
    target_closure,
)
from procl.process import (
    EntityBinding,
    Process,
    ProcessRule,
    VariantEdit,
    build_registry,
    resolve_process,
    rule_set,
)
from procl.simulate import (
    ExpectedTarget,
    GenParams,
    MutatedTrace,
    generate_trace,
    mutate_trace,
)

__version__ = "0.1.0"

__all__ = [
    "BindingError",
    "ConformanceReport",
    "EntityBinding",
    "ExpectedTarget",
    "GenParams",
    "INVARIANT_CATALOG",
    "InvariantViolation",
    "Meeting",
    "Milestone",
    "MutatedTrace",
    "Person",
    "Phase",
    "Process",
    "ProcessRule",
    "Product",
    "ProductIncrement",
    "Project",
    "RuleVerdict",
    "SchemaError",
    "Sprint",
    "VariantEdit",
    "WorkAssignment",
    "bind_entities",
    "build_registry",
    "builtin_process",
    "builtin_registry",
    "check_invariants",
    "delivered_products",
    "dump_project",
    "evaluate_process",
    "evaluate_rule",
    "generate_trace",
    "is_satisfied",
    "load_project",
    "mutate_trace",
    "product_closure",
    "report_to_json",
    "report_to_text",
    "resolve_process",
    "rule_set",
    "target_closure",
    "try_bind_entities",
]
