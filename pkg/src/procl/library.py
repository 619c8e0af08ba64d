"""The shipped PROCL process library.

Three assets are bundled: `waterfall`, `scrum`, and `our_scrum_variant`
(an example adaptation extending scrum).  Organizations add their own by
pointing the tools at additional .procl files; file definitions may
extend the built-ins.
"""

from __future__ import annotations

import functools
from importlib import resources

from procl.dsl.nodes import ProcessDef
from procl.dsl.parser import parse_source
from procl.process import Process, build_registry, resolve_process

ASSET_NAMES = ("waterfall", "scrum", "our_scrum_variant")


def asset_source(name: str) -> str:
    """Raw text of a shipped .procl asset."""
    root = resources.files("procl").joinpath("assets", "procl")
    return root.joinpath(f"{name}.procl").read_text(encoding="utf-8")


@functools.lru_cache(maxsize=1)
def builtin_registry() -> dict[str, ProcessDef]:
    """Parsed raw definitions of every shipped asset, keyed by name."""
    asts = [parse_source(asset_source(name)) for name in ASSET_NAMES]
    return build_registry(asts)


def builtin_process(name: str) -> Process:
    """Resolve a shipped process by name."""
    return resolve_process(name, builtin_registry())


def self_check() -> None:
    """Assert that every shipped asset parses, typechecks and resolves."""
    registry = builtin_registry()
    for name in ASSET_NAMES:
        process = resolve_process(name, registry)
        assert process.lineage[-1] == name
