from __future__ import annotations

from pathlib import Path

import pytest

from procl.library import builtin_process, builtin_registry

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def registry():
    return builtin_registry()


@pytest.fixture(scope="session")
def waterfall():
    return builtin_process("waterfall")


@pytest.fixture(scope="session")
def scrum():
    return builtin_process("scrum")


@pytest.fixture(scope="session")
def scrum_variant():
    return builtin_process("our_scrum_variant")


@pytest.fixture(scope="session")
def waterfall_ok_text():
    return (FIXTURES / "waterfall_ok.json").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def waterfall_bad_text():
    return (FIXTURES / "waterfall_bad_order.json").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def scrum_bad_text():
    return (FIXTURES / "scrum_bad_retro.json").read_text(encoding="utf-8")
