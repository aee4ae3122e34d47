from __future__ import annotations

import pathlib

import pytest

from coalg import parse_spec

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

FIXTURE_NAMES = sorted(p.stem for p in FIXTURE_DIR.glob("*.spec"))


def load_fixture(name: str):
    text = (FIXTURE_DIR / f"{name}.spec").read_text(encoding="utf-8")
    return parse_spec(text)


def fixture_path(name: str) -> str:
    return str(FIXTURE_DIR / f"{name}.spec")


@pytest.fixture
def diamond_bag():
    return load_fixture("diamond_bag")


@pytest.fixture
def two_leaf_tree():
    return load_fixture("two_leaf_tree")


@pytest.fixture
def shared_leaf():
    return load_fixture("shared_leaf")


@pytest.fixture
def two_tree_copies():
    return load_fixture("two_tree_copies")


@pytest.fixture
def two_cycle():
    return load_fixture("two_cycle")


@pytest.fixture
def self_loop():
    return load_fixture("self_loop")
