"""Bundled example models.

``intro``           two facets {a,b,c1} and {a,c2,d} sharing the a-vertex; p on c1
``hex_simplicial``  three d-triangles and three outer edges
``hex_kripke``      the six-world Kripke counterpart of ``hex_simplicial``
"""
from __future__ import annotations

import json
from importlib import resources

from .models import Model, model_from_json

NAMES = ("intro", "hex_simplicial", "hex_kripke")

# Four readings of "a knows b knows c has p", from strongest to weakest.
CLARIFICATIONS = {
    "i": ("<x:=a> K{x} [y:=b] K{y} [z:=c] p(z)", True),
    "ii": ("<x:=a> K{x} [y:=b] K{y} <z:=c> p(z)", True),
    "iii": ("<x:=a> K{x} <y:=b> K{y} [z:=c] p(z)", False),
    "iv": ("<x:=a> K{x} <y:=b> K{y} <z:=c> p(z)", False),
}


def fixture_path(name: str):
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    return resources.files("simpla") / "data" / f"{name}.json"


def load_fixture(name: str) -> Model:
    return model_from_json(json.loads(fixture_path(name).read_text(encoding="utf-8")))


def intro() -> Model:
    return load_fixture("intro")


def hex_simplicial() -> Model:
    return load_fixture("hex_simplicial")


def hex_kripke() -> Model:
    return load_fixture("hex_kripke")
