"""Bundled example inputs, one JSON document per file."""

from __future__ import annotations

import json
from importlib import resources


def names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files(__name__).iterdir() if p.name.endswith(".json"))


def load(name: str) -> dict:
    return json.loads(resources.files(__name__).joinpath(name + ".json").read_text())


def path(name: str) -> str:
    return str(resources.files(__name__).joinpath(name + ".json"))
