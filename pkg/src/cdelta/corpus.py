"""Corpus files: JSON lists of named ring expressions."""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

from .errors import InvalidParameter

STANDARD = "standard_corpus.json"


def _entries(doc: Any) -> list[tuple[str, str]]:
    rings = doc.get("rings") if isinstance(doc, dict) else doc
    if not isinstance(rings, list):
        raise InvalidParameter("corpus must be a list or an object with a 'rings' list")
    out = []
    for entry in rings:
        if isinstance(entry, str):
            out.append((entry, entry))
        elif isinstance(entry, dict) and "expr" in entry:
            out.append((str(entry.get("name", entry["expr"])), str(entry["expr"])))
        else:
            raise InvalidParameter(f"bad corpus entry {entry!r}")
    return out


def load(path: str | None = None) -> list[tuple[str, str]]:
    """(name, expression) pairs from a corpus file, or the bundled standard corpus."""
    if path is None:
        text = resources.files("cdelta").joinpath("data", STANDARD).read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return _entries(json.loads(text))


def standard() -> list[tuple[str, str]]:
    return load(None)
