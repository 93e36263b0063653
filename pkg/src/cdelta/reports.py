"""JSON documents emitted by the command line.

Bodies are deterministic for fixed inputs.  Wall-clock data sits under a single
top-level ``timing`` key, which :func:`canonical` drops before comparisons.
"""

from __future__ import annotations

import json
import time
from typing import Any

from . import __version__
from . import analysis as an
from .ring import FiniteRing
from .theorems import SuiteReport

SCHEMA_VERSION = 1
DECOMPOSITION_KINDS = ("cdelta", "cj", "cn", "cu")


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def canonical(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "timing"}


def analysis_report(R: FiniteRing, expression: str, full_sets: bool = False) -> dict:
    start = time.perf_counter()
    rep = an.classify(R)
    witnesses = {}
    for kind in DECOMPOSITION_KINDS:
        ok = an.decomposable(R, kind)
        bad = an.first_failure(R, kind)
        witnesses[kind] = {
            "decomposable": int(ok.sum()),
            "first_failure": None if bad is None else {"index": bad, "label": R.label(bad)},
        }
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "cdelta", "version": __version__},
        "expression": expression,
        "provenance": R.provenance,
        "order": R.order,
        "zero": R.zero,
        "one": R.one,
        "properties": rep.properties(),
        "counts": {k: rep.counts[k] for k in an.COUNTS},
        "witnesses": witnesses,
    }
    if full_sets:
        doc["elements"] = R.element_labels
        doc["subsets"] = {k: [int(i) for i in S.indices] for k, S in an.subsets(R).items()}
        doc["witness_tables"] = {
            kind: [list(an.decompose_element(R, a, kind).parts) or None for a in range(R.order)]
            for kind in DECOMPOSITION_KINDS
        }
    doc["timing"] = {"elapsed_seconds": round(time.perf_counter() - start, 6)}
    return doc


def decomposition_report(R: FiniteRing, expression: str, element: int, kind: str) -> dict:
    w = an.decompose_element(R, element, kind)
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "cdelta", "version": __version__},
        "expression": expression,
        "kind": w.kind,
        "element": {"index": w.element, "label": R.label(w.element)},
        "found": w.found,
        "parts": [{"role": role, "index": p, "label": R.label(p)} for role, p in zip(w.roles, w.parts)],
    }


def suite_report(report: SuiteReport, corpus_source: str) -> dict:
    body = report.as_dict(timing=False)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "cdelta", "version": __version__},
        "corpus_source": corpus_source,
        **body,
        "timing": {f"{r.check_id} @ {r.ring}": round(r.elapsed, 6) for r in report.results},
    }
    return doc


def search_match(name: str, rep: an.PropertyReport) -> dict:
    return {"name": name, "properties": rep.properties(), "counts": {k: rep.counts[k] for k in an.COUNTS}}
