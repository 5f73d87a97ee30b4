"""QP documents: canonical JSON serialization with exact round-trips.

Coefficients serialize as strings ("3/2", "-1") so nothing ever touches
floating point; cycles are stored in canonical rotation and sorted, making
emitted documents byte-stable across runs.
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional

from .fields import FieldError, field_from_name
from .pathalg import PathAlgebraError, Potential, Quiver
from .qpcore import QP


class DocumentError(ValueError):
    pass


def emit_qp(qp: QP, name: Optional[str] = None) -> dict:
    Q = qp.quiver
    terms = sorted(qp.potential.terms.items(), key=lambda it: Q.order_key(it[0]))
    doc = {
        "field": qp.field.name,
        "vertices": list(Q.vertices),
        "arrows": [{"id": a.name, "from": a.source, "to": a.target} for a in Q.arrows],
        "potential": [
            {"coeff": qp.field.fmt(c), "cycle": list(p.arrows)} for p, c in terms
        ],
    }
    meta = {}
    if name:
        meta["name"] = name
    if qp.provenance:
        meta["provenance"] = [[kind, list(args)] for kind, args in qp.provenance]
    if qp.potential.truncated:
        meta["truncated"] = True
    if meta:
        doc["metadata"] = meta
    return doc


def emit_qp_text(qp: QP, name: Optional[str] = None) -> str:
    return json.dumps(emit_qp(qp, name), indent=2) + "\n"


def parse_qp(doc: dict) -> QP:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    for key in ("field", "vertices", "arrows", "potential"):
        if key not in doc:
            raise DocumentError(f"document missing {key!r}")
    try:
        field = field_from_name(doc["field"])
    except FieldError as exc:
        raise DocumentError(str(exc)) from exc
    vertices = doc["vertices"]
    arrows = []
    for a in doc["arrows"]:
        try:
            arrows.append((a["id"], a["from"], a["to"]))
        except (TypeError, KeyError) as exc:
            raise DocumentError(f"bad arrow record {a!r}") from exc
    try:
        Q = Quiver(vertices, arrows)
    except PathAlgebraError as exc:
        raise DocumentError(str(exc)) from exc
    terms = []
    for t in doc["potential"]:
        try:
            coeff = field.parse(str(t["coeff"]))
            cycle = Q.path(list(t["cycle"]))
        except (TypeError, KeyError) as exc:
            raise DocumentError(f"bad potential term {t!r}") from exc
        except (PathAlgebraError, FieldError) as exc:
            raise DocumentError(str(exc)) from exc
        terms.append((cycle, coeff))
    meta = doc.get("metadata", {}) or {}
    truncated = bool(meta.get("truncated", False))
    try:
        W = Potential(Q, field, terms, truncated)
        provenance = tuple(
            (kind, tuple(args)) for kind, args in meta.get("provenance", [])
        )
        return QP(Q, W, field, provenance)
    except (PathAlgebraError, ValueError) as exc:
        raise DocumentError(str(exc)) from exc


def parse_qp_text(text: str) -> QP:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return parse_qp(doc)


def document_name(doc: dict) -> Optional[str]:
    return (doc.get("metadata") or {}).get("name")


def report_text(report_dict: dict) -> str:
    return json.dumps(report_dict, indent=2, default=str) + "\n"
