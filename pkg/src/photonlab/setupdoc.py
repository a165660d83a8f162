"""Versioned JSON setup documents and their canonical serialization.

A document is schema-checked first (shape), then semantically validated
as a board (names, cells, wiring, budgets).  Serialization is canonical:
elements sort by (y, x, name), wires by (from, to), param keys
alphabetically, two-space indent, trailing newline.  Loading a canonical
document and dumping it again is byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from .board import Board, Element, SetupError, Wire

FORMAT_NAME = "photonlab-setup"
FORMAT_VERSION = 1

_ELEMENT_SCHEMA = {
    "type": "object",
    "required": ["name", "kind", "x", "y"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "kind": {"type": "string", "minLength": 1},
        "x": {"type": "integer", "minimum": 0},
        "y": {"type": "integer", "minimum": 0},
        "rotation": {"type": "integer", "minimum": 0, "maximum": 7},
        "params": {"type": "object"},
        "altParams": {"type": "object"},
    },
    "additionalProperties": False,
}

SETUP_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "photonlab setup",
    "type": "object",
    "required": ["format", "version", "board", "elements"],
    "properties": {
        "format": {"const": FORMAT_NAME},
        "version": {"const": FORMAT_VERSION},
        "title": {"type": "string"},
        "notes": {"type": "string"},
        "board": {
            "type": "object",
            "required": ["width", "height"],
            "properties": {
                "width": {"type": "integer", "minimum": 1, "maximum": 64},
                "height": {"type": "integer", "minimum": 1, "maximum": 64},
                "symmetrize": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "elements": {"type": "array", "items": _ELEMENT_SCHEMA},
        "wires": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to"],
                "properties": {"from": {"type": "string"}, "to": {"type": "string"}},
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

_VALIDATOR = jsonschema.Draft202012Validator(SETUP_SCHEMA)


def _schema_errors(doc) -> list[str]:
    errors = []
    for err in sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path)):
        path = "$" + "".join(
            f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path
        )
        errors.append(f"{path}: {err.message}")
    return errors


def from_document(doc: dict, check: bool = True) -> Board:
    errors = _schema_errors(doc)
    if errors:
        raise SetupError(errors)
    board = Board(
        width=doc["board"]["width"],
        height=doc["board"]["height"],
        symmetrize=doc["board"].get("symmetrize", False),
        title=doc.get("title", ""),
        notes=doc.get("notes", ""),
        elements=[
            Element(
                name=e["name"],
                kind=e["kind"],
                x=e["x"],
                y=e["y"],
                rotation=e.get("rotation", 0),
                params=dict(e.get("params", {})),
                alt_params=dict(e["altParams"]) if "altParams" in e else None,
            )
            for e in doc["elements"]
        ],
        wires=[Wire(w["from"], w["to"]) for w in doc.get("wires", [])],
    )
    if check:
        board.check()
    return board


def to_document(board: Board) -> dict:
    doc: dict = {"format": FORMAT_NAME, "version": FORMAT_VERSION}
    if board.title:
        doc["title"] = board.title
    if board.notes:
        doc["notes"] = board.notes
    doc["board"] = {"width": board.width, "height": board.height}
    if board.symmetrize:
        doc["board"]["symmetrize"] = True
    doc["elements"] = []
    for e in sorted(board.elements, key=lambda e: (e.y, e.x, e.name)):
        item = {"name": e.name, "kind": e.kind, "x": e.x, "y": e.y, "rotation": e.rotation}
        if e.params:
            item["params"] = {k: e.params[k] for k in sorted(e.params)}
        if e.alt_params is not None:
            item["altParams"] = {k: e.alt_params[k] for k in sorted(e.alt_params)}
        doc["elements"].append(item)
    doc["wires"] = [
        {"from": w.source, "to": w.target}
        for w in sorted(board.wires, key=lambda w: (w.source, w.target))
    ]
    return doc


def loads(text: str, check: bool = True) -> Board:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SetupError([f"not valid JSON: {exc}"]) from exc
    return from_document(doc, check=check)


def dumps(board: Board) -> str:
    return json.dumps(to_document(board), indent=2, ensure_ascii=False) + "\n"


def load(path: str | Path, check: bool = True) -> Board:
    return loads(Path(path).read_text(encoding="utf-8"), check=check)


def save(board: Board, path: str | Path) -> None:
    Path(path).write_text(dumps(board), encoding="utf-8")
