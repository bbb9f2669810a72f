"""JSON interchange format for CSS codes.

A code file lists qubits with dense ids ``0..n-1``, generators as sorted id
lists, optional preferred logical representatives and free-form builder
metadata.  Writing is canonical: parsing then writing a written file gives
back the same bytes.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .css import CssCode, CssOperator, Pauli, QubitInfo

FORMAT_VERSION = "1"

_ID_LISTS = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["format_version", "n", "qubits", "x_generators", "z_generators", "metadata"],
    "additionalProperties": False,
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "n": {"type": "integer", "minimum": 0},
        "qubits": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "tags"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "coords": {"type": "array", "items": {"type": "number"}},
                    "tags": {"type": "object"},
                },
            },
        },
        "x_generators": _ID_LISTS,
        "z_generators": _ID_LISTS,
        "logicals": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"x": _ID_LISTS, "z": _ID_LISTS},
        },
        "metadata": {
            "type": "object",
            "required": ["builder", "params"],
            "properties": {"builder": {"type": "string"}, "params": {"type": "object"}},
        },
    },
}


class CodeFileError(ValueError):
    """Unreadable or invalid code file; ``location`` says where."""

    def __init__(self, message: str, location: str = "") -> None:
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def to_document(code: CssCode) -> dict[str, Any]:
    qubits = []
    for q in code.qubits:
        entry: dict[str, Any] = {"id": q.id}
        if q.coords is not None:
            entry["coords"] = list(q.coords)
        entry["tags"] = q.tags
        qubits.append(entry)
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "n": code.n,
        "qubits": qubits,
        "x_generators": [g.qubits() for g in code.x_generators],
        "z_generators": [g.qubits() for g in code.z_generators],
    }
    if code.logicals is not None:
        doc["logicals"] = {
            p.value.lower(): [op.qubits() for op in code.logicals.get(p, ())] for p in (Pauli.X, Pauli.Z)
        }
    meta = dict(code.metadata)
    meta.setdefault("builder", "custom")
    meta.setdefault("params", {})
    doc["metadata"] = meta
    return doc


def _line(value: Any) -> str:
    return json.dumps(value, separators=(", ", ": "))


def _block(items: list, indent: str = "  ") -> str:
    if not items:
        return "[]"
    return "[\n" + ",\n".join(indent + _line(v) for v in items) + "\n" + indent[:-2] + "]"


def dumps(code: CssCode) -> str:
    """Canonical text: one qubit, generator or metadata entry per line."""
    doc = to_document(code)
    fields = []
    for key, value in doc.items():
        if key in ("qubits", "x_generators", "z_generators"):
            text = _block(value, "    ")
        elif key in ("logicals", "metadata"):
            inner = [f'    {json.dumps(k)}: {_line(v)}' for k, v in value.items()]
            text = "{\n" + ",\n".join(inner) + "\n  }" if inner else "{}"
        else:
            text = _line(value)
        fields.append(f"  {json.dumps(key)}: {text}")
    return "{\n" + ",\n".join(fields) + "\n}\n"


def _check_ids(ids: list[int], n: int, where: str) -> None:
    for j, q in enumerate(ids):
        if q >= n:
            raise CodeFileError(f"qubit id {q} does not exist (n={n})", f"{where}[{j}]")
    if len(set(ids)) != len(ids):
        raise CodeFileError("repeated qubit id", where)


def from_document(doc: Any) -> CssCode:
    errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        err = errors[0]
        raise CodeFileError(err.message, _json_path(err.absolute_path))
    n = doc["n"]
    if len(doc["qubits"]) != n:
        raise CodeFileError(f"{len(doc['qubits'])} qubit entries for n={n}", "$.qubits")
    qubits = []
    for i, entry in enumerate(doc["qubits"]):
        if entry["id"] != i:
            raise CodeFileError(f"qubit ids must be 0..n-1 in order, found {entry['id']}", f"$.qubits[{i}].id")
        coords = entry.get("coords")
        qubits.append(QubitInfo(i, tuple(coords) if coords is not None else None, entry["tags"]))

    def ops(pauli: Pauli, lists: list[list[int]], where: str) -> tuple[CssOperator, ...]:
        out = []
        for i, ids in enumerate(lists):
            _check_ids(ids, n, f"{where}[{i}]")
            out.append(CssOperator.from_indices(pauli, n, ids))
        return tuple(out)

    xs = ops(Pauli.X, doc["x_generators"], "$.x_generators")
    zs = ops(Pauli.Z, doc["z_generators"], "$.z_generators")
    logicals = None
    if "logicals" in doc:
        logicals = {
            p: ops(p, doc["logicals"].get(p.value.lower(), []), f"$.logicals.{p.value.lower()}")
            for p in (Pauli.X, Pauli.Z)
        }
    try:
        return CssCode(n, xs, zs, tuple(qubits), dict(doc["metadata"]), logicals)
    except ValueError as exc:
        raise CodeFileError(str(exc), "$") from exc


def loads(text: str) -> CssCode:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodeFileError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return from_document(doc)


def read_code(path: str | Path) -> CssCode:
    path = Path(path)
    try:
        return loads(path.read_text())
    except CodeFileError as exc:
        raise CodeFileError(str(exc), str(path)) from exc


def write_code(code: CssCode, path: str | Path) -> None:
    Path(path).write_text(dumps(code))
