"""JSON file formats for weight specs, vectors, Köthe matrices and trajectories.

Floats are written with ``repr`` precision, so every format round-trips
bit-exactly. Non-finite numbers in reports are written as the strings
``"inf"``, ``"-inf"`` and ``"nan"``.
"""
from __future__ import annotations

import json
import math
import re
from pathlib import Path

from .spaces import C0, KoetheMatrix, SeqVector, SpaceNorm
from .trajectories import Pseudotrajectory
from .weights import WeightSpec


class FormatError(ValueError):
    """Malformed input; the message names the line and field when known."""


def _line_of(text: str, field: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(field), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _fail(text: str, field: str, msg: str):
    line = _line_of(text, field)
    where = f"line {line}, field '{field}'" if line else f"field '{field}'"
    raise FormatError(f"{where}: {msg}")


def loads(text: str, what: str = "document") -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno}, column {exc.colno}: invalid JSON in {what}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise FormatError(f"line 1: {what} must be a JSON object")
    return doc


def _require(doc: dict, text: str, field: str):
    if field not in doc:
        raise FormatError(f"missing field '{field}'")
    return doc[field]


def _number_list(doc, text, field) -> list[float]:
    value = _require(doc, text, field)
    if not isinstance(value, list) or not all(_is_number(v) for v in value):
        _fail(text, field, "expected a list of numbers")
    return [float(v) for v in value]


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _sanitize(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def dumps(payload) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(_sanitize(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


# weight specs -------------------------------------------------------------

def spec_from_text(text: str) -> WeightSpec:
    doc = loads(text, "weight spec")
    core_start = _require(doc, text, "core_start")
    if not isinstance(core_start, int) or isinstance(core_start, bool):
        _fail(text, "core_start", "expected an integer")
    fields = {}
    for name in ("core", "left_period", "right_period"):
        if name == "core" and name not in doc:
            fields[name] = []
            continue
        fields[name] = _number_list(doc, text, name)
    try:
        return WeightSpec(core_start, **fields)
    except ValueError as exc:
        field = str(exc).split(":", 1)[0]
        if field in fields:
            _fail(text, field, str(exc).split(":", 1)[1].strip())
        raise FormatError(str(exc)) from None


def spec_to_text(spec: WeightSpec) -> str:
    return dumps(spec.to_dict())


# vectors ------------------------------------------------------------------

def _entries(value, text, field) -> SeqVector:
    ok = isinstance(value, list) and all(
        isinstance(e, list) and len(e) == 2 and isinstance(e[0], int) and _is_number(e[1]) for e in value
    )
    if not ok:
        _fail(text, field, "expected a list of [index, value] pairs")
    try:
        return SeqVector((i, v) for i, v in value)
    except ValueError as exc:
        _fail(text, field, str(exc))


def vector_from_text(text: str) -> SeqVector:
    doc = loads(text, "vector")
    return _entries(_require(doc, text, "entries"), text, "entries")


def vector_to_text(x: SeqVector) -> str:
    return dumps({"entries": x.to_list()})


# Köthe matrices -----------------------------------------------------------

def koethe_from_text(text: str) -> KoetheMatrix:
    doc = loads(text, "Köthe matrix")
    window = _require(doc, text, "window")
    if not (isinstance(window, list) and len(window) == 2 and all(isinstance(v, int) for v in window)):
        _fail(text, "window", "expected [lo, hi] integers")
    levels = _require(doc, text, "levels")
    table = _require(doc, text, "table")
    if not isinstance(levels, int) or levels < 1:
        _fail(text, "levels", "expected a positive integer")
    if not isinstance(table, list) or not all(isinstance(r, list) and len(r) == levels for r in table):
        _fail(text, "table", f"expected rows of {levels} numbers")
    try:
        return KoetheMatrix(window[0], window[1], table)
    except ValueError as exc:
        _fail(text, "table", str(exc))


def koethe_to_text(a: KoetheMatrix) -> str:
    return dumps({"window": [a.j_lo, a.j_hi], "levels": a.levels, "table": a.table.tolist()})


# spaces and trajectories --------------------------------------------------

def parse_space(label: str, matrix: KoetheMatrix | None = None) -> SpaceNorm:
    """``c0``, ``lp:P`` or ``koethe:LEVEL:P`` (the last needs ``matrix``)."""
    parts = label.split(":")
    try:
        if parts == ["c0"]:
            return C0
        if parts[0] == "lp" and len(parts) == 2:
            return SpaceNorm.lp(float(parts[1]))
        if parts[0] == "koethe" and len(parts) == 3:
            if matrix is None:
                raise ValueError("a koethe space needs a matrix")
            return SpaceNorm.koethe(matrix, int(parts[1]), float(parts[2]))
    except ValueError as exc:
        raise FormatError(f"bad space {label!r}: {exc}") from None
    raise FormatError(f"bad space {label!r}; expected c0, lp:P or koethe:LEVEL:P")


def trajectory_from_text(text: str, matrix: KoetheMatrix | None = None) -> Pseudotrajectory:
    doc = loads(text, "trajectory")
    delta = _require(doc, text, "delta")
    if not _is_number(delta):
        _fail(text, "delta", "expected a number")
    periodic = doc.get("periodic", False)
    if not isinstance(periodic, bool):
        _fail(text, "periodic", "expected true or false")
    space = parse_space(doc.get("space", "c0"), matrix)
    points = _require(doc, text, "points")
    if not isinstance(points, list):
        _fail(text, "points", "expected a list of entry lists")
    vectors = [_entries(p, text, "points") for p in points]
    try:
        return Pseudotrajectory(tuple(vectors), delta=float(delta), space=space, periodic=periodic)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def trajectory_to_text(traj: Pseudotrajectory) -> str:
    return dumps(
        {
            "delta": traj.delta,
            "space": traj.space.label(),
            "periodic": traj.periodic,
            "points": [x.to_list() for x in traj.points],
        }
    )


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
