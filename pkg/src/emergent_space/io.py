"""File schemas and canonical output formatting for the CLI.

Parsers validate JSON payloads against the documented schemas and report
failures with a JSON-pointer-style path, the expected shape and the offending
value. Writers produce byte-stable output: dictionaries keep insertion order,
floats are rendered with 17 significant digits, and CSV rows follow the same
float convention.
"""

from __future__ import annotations

import json
import math
from typing import IO, Any, Mapping, Sequence

import numpy as np

from .dynsys import DynamicalSystem, Subset, TimeKind, TimeModel, Universe, build_system
from .errors import SchemaError
from .sigma_measure import PropertyFn

__all__ = [
    "parse_system",
    "parse_system_file",
    "parse_matrix",
    "parse_matrix_file",
    "parse_properties_file",
    "parse_property",
    "parse_weights_file",
    "parse_subset_arg",
    "format_float",
    "canonical_json",
    "write_csv",
    "matrix_json",
    "system_json",
]


def _expect(cond: bool, path: str, expected: str, got: Any):
    if not cond:
        raise SchemaError(path, expected, repr(got))


def _load(text_or_obj, path: str):
    if isinstance(text_or_obj, (dict, list)):
        return text_or_obj
    try:
        return json.loads(text_or_obj)
    except json.JSONDecodeError as exc:
        raise SchemaError(path, "valid JSON", f"parse error: {exc}") from None


# ---------------------------------------------------------------------------
# parsing


def parse_system(payload) -> DynamicalSystem:
    """System schema: {"elements": [...], "transitions": {...}, "time": {...}}.

    ``time`` is optional and defaults to monoid steps with horizon 1; its
    ``kind`` must be "monoid" or "group" (anything else, e.g. a poset, is
    rejected rather than ignored).
    """
    obj = _load(payload, "/")
    _expect(isinstance(obj, dict), "/", "object", obj)
    _expect("elements" in obj, "/elements", "array of labels", None)
    elements = obj["elements"]
    _expect(isinstance(elements, list) and elements, "/elements", "non-empty array", elements)
    for i, e in enumerate(elements):
        _expect(isinstance(e, (str, int)) and not isinstance(e, bool),
                f"/elements/{i}", "string or integer label", e)
    _expect("transitions" in obj, "/transitions", "object mapping label to label", None)
    raw_trans = obj["transitions"]
    _expect(isinstance(raw_trans, dict), "/transitions", "object", raw_trans)
    trans = {str(k): v for k, v in raw_trans.items()}
    labels = [str(e) for e in elements]
    for lab in labels:
        _expect(lab in trans, f"/transitions/{lab}", "image label", None)
    for k, v in trans.items():
        _expect(k in labels, f"/transitions/{k}", "a declared element", k)
        _expect(isinstance(v, (str, int)) and not isinstance(v, bool),
                f"/transitions/{k}", "string or integer label", v)
        _expect(str(v) in labels, f"/transitions/{k}", "a declared element", v)

    time = TimeModel()
    if "time" in obj and obj["time"] is not None:
        tobj = obj["time"]
        _expect(isinstance(tobj, dict), "/time", "object", tobj)
        kind_s = tobj.get("kind", "monoid")
        _expect(kind_s in ("monoid", "group"), "/time/kind",
                '"monoid" or "group"', kind_s)
        horizon = tobj.get("horizon", 1)
        _expect(isinstance(horizon, int) and not isinstance(horizon, bool)
                and horizon >= 0, "/time/horizon", "integer >= 0", horizon)
        time = TimeModel(TimeKind(kind_s), horizon)
    return build_system(labels, trans, time)


def parse_system_file(path: str) -> DynamicalSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_system(fh.read())


def parse_matrix(payload, path: str = "/") -> np.ndarray:
    """Matrix schema: row-major nested arrays of [re, im] pairs.

    A wrapping object {"matrix": rows, "name": ...} is also accepted.
    """
    obj = _load(payload, path)
    if isinstance(obj, dict):
        _expect("matrix" in obj, f"{path}matrix", "array of rows", None)
        return parse_matrix(obj["matrix"], f"{path}matrix/")
    _expect(isinstance(obj, list) and obj, path, "non-empty array of rows", obj)
    dim = len(obj)
    out = np.zeros((dim, dim), dtype=complex)
    for r, row in enumerate(obj):
        _expect(isinstance(row, list) and len(row) == dim,
                f"{path}{r}", f"row of {dim} entries", row)
        for c, cell in enumerate(row):
            _expect(
                isinstance(cell, list) and len(cell) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in cell),
                f"{path}{r}/{c}", "[re, im] pair", cell,
            )
            out[r, c] = complex(cell[0], cell[1])
    return out


def parse_matrix_file(path: str) -> tuple[np.ndarray, str]:
    """Returns (matrix, name); name falls back to the file path."""
    with open(path, "r", encoding="utf-8") as fh:
        obj = _load(fh.read(), "/")
    name = obj.get("name", path) if isinstance(obj, dict) else path
    return parse_matrix(obj), str(name)


def parse_property(payload, path: str = "/") -> PropertyFn:
    """Property schema: {"name": ..., "truth": {"label": 0 or 1, ...}}."""
    obj = _load(payload, path)
    _expect(isinstance(obj, dict), path, "object", obj)
    _expect("name" in obj and isinstance(obj["name"], str), f"{path}name", "string", obj.get("name"))
    _expect("truth" in obj and isinstance(obj["truth"], dict), f"{path}truth", "object", obj.get("truth"))
    truth = {}
    for k, v in obj["truth"].items():
        _expect(v in (0, 1) and not isinstance(v, bool), f"{path}truth/{k}", "0 or 1", v)
        truth[str(k)] = int(v)
    return PropertyFn(obj["name"], truth)


def parse_properties_file(path: str) -> list[PropertyFn]:
    """A property file holds one property object or an array of them."""
    with open(path, "r", encoding="utf-8") as fh:
        obj = _load(fh.read(), "/")
    if isinstance(obj, list):
        return [parse_property(o, f"/{i}/") for i, o in enumerate(obj)]
    return [parse_property(obj)]


def parse_weights_file(path: str) -> dict[str, float]:
    """Weight schema: {"weights": {"label": w, ...}} or the bare mapping."""
    with open(path, "r", encoding="utf-8") as fh:
        obj = _load(fh.read(), "/")
    if isinstance(obj, dict) and "weights" in obj:
        obj = obj["weights"]
    _expect(isinstance(obj, dict), "/weights", "object mapping label to weight", obj)
    out = {}
    for k, v in obj.items():
        _expect(isinstance(v, (int, float)) and not isinstance(v, bool),
                f"/weights/{k}", "number", v)
        out[str(k)] = float(v)
    return out


def parse_subset_arg(universe: Universe, arg: str) -> Subset:
    """Comma-separated labels, e.g. "1,2,3"; empty string is the empty set."""
    labels = [s.strip() for s in arg.split(",") if s.strip()]
    return Subset.from_labels(universe, labels)


# ---------------------------------------------------------------------------
# canonical output


def format_float(x: float) -> str:
    """17-significant-digit decimal form, byte-stable across runs."""
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value {x!r} in output")
    s = format(float(x), ".17g")
    return s


def _render(obj, out: list[str]):
    if obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _render(item, out)
        out.append("]")
    elif isinstance(obj, Mapping):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _render(v, out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Compact JSON with insertion-ordered keys and 17-digit floats."""
    out: list[str] = []
    _render(obj, out)
    return "".join(out)


def write_csv(fh: IO[str], header: Sequence[str], rows) -> None:
    """Comma-separated rows; floats at 17 significant digits."""
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(
            ",".join(
                format_float(v) if isinstance(v, float) else str(v) for v in row
            )
            + "\n"
        )


def matrix_json(m: np.ndarray) -> list:
    """Row-major [re, im] pairs, the same shape the parser accepts."""
    return [
        [[float(m[r, c].real), float(m[r, c].imag)] for c in range(m.shape[1])]
        for r in range(m.shape[0])
    ]


def system_json(sys: DynamicalSystem) -> dict:
    return {
        "elements": list(sys.labels),
        "transitions": {lab: sys.labels[sys.step[i]] for i, lab in enumerate(sys.labels)},
        "time": {"kind": sys.time.kind.value, "horizon": sys.time.horizon},
    }
