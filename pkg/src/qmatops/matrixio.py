"""JSON matrix files.

Format::

    {"rows": 2, "cols": 2, "entries": [[1, 0], [0, 0], [0, 0], 1]}

``entries`` is row-major; each entry is ``[re, im]`` or a bare real number.
"""

from __future__ import annotations

import json
import numbers
from pathlib import Path

import numpy as np

from .errors import ValidationError


class MatrixFormatError(ValidationError):
    pass


def _entry(value, pos: int) -> complex:
    if isinstance(value, bool):
        raise MatrixFormatError(f"entries[{pos}]: booleans are not numbers")
    if isinstance(value, numbers.Real):
        return complex(float(value), 0.0)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, numbers.Real) and not isinstance(v, bool) for v in value
    ):
        return complex(float(value[0]), float(value[1]))
    raise MatrixFormatError(f"entries[{pos}]: expected a number or [re, im], got {value!r}")


def matrix_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise MatrixFormatError("top level: expected an object with rows, cols, entries")
    for key in ("rows", "cols", "entries"):
        if key not in obj:
            raise MatrixFormatError(f"{key}: missing")
    rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
    for key, val in (("rows", rows), ("cols", cols)):
        if isinstance(val, bool) or not isinstance(val, int) or val < 1:
            raise MatrixFormatError(f"{key}: expected a positive integer, got {val!r}")
    if not isinstance(entries, list):
        raise MatrixFormatError("entries: expected a list")
    if len(entries) != rows * cols:
        raise MatrixFormatError(f"entries: expected {rows * cols} values (rows*cols), got {len(entries)}")
    data = np.array([_entry(v, i) for i, v in enumerate(entries)], dtype=complex)
    return data.reshape(rows, cols)


def matrix_to_obj(matrix) -> dict:
    mat = np.asarray(matrix, dtype=complex)
    rows, cols = mat.shape
    entries = [[float(z.real), float(z.imag)] for z in mat.reshape(-1)]
    return {"rows": int(rows), "cols": int(cols), "entries": entries}


def load_matrix(path) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MatrixFormatError(f"{path}: file not found") from None
    except OSError as exc:
        raise MatrixFormatError(f"{path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    try:
        return matrix_from_obj(obj)
    except MatrixFormatError as exc:
        raise MatrixFormatError(f"{path}: {exc}") from None


def save_matrix(path, matrix) -> None:
    Path(path).write_text(json.dumps(matrix_to_obj(matrix)) + "\n", encoding="utf-8")
