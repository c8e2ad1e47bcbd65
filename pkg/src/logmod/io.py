"""JSON interchange for matrices, patterns, polynomials and boundary data.

All files are UTF-8 JSON.  Complex numbers are two-element arrays
``[re, im]``; matrices are ``{"rows": r, "cols": c, "data": [[re, im], ...]}``
row-major; patterns are ``{"n": n, "pairs": [[i, j], ...]}`` with 1-based
indices; boundary functions are ``{"grid_log2": k, "values": [[re, im], ...]}``
and coefficient lists ``{"coeffs": [[re, im], ...]}`` (symmetric order for
trigonometric data, ascending powers for analytic factors).  Emission is
canonical (sorted keys, fixed indentation, shortest float repr), so writing
and re-parsing a value is bitwise stable.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ParseError
from .patterns import Pattern
from .spectral import BoundaryFunction, TrigPoly

__all__ = [
    "canonical_text",
    "read_json",
    "write_json",
    "complex_to_pair",
    "pair_to_complex",
    "matrix_to_json",
    "json_to_matrix",
    "vector_to_json",
    "json_to_vector",
    "pattern_to_json",
    "json_to_pattern",
    "coeffs_to_json",
    "json_to_coeffs",
    "boundary_to_json",
    "json_to_boundary",
    "trigpoly_to_json",
    "json_to_trigpoly",
]


def canonical_text(obj) -> str:
    """Serialize to the canonical JSON form (stable under round trips)."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(canonical_text(obj))


def _require_dict(obj, what: str) -> dict:
    if not isinstance(obj, dict):
        raise ParseError(f"{what} must be a JSON object")
    return obj


def _as_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{what} must be an integer")
    return value


def _as_real(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{what} must be a number")
    if not math.isfinite(value):
        raise ParseError(f"{what} must be finite")
    return float(value)


def complex_to_pair(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def pair_to_complex(obj, what: str = "entry") -> complex:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(float(obj), 0.0)
    if not isinstance(obj, list) or len(obj) != 2:
        raise ParseError(f"{what} must be a number or a [re, im] pair")
    return complex(_as_real(obj[0], what), _as_real(obj[1], what))


def matrix_to_json(mat: np.ndarray) -> dict:
    mat = np.atleast_2d(np.asarray(mat, dtype=complex))
    rows, cols = mat.shape
    return {
        "rows": rows,
        "cols": cols,
        "data": [complex_to_pair(v) for v in mat.ravel(order="C")],
    }


def json_to_matrix(obj, what: str = "matrix") -> np.ndarray:
    obj = _require_dict(obj, what)
    try:
        rows = _as_int(obj["rows"], f"{what}.rows")
        cols = _as_int(obj["cols"], f"{what}.cols")
        data = obj["data"]
    except KeyError as exc:
        raise ParseError(f"{what} is missing field {exc}") from exc
    if rows < 0 or cols < 0:
        raise ParseError(f"{what} has negative dimensions")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ParseError(f"{what}.data must hold rows*cols entries")
    flat = np.array(
        [pair_to_complex(v, f"{what}.data") for v in data], dtype=complex
    )
    return flat.reshape(rows, cols)


def vector_to_json(vec: np.ndarray) -> dict:
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    return {"length": vec.size, "data": [complex_to_pair(v) for v in vec]}


def json_to_vector(obj, what: str = "vector") -> np.ndarray:
    obj = _require_dict(obj, what)
    try:
        length = _as_int(obj["length"], f"{what}.length")
        data = obj["data"]
    except KeyError as exc:
        raise ParseError(f"{what} is missing field {exc}") from exc
    if not isinstance(data, list) or len(data) != length:
        raise ParseError(f"{what}.data must hold 'length' entries")
    return np.array([pair_to_complex(v, f"{what}.data") for v in data], dtype=complex)


def pattern_to_json(pattern: Pattern) -> dict:
    return {
        "n": pattern.n,
        "pairs": [[i, j] for (i, j) in pattern.sorted_pairs()],
    }


def json_to_pattern(obj, what: str = "pattern") -> Pattern:
    obj = _require_dict(obj, what)
    try:
        n = _as_int(obj["n"], f"{what}.n")
        raw = obj["pairs"]
    except KeyError as exc:
        raise ParseError(f"{what} is missing field {exc}") from exc
    if not isinstance(raw, list):
        raise ParseError(f"{what}.pairs must be a list")
    pairs = []
    for item in raw:
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError(f"{what}.pairs entries must be [i, j]")
        pairs.append((_as_int(item[0], "pair"), _as_int(item[1], "pair")))
    try:
        return Pattern.from_pairs(n, pairs)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{what} is not a valid pattern: {exc}") from exc


def coeffs_to_json(coeffs: np.ndarray) -> dict:
    coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
    return {"coeffs": [complex_to_pair(c) for c in coeffs]}


def json_to_coeffs(obj, what: str = "coeffs") -> np.ndarray:
    obj = _require_dict(obj, what)
    try:
        raw = obj["coeffs"]
    except KeyError as exc:
        raise ParseError(f"{what} is missing field {exc}") from exc
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{what}.coeffs must be a nonempty list")
    return np.array([pair_to_complex(c, f"{what}.coeffs") for c in raw], dtype=complex)


def trigpoly_to_json(poly: TrigPoly) -> dict:
    return coeffs_to_json(poly.coeffs)


def json_to_trigpoly(obj, what: str = "trig polynomial") -> TrigPoly:
    coeffs = json_to_coeffs(obj, what)
    try:
        return TrigPoly(coeffs)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{what} is invalid: {exc}") from exc


def boundary_to_json(func: BoundaryFunction) -> dict:
    return {
        "grid_log2": func.grid_log2,
        "values": [complex_to_pair(v) for v in func.values],
    }


def json_to_boundary(obj, what: str = "boundary function") -> BoundaryFunction:
    obj = _require_dict(obj, what)
    try:
        grid_log2 = _as_int(obj["grid_log2"], f"{what}.grid_log2")
        raw = obj["values"]
    except KeyError as exc:
        raise ParseError(f"{what} is missing field {exc}") from exc
    if not isinstance(raw, list):
        raise ParseError(f"{what}.values must be a list")
    values = np.array(
        [pair_to_complex(v, f"{what}.values") for v in raw], dtype=complex
    )
    try:
        return BoundaryFunction(grid_log2, values)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{what} is invalid: {exc}") from exc
