"""JSON encoding of instances, profiles, verdicts and reports.

Wire format used everywhere: a complex scalar is a two-element array
``[re, im]`` (plain numbers are accepted on input as reals), a matrix
is a row-major array of rows, and an instance file is an object

    {"n": int, "A": matrix,
     "T": matrix?, "S": matrix?, "x": vector?, "y": vector?,
     "blocks": {"d": int, "entries": [[matrix, ...], ...]}?}

Every emitted document re-parses under this schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import SchemaError
from .weightspace import Weight, build_weight


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_scalar(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2 and all(
        isinstance(v, (int, float)) for v in obj
    ):
        return complex(obj[0], obj[1])
    raise SchemaError(f"expected a number or [re, im] pair, got {obj!r}")


def encode_vector(v) -> list:
    return [encode_complex(z) for z in np.asarray(v).ravel()]


def decode_vector(obj, n: int | None = None) -> np.ndarray:
    if not isinstance(obj, list):
        raise SchemaError("vector must be an array")
    vec = np.array([decode_scalar(z) for z in obj], dtype=complex)
    if n is not None and vec.shape != (n,):
        raise SchemaError(f"vector has length {len(vec)}, expected {n}")
    return vec


def encode_matrix(m) -> list:
    a = np.asarray(m)
    return [[encode_complex(z) for z in row] for row in a]


def decode_matrix(obj, shape: tuple[int, int] | None = None) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SchemaError("matrix must be a non-empty array of rows")
    width = len(obj[0])
    if any(len(r) != width for r in obj):
        raise SchemaError("matrix rows have inconsistent lengths")
    mat = np.array([[decode_scalar(z) for z in row] for row in obj], dtype=complex)
    if shape is not None and mat.shape != shape:
        raise SchemaError(f"matrix has shape {mat.shape}, expected {shape}")
    return mat


def encode_payload(payload: dict) -> dict:
    """Encode a dict of scalars/vectors/matrices for a reproducer record."""
    out = {}
    for key, val in payload.items():
        if isinstance(val, (int, float, str, bool)):
            out[key] = val
        else:
            arr = np.asarray(val)
            if arr.ndim == 1:
                out[key] = encode_vector(arr)
            elif arr.ndim == 2:
                out[key] = encode_matrix(arr)
            elif arr.ndim == 4:
                out[key] = [[encode_matrix(b) for b in row] for row in arr]
            else:
                raise SchemaError(f"cannot encode payload entry {key!r} of ndim {arr.ndim}")
    return out


@dataclass(frozen=True, eq=False)
class Instance:
    """Decoded instance file; the weight is built eagerly."""

    n: int
    weight: Weight
    t: np.ndarray | None
    s: np.ndarray | None
    x: np.ndarray | None
    y: np.ndarray | None
    d: int | None
    blocks: list | None


def decode_instance(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise SchemaError("instance must be a JSON object")
    if "n" not in doc or "A" not in doc:
        raise SchemaError('instance requires "n" and "A"')
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise SchemaError('"n" must be a positive integer')
    a = decode_matrix(doc["A"], (n, n))
    weight = build_weight(a)
    t = decode_matrix(doc["T"], (n, n)) if "T" in doc else None
    s = decode_matrix(doc["S"], (n, n)) if "S" in doc else None
    x = decode_vector(doc["x"], n) if "x" in doc else None
    y = decode_vector(doc["y"], n) if "y" in doc else None
    d = None
    blocks = None
    if "blocks" in doc:
        spec = doc["blocks"]
        if not isinstance(spec, dict) or "d" not in spec or "entries" not in spec:
            raise SchemaError('"blocks" requires "d" and "entries"')
        d = spec["d"]
        entries = spec["entries"]
        if not isinstance(d, int) or d < 1:
            raise SchemaError('"d" must be a positive integer')
        if not isinstance(entries, list) or len(entries) != d or any(
            not isinstance(row, list) or len(row) != d for row in entries
        ):
            raise SchemaError('"entries" must be a d x d array of matrices')
        blocks = [[decode_matrix(b, (n, n)) for b in row] for row in entries]
    return Instance(n=n, weight=weight, t=t, s=s, x=x, y=y, d=d, blocks=blocks)


def load_instance(path: str) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc}") from exc
    return decode_instance(doc)


def profile_to_jsonable(profile) -> dict:
    """Serialize a range profile; the emitted polygon is explicitly closed."""
    polygon = [encode_complex(z) for z in profile.polygon]
    if polygon:
        polygon.append(polygon[0])
    return {
        "thetas": [float(t) for t in profile.thetas],
        "support": [float(h) for h in profile.support],
        "omega": profile.omega,
        "crawford": profile.crawford,
        "polygon": polygon,
        "sweep_meta": profile.sweep_meta,
    }


def verdict_to_jsonable(verdict) -> dict:
    witness = {}
    for key, val in verdict.witness.items():
        if isinstance(val, (complex, np.complexfloating)):
            witness[key] = encode_complex(val)
        elif isinstance(val, np.ndarray):
            witness[key] = encode_vector(val)
        else:
            witness[key] = val
    return {
        "relation": verdict.relation,
        "holds": verdict.holds,
        "margin": verdict.margin,
        "witness": witness,
        "tolerances": verdict.tolerances,
        "method": verdict.method,
    }


def profile_to_csv(profile) -> str:
    """Delimited support/boundary samples; the boundary column is closed."""
    lines = ["theta,support,boundary_re,boundary_im"]
    for th, h, z in zip(profile.thetas, profile.support, profile.polygon):
        lines.append(f"{th!r},{h!r},{z.real!r},{z.imag!r}")
    if len(profile.polygon):
        z0 = profile.polygon[0]
        lines.append(f"{float(profile.thetas[0] + 2.0 * np.pi)!r},{float(profile.support[0])!r},{z0.real!r},{z0.imag!r}")
    return "\n".join(lines) + "\n"
