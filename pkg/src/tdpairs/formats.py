"""JSON encodings of scalars, matrices, parameter arrays, realizations and module descriptors.

Scalars are strings: ``"num/den"`` for exact values, ``"re+im*i"`` for complex
ones. Matrices are lists of rows of scalar strings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .drinfeld import SplitSequence
from .linalg import Matrix
from .report import Report
from .scalars import QQ, FieldScalar, format_scalar, parse_scalar
from .tdsystem import ParameterArray, QRacahParams, TDRealization

__all__ = [
    "FormatError",
    "encode",
    "decode_scalar",
    "decode_matrix",
    "parameter_array_to_json",
    "parameter_array_from_json",
    "realization_to_json",
    "realization_from_json",
    "params_to_json",
    "params_from_json",
    "ModuleDescriptor",
    "descriptor_from_json",
]

PARAM_KEYS = ("a", "b", "c", "a*", "b*", "c*")
_ATTR = {"a": "a", "b": "b", "c": "c", "a*": "astar", "b*": "bstar", "c*": "cstar"}


class FormatError(ValueError):
    """Malformed or incomplete JSON input."""


def encode(x):
    """Recursively turn scalars, matrices and reports into JSON-ready values."""
    if isinstance(x, FieldScalar):
        return format_scalar(x)
    if isinstance(x, Matrix):
        return [[x.field.format(v) for v in row] for row in x.a]
    if isinstance(x, Report):
        return encode(x.to_dict())
    if isinstance(x, SplitSequence):
        return [encode(z) for z in x]
    if isinstance(x, dict):
        return {k: encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    if hasattr(x, "basis") and hasattr(x, "dim"):
        return {"dim": x.dim, "basis": encode(x.basis)}
    return x


def decode_scalar(s, field=QQ) -> FieldScalar:
    if isinstance(s, bool) or not isinstance(s, (str, int, float)):
        raise FormatError(f"expected a scalar string, got {s!r}")
    try:
        return parse_scalar(s, field)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from exc


def _list(obj, key):
    if key not in obj:
        raise FormatError(f"missing key {key!r}")
    val = obj[key]
    if not isinstance(val, list):
        raise FormatError(f"{key!r} must be a list")
    return val


def decode_matrix(rows, field=QQ) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise FormatError("a matrix is a list of rows")
    n = len(rows)
    m = len(rows[0]) if rows else 0
    if any(len(r) != m for r in rows):
        raise FormatError("matrix rows have different lengths")
    arr = np.empty((n, m), dtype=object)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            arr[i, j] = decode_scalar(v, field).value
    return Matrix(field, arr)


def parameter_array_to_json(pa: ParameterArray) -> dict:
    out = {"d": pa.d, "thetas": encode(pa.thetas), "theta_stars": encode(pa.theta_stars), "zetas": encode(pa.zetas)}
    if pa.q is not None:
        out["q"] = encode(pa.q)
    return out


def parameter_array_from_json(obj, field=QQ) -> ParameterArray:
    if not isinstance(obj, dict):
        raise FormatError("a parameter array is a JSON object")
    th = [decode_scalar(x, field) for x in _list(obj, "thetas")]
    ts = [decode_scalar(x, field) for x in _list(obj, "theta_stars")]
    zs = [decode_scalar(x, field) for x in _list(obj, "zetas")]
    if "d" in obj and obj["d"] != len(th) - 1:
        raise FormatError(f"d = {obj['d']} does not match {len(th)} eigenvalues")
    if not (len(th) == len(ts) == len(zs)) or not th:
        raise FormatError("thetas, theta_stars and zetas must have the same nonzero length")
    q = decode_scalar(obj["q"], field) if obj.get("q") is not None else None
    try:
        return ParameterArray(tuple(th), tuple(ts), SplitSequence(tuple(zs)), q)
    except ValueError as exc:
        if type(exc) is ValueError:
            raise FormatError(str(exc)) from exc
        raise


def params_to_json(p: QRacahParams) -> dict:
    out = {"q": encode(p.q)}
    out.update({k: encode(getattr(p, _ATTR[k])) for k in PARAM_KEYS})
    return out


def params_from_json(obj, q, d: int, field=QQ) -> QRacahParams:
    if not isinstance(obj, dict):
        raise FormatError("params must be an object with keys a, b, c, a*, b*, c*")
    vals = []
    for k in PARAM_KEYS:
        v = obj.get(k, obj.get(_ATTR[k]))
        if v is None:
            raise FormatError(f"params is missing {k!r}")
        vals.append(decode_scalar(v, field))
    return QRacahParams(q, *vals, d)


def realization_to_json(r: TDRealization) -> dict:
    out = {
        "dim": r.dim,
        "A": encode(r.A),
        "Astar": encode(r.Astar),
        "E": encode(r.E),
        "Estar": encode(r.Estar),
        "shape": list(r.shape),
        "field": r.field.name,
        "thetas": encode(r.thetas),
        "theta_stars": encode(r.theta_stars),
    }
    if r.params is not None:
        out["params"] = params_to_json(r.params)
    if r.module is not None:
        out["alphas"] = encode(r.module.alphas)
    out["warnings"] = list(r.warnings)
    return out


def realization_from_json(obj, field=QQ) -> TDRealization:
    if not isinstance(obj, dict):
        raise FormatError("a realization is a JSON object")
    A = decode_matrix(obj.get("A"), field)
    As = decode_matrix(obj.get("Astar"), field)
    E = [decode_matrix(x, field) for x in _list(obj, "E")]
    Es = [decode_matrix(x, field) for x in _list(obj, "Estar")]
    th = tuple(decode_scalar(x, field) for x in obj.get("thetas", []))
    ts = tuple(decode_scalar(x, field) for x in obj.get("theta_stars", []))
    shape = obj.get("shape") or []
    dim = obj.get("dim", A.rows)
    if A.shape != (dim, dim) or As.shape != (dim, dim) or len(E) != len(Es) or not E:
        raise FormatError("inconsistent realization dimensions")
    return TDRealization(dim, A, As, E, Es, list(shape), th, ts, warnings=list(obj.get("warnings", [])))


@dataclass(frozen=True)
class ModuleDescriptor:
    """``{"q", "alphas", "params", "u", "v"}`` as parsed scalars."""

    q: FieldScalar
    alphas: list
    params: QRacahParams
    u: FieldScalar
    v: FieldScalar

    @property
    def d(self) -> int:
        return len(self.alphas)


def descriptor_from_json(obj, field=QQ, u=None, v=None) -> ModuleDescriptor:
    if not isinstance(obj, dict):
        raise FormatError("a module descriptor is a JSON object")
    if "q" not in obj:
        raise FormatError("missing key 'q'")
    q = decode_scalar(obj["q"], field)
    alphas = [decode_scalar(x, field) for x in _list(obj, "alphas")]
    if "params" not in obj:
        raise FormatError("missing key 'params' (a, b, c, a*, b*, c*)")
    params = params_from_json(obj["params"], q, len(alphas), field)
    u = u if u is not None else decode_scalar(obj.get("u", 1), field)
    v = v if v is not None else decode_scalar(obj.get("v", 1), field)
    return ModuleDescriptor(q, alphas, params, u, v)
