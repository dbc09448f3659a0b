"""JSON encodings of matrices, projections, canonical forms, maps, chains and paths.

Matrices are ``{"field", "rows", "cols", "data"}`` with ``data`` row-major;
complex entries are ``[re, im]`` pairs.  :func:`dumps` writes every float with
17 significant digits so reports are byte-stable across runs.
"""
from __future__ import annotations

import json
import math
from enum import Enum
from typing import Any

import numpy as np

from .errors import BadConfig, DimensionMismatch
from .geodesics import GeodesicPath
from .halmos import HalmosForm
from .isometry import IsometrySpec
from .projection import TOL_PROJ, Projection, ScalarField, validate
from .relations import Chain


def matrix_to_json(a) -> dict:
    a = np.atleast_2d(np.asarray(a))
    fld = ScalarField.of(a)
    flat = a.reshape(-1)
    if fld is ScalarField.COMPLEX:
        data = [[float(z.real), float(z.imag)] for z in flat]
    else:
        data = [float(x) for x in flat]
    return {"field": fld.value, "rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": data}


def matrix_from_json(d: dict) -> np.ndarray:
    try:
        fld = ScalarField(d["field"])
        rows, cols, data = int(d["rows"]), int(d["cols"]), d["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise BadConfig(f"malformed matrix JSON: {exc}") from None
    if len(data) != rows * cols:
        raise DimensionMismatch(f"matrix JSON has {len(data)} entries for {rows}x{cols}")
    if fld is ScalarField.COMPLEX:
        arr = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    else:
        arr = np.array(data, dtype=np.float64)
    return arr.reshape(rows, cols)


def projection_to_json(p: Projection) -> dict:
    return matrix_to_json(p.matrix)


def projection_from_json(d: dict, tol: float = TOL_PROJ) -> Projection:
    return validate(matrix_from_json(d), tol)


def form_to_json(form: HalmosForm) -> dict:
    return {"dims": list(form.dims), "sines": [float(s) for s in form.sines],
            "W": matrix_to_json(form.W)}


def form_from_json(d: dict) -> HalmosForm:
    return HalmosForm(matrix_from_json(d["W"]), tuple(d["dims"]), np.asarray(d["sines"], float))


def spec_to_json(spec: IsometrySpec) -> dict:
    return {"kind": spec.kind.value, "U": matrix_to_json(spec.U)}


def spec_from_json(d: dict) -> IsometrySpec:
    return IsometrySpec(d["kind"], matrix_from_json(d["U"]))


def chain_to_json(chain: Chain) -> dict:
    return {"relation": chain.relation.value, "case": chain.case,
            "nodes": [projection_to_json(p) for p in chain.nodes],
            "residuals": list(chain.residuals)}


def path_to_json(path: GeodesicPath, thetas) -> dict:
    thetas = [float(t) for t in np.atleast_1d(thetas)]
    return {"psi": path.psi, "rank": path.rank, "theta": thetas,
            "matrices": [projection_to_json(path.eval(t)) for t in thetas]}


def _encode(x: Any) -> str:
    if isinstance(x, Enum):
        x = x.value
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in x) + "]"
    if isinstance(x, np.ndarray):
        return _encode(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        # JSON has no inf/nan
        return format(x, ".17g") if math.isfinite(x) else "null"
    if isinstance(x, (complex, np.complexfloating)):
        return _encode([x.real, x.imag])
    return json.dumps(str(x))


def dumps(obj: Any) -> str:
    """Compact, deterministic JSON with 17 significant digits per float."""
    return _encode(obj)
