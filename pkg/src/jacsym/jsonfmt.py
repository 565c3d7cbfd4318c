"""JSON wire format for scalars, polynomials, maps and matrices.

A term is ``{"c": "a|b|c|d", "e": [e1, ..., en]}``, a polynomial is a list
of terms in descending grlex order, a map is ``{"n_in": n, "components":
[...]}``.  Matrices are row-major lists of polynomials (or scalar strings).
"""
from __future__ import annotations

import json
import sys
from typing import Any, Optional

from .exactnum import Scalar
from .linalg import PolyMatrix, ScalarMatrix
from .multipoly import Poly
from .polymap import PolyMap


def scalar_to_json(c: Scalar) -> str:
    return c.to_text()


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, int):
        return Scalar(obj)
    return Scalar.from_text(str(obj))


def poly_to_json(p: Poly) -> list:
    return [{"c": c.to_text(), "e": list(e)} for e, c in p.sorted_terms()]


def poly_from_json(obj, arity: Optional[int] = None) -> Poly:
    if isinstance(obj, dict):  # {"arity": n, "terms": [...]}
        arity = obj.get("arity", arity)
        obj = obj["terms"]
    terms = {}
    for t in obj:
        e = tuple(int(k) for k in t["e"])
        if arity is None:
            arity = len(e)
        if len(e) != arity:
            raise ValueError(f"exponent {list(e)} has length != {arity}")
        if any(k < 0 for k in e):
            raise ValueError(f"negative exponent in {list(e)}")
        c = scalar_from_json(t["c"])
        terms[e] = terms.get(e, Scalar()) + c
    if arity is None:
        raise ValueError("cannot infer the arity of a zero polynomial; give it explicitly")
    return Poly(arity, terms)


def map_to_json(F: PolyMap) -> dict:
    return {"n_in": F.n_in, "components": [poly_to_json(p) for p in F]}


def map_from_json(obj: dict) -> PolyMap:
    n = int(obj["n_in"])
    return PolyMap(n, [poly_from_json(p, n) for p in obj["components"]])


def scalar_matrix_to_json(m: ScalarMatrix) -> list:
    return [[c.to_text() for c in row] for row in m.rows]


def scalar_matrix_from_json(obj) -> ScalarMatrix:
    return ScalarMatrix([[scalar_from_json(c) for c in row] for row in obj])


def poly_matrix_to_json(m: PolyMatrix) -> dict:
    return {"arity": m.arity, "rows": [[poly_to_json(p) for p in row] for row in m.rows]}


def poly_matrix_from_json(obj: dict) -> PolyMatrix:
    n = int(obj["arity"])
    return PolyMatrix([[poly_from_json(p, n) for p in row] for row in obj["rows"]], n)


def load(path: str) -> Any:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
