"""JSON documents for lattices, pullbacks, divisors, maps and points.

Scalars travel as strings in the "p/q+r/s√d" encoding (plain integers
are also accepted where they are exact).  Parse failures raise
DocumentError carrying a JSON path to the offending node.

Document shapes:

  lattice   {"rank": 2, "labels": ["E+", "E-"], "field_d": 3,
             "cone": {"type": "orthant"} |
                     {"type": "quadratic", "gram": [[...]], "linear": [...]},
             "witness_ample": ["1", "1"]}
  pullback  {"matrix": [["0", "2-√3"], ["2+√3", "0"]]}
  divisor   {"coeffs": ["1", "1"]}
  morphism  {"signature": [1, 1],
             "targets": [[{"terms": [{"c": 1, "e": [0, 0, 2, 0]}]}, ...], ...]}
  points    {"signature": [1, 1], "points": [[[1, 2], [1, 3]], ...]}
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

from .coefficients import PullbackMap
from .heights import MultiHomogeneousMap, MultiPoint
from .lattice import DivisorClass, OrthantCone, PicardLattice, QuadraticCone
from .scalars import QuadraticNumber, format_scalar, parse_scalar


class DocumentError(ValueError):
    def __init__(self, message: str, path: str = "$") -> None:
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message


def _fail(message: str, path: str) -> "DocumentError":
    return DocumentError(message, path)


def _as_obj(doc: str | bytes | dict | list) -> Any:
    if isinstance(doc, (dict, list)):
        return doc
    try:
        return json.loads(doc)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}", "$") from None


def _scalar(node: Any, path: str) -> QuadraticNumber:
    if isinstance(node, bool):
        raise _fail("expected a scalar, got a boolean", path)
    if isinstance(node, int):
        return QuadraticNumber(node)
    if isinstance(node, str):
        try:
            return parse_scalar(node)
        except ValueError as exc:
            raise _fail(str(exc), path) from None
    raise _fail(f"expected an integer or scalar string, got {type(node).__name__}",
                path)


def _rational(node: Any, path: str) -> Fraction:
    value = _scalar(node, path)
    if not value.is_rational:
        raise _fail("expected a rational value", path)
    return value.to_fraction()


def _int(node: Any, path: str) -> int:
    if isinstance(node, bool) or not isinstance(node, int):
        raise _fail(f"expected an integer, got {type(node).__name__}", path)
    return node


def _list(node: Any, path: str) -> list:
    if not isinstance(node, list):
        raise _fail(f"expected a list, got {type(node).__name__}", path)
    return node


def _dict(node: Any, path: str) -> dict:
    if not isinstance(node, dict):
        raise _fail(f"expected an object, got {type(node).__name__}", path)
    return node


def _key(obj: dict, name: str, path: str) -> Any:
    if name not in obj:
        raise _fail(f"missing key {name!r}", path)
    return obj[name]


# ----------------------------------------------------------------------
# parsers


def parse_divisor(doc: Any, path: str = "$") -> DivisorClass:
    obj = _dict(_as_obj(doc), path)
    coeffs = _list(_key(obj, "coeffs", path), f"{path}.coeffs")
    return DivisorClass(tuple(
        _scalar(c, f"{path}.coeffs[{i}]") for i, c in enumerate(coeffs)))


def parse_pullback(doc: Any, path: str = "$") -> PullbackMap:
    obj = _dict(_as_obj(doc), path)
    matrix = _list(_key(obj, "matrix", path), f"{path}.matrix")
    rows = []
    for i, row in enumerate(matrix):
        row = _list(row, f"{path}.matrix[{i}]")
        rows.append(tuple(_scalar(x, f"{path}.matrix[{i}][{j}]")
                          for j, x in enumerate(row)))
    try:
        return PullbackMap(tuple(rows))
    except ValueError as exc:
        raise _fail(str(exc), f"{path}.matrix") from None


def parse_lattice(doc: Any, path: str = "$") -> PicardLattice:
    obj = _dict(_as_obj(doc), path)
    rank = _int(_key(obj, "rank", path), f"{path}.rank")
    labels = tuple(str(x) for x in _list(_key(obj, "labels", path), f"{path}.labels"))
    field_d = _int(obj.get("field_d", 1), f"{path}.field_d")
    cone_obj = _dict(_key(obj, "cone", path), f"{path}.cone")
    cone_type = _key(cone_obj, "type", f"{path}.cone")
    if cone_type == "orthant":
        cone: OrthantCone | QuadraticCone = OrthantCone()
    elif cone_type == "quadratic":
        gram_node = _list(_key(cone_obj, "gram", f"{path}.cone"), f"{path}.cone.gram")
        gram = []
        for i, row in enumerate(gram_node):
            row = _list(row, f"{path}.cone.gram[{i}]")
            gram.append([_rational(x, f"{path}.cone.gram[{i}][{j}]")
                         for j, x in enumerate(row)])
        linear_node = _list(_key(cone_obj, "linear", f"{path}.cone"),
                            f"{path}.cone.linear")
        linear = [_rational(x, f"{path}.cone.linear[{i}]")
                  for i, x in enumerate(linear_node)]
        try:
            cone = QuadraticCone.of(gram, linear)
        except ValueError as exc:
            raise _fail(str(exc), f"{path}.cone") from None
    else:
        raise _fail(f"unknown cone type {cone_type!r}", f"{path}.cone.type")
    witness_node = _list(_key(obj, "witness_ample", path), f"{path}.witness_ample")
    witness = DivisorClass(tuple(
        _scalar(x, f"{path}.witness_ample[{i}]") for i, x in enumerate(witness_node)))
    try:
        return PicardLattice(rank=rank, labels=labels, cone=cone,
                             witness=witness, field_d=field_d)
    except ValueError as exc:
        raise _fail(str(exc), path) from None


def parse_morphism(doc: Any, path: str = "$") -> MultiHomogeneousMap:
    obj = _dict(_as_obj(doc), path)
    signature = tuple(
        _int(n, f"{path}.signature[{i}]")
        for i, n in enumerate(_list(_key(obj, "signature", path),
                                    f"{path}.signature")))
    targets = []
    targets_node = _list(_key(obj, "targets", path), f"{path}.targets")
    for j, factor in enumerate(targets_node):
        fpath = f"{path}.targets[{j}]"
        polys = []
        for c_idx, poly_node in enumerate(_list(factor, fpath)):
            ppath = f"{fpath}[{c_idx}]"
            poly_obj = _dict(poly_node, ppath)
            terms = []
            for t_idx, term_node in enumerate(_list(_key(poly_obj, "terms", ppath),
                                                    f"{ppath}.terms")):
                tpath = f"{ppath}.terms[{t_idx}]"
                term_obj = _dict(term_node, tpath)
                c = _int(_key(term_obj, "c", tpath), f"{tpath}.c")
                e = tuple(_int(x, f"{tpath}.e[{k}]")
                          for k, x in enumerate(_list(_key(term_obj, "e", tpath),
                                                      f"{tpath}.e")))
                terms.append((c, e))
            polys.append(tuple(terms))
        targets.append(tuple(polys))
    try:
        return MultiHomogeneousMap(signature, tuple(targets))
    except ValueError as exc:
        raise _fail(str(exc), path) from None


def parse_points(doc: Any, path: str = "$") -> tuple[tuple[int, ...], list[MultiPoint]]:
    obj = _dict(_as_obj(doc), path)
    signature = tuple(
        _int(n, f"{path}.signature[{i}]")
        for i, n in enumerate(_list(_key(obj, "signature", path),
                                    f"{path}.signature")))
    points = []
    for p_idx, point_node in enumerate(_list(_key(obj, "points", path),
                                             f"{path}.points")):
        ppath = f"{path}.points[{p_idx}]"
        blocks = _list(point_node, ppath)
        if len(blocks) != len(signature):
            raise _fail(f"point has {len(blocks)} factors, signature has "
                        f"{len(signature)}", ppath)
        raw = []
        for b_idx, block in enumerate(blocks):
            bpath = f"{ppath}[{b_idx}]"
            coords = [_int(x, f"{bpath}[{k}]")
                      for k, x in enumerate(_list(block, bpath))]
            if len(coords) != signature[b_idx] + 1:
                raise _fail(f"factor needs {signature[b_idx] + 1} coordinates",
                            bpath)
            raw.append(coords)
        try:
            points.append(MultiPoint.of(raw))
        except ValueError as exc:
            raise _fail(str(exc), ppath) from None
    return signature, points


_PARSERS = {
    "cone": parse_lattice,
    "matrix": parse_pullback,
    "targets": parse_morphism,
    "coeffs": parse_divisor,
    "points": parse_points,
}


def parse_document(doc: str | bytes | dict):
    """Sniff the document type by its distinguishing key and parse."""
    obj = _as_obj(doc)
    if not isinstance(obj, dict):
        raise DocumentError("top-level document must be an object", "$")
    for key, parser in _PARSERS.items():
        if key in obj:
            return parser(obj)
    raise DocumentError(
        "unrecognized document (expected one of the keys "
        + ", ".join(repr(k) for k in _PARSERS) + ")", "$")


# ----------------------------------------------------------------------
# serializers


def _scalar_out(x: QuadraticNumber) -> str | int:
    if x.is_rational and x.a.denominator == 1:
        return int(x.a)
    return format_scalar(x)


def divisor_to_obj(D: DivisorClass) -> dict:
    return {"coeffs": [_scalar_out(c) for c in D.coeffs]}


def pullback_to_obj(M: PullbackMap) -> dict:
    return {"matrix": [[_scalar_out(x) for x in row] for row in M.entries]}


def lattice_to_obj(L: PicardLattice) -> dict:
    if isinstance(L.cone, OrthantCone):
        cone: dict = {"type": "orthant"}
    else:
        cone = {
            "type": "quadratic",
            "gram": [[_scalar_out(QuadraticNumber(x)) for x in row]
                     for row in L.cone.gram],
            "linear": [_scalar_out(QuadraticNumber(x)) for x in L.cone.linear],
        }
    return {
        "rank": L.rank,
        "labels": list(L.labels),
        "field_d": L.field_d,
        "cone": cone,
        "witness_ample": [_scalar_out(c) for c in L.witness.coeffs],
    }


def morphism_to_obj(f: MultiHomogeneousMap) -> dict:
    return {
        "signature": list(f.signature),
        "targets": [
            [{"terms": [{"c": c, "e": list(e)} for c, e in poly]}
             for poly in factor]
            for factor in f.targets
        ],
    }


def point_to_obj(P: MultiPoint) -> list[list[int]]:
    return [list(p.coords) for p in P.factors]


def dump_document(obj: dict | list, pretty: bool = False) -> str:
    return json.dumps(obj, indent=2 if pretty else None, ensure_ascii=False,
                      sort_keys=False)
