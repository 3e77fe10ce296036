"""JSON module files: the on-disk format of the workbench.

A module file is a JSON document with expression-string entries under the
polynomial grammar of `exprparse`:

    {
      "ring": {"p": 5, "n": 1, "d": 1, "s": 1},
      "hodge_range": [0, 1],
      "basis": [{"name": "e0", "level": 0, "torsion": 1},
                {"name": "e1", "level": 1, "torsion": 1}],
      "lifts": {"Phi": ["0"], "Psi": ["1"]},
      "connection": [[["0", "1"], ["0", "0"]]],
      "frobenius": {"lift": "Phi", "matrix": [["1", "0"], ["0", "1"]]}
    }

"connection" holds one matrix per slot in the dlog frame; entry (i, k) of a
matrix multiplies e_i in nabla(delta_j)(e_k), and Frobenius columns are the
phi-images of the tilde basis.  "lifts" maps names to u-vectors defining
Phi(T_j) = (1 + p u_j) T_j^p.  All structural invariants are re-validated
after parsing.

A map file describes a unit-monomial ring map together with a lift on its
target:

    {
      "source_ring": {...}, "target_ring": {...},
      "images": [{"c": 1, "monomial": [5], "h": "0"}],
      "target_lift": ["0"]
    }
"""

from __future__ import annotations

import json

from .exprparse import ParseError, parse_expr
from .ffmodule import BasisVector, InvariantViolationError, LogFFModule
from .logring import FrobLift, RingMap, RingSpec
from .matrices import Matrix


def _spec_from_dict(doc: dict) -> RingSpec:
    try:
        return RingSpec(int(doc["p"]), int(doc["n"]), int(doc["d"]), int(doc["s"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvariantViolationError("ring", str(exc)) from None


def _spec_to_dict(spec: RingSpec) -> dict:
    return {"p": spec.p, "n": spec.n, "d": spec.d, "s": spec.s}


def _matrix_from_lists(rows, spec: RingSpec, what: str) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InvariantViolationError(what, "matrix must be a list of rows")
    return Matrix(spec, [[parse_expr(entry, spec) for entry in row] for row in rows])


def _matrix_to_lists(mat: Matrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in mat.rows]


def module_from_dict(doc: dict, wide_range: bool = False
                     ) -> tuple[LogFFModule, dict[str, FrobLift]]:
    spec = _spec_from_dict(doc.get("ring", {}))
    try:
        a, b = (int(v) for v in doc["hodge_range"])
        basis = [BasisVector(str(v["name"]), int(v["level"]), int(v["torsion"]))
                 for v in doc["basis"]]
        lift_docs = doc["lifts"]
        conn_docs = doc["connection"]
        frob_doc = doc["frobenius"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvariantViolationError("document_shape", str(exc)) from None
    lifts = {}
    for name, uvec in lift_docs.items():
        if len(uvec) != spec.d:
            raise InvariantViolationError("lift", f"{name}: need {spec.d} unit parts")
        lifts[name] = FrobLift(spec, [parse_expr(e, spec) for e in uvec])
    if len(conn_docs) != spec.d:
        raise InvariantViolationError("connection_shape", f"need {spec.d} matrices")
    connection = [_matrix_from_lists(m, spec, "connection") for m in conn_docs]
    frob_name = frob_doc.get("lift")
    if frob_name not in lifts:
        raise InvariantViolationError("frobenius", f"unknown lift {frob_name!r}")
    frobenius = _matrix_from_lists(frob_doc["matrix"], spec, "frobenius")
    module = LogFFModule(spec, (a, b), basis, connection, lifts[frob_name], frobenius,
                         wide_range=wide_range)
    return module, lifts


def module_to_dict(module: LogFFModule, lifts: dict[str, FrobLift],
                   frobenius_lift: str) -> dict:
    if lifts.get(frobenius_lift) != module.lift:
        raise ValueError(f"lift {frobenius_lift!r} does not match the module's lift")
    return {
        "ring": _spec_to_dict(module.spec),
        "hodge_range": list(module.hodge_range),
        "basis": [{"name": v.name, "level": v.level, "torsion": v.torsion}
                  for v in module.basis],
        "lifts": {name: [str(u) for u in lift.u] for name, lift in sorted(lifts.items())},
        "connection": [_matrix_to_lists(m) for m in module.connection],
        "frobenius": {"lift": frobenius_lift, "matrix": _matrix_to_lists(module.frobenius)},
    }


def parse_module_file(text: str, wide_range: bool = False
                      ) -> tuple[LogFFModule, dict[str, FrobLift]]:
    """Parse and validate a JSON module file; ParseError or
    InvariantViolationError carry the first problem found."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos, text) from None
    if not isinstance(doc, dict):
        raise InvariantViolationError("document_shape", "top level must be an object")
    return module_from_dict(doc, wide_range=wide_range)


def serialize_module(module: LogFFModule, lifts: dict[str, FrobLift],
                     frobenius_lift: str) -> str:
    return json.dumps(module_to_dict(module, lifts, frobenius_lift), indent=2) + "\n"


def map_from_dict(doc: dict) -> tuple[RingMap, FrobLift]:
    source = _spec_from_dict(doc.get("source_ring", {}))
    target = _spec_from_dict(doc.get("target_ring", {}))
    try:
        image_docs = doc["images"]
        lift_doc = doc["target_lift"]
    except (KeyError, TypeError) as exc:
        raise InvariantViolationError("document_shape", str(exc)) from None
    images = []
    for img in image_docs:
        try:
            c = int(img["c"])
            exps = tuple(int(e) for e in img["monomial"])
            h = parse_expr(img.get("h", "0"), target)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvariantViolationError("map_image", str(exc)) from None
        images.append((c, exps, h))
    ring_map = RingMap(source, target, images)
    if len(lift_doc) != target.d:
        raise InvariantViolationError("target_lift", f"need {target.d} unit parts")
    lift = FrobLift(target, [parse_expr(e, target) for e in lift_doc])
    return ring_map, lift


def parse_map_file(text: str) -> tuple[RingMap, FrobLift]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos, text) from None
    return map_from_dict(doc)


def map_to_dict(ring_map: RingMap, lift: FrobLift) -> dict:
    return {
        "source_ring": _spec_to_dict(ring_map.source),
        "target_ring": _spec_to_dict(ring_map.target),
        "images": [{"c": c, "monomial": list(exps), "h": str(h)}
                   for c, exps, h in ring_map.images],
        "target_lift": [str(u) for u in lift.u],
    }
