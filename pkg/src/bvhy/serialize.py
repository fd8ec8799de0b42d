"""Versioned JSON formats for algebras, footprints, and operation tables.

Scalars are decimal-rational strings ("3/2", "-1", "5").  All documents
carry ``"schema": 1``.  Serialization is deterministic (sorted keys,
sorted entry lists) so exports are diffable and byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .bv import BVAlgebra
from .certify import Footprint
from .engine import OperationTable
from .graded import Bidegree, BigradedSpace, GradedMap
from .hodge import InnerProduct

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Malformed or out-of-schema input; carries a location string."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


def scalar_to_str(x: Fraction) -> str:
    return str(x)


def parse_scalar(text, location: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"invalid rational scalar {text!r}", location) from None


def _require(cond: bool, message: str, location: str) -> None:
    if not cond:
        raise SchemaError(message, location)


def _check_schema(doc: dict, location: str) -> None:
    _require(isinstance(doc, dict), "document must be a JSON object", location)
    _require(doc.get("schema") == SCHEMA_VERSION,
             f"unsupported schema {doc.get('schema')!r}", location)


def _map_entries(doc, key: str, space: BigradedSpace, shift: Bidegree) -> GradedMap:
    out = GradedMap.zero(space, space, shift)
    for i, row in enumerate(doc.get(key, [])):
        loc = f"{key}[{i}]"
        _require(isinstance(row, list) and len(row) == 3,
                 "expected [source, target, scalar]", loc)
        src, tgt, val = row
        _require(src in space.bidegree, f"unknown basis element {src!r}", loc)
        _require(tgt in space.bidegree, f"unknown basis element {tgt!r}", loc)
        out.set_entry(src, tgt, parse_scalar(val, loc))
    bad = out.validate_shift()
    if bad:
        s, t = bad[0]
        raise SchemaError(
            f"entry {s!r} -> {t!r} violates the shift {tuple(shift)}", key)
    return out


def algebra_from_json(doc: dict) -> Tuple[BVAlgebra, Optional[InnerProduct]]:
    _check_schema(doc, "algebra")
    basis = []
    raw = doc.get("basis")
    _require(isinstance(raw, list) and raw, "missing or empty basis", "basis")
    for i, entry in enumerate(raw):
        loc = f"basis[{i}]"
        _require(isinstance(entry, dict), "expected an object", loc)
        name = entry.get("name")
        _require(isinstance(name, str) and name, "missing basis name", loc)
        loc = f"basis[{i}] ({name})"
        p, q = entry.get("p"), entry.get("q")
        _require(isinstance(p, int) and isinstance(q, int),
                 f"malformed bidegree p={p!r} q={q!r}", loc)
        basis.append((name, Bidegree(p, q)))
    try:
        space = BigradedSpace(basis)
    except ValueError as exc:
        raise SchemaError(str(exc), "basis") from None

    unit = doc.get("unit")
    _require(isinstance(unit, str) and unit in space.bidegree,
             f"unit {unit!r} is not a basis element", "unit")

    d = _map_entries(doc, "d", space, Bidegree(0, 1))
    delta = _map_entries(doc, "delta", space, Bidegree(-1, 0))

    product = {}
    for i, row in enumerate(doc.get("product", [])):
        loc = f"product[{i}]"
        _require(isinstance(row, list) and len(row) == 4,
                 "expected [x, y, target, scalar]", loc)
        x, y, tgt, val = row
        for nm in (x, y, tgt):
            _require(nm in space.bidegree, f"unknown basis element {nm!r}", loc)
        product.setdefault((x, y), {})[tgt] = parse_scalar(val, loc)

    try:
        algebra = BVAlgebra(space, d, delta, product, unit)
    except ValueError as exc:
        raise SchemaError(str(exc), "algebra") from None

    gram = None
    if "gram" in doc:
        gram = gram_from_entries(doc["gram"], space)
    return algebra, gram


def gram_from_entries(raw, space: BigradedSpace) -> InnerProduct:
    _require(isinstance(raw, list), "gram must be a list of entries", "gram")
    entries = []
    for i, row in enumerate(raw):
        loc = f"gram[{i}]"
        _require(isinstance(row, list) and len(row) == 3,
                 "expected [x, y, scalar]", loc)
        x, y, val = row
        for nm in (x, y):
            _require(nm in space.bidegree, f"unknown basis element {nm!r}", loc)
        entries.append((x, y, parse_scalar(val, loc)))
    try:
        return InnerProduct.from_entries(space, entries)
    except ValueError as exc:
        raise SchemaError(str(exc), "gram") from None


def algebra_to_json(a: BVAlgebra, ip: Optional[InnerProduct] = None) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "basis": [{"name": n, "p": a.space.bidegree[n].p,
                   "q": a.space.bidegree[n].q} for n in a.space.names],
        "unit": a.unit,
        "d": [[s, t, scalar_to_str(v)] for s, t, v in a.d.nonzero_entries()],
        "delta": [[s, t, scalar_to_str(v)]
                  for s, t, v in a.delta.nonzero_entries()],
        "product": sorted(
            [x, y, t, scalar_to_str(v)]
            for (x, y), col in a.product.items() for t, v in col.items()),
    }
    if ip is not None:
        gram = []
        for deg in a.space.occupied_bidegrees():
            names = a.space.names_at(deg)
            block = ip.block(deg)
            for i in range(len(names)):
                for j in range(i, len(names)):
                    if block[i][j] != (1 if i == j else 0):
                        gram.append([names[i], names[j],
                                     scalar_to_str(block[i][j])])
        if gram:
            doc["gram"] = sorted(gram)
    return doc


def footprint_from_json(doc: dict) -> Footprint:
    _check_schema(doc, "footprint")
    n = doc.get("n")
    _require(isinstance(n, int) and n >= 1, f"invalid dimension n={n!r}", "n")
    convention = doc.get("convention", "polyvector")
    _require(convention in ("forms", "polyvector"),
             f"unknown convention {convention!r}", "convention")
    occupied: Dict[Bidegree, int] = {}
    raw = doc.get("occupied")
    _require(isinstance(raw, list), "missing occupied list", "occupied")
    for i, entry in enumerate(raw):
        loc = f"occupied[{i}]"
        _require(isinstance(entry, dict), "expected an object", loc)
        p, q, dim = entry.get("p"), entry.get("q"), entry.get("dim")
        _require(isinstance(p, int) and isinstance(q, int),
                 f"malformed bidegree p={p!r} q={q!r}", loc)
        _require(isinstance(dim, int) and dim >= 0,
                 f"invalid dimension {dim!r}", loc)
        if convention == "forms":
            # contraction with the volume form reverses the first index
            p = n - p
        deg = Bidegree(p, q)
        occupied[deg] = occupied.get(deg, 0) + dim
    return Footprint(n, occupied)


def footprint_to_json(fp: Footprint) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "n": fp.n,
        "convention": "polyvector",
        "occupied": [{"p": deg.p, "q": deg.q, "dim": dim}
                     for deg, dim in sorted(fp.occupied.items())],
    }


def table_to_json(table: OperationTable) -> dict:
    H = table.td.cohomology
    ops = []
    for (k, l), constants in sorted(table.ops.items()):
        entries = sorted(
            list(key) + [name, scalar_to_str(v)]
            for key, col in constants.items() for name, v in col.items())
        ops.append({"arity": k, "brackets": l,
                    "kind": "strict" if l == k - 2 else "higher",
                    "entries": entries})
    return {
        "schema": SCHEMA_VERSION,
        "cohomology": [{"name": n, "p": H.bidegree[n].p, "q": H.bidegree[n].q}
                       for n in H.names],
        "operations": ops,
    }


def dump(doc: dict) -> str:
    # failure witnesses may carry Fractions; render them as strings
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
