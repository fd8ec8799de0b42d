"""Batch front-end: validate algebras, build transfer tables, certify.

Exit codes: 0 success / formal, 1 check failure, 2 parse or schema error,
3 certificate "not certified" (distinct from error).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Optional

from . import serialize
from .bv import check_bv_axioms
from .certify import certificate_cross_check, certify_formality
from .engine import build_operation_table, check_formal_unit, top_degree_report
from .graded import Bidegree
from .hodge import build_transfer_data, check_side_conditions, \
    check_strong_trivialization_composites
from .models import SearchExhausted, search_nonformal
from .serialize import SchemaError

MAX_ARITY_GUARD = 7


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SchemaError(f"no such file: {path}", path) from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}", path) from None


def _report(command: str, inputs: dict, started: float, **extra) -> dict:
    doc = {"command": command, "inputs": inputs,
           "timing_s": round(time.monotonic() - started, 6)}
    doc.update(extra)
    return doc


def _emit(doc: dict, out: Optional[str] = None) -> None:
    text = serialize.dump(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    started = time.monotonic()
    doc = _load_json(args.algebra)
    algebra, gram = serialize.algebra_from_json(doc)
    if args.gram:
        gram_doc = _load_json(args.gram)
        gram = serialize.gram_from_entries(gram_doc.get("gram", gram_doc), algebra.space)
    inputs = {args.algebra: _digest(args.algebra)}
    if args.gram:
        inputs[args.gram] = _digest(args.gram)

    axioms = check_bv_axioms(algebra)
    results = [axioms.to_dict()]
    ok = axioms.passed
    if ok:
        td = build_transfer_data(algebra, gram)
        side = check_side_conditions(td, algebra)
        triv = check_strong_trivialization_composites(td, algebra)
        results += [side.to_dict(), triv.to_dict()]
        ok = side.passed and triv.passed
    _emit(_report("validate", inputs, started, results=results, passed=ok))
    return 0 if ok else 1


def cmd_transfer(args) -> int:
    started = time.monotonic()
    if args.max_arity > MAX_ARITY_GUARD and not args.force:
        raise SchemaError(
            f"--max-arity {args.max_arity} exceeds the combinatorial guard "
            f"({MAX_ARITY_GUARD}); pass --force to override", "max-arity")
    doc = _load_json(args.algebra)
    algebra, gram = serialize.algebra_from_json(doc)
    inputs = {args.algebra: _digest(args.algebra)}

    axioms = check_bv_axioms(algebra)
    if not axioms.passed:
        _emit(_report("transfer", inputs, started,
                      results=[axioms.to_dict()], passed=False))
        return 1
    td = build_transfer_data(algebra, gram)
    side = check_side_conditions(td, algebra)
    if not side.passed:
        _emit(_report("transfer", inputs, started,
                      results=[axioms.to_dict(), side.to_dict()], passed=False))
        return 1

    table = build_operation_table(algebra, td, args.max_arity)
    table_doc = serialize.table_to_json(table)
    table_doc["formal_unit"] = check_formal_unit(table).to_dict()

    top = max(algebra.space.occupied_bidegrees(), key=lambda d: (d.total, d.p))
    if top.p == top.q:
        table_doc["top_degree"] = top_degree_report(table, top.p).to_dict()
    else:
        table_doc["top_degree"] = {
            "skipped": f"top bidegree ({top.p},{top.q}) is not of the form (n,n)"}

    _emit(table_doc, args.out)
    _emit(_report("transfer", inputs, started,
                  results=[axioms.to_dict(), side.to_dict()],
                  passed=True, out=args.out))
    return 0


def cmd_certify(args) -> int:
    started = time.monotonic()
    doc = _load_json(args.footprint)
    fp = serialize.footprint_from_json(doc)
    inputs = {args.footprint: _digest(args.footprint)}
    cert = certify_formality(fp, assume_top_bottom=args.assume_top_bottom)
    _emit(_report("certify", inputs, started, certificate=cert.to_dict(),
                  verdict=cert.verdict))
    return 0 if cert.formal else 3


def cmd_search(args) -> int:
    started = time.monotonic()
    try:
        model = search_nonformal(max_dim=args.max_dim, seed=args.seed)
    except SearchExhausted as exc:
        _emit(_report("search", {}, started, passed=False, error=str(exc)))
        return 1
    doc = serialize.algebra_to_json(model.algebra, model.inner_product)
    if args.out:
        _emit(doc, args.out)
    _emit(_report("search", {}, started, passed=True, model=model.name,
                  witness=model.witness, out=args.out))
    return 0


def _bool_flag(value: str) -> bool:
    if value.lower() in ("true", "1", "yes"):
        return True
    if value.lower() in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvhy",
        description="Homotopy transfer and formality certificates for "
                    "finite-dimensional dg BV-algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check BV axioms and transfer identities")
    p.add_argument("algebra", help="algebra JSON file")
    p.add_argument("--gram", help="separate Gram-matrix JSON file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("transfer", help="build the transferred operation table")
    p.add_argument("algebra", help="algebra JSON file")
    p.add_argument("--max-arity", type=int, default=4)
    p.add_argument("--out", help="write the table JSON here instead of stdout")
    p.add_argument("--force", action="store_true",
                   help="override the arity guard")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("certify", help="run the degree-counting certificate")
    p.add_argument("footprint", help="footprint JSON file")
    p.add_argument("--assume-top-bottom", type=_bool_flag, default=True,
                   metavar="BOOL")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", help="search for a non-formality witness")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-dim", type=int, default=24)
    p.add_argument("--out", help="write the witness algebra JSON here")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
