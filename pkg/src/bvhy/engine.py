"""Evaluation of decorated trees and assembly of transferred operations.

A tree with k leaves is evaluated by decorating the leaves with ``iota``,
internal edges with ``h``, vertices with the algebra's product, bracket or
delta, and the root with ``pi``.  Koszul signs arise when the odd operator
``h`` passes over the already-assembled value of a left sibling.

``TreeEvaluator`` materializes, per subtree, the table of values on all
harmonic basis tuples, cached under the leaf-relabelled canonical form so
that trees sharing subtrees share work.  Zero values are never stored, so
on strongly trivialized models the tables collapse early and evaluation of
large tree sets stays cheap.  ``naive_evaluate_tree`` is the independent
reference path: direct recursion, no canonical forms, no caching.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .bv import BVAlgebra
from .graded import Bidegree, Element, koszul_sign
from .hodge import TransferData
from .reporting import CheckReport
from .trees import (DecoratedTree, enumerate_trees, leaf, tree_bidegree,
                    unparse_tree)

Constants = Dict[Tuple[str, ...], Dict[str, Fraction]]


@dataclass
class OperationSpec:
    """Formal sum of same-arity tree classes with rational coefficients."""

    arity: int
    terms: List[Tuple[Fraction, DecoratedTree]]
    bracket_count: Optional[int] = None

    def __post_init__(self):
        for _c, t in self.terms:
            if t.arity != self.arity:
                raise ValueError("tree arity differs from spec arity")
            if self.bracket_count is not None \
                    and t.bracket_count != self.bracket_count:
                raise ValueError("spec flagged homogeneous but bracket counts differ")


def _normalize_leaves(t: DecoratedTree) -> DecoratedTree:
    """Relabel leaves to 1..m preserving label order, for table sharing."""
    labels = sorted(t.leaves())
    remap = {old: i + 1 for i, old in enumerate(labels)}

    def rec(node: DecoratedTree) -> DecoratedTree:
        if node.is_leaf:
            return leaf(remap[node.label])
        return DecoratedTree(node.kind, children=tuple(rec(c) for c in node.children))

    return rec(t)


class TreeEvaluator:
    """Memoized evaluation of decorated trees over the harmonic basis."""

    def __init__(self, algebra: BVAlgebra, td: TransferData):
        self.algebra = algebra
        self.td = td
        self._tables: Dict[str, Dict[Tuple[str, ...], Element]] = {}
        self._root_tables: Dict[str, Constants] = {}

    def value_table(self, t: DecoratedTree) -> Dict[Tuple[str, ...], Element]:
        """Nonzero pre-projection values on harmonic basis tuples.

        Keys are tuples of harmonic basis names in increasing leaf-label
        order; values live in the big algebra (pi not yet applied).
        """
        norm = _normalize_leaves(t)
        key = unparse_tree(norm)
        if key not in self._tables:
            self._tables[key] = self._build(norm)
        return self._tables[key]

    def _edge_value(self, child: DecoratedTree, v: Element) -> Element:
        """Apply the internal-edge homotopy when the child is a vertex."""
        return self.td.h(v) if not child.is_leaf else v

    def _build(self, t: DecoratedTree) -> Dict[Tuple[str, ...], Element]:
        a, td = self.algebra, self.td
        if t.is_leaf:
            return {(n,): td.iota(td.cohomology.basis_element(n))
                    for n in td.cohomology.names}
        if t.kind == "del":
            child = t.children[0]
            table = {}
            for k, v in self.value_table(child).items():
                w = a.delta(self._edge_value(child, v))
                if not w.is_zero:
                    table[k] = w
            return table

        left, right = t.children
        tl = self.value_table(left)
        tr = self.value_table(right)
        combine = a.multiply if t.kind == "mul" else a.bracket
        nl, nr = len(left.leaves()), len(right.leaves())
        # leaf labels of a normalized tree partition 1..k; parent keys are
        # ordered by label, so merge child keys by label position
        labels_l = sorted(left.leaves())
        labels_r = sorted(right.leaves())
        order = sorted(range(nl + nr),
                       key=lambda i: (labels_l + labels_r)[i])
        table: Dict[Tuple[str, ...], Element] = {}
        right_internal = not right.is_leaf
        for kl, vl0 in tl.items():
            vl = self._edge_value(left, vl0)
            if vl.is_zero:
                continue
            sign = koszul_sign(1, vl.total_degree) if right_internal else Fraction(1)
            for kr, vr0 in tr.items():
                vr = self._edge_value(right, vr0)
                if vr.is_zero:
                    continue
                w = combine(vl, vr.scale(sign))
                if w.is_zero:
                    continue
                merged = kl + kr
                table[tuple(merged[i] for i in order)] = w
        return table

    def operation_constants(self, t: DecoratedTree) -> Constants:
        """Structure constants of the induced operation on cohomology."""
        norm = _normalize_leaves(t)
        key = unparse_tree(norm)
        if key not in self._root_tables:
            out: Constants = {}
            for k, v in self.value_table(norm).items():
                w = self.td.pi(v)
                if not w.is_zero:
                    out[k] = dict(w.coeffs)
            self._root_tables[key] = out
        return self._root_tables[key]

    def evaluate(self, t: DecoratedTree, args: List[Element]) -> Element:
        """Multilinear evaluation on homogeneous cohomology elements."""
        if len(args) != t.arity:
            raise ValueError(f"tree has arity {t.arity}, got {len(args)} arguments")
        for x in args:
            if x.space.names != self.td.cohomology.names:
                raise ValueError("argument outside the cohomology space")
        constants = self.operation_constants(t)
        H = self.td.cohomology
        out_deg = None
        if all(x.bidegree is not None for x in args):
            out_deg = Bidegree(*map(sum, zip(*(x.bidegree for x in args)))) \
                + tree_bidegree(t)
        acc: Dict[str, Fraction] = {}
        _accumulate(constants, args, acc)
        return Element(H, out_deg, acc)


def _accumulate(constants: Constants, args: List[Element],
                acc: Dict[str, Fraction]) -> None:
    k = len(args)

    def rec(i: int, key: List[str], coeff: Fraction) -> None:
        if i == k:
            for name, v in constants.get(tuple(key), {}).items():
                acc[name] = acc.get(name, Fraction(0)) + coeff * v
            return
        for n, c in args[i].coeffs.items():
            key.append(n)
            rec(i + 1, key, coeff * c)
            key.pop()

    rec(0, [], Fraction(1))


def evaluate_tree(t: DecoratedTree, a: BVAlgebra, td: TransferData,
                  args: List[Element],
                  evaluator: Optional[TreeEvaluator] = None) -> Element:
    if evaluator is None:
        evaluator = TreeEvaluator(a, td)
    return evaluator.evaluate(t, args)


def naive_evaluate_tree(t: DecoratedTree, a: BVAlgebra, td: TransferData,
                        args: List[Element]) -> Element:
    """Reference evaluator: plain recursion, no tables, no normal forms."""
    if len(args) != t.arity:
        raise ValueError(f"tree has arity {t.arity}, got {len(args)} arguments")

    def edge(child: DecoratedTree, v: Element) -> Element:
        return td.h(v) if not child.is_leaf else v

    def rec(node: DecoratedTree) -> Element:
        if node.is_leaf:
            return td.iota(args[node.label - 1])
        if node.kind == "del":
            return a.delta(edge(node.children[0], rec(node.children[0])))
        left, right = node.children
        vl = edge(left, rec(left))
        vr = edge(right, rec(right))
        if not right.is_leaf:
            vr = vr.scale(koszul_sign(1, vl.total_degree))
        op = a.multiply if node.kind == "mul" else a.bracket
        return op(vl, vr)

    return td.pi(rec(t))


def strict_hy_spec(k: int) -> OperationSpec:
    """Trees with exactly one product vertex (the strict operations)."""
    if k < 2:
        raise ValueError("strict operations need arity >= 2")
    trees = enumerate_trees(k, constraints={"product_count": 1})
    return OperationSpec(k, [(Fraction(1), t) for t in trees],
                         bracket_count=k - 2)


def higher_op_specs(k: int) -> List[OperationSpec]:
    """One homogeneous spec per bracket count l in [0, k-3]."""
    if k < 3:
        raise ValueError("no higher operations below arity 3")
    specs = []
    for l in range(0, k - 2):
        trees = enumerate_trees(
            k, constraints={"bracket_count": l, "lie_type_excluded": True})
        specs.append(OperationSpec(k, [(Fraction(1), t) for t in trees],
                                   bracket_count=l))
    return specs


def transferred_operation(spec: OperationSpec, a: BVAlgebra, td: TransferData,
                          evaluator: Optional[TreeEvaluator] = None) -> Constants:
    """Coefficient-weighted sum of the spec's trees as structure constants."""
    if evaluator is None:
        evaluator = TreeEvaluator(a, td)
    out: Constants = {}
    for coeff, t in spec.terms:
        if coeff == 0:
            continue
        for key, col in evaluator.operation_constants(t).items():
            dst = out.setdefault(key, {})
            for name, v in col.items():
                dst[name] = dst.get(name, Fraction(0)) + coeff * v
    for key in list(out):
        out[key] = {n: v for n, v in out[key].items() if v != 0}
        if not out[key]:
            del out[key]
    return out


class OperationTable:
    """Transferred operations on cohomology, indexed by (arity, brackets)."""

    def __init__(self, algebra: BVAlgebra, td: TransferData):
        self.algebra = algebra
        self.td = td
        self.ops: Dict[Tuple[int, int], Constants] = {}

    def set(self, k: int, l: int, constants: Constants) -> None:
        self.ops[(k, l)] = constants

    def nonzero_keys(self) -> List[Tuple[int, int]]:
        return sorted(kl for kl, c in self.ops.items() if c)

    def unit_class(self) -> str:
        """Harmonic basis name whose inclusion is the algebra unit."""
        target = {self.algebra.unit: Fraction(1)}
        for n in self.td.cohomology.names:
            if self.td.iota.entries.get(n, {}) == target:
                return n
        raise ValueError("unit class is not a harmonic basis element")

    def validate_bidegrees(self) -> List[Tuple]:
        """Entries violating the (-l, -k+2) bidegree law, if any."""
        H = self.td.cohomology
        bad = []
        for (k, l), constants in self.ops.items():
            shift = Bidegree(-l, -k + 2)
            for key, col in constants.items():
                in_deg = Bidegree(*map(sum, zip(*(H.bidegree[n] for n in key))))
                expect = in_deg + shift
                for name in col:
                    if H.bidegree[name] != expect:
                        bad.append((k, l, key, name))
        return bad


def build_operation_table(a: BVAlgebra, td: TransferData, max_arity: int,
                          evaluator: Optional[TreeEvaluator] = None) -> OperationTable:
    if evaluator is None:
        evaluator = TreeEvaluator(a, td)
    table = OperationTable(a, td)
    for k in range(2, max_arity + 1):
        strict = strict_hy_spec(k)
        table.set(k, k - 2, transferred_operation(strict, a, td, evaluator))
        if k >= 3:
            for spec in higher_op_specs(k):
                table.set(k, spec.bracket_count,
                          transferred_operation(spec, a, td, evaluator))
    return table


def truncate_to_strict(table: OperationTable) -> OperationTable:
    """Keep only the strict entries (l = k - 2); higher ones are dropped."""
    out = OperationTable(table.algebra, table.td)
    for (k, l), constants in table.ops.items():
        if l == k - 2:
            out.set(k, l, {key: dict(col) for key, col in constants.items()})
    return out


def check_formal_unit(table: OperationTable,
                      unit_class: Optional[str] = None) -> CheckReport:
    """Unit class acts as identity for the product and kills every other
    stored operation when placed in any argument slot."""
    report = CheckReport("formal-unit")
    u = unit_class if unit_class is not None else table.unit_class()
    H = table.td.cohomology

    witness = None
    product = table.ops.get((2, 0), {})
    for x in H.names:
        for key in ((u, x), (x, u)):
            if product.get(key, {}) != {x: Fraction(1)}:
                witness = key
                break
        if witness:
            break
    report.add("product with unit class is the identity", witness is None, witness)

    witness = None
    for (k, l), constants in sorted(table.ops.items()):
        if (k, l) == (2, 0):
            continue
        for key, col in constants.items():
            if u in key and col:
                witness = (k, l, key)
                break
        if witness:
            break
    report.add("non-product operations vanish on the unit class",
               witness is None, witness)
    return report


def top_degree_report(table: OperationTable, n: int) -> CheckReport:
    """Nonzero outputs in bidegree (n,n) may come only from the product."""
    report = CheckReport("top-degree")
    H = table.td.cohomology
    top = Bidegree(n, n)
    offenders = []
    for (k, l), constants in sorted(table.ops.items()):
        for key, col in constants.items():
            if any(H.bidegree[name] == top and v != 0 for name, v in col.items()):
                if (k, l) != (2, 0):
                    offenders.append((k, l, key))
    report.add("only the product outputs in the top bidegree",
               not offenders, offenders[:5] or None)
    return report
