"""Bigraded vector spaces, homogeneous elements, and degree-shifting maps.

Scalars are exact rationals throughout.  A map carries a fixed bidegree
shift and every nonzero entry must connect basis elements whose bidegrees
differ by exactly that shift; ``GradedMap.validate_shift`` enforces this.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

Scalar = Fraction


class Bidegree(NamedTuple):
    p: int
    q: int

    def __add__(self, other) -> "Bidegree":
        return Bidegree(self.p + other[0], self.q + other[1])

    def __neg__(self) -> "Bidegree":
        return Bidegree(-self.p, -self.q)

    @property
    def total(self) -> int:
        return self.p + self.q


def koszul_sign(deg_passed: int, deg_over: int) -> Scalar:
    """Sign picked up when something of degree ``deg_passed`` moves past
    something of degree ``deg_over``: (-1)^(deg_passed * deg_over)."""
    return Fraction(-1) if (deg_passed * deg_over) % 2 else Fraction(1)


class BigradedSpace:
    """Ordered basis of named elements, each carrying a bidegree."""

    def __init__(self, basis: Iterable[Tuple[str, Bidegree]]):
        self.names: List[str] = []
        self.bidegree: Dict[str, Bidegree] = {}
        for name, deg in basis:
            if name in self.bidegree:
                raise ValueError(f"duplicate basis name {name!r}")
            self.names.append(name)
            self.bidegree[name] = Bidegree(*deg)
        self.index = {n: i for i, n in enumerate(self.names)}
        self._by_bidegree: Dict[Bidegree, List[str]] = {}
        for n in self.names:
            self._by_bidegree.setdefault(self.bidegree[n], []).append(n)

    @property
    def dim(self) -> int:
        return len(self.names)

    def names_at(self, deg: Bidegree) -> List[str]:
        return self._by_bidegree.get(Bidegree(*deg), [])

    def occupied_bidegrees(self) -> List[Bidegree]:
        return sorted(self._by_bidegree)

    def basis_element(self, name: str) -> "Element":
        if name not in self.bidegree:
            raise ValueError(f"{name!r} is not a basis element")
        return Element(self, self.bidegree[name], {name: Fraction(1)})

    def zero(self, deg: Optional[Bidegree] = None) -> "Element":
        return Element(self, deg, {})

    def __contains__(self, name: str) -> bool:
        return name in self.bidegree

    def __repr__(self):
        return f"BigradedSpace(dim={self.dim})"


@dataclass
class Element:
    """Homogeneous element: a linear combination of basis elements sharing
    one bidegree.  The zero element may carry a bidegree or ``None``."""

    space: BigradedSpace
    bidegree: Optional[Bidegree]
    coeffs: Dict[str, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {n: c for n, c in self.coeffs.items() if c != 0}
        for n in self.coeffs:
            if n not in self.space.bidegree:
                raise ValueError(f"{n!r} not in space")
            if self.bidegree is not None and self.space.bidegree[n] != self.bidegree:
                raise ValueError(f"{n!r} is not homogeneous of bidegree {self.bidegree}")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def total_degree(self) -> int:
        if self.bidegree is None:
            return 0
        return self.bidegree.total

    def scale(self, c: Scalar) -> "Element":
        return Element(self.space, self.bidegree, {n: c * v for n, v in self.coeffs.items()})

    def __add__(self, other: "Element") -> "Element":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.bidegree != other.bidegree:
            raise ValueError("sum of elements of different bidegrees is not homogeneous")
        out = dict(self.coeffs)
        for n, v in other.coeffs.items():
            out[n] = out.get(n, Fraction(0)) + v
        return Element(self.space, self.bidegree, out)

    def __sub__(self, other: "Element") -> "Element":
        return self + other.scale(Fraction(-1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.coeffs == other.coeffs and (
            self.is_zero or self.bidegree == other.bidegree
        )

    def __repr__(self):
        if self.is_zero:
            return "0"
        return " + ".join(f"{c}*{n}" for n, c in sorted(self.coeffs.items()))


class GradedMap:
    """Linear map between bigraded spaces with a fixed bidegree shift.

    Entries are stored column-sparse: ``entries[src][tgt] = coefficient``.
    """

    def __init__(self, source: BigradedSpace, target: BigradedSpace,
                 shift: Bidegree, entries: Optional[Dict[str, Dict[str, Scalar]]] = None):
        self.source = source
        self.target = target
        self.shift = Bidegree(*shift)
        self.entries: Dict[str, Dict[str, Scalar]] = {}
        if entries:
            for src, col in entries.items():
                for tgt, c in col.items():
                    if c != 0:
                        self.entries.setdefault(src, {})[tgt] = c

    @classmethod
    def identity(cls, space: BigradedSpace) -> "GradedMap":
        return cls(space, space, Bidegree(0, 0),
                   {n: {n: Fraction(1)} for n in space.names})

    @classmethod
    def zero(cls, source: BigradedSpace, target: BigradedSpace,
             shift: Bidegree) -> "GradedMap":
        return cls(source, target, shift, {})

    @property
    def total_degree(self) -> int:
        return self.shift.total

    def set_entry(self, src: str, tgt: str, c: Scalar) -> None:
        if c == 0:
            self.entries.get(src, {}).pop(tgt, None)
        else:
            self.entries.setdefault(src, {})[tgt] = c

    def entry(self, src: str, tgt: str) -> Scalar:
        return self.entries.get(src, {}).get(tgt, Fraction(0))

    def apply(self, x: Element) -> Element:
        if x.space is not self.source and x.space.names != self.source.names:
            raise ValueError("element not in the source space")
        out: Dict[str, Scalar] = {}
        for n, c in x.coeffs.items():
            for tgt, v in self.entries.get(n, {}).items():
                out[tgt] = out.get(tgt, Fraction(0)) + c * v
        deg = None if x.bidegree is None else x.bidegree + self.shift
        return Element(self.target, deg, out)

    def __call__(self, x: Element) -> Element:
        return self.apply(x)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other (self o other)."""
        if other.target.names != self.source.names:
            raise ValueError("space mismatch in composition")
        out = GradedMap(other.source, self.target, other.shift + self.shift)
        for src, col in other.entries.items():
            acc: Dict[str, Scalar] = {}
            for mid, c in col.items():
                for tgt, v in self.entries.get(mid, {}).items():
                    acc[tgt] = acc.get(tgt, Fraction(0)) + c * v
            for tgt, v in acc.items():
                if v != 0:
                    out.entries.setdefault(src, {})[tgt] = v
        return out

    def __add__(self, other: "GradedMap") -> "GradedMap":
        if self.shift != other.shift:
            raise ValueError("cannot add maps of different shifts")
        out = GradedMap(self.source, self.target, self.shift,
                        {s: dict(c) for s, c in self.entries.items()})
        for src, col in other.entries.items():
            for tgt, v in col.items():
                out.set_entry(src, tgt, out.entry(src, tgt) + v)
        return out

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Scalar) -> "GradedMap":
        return GradedMap(self.source, self.target, self.shift,
                         {s: {t: c * v for t, v in col.items()}
                          for s, col in self.entries.items()})

    @property
    def is_zero(self) -> bool:
        return all(not col for col in self.entries.values())

    def nonzero_entries(self) -> List[Tuple[str, str, Scalar]]:
        return [(s, t, v) for s, col in sorted(self.entries.items())
                for t, v in sorted(col.items())]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.shift == other.shift
                and self.nonzero_entries() == other.nonzero_entries())

    def validate_shift(self) -> List[Tuple[str, str]]:
        """Entries violating the shift invariant; empty list means valid."""
        bad = []
        for src, col in self.entries.items():
            sdeg = self.source.bidegree[src]
            for tgt in col:
                if self.target.bidegree[tgt] != sdeg + self.shift:
                    bad.append((src, tgt))
        return bad

    def block(self, deg: Bidegree):
        """Dense block at source bidegree ``deg`` (rows: target names at
        deg+shift, cols: source names at deg), plus the two name lists."""
        deg = Bidegree(*deg)
        src_names = self.source.names_at(deg)
        tgt_names = self.target.names_at(deg + self.shift)
        block = [[self.entry(s, t) for s in src_names] for t in tgt_names]
        return block, src_names, tgt_names


def apply_in_slot(f: GradedMap, slot: int, args: List[Element]) -> Element:
    """Apply ``f`` to ``args[slot-1]`` with the Koszul sign from moving
    ``f`` past the arguments to the left of that slot (slots are 1-based)."""
    if not 1 <= slot <= len(args):
        raise ValueError(f"slot {slot} out of range for arity {len(args)}")
    passed = sum(a.total_degree for a in args[: slot - 1])
    sign = koszul_sign(f.total_degree, passed)
    return f.apply(args[slot - 1]).scale(sign)
