"""Length, stick, and ribbonlength measurement for flat ribbon diagrams.

Ribbonlength is total centerline length divided by ribbon width.  Lengths
are kept exact whenever every edge lies on the constructions' grid: an
edge whose squared length is a perfect rational square contributes a
rational, one whose squared length is twice a perfect square contributes
a rational multiple of sqrt(2), and everything combines as ``a + b*sqrt(2)``
with rational a, b.  As soon as an edge falls off that grid the whole
measurement degrades to a float and comparisons get a 1e-12 tolerance.

Stick counting merges runs of collinear consecutive edges (a "fold" of
angle pi is no fold at all), so the count reflects the edges of the
underlying polygon rather than how finely a strand happened to be
subdivided when it was built or deserialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Union

from .errors import EmptyDiagram, ParameterError
from .families import (
    FamilySpec,
    Hopf,
    Pretzel,
    Torus2,
    Twist,
)
from .geometry import RibbonDiagram, Strand

__all__ = [
    "NUMERIC_TOLERANCE",
    "LengthValue",
    "MetricReport",
    "BoundRow",
    "measure",
    "check_crossing_bound",
    "bound_table",
    "known_crossing_number",
]

#: Slack allowed when a comparison involves a numeric (non-exact) value.
NUMERIC_TOLERANCE = 1e-12

_SQRT2 = math.sqrt(2.0)

RationalLike = Union[int, Fraction]


def _sign_of(a: Fraction, b: Fraction) -> int:
    """Sign of a + b*sqrt(2), computed with rational arithmetic only."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0 or (a > 0) == (b > 0):
        return 1 if b > 0 else -1
    # a and b pull in opposite directions: the larger of a^2 and 2 b^2 wins.
    aa = a * a
    bb = 2 * b * b
    if aa == bb:  # would force sqrt(2) rational; unreachable for nonzero a, b
        return 0
    if aa > bb:
        return 1 if a > 0 else -1
    return 1 if b > 0 else -1


@dataclass(frozen=True, eq=False)
class LengthValue:
    """A length, either exact of the form a + b*sqrt(2) or a plain float.

    ``rational`` and ``root_two`` hold a and b for exact values; ``approx``
    is set (and the other two ignored) for numeric ones.  Sums, differences
    and rational rescalings of exact values stay exact; any operation that
    touches a numeric value yields a numeric result.
    """

    rational: Fraction = Fraction(0)
    root_two: Fraction = Fraction(0)
    approx: Optional[float] = None

    @staticmethod
    def exact(rational: RationalLike, root_two: RationalLike = 0) -> "LengthValue":
        return LengthValue(Fraction(rational), Fraction(root_two))

    @staticmethod
    def numeric(value: float) -> "LengthValue":
        return LengthValue(Fraction(0), Fraction(0), float(value))

    @property
    def is_exact(self) -> bool:
        return self.approx is None

    def __float__(self) -> float:
        if self.approx is not None:
            return self.approx
        return float(self.rational) + float(self.root_two) * _SQRT2

    def _coerce(self, other) -> Optional["LengthValue"]:
        if isinstance(other, LengthValue):
            return other
        if isinstance(other, bool):
            return None
        if isinstance(other, (int, Fraction)):
            return LengthValue.exact(other)
        if isinstance(other, float):
            return LengthValue.numeric(other)
        return None

    def __add__(self, other) -> "LengthValue":
        val = self._coerce(other)
        if val is None:
            return NotImplemented
        if self.is_exact and val.is_exact:
            return LengthValue(self.rational + val.rational, self.root_two + val.root_two)
        return LengthValue.numeric(float(self) + float(val))

    __radd__ = __add__

    def __neg__(self) -> "LengthValue":
        if self.is_exact:
            return LengthValue(-self.rational, -self.root_two)
        return LengthValue.numeric(-float(self))

    def __sub__(self, other) -> "LengthValue":
        val = self._coerce(other)
        if val is None:
            return NotImplemented
        return self + (-val)

    def __rsub__(self, other) -> "LengthValue":
        val = self._coerce(other)
        if val is None:
            return NotImplemented
        return val + (-self)

    def __abs__(self) -> "LengthValue":
        if self < 0:
            return -self
        return self

    def scaled(self, k: RationalLike) -> "LengthValue":
        """This length times a rational factor, exactly when possible."""
        k = Fraction(k)
        if self.is_exact:
            return LengthValue(self.rational * k, self.root_two * k)
        return LengthValue.numeric(float(self) * float(k))

    def __mul__(self, other) -> "LengthValue":
        if isinstance(other, bool) or not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self.scaled(other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LengthValue":
        if isinstance(other, bool) or not isinstance(other, (int, Fraction)):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("division of a length by zero")
        return self.scaled(Fraction(1, 1) / Fraction(other))

    def __eq__(self, other) -> bool:
        if isinstance(other, LengthValue):
            if self.is_exact != other.is_exact:
                return False
            if self.is_exact:
                return (self.rational, self.root_two) == (other.rational, other.root_two)
            return self.approx == other.approx
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            return self.is_exact and self.root_two == 0 and self.rational == other
        if isinstance(other, float):
            return float(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_exact:
            if self.root_two == 0:
                return hash(self.rational)
            return hash((self.rational, self.root_two))
        return hash(self.approx)

    def _compare(self, other) -> Optional[int]:
        """Sign of self - other, or None when the operands don't mix."""
        val = self._coerce(other)
        if val is None:
            return None
        if self.is_exact and val.is_exact:
            return _sign_of(self.rational - val.rational, self.root_two - val.root_two)
        diff = float(self) - float(val)
        return (diff > 0) - (diff < 0)

    def __lt__(self, other) -> bool:
        cmp = self._compare(other)
        if cmp is None:
            return NotImplemented
        return cmp < 0

    def __le__(self, other) -> bool:
        cmp = self._compare(other)
        if cmp is None:
            return NotImplemented
        return cmp <= 0

    def __gt__(self, other) -> bool:
        cmp = self._compare(other)
        if cmp is None:
            return NotImplemented
        return cmp > 0

    def __ge__(self, other) -> bool:
        cmp = self._compare(other)
        if cmp is None:
            return NotImplemented
        return cmp >= 0

    def __repr__(self) -> str:
        if not self.is_exact:
            return f"LengthValue(~{self.approx!r})"
        if self.root_two == 0:
            return f"LengthValue({self.rational})"
        return f"LengthValue({self.rational} + {self.root_two}*sqrt(2))"


def _integer_vectors(strand: Strand) -> tuple[list[tuple[int, int]], int]:
    """Edge vectors scaled onto a common integer grid, with the scale.

    One pass of rational bookkeeping per strand; everything downstream
    (lengths, collinearity merging) then runs on machine ints.
    """
    pts = [v.position for v in strand.vertices]
    den = 1
    for p in pts:
        d = p.x.denominator
        den = den // math.gcd(den, d) * d
        d = p.y.denominator
        den = den // math.gcd(den, d) * d
    ipts = [
        (p.x.numerator * (den // p.x.denominator), p.y.numerator * (den // p.y.denominator))
        for p in pts
    ]
    n = len(ipts)
    count = n if strand.closed else n - 1
    vecs = []
    for i in range(count):
        ax, ay = ipts[i]
        bx, by = ipts[(i + 1) % n]
        vecs.append((bx - ax, by - ay))
    return vecs, den


def _merged_junctions(vecs: list[tuple[int, int]], closed: bool) -> int:
    """How many consecutive edge pairs continue straight through their vertex.

    A pair merges exactly when the cross product vanishes and the dot
    product is positive; for closed strands the first/last vertex
    participates too.
    """
    edges = len(vecs)
    junctions = range(edges) if closed else range(1, edges)
    merged = 0
    for i in junctions:
        ax, ay = vecs[i - 1]
        bx, by = vecs[i]
        if ax * by - ay * bx == 0 and ax * bx + ay * by > 0:
            merged += 1
    return merged


def _stick_count(strand: Strand) -> int:
    """Number of maximal straight edges along one strand."""
    vecs, _ = _integer_vectors(strand)
    return len(vecs) - _merged_junctions(vecs, strand.closed)


@dataclass(frozen=True)
class MetricReport:
    """Measured size data for one diagram.

    ``ribbonlength`` is ``length / width``.  ``exact`` is True when every
    edge length resolved on the rational-plus-sqrt(2) grid, in which case
    ``length`` and ``ribbonlength`` are exact values; otherwise both carry
    floats good to about 1e-12.
    """

    length: LengthValue
    width: Fraction
    ribbonlength: LengthValue
    sticks: int
    components: int
    exact: bool


def measure(diagram: RibbonDiagram) -> MetricReport:
    """Measure total length, stick count, and ribbonlength of a diagram.

    Collinear consecutive edges count as a single stick.  A closed
    component may legitimately report only two sticks (a doubled segment,
    as in the tight Hopf link); that degenerate shape is measured, not
    rejected.
    """
    if diagram.is_empty:
        raise EmptyDiagram("cannot measure a diagram with no strands")
    rational = Fraction(0)
    root_two = Fraction(0)
    numeric_sum = 0.0
    saw_numeric = False
    sticks = 0
    for strand in diagram.strands:
        vecs, den = _integer_vectors(strand)
        irat = 0
        irt2 = 0
        for dx, dy in vecs:
            if dx == 0:
                irat += -dy if dy < 0 else dy
            elif dy == 0:
                irat += -dx if dx < 0 else dx
            else:
                ax = -dx if dx < 0 else dx
                ay = -dy if dy < 0 else dy
                if ax == ay:
                    irt2 += ax
                else:
                    nsq = dx * dx + dy * dy
                    root = math.isqrt(nsq)
                    if root * root == nsq:
                        irat += root
                    elif nsq % 2 == 0 and (root := math.isqrt(nsq // 2)) ** 2 == nsq // 2:
                        irt2 += root
                    else:
                        saw_numeric = True
                        numeric_sum += math.sqrt(float(Fraction(nsq, den * den)))
        rational += Fraction(irat, den)
        root_two += Fraction(irt2, den)
        sticks += len(vecs) - _merged_junctions(vecs, strand.closed)
    if saw_numeric:
        exact_part = float(rational) + float(root_two) * _SQRT2
        total = LengthValue.numeric(exact_part + numeric_sum)
    else:
        total = LengthValue(rational, root_two)
    ribbonlength = total / diagram.width
    return MetricReport(
        length=total,
        width=diagram.width,
        ribbonlength=ribbonlength,
        sticks=sticks,
        components=len(diagram.strands),
        exact=total.is_exact,
    )


def check_crossing_bound(rib, cr: int) -> bool:
    """Is ``rib <= 2.5 * cr + 1``?

    ``rib`` may be a :class:`LengthValue`, a Fraction, or an int; exact
    values are compared with exact rational arithmetic (sqrt(2) terms
    included), numeric ones with a 1e-12 slack.
    """
    if isinstance(cr, bool) or not isinstance(cr, (int, Rational)):
        raise ParameterError(f"crossing number must be an integer, got {cr!r}")
    cr = Fraction(cr)
    if cr.denominator != 1:
        raise ParameterError(f"crossing number must be an integer, got {cr!r}")
    if cr < 0:
        raise ParameterError(f"crossing number must be >= 0, got {cr}")
    limit = Fraction(5, 2) * cr + 1
    if isinstance(rib, bool) or not isinstance(rib, (LengthValue, int, float, Rational)):
        raise ParameterError(f"cannot interpret {rib!r} as a ribbonlength")
    if not isinstance(rib, LengthValue):
        if isinstance(rib, float):
            rib = LengthValue.numeric(rib)
        else:
            rib = LengthValue.exact(Fraction(rib))
    if rib.is_exact:
        return _sign_of(rib.rational - limit, rib.root_two) <= 0
    return float(rib) <= float(limit) + NUMERIC_TOLERANCE


@dataclass(frozen=True)
class BoundRow:
    """One row of the small-knot ribbonlength table.

    ``family`` names the construction achieving the bound, or None for the
    unknot whose value is an analytic infimum with no realizing diagram.
    """

    table_name: str
    family: Optional[FamilySpec]
    bound: int
    note: str


_TABLE_ROWS = (
    BoundRow(
        "0_1",
        None,
        0,
        "analytic infimum over flattened unknots; no diagram attains it",
    ),
    BoundRow("3_1", Torus2(3), 6, "trefoil"),
    BoundRow("4_1", Twist(2), 8, "figure-eight knot"),
    BoundRow("5_1", Torus2(5), 8, "(2,5) torus knot"),
    BoundRow("5_2", Twist(3), 9, "three-twist knot"),
    BoundRow("6_1", Twist(4), 10, "stevedore knot"),
    BoundRow("6_2", Pretzel((1, 2, 3)), 12, "pretzel P(1,2,3)"),
    BoundRow("6_3", Pretzel((2, 1, -3, 1)), 15, "pretzel P(2,1,-3,1)"),
    BoundRow("L2a1", Hopf(), 4, "Hopf link"),
    BoundRow("L4a1", Torus2(4), 7, "(2,4) torus link"),
    BoundRow("L6a3", Torus2(6), 9, "(2,6) torus link"),
)


def bound_table() -> list[BoundRow]:
    """Best known ribbonlength bounds for all knots and links to six crossings."""
    return list(_TABLE_ROWS)


def known_crossing_number(row: BoundRow) -> int:
    """Crossing number for a table row.

    Family rows use the family formulas (a (2,q) torus link has q
    crossings, a twist knot n + 2); the remaining rows read the count off
    the standard table name, e.g. ``6_2`` or ``L6a3`` -> 6.
    """
    fam = row.family
    if isinstance(fam, Torus2):
        return fam.q
    if isinstance(fam, Twist):
        return fam.n + 2
    if isinstance(fam, Hopf):
        return 2
    name = row.table_name
    head = name[1:] if name.startswith("L") else name
    digits = ""
    for ch in head:
        if not ch.isdigit():
            break
        digits += ch
    if not digits:
        raise ParameterError(f"cannot read a crossing number from {name!r}")
    return int(digits)
