"""Exact planar geometry for folded ribbon diagrams.

Everything here is computed over the rationals: points, fold angles (stored
via the sign and square of their cosine), fold lines, and segment
intersections.  No floats enter any predicate; lengths that happen to be
irrational are handled by the metrics layer, not here.

The data model mirrors a flat-folded ribbon: a ``Strand`` is a polygonal
centerline whose interior vertices each carry a fold angle in [0, pi] (pi
meaning "straight through, no fold") and a side flag saying which ribbon
layer lies on top after the fold.  A ``RibbonDiagram`` bundles strands with
a ribbon width and a declared ledger of layered crossings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Iterator, Optional, Sequence, Union

from .errors import (
    DegenerateOverlap,
    DegenerateVertex,
    EndpointTouch,
    LedgerError,
    NoFoldNeeded,
    ParameterError,
)

Scalar = Fraction
RationalLike = Union[int, Fraction]


def _scalar(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise ParameterError(f"expected an exact rational, got {value!r}")


@dataclass(frozen=True)
class Point2:
    """A point (or free vector) in the rational plane."""

    x: Fraction
    y: Fraction

    def __init__(self, x: RationalLike, y: RationalLike) -> None:
        object.__setattr__(self, "x", _scalar(x))
        object.__setattr__(self, "y", _scalar(y))

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Point2":
        return Point2(-self.x, -self.y)

    def scale(self, k: RationalLike) -> "Point2":
        k = _scalar(k)
        return Point2(self.x * k, self.y * k)

    def dot(self, other: "Point2") -> Fraction:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point2") -> Fraction:
        """Signed area of the parallelogram spanned by self and other."""
        return self.x * other.y - self.y * other.x

    def norm_sq(self) -> Fraction:
        return self.x * self.x + self.y * self.y

    def perp(self) -> "Point2":
        """Rotate by +90 degrees (counterclockwise)."""
        return Point2(-self.y, self.x)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __repr__(self) -> str:
        return f"Point2({self.x}, {self.y})"


def _is_perfect_square(q: Fraction) -> Optional[Fraction]:
    """Return the positive rational square root of q, or None."""
    if q < 0:
        return None
    from math import isqrt

    rn = isqrt(q.numerator)
    rd = isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True, order=False)
class Angle:
    """An angle in [0, pi], stored exactly.

    The representation is the pair (sign of cos, cos^2).  This is enough to
    order angles, test the three special values, and round-trip through
    serialization without ever leaving the rationals.
    """

    cos_sign: int
    cos_sq: Fraction

    def __post_init__(self) -> None:
        if self.cos_sign not in (-1, 0, 1):
            raise ParameterError(f"cos_sign must be -1, 0 or 1, got {self.cos_sign}")
        if not isinstance(self.cos_sq, Fraction):
            object.__setattr__(self, "cos_sq", _scalar(self.cos_sq))
        if not (0 <= self.cos_sq <= 1):
            raise ParameterError(f"cos_sq must lie in [0, 1], got {self.cos_sq}")
        if (self.cos_sign == 0) != (self.cos_sq == 0):
            raise ParameterError("cos_sign is zero exactly when cos_sq is zero")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Angle":
        """The doubling-back fold: the two edges are antiparallel."""
        return Angle(1, Fraction(1))

    @staticmethod
    def right() -> "Angle":
        return Angle(0, Fraction(0))

    @staticmethod
    def straight() -> "Angle":
        """pi: collinear straight-through, no fold."""
        return Angle(-1, Fraction(1))

    @staticmethod
    def between(a: Point2, b: Point2) -> "Angle":
        """Angle between two nonzero vectors hinged at a common origin."""
        if a.is_zero() or b.is_zero():
            raise DegenerateVertex("angle between vectors requires nonzero vectors")
        return _angle_between_primitive(_primitive_direction(a), _primitive_direction(b))

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.cos_sign == 1 and self.cos_sq == 1

    def is_right(self) -> bool:
        return self.cos_sign == 0

    def is_straight(self) -> bool:
        return self.cos_sign == -1 and self.cos_sq == 1

    # -- ordering (by angle; larger cosine means smaller angle) ------------

    def _cos_key(self) -> tuple:
        return (self.cos_sign, self.cos_sign * self.cos_sq)

    def __lt__(self, other: "Angle") -> bool:
        return self._cos_key() > other._cos_key()

    def __le__(self, other: "Angle") -> bool:
        return self._cos_key() >= other._cos_key()

    def __gt__(self, other: "Angle") -> bool:
        return self._cos_key() < other._cos_key()

    def __ge__(self, other: "Angle") -> bool:
        return self._cos_key() <= other._cos_key()

    @property
    def radians(self) -> float:
        """Float approximation, for reporting only."""
        import math

        c = self.cos_sign * math.sqrt(float(self.cos_sq))
        return math.acos(max(-1.0, min(1.0, c)))

    def __repr__(self) -> str:
        if self.is_zero():
            return "Angle.zero()"
        if self.is_right():
            return "Angle.right()"
        if self.is_straight():
            return "Angle.straight()"
        return f"Angle({self.cos_sign}, {self.cos_sq})"


def _primitive_direction(vec: Point2) -> tuple[int, int]:
    """The direction of ``vec`` as a primitive integer vector.

    Scaling preserves the angle, and the small integer pairs make angle
    computation cacheable: grid-aligned diagrams use only a handful of
    directions no matter how many vertices they have.
    """
    x, y = vec.x, vec.y
    dx, dy = x.denominator, y.denominator
    common = dx * dy // gcd(dx, dy)
    ix = x.numerator * (common // dx)
    iy = y.numerator * (common // dy)
    g = gcd(ix, iy)
    return (ix // g, iy // g)


@lru_cache(maxsize=4096)
def _angle_between_primitive(a: tuple[int, int], b: tuple[int, int]) -> Angle:
    d = a[0] * b[0] + a[1] * b[1]
    sign = (d > 0) - (d < 0)
    cos_sq = Fraction(d * d, (a[0] * a[0] + a[1] * a[1]) * (b[0] * b[0] + b[1] * b[1]))
    return Angle(sign, cos_sq)


@dataclass(frozen=True)
class Line:
    """An unoriented line given by a point and a nonzero direction."""

    point: Point2
    direction: Point2

    def __post_init__(self) -> None:
        if self.direction.is_zero():
            raise ParameterError("line direction must be nonzero")


def fold_angle_at(prev: Point2, v: Point2, nxt: Point2) -> Angle:
    """Interior angle at v between the edges (v -> prev) and (v -> nxt).

    0 means the ribbon doubles back on itself, pi means straight through.
    """
    a = prev - v
    b = nxt - v
    if a.is_zero() or b.is_zero():
        raise DegenerateVertex(f"coincident points at vertex {v!r}")
    return Angle.between(a, b)


def fold_line_at(prev: Point2, v: Point2, nxt: Point2) -> Line:
    """The crease line at v: reflecting the incoming edge direction across
    it yields the outgoing edge direction.

    Raises NoFoldNeeded when the three points are collinear straight-through
    (fold angle pi).  Directions are kept rational; when the two incident
    edges have incommensurable lengths whose ratio is not a perfect rational
    square, no rational crease direction exists and ParameterError is raised
    (never the case on the grid layouts produced by this package).
    """
    u = v - prev
    w = nxt - v
    if u.is_zero() or w.is_zero():
        raise DegenerateVertex(f"coincident points at vertex {v!r}")
    angle = Angle.between(-u, w)
    if angle.is_straight():
        raise NoFoldNeeded(f"vertex {v!r} is straight-through")
    if angle.is_zero():
        # Doubling back: the crease is perpendicular to the ribbon.
        return Line(v, u.perp())
    uu = u.norm_sq()
    ww = w.norm_sq()
    if uu == ww:
        return Line(v, u + w)
    s = _is_perfect_square(ww / uu)
    if s is None:
        raise ParameterError(
            "edge length ratio at the fold is not a perfect rational square; "
            "the crease direction would be irrational"
        )
    return Line(v, u.scale(s) + w)


def reflect(p: Point2, line: Line) -> Point2:
    """Mirror image of p across the line.  Exact; an involution."""
    d = line.direction
    rel = p - line.point
    t = rel.dot(d) / d.norm_sq()
    foot = line.point + d.scale(t)
    return foot + (foot - p)


def reflect_direction(vec: Point2, line: Line) -> Point2:
    """Mirror image of a free vector across the line's direction."""
    d = line.direction
    t = vec.dot(d) / d.norm_sq()
    return d.scale(2 * t) - vec


def proper_intersection(
    p0: Point2, p1: Point2, q0: Point2, q1: Point2
) -> Optional[tuple[Point2, Fraction, Fraction]]:
    """Transverse interior intersection of segments p0p1 and q0q1.

    Returns (point, t, s) with both parameters strictly inside (0, 1), or
    None when the segments are disjoint.  Contact configurations are
    reported by exception so callers cannot silently mistake them for
    crossings: EndpointTouch when the segments meet at an endpoint of
    either, DegenerateOverlap when they share a positive-length collinear
    piece.
    """
    r = p1 - p0
    s = q1 - q0
    if r.is_zero() or s.is_zero():
        raise ParameterError("segments must have positive length")
    denom = r.cross(s)
    qp = q0 - p0
    if denom == 0:
        if qp.cross(r) != 0:
            return None  # parallel, never meet
        # Collinear: project q's endpoints onto p's parameterization.
        rr = r.norm_sq()
        t0 = qp.dot(r) / rr
        t1 = t0 + s.dot(r) / rr
        lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
        if hi < 0 or lo > 1:
            return None
        if hi == 0 or lo == 1:
            raise EndpointTouch("collinear segments touch at a single endpoint")
        raise DegenerateOverlap("collinear segments overlap on a positive length")
    t = qp.cross(s) / denom
    u = qp.cross(r) / denom
    if t < 0 or t > 1 or u < 0 or u > 1:
        return None
    if t == 0 or t == 1 or u == 0 or u == 1:
        raise EndpointTouch("segments meet at an endpoint")
    return (p0 + r.scale(t), t, u)


class FoldSide(Enum):
    """Which ribbon layer ends up on top after a fold."""

    IN_FRONT = "FoldInFront"
    BEHIND = "FoldBehind"


@dataclass(frozen=True)
class FoldVertex:
    position: Point2
    fold_angle: Angle
    fold_side: FoldSide = FoldSide.IN_FRONT


@dataclass(frozen=True)
class Strand:
    """One link component's polygonal centerline.

    ``vertices`` are in walk order; when ``closed`` the last vertex connects
    back to the first.  Consecutive vertices must be distinct, and every
    interior vertex's stored fold angle must equal the geometric angle of
    its incident edges (validated on construction).
    """

    vertices: tuple[FoldVertex, ...]
    closed: bool

    def __post_init__(self) -> None:
        verts = tuple(self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise ParameterError("a strand needs at least two vertices")
        n = len(verts)
        pairs = n if self.closed else n - 1
        for i in range(pairs):
            a = verts[i].position
            b = verts[(i + 1) % n].position
            if a == b:
                raise DegenerateVertex(f"consecutive strand vertices coincide at {a!r}")
        for i in self._interior_indices():
            p = verts[(i - 1) % n].position
            v = verts[i].position
            q = verts[(i + 1) % n].position
            if fold_angle_at(p, v, q) != verts[i].fold_angle:
                raise ParameterError(
                    f"stored fold angle at vertex {i} disagrees with the geometry"
                )

    def _interior_indices(self) -> range:
        if self.closed:
            return range(len(self.vertices))
        return range(1, len(self.vertices) - 1)

    @staticmethod
    def from_points(
        points: Sequence[Point2],
        closed: bool,
        sides: Optional[Sequence[FoldSide]] = None,
    ) -> "Strand":
        """Build a strand, computing interior fold angles from geometry.

        Open-strand endpoints get the neutral "straight" angle since no fold
        happens there.  ``sides``, when given, must provide one FoldSide per
        vertex (values at non-fold vertices are ignored but kept).
        """
        pts = list(points)
        n = len(pts)
        if sides is None:
            side_list = [FoldSide.IN_FRONT] * n
        else:
            side_list = list(sides)
            if len(side_list) != n:
                raise ParameterError("sides must match points in length")
        verts = []
        for i in range(n):
            if closed or 0 < i < n - 1:
                angle = fold_angle_at(pts[(i - 1) % n], pts[i], pts[(i + 1) % n])
            else:
                angle = Angle.straight()
            verts.append(FoldVertex(pts[i], angle, side_list[i]))
        return Strand(tuple(verts), closed)

    @property
    def edge_count(self) -> int:
        return len(self.vertices) if self.closed else len(self.vertices) - 1

    def edge(self, i: int) -> tuple[Point2, Point2]:
        n = len(self.vertices)
        if not (0 <= i < self.edge_count):
            raise ParameterError(f"edge index {i} out of range")
        return (self.vertices[i].position, self.vertices[(i + 1) % n].position)

    def edge_vector(self, i: int) -> Point2:
        a, b = self.edge(i)
        return b - a

    def point_on_edge(self, i: int, t: RationalLike) -> Point2:
        a, b = self.edge(i)
        return a + (b - a).scale(_scalar(t))

    def iter_edges(self) -> Iterator[tuple[int, Point2, Point2]]:
        for i in range(self.edge_count):
            a, b = self.edge(i)
            yield i, a, b

    @property
    def positions(self) -> tuple[Point2, ...]:
        return tuple(v.position for v in self.vertices)


def _strand_trusted(vertices: tuple[FoldVertex, ...], closed: bool) -> Strand:
    """Assemble a Strand without re-running construction validation.

    Engine-internal: callers must guarantee what ``__post_init__`` would
    otherwise check — ``vertices`` is a tuple of at least two FoldVertex
    values, consecutive positions are distinct, and every interior fold
    angle was computed from the incident edges.
    """
    strand = object.__new__(Strand)
    object.__setattr__(strand, "vertices", vertices)
    object.__setattr__(strand, "closed", closed)
    return strand


@dataclass(frozen=True)
class CrossingEnd:
    """One passage of a crossing: (strand index, edge index, edge parameter)."""

    strand: int
    edge: int
    param: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.param, Fraction):
            object.__setattr__(self, "param", _scalar(self.param))
        if not (0 < self.param < 1):
            raise LedgerError(f"crossing parameter must lie in (0,1), got {self.param}")


@dataclass(frozen=True)
class CrossingRecord:
    """A declared crossing: which passage is on top, which below."""

    id: int
    over: CrossingEnd
    under: CrossingEnd

    def __post_init__(self) -> None:
        if self.over == self.under:
            raise LedgerError("a crossing cannot pass over itself")


@dataclass(frozen=True)
class RibbonDiagram:
    """A folded ribbon link: centerline strands, width, declared crossings.

    ``edge_layers`` optionally records, per strand and per edge, an integer
    stacking height used to check ledger consistency and to order SVG
    panels; ``layout_mode`` records how the diagram was laid out.
    """

    strands: tuple[Strand, ...]
    width: Fraction = Fraction(1)
    crossings: tuple[CrossingRecord, ...] = ()
    family: Any = None
    edge_layers: Optional[tuple[tuple[int, ...], ...]] = None
    layout_mode: Any = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "strands", tuple(self.strands))
        object.__setattr__(self, "crossings", tuple(self.crossings))
        if not isinstance(self.width, Fraction):
            object.__setattr__(self, "width", _scalar(self.width))
        if self.width <= 0:
            raise ParameterError(f"ribbon width must be positive, got {self.width}")
        for rec in self.crossings:
            for end in (rec.over, rec.under):
                self._check_end(end)
        if self.edge_layers is not None:
            layers = tuple(tuple(row) for row in self.edge_layers)
            object.__setattr__(self, "edge_layers", layers)
            if len(layers) != len(self.strands):
                raise LedgerError("edge_layers must have one row per strand")
            for s, row in zip(self.strands, layers):
                if len(row) != s.edge_count:
                    raise LedgerError("edge_layers row length must match edge count")
            for rec in self.crossings:
                lo = layers[rec.over.strand][rec.over.edge]
                lu = layers[rec.under.strand][rec.under.edge]
                if lo <= lu:
                    raise LedgerError(
                        f"crossing {rec.id}: over layer {lo} not above under layer {lu}"
                    )

    def _check_end(self, end: CrossingEnd) -> None:
        if not (0 <= end.strand < len(self.strands)):
            raise LedgerError(f"crossing references missing strand {end.strand}")
        if not (0 <= end.edge < self.strands[end.strand].edge_count):
            raise LedgerError(
                f"crossing references missing edge {end.edge} on strand {end.strand}"
            )

    @property
    def is_empty(self) -> bool:
        return len(self.strands) == 0


@dataclass(frozen=True)
class WrapFragment:
    """An open two-strand ribbon block with tagged ends A, B, C, D.

    Strand AB runs from end A to end B, strand CD from C to D.  Crossing
    records index strand 0 = AB, strand 1 = CD.  ``interior_length`` and
    ``interior_sticks`` count only the part inside the wrapping square,
    excluding the protruding end stubs.
    """

    strand_AB: Strand
    strand_CD: Strand
    interior_length: Fraction
    interior_sticks: int
    crossings: tuple[CrossingRecord, ...]
    twist_count: int
    edge_layers: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        if self.strand_AB.closed or self.strand_CD.closed:
            raise ParameterError("wrap fragments are built from open strands")
        object.__setattr__(self, "crossings", tuple(self.crossings))
        if not isinstance(self.interior_length, Fraction):
            object.__setattr__(self, "interior_length", _scalar(self.interior_length))

    @property
    def end_A(self) -> Point2:
        return self.strand_AB.vertices[0].position

    @property
    def end_B(self) -> Point2:
        return self.strand_AB.vertices[-1].position

    @property
    def end_C(self) -> Point2:
        return self.strand_CD.vertices[0].position

    @property
    def end_D(self) -> Point2:
        return self.strand_CD.vertices[-1].position

    def ends(self) -> dict[str, Point2]:
        """The four tagged endpoints, each tagged exactly once."""
        return {"A": self.end_A, "B": self.end_B, "C": self.end_C, "D": self.end_D}
