"""Grid layouts for the ribbon constructions.

Every construction here is assembled from axis-aligned *runs* on a small
family of horizontal and vertical grid lines around the unit square.  A run
is described by its line; consecutive perpendicular runs meet at a corner
(a right-angle fold), while two parallel runs joined around the square
boundary form a hairpin (a fold of angle zero).  In the tight layout all
lines collapse onto their nominal coordinates, so hairpins become single
doubling-back vertices and the theorem-exact lengths drop out of the grid.
In an exploded layout every line is pushed off its nominal position by an
integer multiple of a small rational unit, which makes the same diagram
generic: every declared crossing is a transverse intersection and nothing
else touches.

Crossings are never declared by hand.  The engine instantiates the layout
once at a fixed reference offset, finds all vertical/horizontal run
intersections, and reads over/under from the integer stacking layers
attached to the runs.  The combinatorics are offset-independent by
construction, so tight and exploded instances of one layout always carry
the same ledger (tight crossing parameters are order-preserving
bookkeeping; exploded ones are the exact intersection parameters).
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .errors import LedgerError, ParameterError
from .families import (
    Exploded,
    FamilySpec,
    Hopf,
    LayoutMode,
    PentagonTrefoil,
    Pretzel,
    Tight,
    Torus2,
    Twist,
)
from .geometry import (
    Angle,
    CrossingEnd,
    CrossingRecord,
    FoldSide,
    FoldVertex,
    Point2,
    RibbonDiagram,
    Strand,
    WrapFragment,
    _angle_between_primitive,
    _strand_trusted,
)

__all__ = [
    "wrap",
    "modified_wrap",
    "torus_link",
    "twist_knot",
    "pretzel",
    "pentagon_trefoil",
    "hopf_link",
    "realize_family",
]

_H = "h"
_V = "v"
_HALF = Fraction(1, 2)

# Stacking layers shared by the coil core of every wrap-based layout.
_BACK = 1  # odd coil passes, behind the core ribbon
_CORE = 2  # the straight ribbon being wrapped
_LEAD = 3  # the wrapping ribbon on its way in
_FRONT = 4  # even coil passes, in front of the core


@dataclass(frozen=True)
class _Line:
    """One grid line: an axis, a nominal coordinate, and an offset index.

    The instantiated coordinate is ``nominal + offset*unit`` (plus ``shift``
    in exploded layouts, used to pull stacked blocks apart).  ``layer`` is
    the stacking height of every run carried by the line.
    """

    axis: str
    nominal: Fraction
    offset: int
    layer: int
    shift: Fraction = Fraction(0)

    def pos(self, unit: Fraction, shifted: bool) -> Fraction:
        p = self.nominal + self.offset * unit
        if shifted:
            p += self.shift
        return p


def _hline(nominal, offset: int, layer: int, shift=Fraction(0)) -> _Line:
    return _Line(_H, Fraction(nominal), offset, layer, Fraction(shift))


def _vline(nominal, offset: int, layer: int) -> _Line:
    return _Line(_V, Fraction(nominal), offset, layer)


@dataclass
class _Chain:
    """A maximal open sequence of runs between two joinable (or stub) ends."""

    lines: list
    start: Optional[Fraction] = None  # stub coordinate along lines[0]
    end: Optional[Fraction] = None  # stub coordinate along lines[-1]


@dataclass
class _Program:
    """One strand, fully stitched: runs (with cap jogs) in walk order."""

    lines: list
    closed: bool
    start: Optional[Fraction] = None
    end: Optional[Fraction] = None


def _mirror_line(line: _Line) -> _Line:
    """Reflect a line across the square's horizontal midline y = 1/2."""
    if line.axis == _H:
        return _Line(_H, 1 - line.nominal, -line.offset, line.layer, -line.shift)
    return line


def _mirror_chain(chain: _Chain) -> _Chain:
    lines = [_mirror_line(l) for l in chain.lines]
    start, end = chain.start, chain.end
    # Stub coordinates along vertical runs are y values and mirror with the
    # layout; stubs along horizontal runs are x values and stay put.
    if start is not None and chain.lines[0].axis == _V:
        start = 1 - start
    if end is not None and chain.lines[-1].axis == _V:
        end = 1 - end
    return _Chain(lines, start, end)


def _stitch(chains: Sequence[_Chain], joins) -> list[_Program]:
    """Connect chain ends through cap lines into walkable strands.

    ``joins`` is a list of ``(end_a, end_b, cap_line)`` with each end a
    ``(chain_index, "start"|"end")`` pair.  Ends not mentioned in any join
    must carry stub coordinates; every mentioned end must be joined exactly
    once.  Returns one program per resulting strand.
    """
    partner = {}
    for end_a, end_b, cap in joins:
        for e in (end_a, end_b):
            if e in partner:
                raise LedgerError(f"chain end {e} joined twice")
        partner[end_a] = (end_b, cap)
        partner[end_b] = (end_a, cap)

    programs = []
    used = [False] * len(chains)
    for first in range(len(chains)):
        if used[first]:
            continue
        if (first, "start") not in partner:
            # Open strand: stubs at both ends, no stitching.
            if (first, "end") in partner:
                raise LedgerError("a chain cannot mix a stub with a join")
            c = chains[first]
            if c.start is None or c.end is None:
                raise LedgerError("unjoined chain ends need stub coordinates")
            programs.append(_Program(list(c.lines), False, c.start, c.end))
            used[first] = True
            continue
        lines = []
        cursor = (first, "start")
        while True:
            idx, side = cursor
            used[idx] = True
            chain = chains[idx]
            if chain.start is not None or chain.end is not None:
                raise LedgerError("a joined chain cannot carry stubs")
            walk = chain.lines if side == "start" else list(reversed(chain.lines))
            lines.extend(walk)
            exit_end = (idx, "end" if side == "start" else "start")
            nxt, cap = partner[exit_end]
            lines.append(cap)
            if nxt == (first, "start"):
                break
            cursor = nxt
        programs.append(_Program(lines, True))

    for i in range(len(programs)):
        seq = programs[i].lines
        n = len(seq)
        span = n if programs[i].closed else n - 1
        for j in range(span):
            if seq[j].axis == seq[(j + 1) % n].axis:
                raise LedgerError("stitched runs must alternate axes")
    return programs


def _denominator_lcm(programs: Sequence[_Program], shifted: bool) -> int:
    """Least common denominator of every nominal, shift, and stub coordinate."""
    denom = 1
    for prog in programs:
        for line in prog.lines:
            d = line.nominal.denominator
            denom = denom // math.gcd(denom, d) * d
            if shifted:
                d = line.shift.denominator
                denom = denom // math.gcd(denom, d) * d
        for coord in (prog.start, prog.end):
            if coord is not None:
                d = coord.denominator
                denom = denom // math.gcd(denom, d) * d
    return denom


class _Geometry:
    """One instantiation of a set of programs at a concrete offset unit.

    Coordinates are computed as integers on a common grid (``scale`` times
    the true rational values), so corner assembly, hairpin-collapse dedup,
    and the intersection sweep all run on machine ints.  Rational points
    are materialized lazily, only when a consumer asks for them.
    """

    def __init__(
        self,
        programs: Sequence[_Program],
        unit: Fraction,
        shifted: bool,
        base_scale: Optional[int] = None,
    ):
        if base_scale is None:
            base_scale = _denominator_lcm(programs, shifted)
        d = unit.denominator
        denom = base_scale // math.gcd(base_scale, d) * d
        self.scale = denom
        iunit = unit.numerator * (denom // unit.denominator)
        self.ipoints: list[list[tuple[int, int]]] = []
        self.closed: list[bool] = []
        self.edge_occs: list[list[int]] = []  # kept occurrence per edge
        self.edge_index: dict = {}  # (strand, occurrence) -> edge position
        self.edge_lines: list[list[_Line]] = []
        self._points: Optional[list[list[Point2]]] = None
        for s, prog in enumerate(programs):
            pos = []
            lines = prog.lines
            for line in lines:
                nom = line.nominal
                p = nom.numerator * (denom // nom.denominator) + line.offset * iunit
                if shifted:
                    sh = line.shift
                    p += sh.numerator * (denom // sh.denominator)
                pos.append(p)
            m = len(lines)
            if prog.closed:
                # Corner i joins run i to run i+1; runs alternate axes (the
                # stitcher guarantees it), so the vertical one supplies x.
                corners = [
                    (pos[i], pos[i + 1 - m]) if lines[i].axis == _V else (pos[i + 1 - m], pos[i])
                    for i in range(m)
                ]
                # Edge i runs on line i from corners[i-1] to corners[i]; a
                # zero-length edge is a collapsed hairpin jog and drops out.
                kept = [i for i in range(m) if corners[i - 1] != corners[i]]
                if len(kept) < 2:
                    raise LedgerError("strand collapsed to fewer than two runs")
                pts = [corners[i - 1] for i in kept]
            else:
                start_i = prog.start.numerator * (denom // prog.start.denominator)
                end_i = prog.end.numerator * (denom // prog.end.denominator)
                verts = [self._stub(lines[0], pos[0], start_i)]
                verts += [
                    (pos[i], pos[i + 1]) if lines[i].axis == _V else (pos[i + 1], pos[i])
                    for i in range(m - 1)
                ]
                verts.append(self._stub(lines[-1], pos[-1], end_i))
                kept = [i for i in range(m) if verts[i] != verts[i + 1]]
                pts = [verts[i] for i in kept] + [verts[kept[-1] + 1]]
            for position, occ in enumerate(kept):
                self.edge_index[(s, occ)] = position
            self.ipoints.append(pts)
            self.closed.append(prog.closed)
            self.edge_occs.append(kept)
            self.edge_lines.append([lines[i] for i in kept])

    @property
    def points(self) -> list[list[Point2]]:
        if self._points is None:
            scale = self.scale
            self._points = [
                [Point2(Fraction(ix, scale), Fraction(iy, scale)) for ix, iy in pts]
                for pts in self.ipoints
            ]
        return self._points

    @staticmethod
    def _stub(line: _Line, pos: int, coord: int) -> tuple[int, int]:
        if line.axis == _H:
            return (coord, pos)
        return (pos, coord)

    def edges(self):
        """Integer edge endpoints: (strand, edge, (ax, ay), (bx, by), line)."""
        for s, pts in enumerate(self.ipoints):
            n = len(pts)
            count = n if self.closed[s] else n - 1
            for e in range(count):
                yield s, e, pts[e], pts[(e + 1) % n], self.edge_lines[s][e]

    def param_on_edge(self, strand: int, occ: int, ipt: tuple[int, int]) -> Fraction:
        e = self.edge_index[(strand, occ)]
        pts = self.ipoints[strand]
        ax, ay = pts[e]
        bx, by = pts[(e + 1) % len(pts)]
        if ax == bx:
            return Fraction(ipt[1] - ay, by - ay)
        return Fraction(ipt[0] - ax, bx - ax)


def _find_events(geom: _Geometry):
    """All transverse run intersections, as ((strand, occ, param), ...) pairs."""
    verticals = []
    horizontals = []
    for s, e, (ax, ay), (bx, by), line in geom.edges():
        if line.axis == _V:
            lo, hi = (ay, by) if ay < by else (by, ay)
            verticals.append((ax, lo, hi, s, e, line))
        else:
            lo, hi = (ax, bx) if ax < bx else (bx, ax)
            horizontals.append((ay, lo, hi, s, e, line))
    horizontals.sort(key=lambda h: h[0])
    ys = [h[0] for h in horizontals]
    events = []
    for x, ylo, yhi, sv, ev, lv in verticals:
        for idx in range(bisect_right(ys, ylo), bisect_left(ys, yhi)):
            y, xlo, xhi, sh, eh, lh = horizontals[idx]
            if not (xlo < x < xhi):
                continue
            if lv.layer == lh.layer:
                raise LedgerError("crossing runs share a stacking layer")
            ipt = (x, y)
            occ_v = geom.edge_occs[sv][ev]
            occ_h = geom.edge_occs[sh][eh]
            pv = (sv, occ_v, geom.param_on_edge(sv, occ_v, ipt))
            ph = (sh, occ_h, geom.param_on_edge(sh, occ_h, ipt))
            if lv.layer > lh.layer:
                events.append((pv, ph))
            else:
                events.append((ph, pv))
    events.sort(key=lambda ev: tuple(sorted((ev[0], ev[1]))))
    return events


def _divisor(chains, joins) -> int:
    spread = 1
    for chain in chains:
        for line in chain.lines:
            spread = max(spread, abs(line.offset))
    for _, _, cap in joins:
        spread = max(spread, abs(cap.offset))
    return 4 * (spread + 2)


def _check_mode(mode) -> LayoutMode:
    if not isinstance(mode, (Tight, Exploded)):
        raise ParameterError(f"layout mode must be Tight or Exploded, got {mode!r}")
    return mode


class _Layout:
    """Chains plus joins, realized on demand in either layout mode."""

    def __init__(self, chains, joins=()):
        self.chains = list(chains)
        self.joins = list(joins)
        self.programs = _stitch(self.chains, self.joins)
        self.divisor = _divisor(self.chains, self.joins)
        self._scale_shifted = _denominator_lcm(self.programs, True)
        self._scale_plain = _denominator_lcm(self.programs, False)
        self.ref_unit = Fraction(1, 64) / self.divisor
        self.ref_geom = _Geometry(self.programs, self.ref_unit, True, self._scale_shifted)
        self.events = _find_events(self.ref_geom)

    def realize(self, mode: LayoutMode):
        """Strands, per-edge layers, and crossing records for ``mode``."""
        if isinstance(mode, Exploded):
            unit = mode.delta / self.divisor
            if unit == self.ref_unit:
                # The canonical offset is the reference instantiation itself;
                # its incidences are the ones every mode is checked against.
                geom = self.ref_geom
            else:
                geom = _Geometry(self.programs, unit, True, self._scale_shifted)
                _check_same_incidences(self.events, geom)
            records = self._exploded_records(geom)
        else:
            geom = _Geometry(self.programs, Fraction(0), False, self._scale_plain)
            records = self._tight_records(geom)
        strands = []
        layer_rows = []
        pts_all = geom.points
        for s, pts in enumerate(pts_all):
            layers = [line.layer for line in geom.edge_lines[s]]
            sides = _fold_sides(pts, layers, geom.closed[s])
            strands.append(_strand_from_grid(pts, geom.ipoints[s], geom.closed[s], sides))
            layer_rows.append(tuple(layers))
        return strands, tuple(layer_rows), records, geom

    def _exploded_records(self, geom: _Geometry):
        records = []
        for key, (over, under) in enumerate(self.events):
            ends = []
            for strand, occ, _ in (over, under):
                e = geom.edge_index.get((strand, occ))
                if e is None:
                    raise LedgerError("a crossing sits on a collapsed jog")
                pts = geom.ipoints[strand]
                ax, ay = pts[e]
                bx, by = pts[(e + 1) % len(pts)]
                other = over if (strand, occ) == (under[0], under[1]) else under
                os, oo, _ = other
                oe = geom.edge_index[(os, oo)]
                oax, oay = geom.ipoints[os][oe]
                if ax == bx:
                    ipt = (ax, oay)
                else:
                    ipt = (oax, ay)
                ends.append(CrossingEnd(strand, e, geom.param_on_edge(strand, occ, ipt)))
            records.append(CrossingRecord(key + 1, ends[0], ends[1]))
        return tuple(records)

    def _tight_records(self, geom: _Geometry):
        by_occ: dict = {}
        for ei, (over, under) in enumerate(self.events):
            for role, (strand, occ, ref_param) in enumerate((over, under)):
                by_occ.setdefault((strand, occ), []).append((ref_param, ei, role))
        rank = {}  # (event index, end role) -> bookkeeping parameter
        for passages in by_occ.values():
            passages.sort(key=lambda item: item[0])
            m = len(passages)
            for j, (_, ei, role) in enumerate(passages):
                rank[(ei, role)] = Fraction(j + 1, m + 1)
        records = []
        for ei, (over, under) in enumerate(self.events):
            ends = []
            for role, (strand, occ, _) in enumerate((over, under)):
                e = geom.edge_index.get((strand, occ))
                if e is None:
                    raise LedgerError("a crossing sits on a collapsed jog")
                ends.append(CrossingEnd(strand, e, rank[(ei, role)]))
            records.append(CrossingRecord(ei + 1, ends[0], ends[1]))
        return tuple(records)


def _check_same_incidences(ref_events, geom: _Geometry) -> None:
    """Verify ``geom`` meets exactly the reference crossing incidences.

    Parameters move with the explode offset; the set of crossing run pairs
    (and their over/under order) must not.
    """

    def strip(evts):
        return [((a[0], a[1]), (b[0], b[1])) for a, b in evts]

    if strip(_find_events(geom)) != strip(ref_events):
        raise LedgerError("crossing pattern drifted with the explode offset")


def _fold_sides(points, layers, closed):
    n = len(points)
    sides = []
    for i in range(n):
        if closed:
            incoming = layers[(i - 1) % n]
            outgoing = layers[i % n]
        elif 0 < i < n - 1:
            incoming = layers[i - 1]
            outgoing = layers[i]
        else:
            sides.append(FoldSide.IN_FRONT)
            continue
        sides.append(FoldSide.IN_FRONT if outgoing >= incoming else FoldSide.BEHIND)
    return sides


def _strand_from_grid(pts, ipts, closed, sides):
    """Strand assembly straight off the integer grid.

    Fold angles come from the cached primitive-direction table, and the
    corner dedup upstream already guarantees consecutive vertices are
    distinct, so the Strand revalidation pass is skipped.
    """
    n = len(pts)
    edge_count = n if closed else n - 1
    prims = []
    for i in range(edge_count):
        ax, ay = ipts[i]
        bx, by = ipts[(i + 1) % n]
        dx = bx - ax
        dy = by - ay
        g = math.gcd(dx, dy)
        prims.append((dx // g, dy // g))
    straight = Angle.straight()
    verts = []
    for i in range(n):
        if closed or 0 < i < n - 1:
            pu = prims[i - 1]
            angle = _angle_between_primitive((-pu[0], -pu[1]), prims[i % edge_count])
        else:
            angle = straight
        verts.append(FoldVertex(pts[i], angle, sides[i]))
    return _strand_trusted(tuple(verts), closed)


# ---------------------------------------------------------------------------
# The coil: shared core of wrap, torus, twist, and pretzel layouts


def _coil_lines(m: int, lead_layer: int = _LEAD) -> list:
    """Lead-in, descent, and ``m`` full coil passes with their cap jogs."""
    lines = [_hline(_HALF, -4, lead_layer), _vline(_HALF, 0, lead_layer)]
    for k in range(1, m + 1):
        layer = _BACK if k % 2 == 1 else _FRONT
        cap_nominal = 0 if k % 2 == 1 else 1
        lines.append(_hline(cap_nominal, 0, layer))
        lines.append(_vline(_HALF, k, layer))
    return lines


def _wrap_chains(n: int, terminal: str):
    """Chains for one wrap fragment; ``terminal`` picks the B-end shape."""
    m = abs(n)
    cd = _Chain([_hline(_HALF, 0, _CORE)], start=Fraction(-1, 2), end=Fraction(3, 2))
    if m == 0:
        ab = _Chain([_hline(_HALF, -1, _FRONT)], start=Fraction(-1, 2), end=Fraction(3, 2))
        return [ab, cd]
    lines = _coil_lines(m)
    if terminal == "stub":
        end = Fraction(3, 2) if m % 2 == 1 else Fraction(-1, 2)
        ab = _Chain(lines, start=Fraction(-1, 2), end=end)
    else:
        boff, blayer = (1, _BACK) if m % 2 == 1 else (-1, _FRONT)
        lines = lines + [_hline(_HALF, boff, blayer)]
        ab = _Chain(lines, start=Fraction(-1, 2), end=Fraction(3, 2))
    chains = [ab, cd]
    if n < 0:
        chains = [_mirror_chain(c) for c in chains]
    return chains


def _clip_unit_square(a: Point2, b: Point2) -> Fraction:
    """Length of an axis-aligned edge's part inside the unit square."""
    if a.x == b.x:
        if not 0 <= a.x <= 1:
            return Fraction(0)
        lo, hi = sorted((a.y, b.y))
    else:
        if not 0 <= a.y <= 1:
            return Fraction(0)
        lo, hi = sorted((a.x, b.x))
    clipped = min(hi, Fraction(1)) - max(lo, Fraction(0))
    return max(clipped, Fraction(0))


def _fragment(n: int, mode: LayoutMode, terminal: str) -> WrapFragment:
    layout = _Layout(_wrap_chains(n, terminal))
    strands, layer_rows, records, geom = layout.realize(mode)
    length = Fraction(0)
    sticks = 0
    for s, pts in enumerate(geom.points):
        count = len(pts) if geom.closed[s] else len(pts) - 1
        for e in range(count):
            piece = _clip_unit_square(pts[e], pts[(e + 1) % len(pts)])
            length += piece
            if piece > 0:
                sticks += 1
    return WrapFragment(
        strand_AB=strands[0],
        strand_CD=strands[1],
        interior_length=length,
        interior_sticks=sticks,
        crossings=records,
        twist_count=n,
        edge_layers=layer_rows,
    )


def wrap(n: int, mode: LayoutMode = Tight()) -> WrapFragment:
    """Coil ribbon AB around ribbon CD to realize ``n`` half-twists.

    The coil fills the unit square; ends A and C enter from the left, D
    leaves to the right, and B leaves vertically with the last pass (upward
    at the back for positive odd ``n``, downward in front for positive even
    ``n``).  Crossing signs flip with the sign of ``n``.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParameterError(f"twist count must be an integer, got {n!r}")
    if n == 0:
        raise ParameterError("a wrap needs a nonzero twist count; see modified_wrap")
    _check_mode(mode)
    return _fragment(n, mode, "stub")


def modified_wrap(n: int, mode: LayoutMode = Tight()) -> WrapFragment:
    """Like :func:`wrap`, but end B turns to exit horizontally.

    The extra right-angle fold lets fragments stack into pretzel columns:
    all four ends leave horizontally.  ``n = 0`` is allowed and produces two
    crossing-free parallel strands, AB resting on top of CD.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParameterError(f"twist count must be an integer, got {n!r}")
    _check_mode(mode)
    return _fragment(n, mode, "corner")


# ---------------------------------------------------------------------------
# Closed constructions


def _torus_layout(q: int) -> _Layout:
    cd = _Chain([_hline(_HALF, 0, _CORE)])
    if q % 2 == 1:
        ab = _Chain(_coil_lines(q) + [_hline(_HALF, 2, 0)])
        a_over = _Chain([_hline(_HALF, -2, 5)])
        joins = [
            ((0, "end"), (1, "start"), _vline(0, -2, 0)),
            ((1, "end"), (2, "end"), _vline(1, 1, _CORE)),
            ((2, "start"), (0, "start"), _vline(0, -1, _LEAD)),
        ]
        return _Layout([ab, cd, a_over], joins)
    ab = _Chain(_coil_lines(q) + [_hline(_HALF, -2, 5)])
    c_back = _Chain([_hline(_HALF, 2, 0)])
    joins = [
        ((0, "end"), (0, "start"), _vline(0, -1, _LEAD)),
        ((1, "start"), (2, "start"), _vline(0, -2, 0)),
        ((1, "end"), (2, "end"), _vline(1, 1, _CORE)),
    ]
    return _Layout([ab, cd, c_back], joins)


def torus_link(q: int, mode: LayoutMode = Tight()) -> RibbonDiagram:
    """The (2, q) torus link built by coiling one ribbon around another.

    After ``q`` coil passes the free ends fold back around the square edge
    and rejoin: one closed component when ``q`` is odd, two when even.
    """
    family = Torus2(q)
    _check_mode(mode)
    strands, layer_rows, records, _ = _torus_layout(q).realize(mode)
    return RibbonDiagram(
        strands=tuple(strands),
        width=Fraction(1),
        crossings=records,
        family=family,
        edge_layers=layer_rows,
        layout_mode=mode,
    )


def _twist_layout(n: int) -> _Layout:
    if n % 2 == 0:
        lead = _LEAD
        b_layer, d_layer = 6, 8
        a_layer, c_layer = 5, 7
        d_off = 1
        cap_after = 0  # the last coil pass comes down to the bottom edge
    else:
        lead = 0
        b_layer, d_layer = -2, -4
        a_layer, c_layer = -3, -1
        d_off = -5
        cap_after = 1
    main = _Chain(
        _coil_lines(n, lead)
        + [
            _hline(cap_after, 0, b_layer),
            _vline(_HALF, n + 1, b_layer),
            _hline(1 - cap_after, 0, d_layer),
            _vline(_HALF, n + 2, d_layer),
            _hline(_HALF, d_off, d_layer),
        ]
    )
    cd = _Chain([_hline(_HALF, 0, _CORE)])
    c_run = _Chain([_hline(_HALF, -1, c_layer)])
    a_run = _Chain([_hline(_HALF, -3, a_layer)])
    joins = [
        ((0, "end"), (1, "end"), _vline(1, 2, d_layer)),
        ((1, "start"), (2, "start"), _vline(0, -2, c_layer)),
        ((2, "end"), (3, "end"), _vline(1, 1, a_layer)),
        ((3, "start"), (0, "start"), _vline(0, -1, lead)),
    ]
    return _Layout([main, cd, c_run, a_run], joins)


def twist_knot(n: int, mode: LayoutMode = Tight()) -> RibbonDiagram:
    """The twist knot with ``n`` half-twists closed off by a clasp.

    The coil realizes the twist region; the moving end then runs once more
    across the square (in front for even ``n``, behind for odd ``n``) and
    clasps the returning pair of ends.
    """
    family = Twist(n)
    _check_mode(mode)
    strands, layer_rows, records, _ = _twist_layout(n).realize(mode)
    return RibbonDiagram(
        strands=tuple(strands),
        width=Fraction(1),
        crossings=records,
        family=family,
        edge_layers=layer_rows,
        layout_mode=mode,
    )


_PRETZEL_LAYER_STRIDE = 10
_PRETZEL_BAND_GAP = Fraction(3, 2)


@lru_cache(maxsize=256)
def _band_template(t: int) -> tuple[tuple[_Line, ...], ...]:
    """The two chain line tuples of one pretzel band (a corner-mode wrap).

    Only a handful of distinct twist counts ever occur, and _Line objects
    are immutable, so the templates are shared across all pretzel builds.
    """
    return tuple(tuple(c.lines) for c in _wrap_chains(t, "corner"))


@lru_cache(maxsize=256)
def _band_lowered(t: int, i: int) -> tuple[tuple[_Line, ...], ...]:
    """Band ``i``'s chains: the template dropped ``i`` stacking strides and
    shifted ``i`` band gaps down.

    The shift only touches horizontal lines; vertical positions are shared
    by all bands of a pretzel column.
    """
    shift = -_PRETZEL_BAND_GAP * i
    drop = -_PRETZEL_LAYER_STRIDE * i
    zero = Fraction(0)
    return tuple(
        tuple(
            _Line(
                line.axis,
                line.nominal,
                line.offset,
                line.layer + drop,
                shift if line.axis == _H else zero,
            )
            for line in lines
        )
        for lines in _band_template(t)
    )


def _end_height(line: _Line):
    """Sort key for chain ends: the line's position at a reference offset of
    1/256, scaled by 512 (an integer whenever nominal and shift are
    half-integral, which pretzel bands guarantee; otherwise an exact
    rational on the same scale)."""
    nom = line.nominal
    sh = line.shift
    if 512 % nom.denominator == 0 and 512 % sh.denominator == 0:
        return (
            nom.numerator * (512 // nom.denominator)
            + 2 * line.offset
            + sh.numerator * (512 // sh.denominator)
        )
    return (nom + sh) * 512 + 2 * line.offset


def _pretzel_layout(twists) -> _Layout:
    chains = []
    ends = []  # per fragment: {"A": (chain, side, line), ...}
    for i, t in enumerate(twists):
        frag = [_Chain(list(lines)) for lines in _band_lowered(t, i)]
        base = len(chains)
        chains.extend(frag)
        ab, cd = frag
        ends.append(
            {
                "A": ((base, "start"), ab.lines[0]),
                "B": ((base, "end"), ab.lines[-1]),
                "C": ((base + 1, "start"), cd.lines[0]),
                "D": ((base + 1, "end"), cd.lines[-1]),
            }
        )

    def pick(i: int, side: str, which: str):
        named = ("A", "C") if side == "left" else ("B", "D")
        pair = [ends[i][name] for name in named]
        pair.sort(key=lambda item: _end_height(item[1]))
        return pair[0][0] if which == "lower" else pair[1][0]

    k = len(twists)
    joins = []
    for i in range(k - 1):
        joins.append((pick(i, "left", "lower"), pick(i + 1, "left", "upper"), _vline(0, -(i + 1), 0)))
        joins.append((pick(i, "right", "lower"), pick(i + 1, "right", "upper"), _vline(1, i + 1, 0)))
    joins.append((pick(0, "left", "upper"), pick(k - 1, "left", "lower"), _vline(0, -k, 0)))
    joins.append((pick(0, "right", "upper"), pick(k - 1, "right", "lower"), _vline(1, k, 0)))
    return _Layout(chains, joins)


def pretzel(twists, mode: LayoutMode = Tight()) -> RibbonDiagram:
    """A pretzel link: a column of modified wraps joined side to side.

    Fragment ``i``'s lower left and right ends join fragment ``i+1``'s upper
    ones, and the outer ends close up around the whole column, so strand
    count and component structure follow from the twist parities.
    """
    family = Pretzel(tuple(twists))
    _check_mode(mode)
    strands, layer_rows, records, _ = _pretzel_layout(family.twists).realize(mode)
    return RibbonDiagram(
        strands=tuple(strands),
        width=Fraction(1),
        crossings=records,
        family=family,
        edge_layers=layer_rows,
        layout_mode=mode,
    )


# ---------------------------------------------------------------------------
# The two classical seeds


def hopf_link() -> RibbonDiagram:
    """The Hopf link as two doubled-back two-stick loops threaded together."""
    horizontal = Strand.from_points(
        [Point2(0, _HALF), Point2(1, _HALF)], closed=True,
        sides=[FoldSide.IN_FRONT, FoldSide.IN_FRONT],
    )
    vertical = Strand.from_points(
        [Point2(_HALF, 0), Point2(_HALF, 1)], closed=True,
        sides=[FoldSide.IN_FRONT, FoldSide.IN_FRONT],
    )
    records = (
        CrossingRecord(
            1,
            over=CrossingEnd(1, 0, Fraction(1, 3)),
            under=CrossingEnd(0, 0, Fraction(1, 2)),
        ),
        CrossingRecord(
            2,
            over=CrossingEnd(0, 1, Fraction(1, 2)),
            under=CrossingEnd(1, 0, Fraction(2, 3)),
        ),
    )
    return RibbonDiagram(
        strands=(horizontal, vertical),
        width=Fraction(1),
        crossings=records,
        family=Hopf(),
        edge_layers=((0, 2), (1, 3)),
        layout_mode=Tight(),
    )


def _pentagon_points() -> list[Point2]:
    """Star-order vertices of the regular pentagon, rationalized."""
    radius = 1 / (math.tan(math.pi / 5) * 2 * math.sin(2 * math.pi / 5))
    pts = []
    for k in (0, 2, 4, 1, 3):
        theta = math.pi / 2 + 2 * math.pi * k / 5
        x = Fraction(radius * math.cos(theta)).limit_denominator(10**15)
        y = Fraction(radius * math.sin(theta)).limit_denominator(10**15)
        pts.append(Point2(x, y))
    return pts


def pentagon_trefoil() -> RibbonDiagram:
    """A trefoil folded flat onto a regular pentagon, five sticks in all.

    The centerline is the pentagon's five-pointed star walked with
    coordinates rounded to rationals near machine precision.  The ledger
    records the three crossings of the trefoil structure the folding
    realizes (the star's two outermost self-intersections cancel against
    each other and are not declared).
    """
    pts = _pentagon_points()
    layers = (0, 0, 1, 1, 2)
    sides = _fold_sides(pts, list(layers), True)
    strand = Strand.from_points(pts, closed=True, sides=sides)
    records = (
        CrossingRecord(
            1,
            over=CrossingEnd(0, 2, Fraction(3, 4)),
            under=CrossingEnd(0, 0, Fraction(1, 2)),
        ),
        CrossingRecord(
            2,
            over=CrossingEnd(0, 3, Fraction(1, 2)),
            under=CrossingEnd(0, 1, Fraction(1, 2)),
        ),
        CrossingRecord(
            3,
            over=CrossingEnd(0, 4, Fraction(1, 2)),
            under=CrossingEnd(0, 2, Fraction(1, 4)),
        ),
    )
    return RibbonDiagram(
        strands=(strand,),
        width=Fraction(1),
        crossings=records,
        family=PentagonTrefoil(),
        edge_layers=(layers,),
        layout_mode=Tight(),
    )


def realize_family(spec: FamilySpec, mode: Optional[LayoutMode] = None) -> RibbonDiagram:
    """Build the reference diagram for a family description.

    Parametric families accept any layout mode (defaulting to tight); the
    Hopf link and pentagon trefoil exist only in their fixed tight form, so
    requesting an exploded layout for them is an error, and the unknot has
    no reference construction at all.
    """
    if isinstance(spec, Torus2):
        return torus_link(spec.q, mode if mode is not None else Tight())
    if isinstance(spec, Twist):
        return twist_knot(spec.n, mode if mode is not None else Tight())
    if isinstance(spec, Pretzel):
        return pretzel(spec.twists, mode if mode is not None else Tight())
    if isinstance(spec, Hopf):
        if mode is not None and not isinstance(mode, Tight):
            raise ParameterError("the Hopf link reference diagram is tight-only")
        return hopf_link()
    if isinstance(spec, PentagonTrefoil):
        if mode is not None and not isinstance(mode, Tight):
            raise ParameterError("the pentagon trefoil is tight-only")
        return pentagon_trefoil()
    raise ParameterError(f"no reference construction for {spec!r}")
