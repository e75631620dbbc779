"""Planar diagram codes and link invariants.

A planar diagram (PD) code records each crossing of a diagram as a
quadruple of arc labels read counterclockwise starting from the incoming
under-strand arc.  Arcs are the walk segments between consecutive
under- or over-passages; a q-crossing code uses labels ``1 .. 2q``, each
appearing exactly twice.

This module turns diagrams into PD codes (either by trusting the
declared crossing ledger or by geometrically extracting intersections),
computes the Kauffman bracket and the Jones polynomial in the bracket
variable, and supplies small reference codes for each diagram family so
that a freshly constructed diagram can be checked against its intended
link type.
"""

from __future__ import annotations

import math
import os
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    ComponentError,
    DegenerateOverlap,
    EndpointTouch,
    FormatError,
    GenericityError,
    LedgerError,
    ParameterError,
    PDError,
    TooLarge,
)
from .families import (
    Exploded,
    FamilySpec,
    Hopf,
    PentagonTrefoil,
    Pretzel,
    Torus2,
    Twist,
    Unknot,
)
from .geometry import Point2, RibbonDiagram, proper_intersection
from .laurent import A, A_INV, LOOP, LaurentPolynomial

__all__ = [
    "PDCode",
    "OrientationAssignment",
    "Verdict",
    "TypeCheck",
    "DEFAULT_BRACKET_LIMIT",
    "pd_to_text",
    "pd_from_text",
    "declared_pd",
    "extract_pd",
    "reference_pd",
    "canonical_pd",
    "components",
    "writhe",
    "linking_number",
    "kauffman_bracket",
    "jones_in_A",
    "insert_kink",
    "same_type",
]

Quadruple = tuple[int, int, int, int]

#: Crossings above which the bracket refuses to run unless overridden.
DEFAULT_BRACKET_LIMIT = 24

_LIMIT_ENV = "RIBBONFORGE_BRACKET_LIMIT"


def _bracket_limit(explicit: Optional[int]) -> int:
    if explicit is not None:
        if not isinstance(explicit, int) or explicit < 0:
            raise ParameterError(f"bracket limit must be a non-negative integer, got {explicit!r}")
        return explicit
    raw = os.environ.get(_LIMIT_ENV)
    if raw is None:
        return DEFAULT_BRACKET_LIMIT
    try:
        value = int(raw)
    except ValueError:
        raise ParameterError(f"invalid {_LIMIT_ENV} value {raw!r}")
    if value < 0:
        raise ParameterError(f"{_LIMIT_ENV} must be non-negative, got {value}")
    return value


# ---------------------------------------------------------------------------
# PD codes


def _canonical_cycles(cycles: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Rotate each cycle to start at its smallest arc, sort by that arc."""
    out = []
    for cyc in cycles:
        cyc = tuple(cyc)
        if not cyc:
            raise PDError("components must be non-empty arc cycles")
        pivot = cyc.index(min(cyc))
        out.append(cyc[pivot:] + cyc[:pivot])
    out.sort(key=lambda c: c[0])
    return tuple(out)


def _derive_structure(
    crossings: tuple[Quadruple, ...],
    n_arcs: int,
    succ_hint: Optional[dict],
):
    """Orient every passage and walk the strands.

    Returns ``(components, over_in_slot, succ)`` where ``over_in_slot[k]``
    is 1 or 3 (the slot of the incoming over-arc at crossing ``k``) and
    ``succ`` maps each arc to the arc that follows it along its strand.
    Raises :class:`PDError` when no consistent orientation exists.
    """
    occ: dict[int, list[tuple[int, int]]] = {x: [] for x in range(1, n_arcs + 1)}
    for k, quad in enumerate(crossings):
        for s, x in enumerate(quad):
            occ[x].append((k, s))

    state: dict[tuple[int, int], bool] = {}
    queue: deque = deque()

    def assign(key, value):
        cur = state.get(key)
        if cur is None:
            state[key] = value
            queue.append(key)
        elif cur != value:
            raise PDError("crossing list admits no consistent orientation")

    for k in range(len(crossings)):
        assign((k, 0), True)
        assign((k, 2), False)

    def drain():
        while queue:
            k, s = queue.popleft()
            value = state[(k, s)]
            if s in (1, 3):
                assign((k, 4 - s), not value)
            first, second = occ[crossings[k][s]]
            other = second if (k, s) == first else first
            assign(other, not value)

    drain()
    for x in range(1, n_arcs + 1):
        unknown = [o for o in occ[x] if o not in state]
        if not unknown:
            continue
        if succ_hint is not None:
            y = succ_hint[x]
            candidates = [
                (k, s) for (k, s) in occ[x] if s in (1, 3) and crossings[k][4 - s] == y
            ]
            if not candidates:
                raise PDError("declared components are inconsistent with the crossings")
            assign(min(candidates), True)
        else:
            assign(min(unknown), True)
        drain()

    over_in_slot = []
    succ: dict[int, int] = {}
    for k, (a, b, c, d) in enumerate(crossings):
        succ[a] = c
        if state[(k, 1)]:
            over_in_slot.append(1)
            succ[b] = d
        else:
            over_in_slot.append(3)
            succ[d] = b

    cycles = []
    seen: set[int] = set()
    for x in range(1, n_arcs + 1):
        if x in seen:
            continue
        cyc = []
        cur = x
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = succ[cur]
        if cur != x:
            raise PDError("arc successor walk does not close up")
        cycles.append(tuple(cyc))
    return tuple(cycles), tuple(over_in_slot), succ


@dataclass(frozen=True)
class PDCode:
    """An oriented planar diagram code.

    ``crossings`` holds one quadruple ``(a, b, c, d)`` per crossing, read
    counterclockwise from the incoming under-arc ``a``.  ``components``
    lists each strand as its cycle of arc labels in walk order (derived
    from the crossings when omitted); ``free_loops`` counts closed
    strands that meet no crossing at all.
    """

    crossings: tuple[Quadruple, ...]
    n_arcs: int
    components: Optional[tuple[tuple[int, ...], ...]] = None
    free_loops: int = 0
    _over_in_slot: tuple[int, ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self) -> None:
        quads = []
        for quad in self.crossings:
            quad = tuple(quad)
            if len(quad) != 4 or not all(isinstance(x, int) and x >= 1 for x in quad):
                raise PDError(f"crossing {quad!r} is not a quadruple of positive arc labels")
            quads.append(quad)
        object.__setattr__(self, "crossings", tuple(quads))
        if not isinstance(self.n_arcs, int) or self.n_arcs < 0:
            raise PDError(f"arc count must be a non-negative integer, got {self.n_arcs!r}")
        if not isinstance(self.free_loops, int) or self.free_loops < 0:
            raise PDError(f"free loop count must be non-negative, got {self.free_loops!r}")

        counts = {x: 0 for x in range(1, self.n_arcs + 1)}
        for quad in self.crossings:
            for x in quad:
                if x not in counts:
                    raise PDError(f"arc label {x} out of range 1..{self.n_arcs}")
                counts[x] += 1
        bad = [x for x, c in counts.items() if c != 2]
        if bad:
            raise PDError(f"arc labels must appear exactly twice; offending labels {bad}")

        succ_hint = None
        provided = self.components
        if provided is not None:
            provided = _canonical_cycles(provided)
            labels = [x for cyc in provided for x in cyc]
            if sorted(labels) != list(range(1, self.n_arcs + 1)):
                raise PDError("components must partition the arc labels 1..n_arcs")
            succ_hint = {}
            for cyc in provided:
                for i, x in enumerate(cyc):
                    succ_hint[x] = cyc[(i + 1) % len(cyc)]

        derived, over_in_slot, _succ = _derive_structure(
            self.crossings, self.n_arcs, succ_hint
        )
        if provided is not None and derived != provided:
            raise PDError("declared components do not match the crossing structure")
        object.__setattr__(self, "components", derived)
        object.__setattr__(self, "_over_in_slot", over_in_slot)

    def over_in(self, k: int) -> int:
        """Arc entering crossing ``k`` on the over-strand."""
        return self.crossings[k][self._over_in_slot[k]]

    def over_out(self, k: int) -> int:
        return self.crossings[k][4 - self._over_in_slot[k]]

    def sign(self, k: int) -> int:
        """Crossing sign under the default component orientations."""
        return 1 if self._over_in_slot[k] == 3 else -1


@dataclass(frozen=True)
class OrientationAssignment:
    """A direction choice per component: ``True`` reverses the walk."""

    reversed_components: tuple[bool, ...]

    def __init__(self, reversed_components: Iterable[bool]) -> None:
        object.__setattr__(
            self, "reversed_components", tuple(bool(b) for b in reversed_components)
        )

    @classmethod
    def default(cls, pd: PDCode) -> "OrientationAssignment":
        return cls((False,) * len(pd.components))


def _reversed_flags(pd: PDCode, orientation) -> tuple[bool, ...]:
    ncomp = len(pd.components)
    if orientation is None:
        return (False,) * ncomp
    if isinstance(orientation, OrientationAssignment):
        flags = orientation.reversed_components
    else:
        flags = tuple(bool(b) for b in orientation)
    if len(flags) != ncomp:
        raise ParameterError(
            f"orientation assigns {len(flags)} components but the code has {ncomp}"
        )
    return flags


def _arc_component(pd: PDCode) -> dict[int, int]:
    owner = {}
    for i, cyc in enumerate(pd.components):
        for x in cyc:
            owner[x] = i
    return owner


def components(pd: PDCode) -> int:
    """Number of link components, counting crossing-free loops."""
    return len(pd.components) + pd.free_loops


def writhe(pd: PDCode, orientation=None) -> int:
    """Sum of crossing signs under the given (default: as-walked) orientation."""
    rev = _reversed_flags(pd, orientation)
    owner = _arc_component(pd)
    total = 0
    for k, quad in enumerate(pd.crossings):
        s = pd.sign(k)
        if rev[owner[quad[0]]] != rev[owner[pd.over_in(k)]]:
            s = -s
        total += s
    return total


def linking_number(pd: PDCode, orientation=None):
    """Half the signed count of crossings between the two components."""
    if components(pd) != 2:
        raise ComponentError(
            f"linking number needs exactly 2 components, diagram has {components(pd)}"
        )
    rev = _reversed_flags(pd, orientation)
    owner = _arc_component(pd)
    total = 0
    for k, quad in enumerate(pd.crossings):
        cu = owner[quad[0]]
        co = owner[pd.over_in(k)]
        if cu == co:
            continue
        s = pd.sign(k)
        if rev[cu] != rev[co]:
            s = -s
        total += s
    if total % 2 == 0:
        return total // 2
    return Fraction(total, 2)


# ---------------------------------------------------------------------------
# Text form


_HEADER_RE = re.compile(r"pd (\d+) (\d+)")
_X_RE = re.compile(r"X (\d+) (\d+) (\d+) (\d+)")


def pd_to_text(pd: PDCode) -> str:
    """Serialize to the line-based text form (inverse of :func:`pd_from_text`)."""
    head = f"pd {len(pd.crossings)} {pd.n_arcs}"
    body = [f"X {a} {b} {c} {d}" for (a, b, c, d) in pd.crossings]
    body.extend(["unknot"] * pd.free_loops)
    if body:
        return head + "\n\n" + "\n".join(body) + "\n"
    return head + "\n"


def pd_from_text(text: str) -> PDCode:
    """Parse the text form.

    Lexical problems raise :class:`FormatError`; a well-formed file that
    encodes a structurally invalid code raises :class:`PDError`.
    """
    if not isinstance(text, str):
        raise FormatError("planar diagram text must be a string")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty planar diagram text")
    header = _HEADER_RE.fullmatch(lines[0])
    if header is None:
        raise FormatError(f"bad header line {lines[0]!r}")
    n_crossings, n_arcs = int(header.group(1)), int(header.group(2))
    rest = lines[1:]
    if rest:
        if rest[0] != "":
            raise FormatError("expected a blank line after the header")
        rest = rest[1:]
    quads: list[Quadruple] = []
    loops = 0
    for line in rest:
        m = _X_RE.fullmatch(line)
        if m is not None:
            if loops:
                raise FormatError("crossing lines must precede unknot lines")
            quads.append(tuple(int(g) for g in m.groups()))
        elif line == "unknot":
            loops += 1
        else:
            raise FormatError(f"unparseable line {line!r}")
    if len(quads) != n_crossings:
        raise FormatError(
            f"header announces {n_crossings} crossings, found {len(quads)}"
        )
    return PDCode(tuple(quads), n_arcs, None, loops)


# ---------------------------------------------------------------------------
# Kauffman bracket and Jones polynomial


def kauffman_bracket(pd: PDCode, limit: Optional[int] = None) -> LaurentPolynomial:
    """Kauffman bracket, normalized so a single loop evaluates to 1.

    Crossings are resolved one at a time while tracking, for every partial
    resolution, the matching that tells which pending arc ends are already
    joined through processed material.  The state count stays small when
    successive crossings share arcs, so crossings are processed greedily
    by shared-arc count.
    """
    n = len(pd.crossings)
    lim = _bracket_limit(limit)
    if n > lim:
        raise TooLarge(f"{n} crossings exceed the bracket limit of {lim}")
    if n == 0:
        loops = pd.free_loops
        if loops == 0:
            raise PDError("the empty diagram has no bracket polynomial")
        return LOOP ** (loops - 1)

    remaining = set(range(n))
    open_arcs: set[int] = set()
    order = []
    while remaining:
        best = min(
            remaining,
            key=lambda k: (-sum(1 for x in pd.crossings[k] if x in open_arcs), k),
        )
        remaining.remove(best)
        order.append(best)
        for x in pd.crossings[best]:
            if x in open_arcs:
                open_arcs.remove(x)
            else:
                open_arcs.add(x)

    states: dict[frozenset, LaurentPolynomial] = {
        frozenset(): LaurentPolynomial.one()
    }
    for k in order:
        a, b, c, d = pd.crossings[k]
        new_states: dict[frozenset, LaurentPolynomial] = {}
        for matching, coeff in states.items():
            pairing: dict[int, int] = {}
            for pair in matching:
                u, v = tuple(pair)
                pairing[u] = v
                pairing[v] = u
            for mult, joins in ((A, ((a, b), (c, d))), (A_INV, ((a, d), (b, c)))):
                m = dict(pairing)
                loops = 0
                for x, y in joins:
                    if x == y:
                        loops += 1
                        continue
                    px = m.get(x)
                    py = m.get(y)
                    if px is not None and py is not None:
                        if px == y:
                            del m[x], m[y]
                            loops += 1
                        else:
                            del m[x], m[y]
                            m[px] = py
                            m[py] = px
                    elif px is not None:
                        del m[x]
                        m[px] = y
                        m[y] = px
                    elif py is not None:
                        del m[y]
                        m[py] = x
                        m[x] = py
                    else:
                        m[x] = y
                        m[y] = x
                key = frozenset(frozenset((u, v)) for u, v in m.items())
                term = coeff * mult * LOOP**loops
                acc = new_states.get(key)
                term = term if acc is None else acc + term
                if term.is_zero():
                    new_states.pop(key, None)
                else:
                    new_states[key] = term
        states = new_states

    if set(states) - {frozenset()}:
        raise PDError("bracket sweep left unclosed strands; the code is inconsistent")
    total = states.get(frozenset(), LaurentPolynomial.zero())
    return total.div_exact(LOOP) * LOOP**pd.free_loops


def jones_in_A(pd: PDCode, orientation=None, limit: Optional[int] = None) -> LaurentPolynomial:
    """Jones polynomial in the bracket variable: ``(-A^3)^(-w) <D>``."""
    w = writhe(pd, orientation)
    bracket = kauffman_bracket(pd, limit)
    sign = 1 if w % 2 == 0 else -1
    return bracket * LaurentPolynomial.term(sign, -3 * w)


def insert_kink(pd: PDCode, arc: Optional[int], positive: bool) -> PDCode:
    """Insert a curl on ``arc`` (or on a free loop when ``arc`` is None)."""
    n = pd.n_arcs
    if arc is None:
        if pd.free_loops < 1:
            raise ParameterError("no free loop available to kink")
        a1, a2 = n + 1, n + 2
        quad = (a1, a1, a2, a2) if positive else (a1, a2, a2, a1)
        comps = pd.components + ((a1, a2),)
        return PDCode(pd.crossings + (quad,), n + 2, comps, pd.free_loops - 1)
    if not isinstance(arc, int) or not 1 <= arc <= n:
        raise ParameterError(f"arc label {arc!r} out of range 1..{n}")
    fresh_mid, fresh_tail = n + 1, n + 2
    target = None
    for k, quad in enumerate(pd.crossings):
        if quad[0] == arc:
            target = (k, 0)
            break
        slot = pd._over_in_slot[k]
        if quad[slot] == arc:
            target = (k, slot)
            break
    assert target is not None
    tk, ts = target
    quads = list(pd.crossings)
    patched = list(quads[tk])
    patched[ts] = fresh_tail
    quads[tk] = tuple(patched)
    kink = (
        (arc, fresh_tail, fresh_mid, fresh_mid)
        if positive
        else (arc, fresh_mid, fresh_mid, fresh_tail)
    )
    quads.append(kink)
    comps = []
    for cyc in pd.components:
        if arc in cyc:
            pos = cyc.index(arc)
            cyc = cyc[: pos + 1] + (fresh_mid, fresh_tail) + cyc[pos + 1 :]
        comps.append(cyc)
    return PDCode(tuple(quads), n + 2, tuple(comps), pd.free_loops)


def canonical_pd(pd: PDCode) -> PDCode:
    """Relabel arcs along each component and sort the crossing list."""
    mapping: dict[int, int] = {}
    nxt = 1
    for cyc in pd.components:
        for x in cyc:
            mapping[x] = nxt
            nxt += 1
    quads = sorted(tuple(mapping[x] for x in quad) for quad in pd.crossings)
    comps = tuple(tuple(mapping[x] for x in cyc) for cyc in pd.components)
    return PDCode(tuple(quads), pd.n_arcs, comps, pd.free_loops)


# ---------------------------------------------------------------------------
# Building codes from diagrams


def _assemble_pd(passages_by_strand) -> PDCode:
    """Assemble a code from per-strand passage lists.

    Each passage is ``(edge, param, key, is_over, direction)``; the two
    passages of one crossing share ``key``.  Arcs are numbered along each
    strand in sorted passage order.
    """
    comps = []
    free = 0
    base = 1
    sides: dict = {}
    for plist in passages_by_strand:
        plist = sorted(plist, key=lambda p: (p[0], p[1]))
        m = len(plist)
        if m == 0:
            free += 1
            continue
        for prev, cur in zip(plist, plist[1:]):
            if (prev[0], prev[1]) == (cur[0], cur[1]):
                raise LedgerError("two crossing passages coincide on one strand")
        comps.append(tuple(range(base, base + m)))
        for i, (edge, param, key, is_over, direction) in enumerate(plist):
            out_arc = base + i
            in_arc = base + (i - 1) % m
            role = "over" if is_over else "under"
            entry = sides.setdefault(key, {})
            if role in entry:
                raise LedgerError(f"crossing {key!r} has two {role} ends")
            entry[role] = (in_arc, out_arc, direction)
        base += m

    quads = []
    for key in sorted(sides):
        entry = sides[key]
        if "over" not in entry or "under" not in entry:
            raise LedgerError(f"crossing {key!r} is missing an end")
        u_in, u_out, u_dir = entry["under"]
        o_in, o_out, o_dir = entry["over"]
        orient = o_dir.cross(u_dir)
        if orient == 0:
            raise LedgerError("over and under strands are parallel at a crossing")
        if orient > 0:
            quads.append((u_in, o_out, u_out, o_in))
        else:
            quads.append((u_in, o_in, u_out, o_out))
    return PDCode(tuple(quads), base - 1, tuple(comps), free)


def declared_pd(diagram: RibbonDiagram) -> PDCode:
    """Code read off the crossing ledger, trusting declared over/under data."""
    for strand in diagram.strands:
        if not strand.closed:
            raise PDError("planar diagram codes need closed strands")
    ids = [rec.id for rec in diagram.crossings]
    if len(set(ids)) != len(ids):
        raise LedgerError("crossing ids must be unique")
    passages = [[] for _ in diagram.strands]
    for rec in diagram.crossings:
        for end, is_over in ((rec.over, True), (rec.under, False)):
            direction = diagram.strands[end.strand].edge_vector(end.edge)
            passages[end.strand].append((end.edge, end.param, rec.id, is_over, direction))
    return _assemble_pd(passages)


def _collect_events(loops):
    """All proper pairwise intersections among closed polylines.

    Consecutive edges of one loop are skipped (they legitimately share a
    vertex); any other endpoint touch, collinear overlap, or triple point
    violates genericity.  Segment endpoints are first rescaled onto a
    common integer grid so that the quadratic pair sweep can discard
    strictly separated bounding boxes with machine-int comparisons; boxes
    that touch or overlap fall through to the exact rational test.
    """
    den = 1
    for pts in loops:
        for p in pts:
            d = p.x.denominator
            den = den // math.gcd(den, d) * d
            d = p.y.denominator
            den = den // math.gcd(den, d) * d
    segs = []
    for s, pts in enumerate(loops):
        m = len(pts)
        ipts = [
            (p.x.numerator * (den // p.x.denominator), p.y.numerator * (den // p.y.denominator))
            for p in pts
        ]
        for e in range(m):
            ax, ay = ipts[e]
            bx, by = ipts[(e + 1) % m]
            xlo, xhi = (ax, bx) if ax <= bx else (bx, ax)
            ylo, yhi = (ay, by) if ay <= by else (by, ay)
            segs.append((s, e, pts[e], pts[(e + 1) % m], xlo, xhi, ylo, yhi))
    events = []
    seen_points: set[Point2] = set()
    for i in range(len(segs)):
        s1, e1, p0, p1, axlo, axhi, aylo, ayhi = segs[i]
        for j in range(i + 1, len(segs)):
            s2, e2, q0, q1, bxlo, bxhi, bylo, byhi = segs[j]
            if axhi < bxlo or bxhi < axlo or ayhi < bylo or byhi < aylo:
                continue
            if s1 == s2:
                m = len(loops[s1])
                if (e2 - e1) % m == 1 or (e1 - e2) % m == 1:
                    continue
            try:
                hit = proper_intersection(p0, p1, q0, q1)
            except EndpointTouch:
                raise GenericityError(
                    f"segments ({s1},{e1}) and ({s2},{e2}) touch at an endpoint"
                )
            except DegenerateOverlap:
                raise GenericityError(
                    f"segments ({s1},{e1}) and ({s2},{e2}) overlap along a line"
                )
            if hit is None:
                continue
            pt, t, u = hit
            if pt in seen_points:
                raise GenericityError(f"three or more segments meet at {pt}")
            seen_points.add(pt)
            events.append((pt, (s1, e1, t, p1 - p0), (s2, e2, u, q1 - q0)))
    events.sort(key=lambda ev: (ev[1][:3], ev[2][:3]))
    return events


def extract_pd(diagram: RibbonDiagram) -> PDCode:
    """Code rebuilt from actual segment intersections, checked against the ledger.

    Every geometric intersection must be declared (and vice versa) with
    matching over/under sides; any mismatch raises :class:`LedgerError`.
    """
    if not isinstance(diagram.layout_mode, Exploded):
        raise ParameterError("geometric extraction requires an exploded layout")
    loops = []
    for strand in diagram.strands:
        if not strand.closed:
            raise PDError("planar diagram codes need closed strands")
        loops.append(strand.positions)
    events = _collect_events(loops)

    by_pos = {}
    for rec in diagram.crossings:
        p_over = diagram.strands[rec.over.strand].point_on_edge(rec.over.edge, rec.over.param)
        p_under = diagram.strands[rec.under.strand].point_on_edge(
            rec.under.edge, rec.under.param
        )
        if p_over != p_under:
            raise LedgerError(f"crossing {rec.id} declares ends at different points")
        if p_over in by_pos:
            raise LedgerError(f"two ledger entries share the point {p_over}")
        by_pos[p_over] = rec

    passages = [[] for _ in loops]
    for pt, (s1, e1, t1, d1), (s2, e2, t2, d2) in events:
        rec = by_pos.pop(pt, None)
        if rec is None:
            raise LedgerError(f"intersection at {pt} is not declared in the ledger")
        over_side = (rec.over.strand, rec.over.edge, rec.over.param)
        under_side = (rec.under.strand, rec.under.edge, rec.under.param)
        if over_side == (s1, e1, t1) and under_side == (s2, e2, t2):
            first_over = True
        elif over_side == (s2, e2, t2) and under_side == (s1, e1, t1):
            first_over = False
        else:
            raise LedgerError(
                f"ledger entry {rec.id} does not match the segments meeting at {pt}"
            )
        key = ((s1, e1, t1), (s2, e2, t2))
        passages[s1].append((e1, t1, key, first_over, d1))
        passages[s2].append((e2, t2, key, not first_over, d2))
    if by_pos:
        raise LedgerError(
            f"{len(by_pos)} declared crossings have no geometric intersection"
        )
    return _assemble_pd(passages)


# ---------------------------------------------------------------------------
# Reference codes


def _pretzel_reference(twists: tuple[int, ...]) -> PDCode:
    """Standard pretzel diagram: vertical twist boxes closed top and bottom.

    Box ``i`` occupies ``3i <= x <= 3i+1`` with ``|twists[i]|`` crossing
    cells stacked between integer levels; in a positive box the rising
    diagonal passes in front.  The two plugs of each box connect to the
    neighbors at the top and bottom, and the outermost plugs close around
    the whole row.
    """
    k = len(twists)
    mags = [abs(p) for p in twists]
    height = max(mags + [1]) + 2

    adj: dict[tuple, list] = {}
    edge_id = 0

    def add(plug_a, plug_b, pts):
        nonlocal edge_id
        adj.setdefault(plug_a, []).append((plug_b, pts, edge_id))
        adj.setdefault(plug_b, []).append((plug_a, list(reversed(pts)), edge_id))
        edge_id += 1

    def wire(i: int, start_right: bool):
        m = mags[i]
        xl, xr = 3 * i, 3 * i + 1
        first = xr if start_right else xl
        pts = [Point2(first, 0)]
        if m == 0:
            pts.append(Point2(first, height))
            return pts, start_right
        for t in range(m + 1):
            right = start_right ^ (t % 2 == 1)
            pts.append(Point2(xr if right else xl, 1 + t))
        exit_right = start_right ^ (m % 2 == 1)
        pts.append(Point2(xr if exit_right else xl, height))
        return pts, exit_right

    for i in range(k):
        pts, exit_right = wire(i, False)
        add(("B", i, "L"), ("T", i, "R" if exit_right else "L"), pts)
        pts, exit_right = wire(i, True)
        add(("B", i, "R"), ("T", i, "R" if exit_right else "L"), pts)
    for i in range(k - 1):
        add(("T", i, "R"), ("T", i + 1, "L"), [Point2(3 * i + 1, height), Point2(3 * i + 3, height)])
        add(("B", i, "R"), ("B", i + 1, "L"), [Point2(3 * i + 1, 0), Point2(3 * i + 3, 0)])
    right_edge = 3 * k - 2
    add(
        ("T", 0, "L"),
        ("T", k - 1, "R"),
        [Point2(0, height), Point2(0, height + 1), Point2(right_edge, height + 1), Point2(right_edge, height)],
    )
    add(
        ("B", 0, "L"),
        ("B", k - 1, "R"),
        [Point2(0, 0), Point2(0, -1), Point2(right_edge, -1), Point2(right_edge, 0)],
    )

    loops = []
    visited: set = set()
    for start in sorted(adj):
        if start in visited:
            continue
        pts: list[Point2] = []
        cur = start
        came = None
        while True:
            visited.add(cur)
            nxt = next(entry for entry in adj[cur] if entry[2] != came)
            other, piece, eid = nxt
            pts.extend(piece[:-1])
            came = eid
            cur = other
            if cur == start:
                break
        loops.append(tuple(pts))

    events = _collect_events(loops)
    if len(events) != sum(mags):
        raise GenericityError(
            f"pretzel layout produced {len(events)} intersections, expected {sum(mags)}"
        )
    passages = [[] for _ in loops]
    for pt, (s1, e1, t1, d1), (s2, e2, t2, d2) in events:
        box = int(pt.x // 3)
        p = twists[box]
        over1 = (d1.x * d1.y > 0) == (p > 0)
        over2 = (d2.x * d2.y > 0) == (p > 0)
        if over1 == over2:
            raise GenericityError("pretzel crossing with two parallel-slope strands")
        key = ((s1, e1, t1), (s2, e2, t2))
        passages[s1].append((e1, t1, key, over1, d1))
        passages[s2].append((e2, t2, key, over2, d2))
    return _assemble_pd(passages)


def _torus2_reference(q: int) -> PDCode:
    quads = tuple(
        (q + 1 + i, q + 1 + ((i + 1) % q), 1 + ((i + 1) % q), 1 + i) for i in range(q)
    )
    return PDCode(quads, 2 * q)


def reference_pd(family: FamilySpec) -> PDCode:
    """A small standard code with the link type of ``family``."""
    if isinstance(family, Unknot):
        return PDCode((), 0, None, 1)
    if isinstance(family, Hopf):
        return _torus2_reference(2)
    if isinstance(family, Torus2):
        return _torus2_reference(family.q)
    if isinstance(family, Twist):
        return _pretzel_reference((family.n, 1, 1))
    if isinstance(family, Pretzel):
        return _pretzel_reference(family.twists)
    if isinstance(family, PentagonTrefoil):
        raise ParameterError(
            "the pentagon trefoil has no primitive reference code; "
            "compare against Torus2(3) instead"
        )
    raise ParameterError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Type verification


class Verdict(Enum):
    VERIFIED = "Verified"
    MIRROR_VERIFIED = "MirrorVerified"
    FAILED = "Failed"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class TypeCheck:
    verdict: Verdict
    detail: str

    def __bool__(self) -> bool:
        return self.verdict in (Verdict.VERIFIED, Verdict.MIRROR_VERIFIED)


def _jones_values(pd: PDCode, bracket: LaurentPolynomial) -> frozenset:
    """Writhe-normalized bracket over every orientation choice.

    For a knot this is the singleton {Jones polynomial}; for links the
    normalization depends on the orientation only through the writhe, so
    the set is a link invariant.
    """
    ncomp = len(pd.components)
    values = set()
    for bits in range(1 << ncomp):
        flags = tuple(bool((bits >> i) & 1) for i in range(ncomp))
        w = writhe(pd, flags)
        values.add(bracket * LaurentPolynomial.term(1 if w % 2 == 0 else -1, -3 * w))
    return frozenset(values)


def same_type(
    diagram: Union[RibbonDiagram, PDCode],
    family: FamilySpec,
    limit: Optional[int] = None,
) -> TypeCheck:
    """Check that a diagram has the link type its family promises.

    Component counts must match; two-component links must also agree in
    absolute linking number.  The decisive comparison is the set of
    writhe-normalized bracket polynomials over all orientation choices
    (for knots, simply the Jones polynomial), always up to mirror image,
    which is reported separately.
    """
    pd = diagram if isinstance(diagram, PDCode) else declared_pd(diagram)
    target = Torus2(3) if isinstance(family, PentagonTrefoil) else family
    ref = reference_pd(target)
    nd, nf = components(pd), components(ref)
    if nd != nf:
        return TypeCheck(
            Verdict.FAILED, f"diagram has {nd} components, family expects {nf}"
        )
    try:
        bracket_d = kauffman_bracket(pd, limit)
        bracket_f = kauffman_bracket(ref, limit)
    except TooLarge as exc:
        return TypeCheck(Verdict.INCONCLUSIVE, str(exc))

    if nd == 2:
        lk_d = abs(linking_number(pd))
        lk_f = abs(linking_number(ref))
        if lk_d != lk_f:
            return TypeCheck(
                Verdict.FAILED,
                f"absolute linking numbers differ: {lk_d} vs {lk_f}",
            )

    values_d = _jones_values(pd, bracket_d)
    values_f = _jones_values(ref, bracket_f)
    kind = "Jones polynomials" if nd == 1 else "normalized bracket polynomials"
    if values_d == values_f:
        return TypeCheck(Verdict.VERIFIED, f"{kind} agree")
    if values_d == frozenset(p.mirror() for p in values_f):
        return TypeCheck(Verdict.MIRROR_VERIFIED, f"{kind} agree up to mirror image")
    return TypeCheck(Verdict.FAILED, f"{kind} differ")
