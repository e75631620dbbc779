"""JSON persistence for ribbon diagrams.

A document is a versioned JSON object.  Every rational quantity (vertex
coordinates, the width, crossing parameters, the explode offset) is stored
as a string such as ``"3/4"`` so round-trips are lossless.  Fold angles are
derived data and are not stored: loading recomputes them from the vertex
positions, which re-runs all the model validation.  A straight vertex
(fold angle pi) in hand-written input is therefore accepted on load even
though no construction emits one.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from .errors import FormatError
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
    Unknot,
)
from .geometry import (
    CrossingEnd,
    CrossingRecord,
    FoldSide,
    Point2,
    RibbonDiagram,
    Strand,
)

__all__ = [
    "FORMAT_VERSION",
    "DiagramDocument",
    "family_to_obj",
    "family_from_obj",
    "to_document",
    "from_document",
    "dumps",
    "loads",
    "save",
    "load",
]

FORMAT_VERSION = 1

_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")

_SIDE_NAMES = {FoldSide.IN_FRONT: "front", FoldSide.BEHIND: "behind"}
_SIDES_BY_NAME = {v: k for k, v in _SIDE_NAMES.items()}


@dataclass(frozen=True)
class DiagramDocument:
    """A diagram together with the format version it was stored under."""

    format_version: int
    diagram: RibbonDiagram


def _rational_str(value: Fraction) -> str:
    return str(Fraction(value))


def _parse_rational(raw: Any, what: str) -> Fraction:
    if not isinstance(raw, str) or not _RATIONAL_RE.match(raw):
        raise FormatError(f"{what} must be a rational string like '3/4', got {raw!r}")
    return Fraction(raw)


def _require(obj: Any, key: str, what: str) -> Any:
    if not isinstance(obj, dict):
        raise FormatError(f"{what} must be a JSON object, got {type(obj).__name__}")
    if key not in obj:
        raise FormatError(f"{what} is missing the {key!r} field")
    return obj[key]


def family_to_obj(family: Optional[FamilySpec]) -> Optional[dict]:
    if family is None:
        return None
    obj: dict = {"kind": family.kind}
    obj.update(family.params())
    return obj


def family_from_obj(obj: Any) -> Optional[FamilySpec]:
    if obj is None:
        return None
    kind = _require(obj, "kind", "family")
    if kind == "torus2":
        return Torus2(_int_field(obj, "q", "family"))
    if kind == "twist":
        return Twist(_int_field(obj, "n", "family"))
    if kind == "pretzel":
        twists = _require(obj, "twists", "family")
        if not isinstance(twists, list) or not all(
            isinstance(t, int) and not isinstance(t, bool) for t in twists
        ):
            raise FormatError("pretzel twists must be a list of integers")
        return Pretzel(tuple(twists))
    if kind == "unknot":
        return Unknot()
    if kind == "hopf":
        return Hopf()
    if kind == "pentagon_trefoil":
        return PentagonTrefoil()
    raise FormatError(f"unknown family kind {kind!r}")


def _int_field(obj: dict, key: str, what: str) -> int:
    value = _require(obj, key, what)
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(f"{what}.{key} must be an integer, got {value!r}")
    return value


def _mode_to_obj(mode: Optional[LayoutMode]) -> Optional[dict]:
    if mode is None:
        return None
    if isinstance(mode, Tight):
        return {"kind": "tight"}
    if isinstance(mode, Exploded):
        return {"kind": "exploded", "delta": _rational_str(mode.delta)}
    raise FormatError(f"cannot serialize layout mode {mode!r}")


def _mode_from_obj(obj: Any) -> Optional[LayoutMode]:
    if obj is None:
        return None
    kind = _require(obj, "kind", "layout_mode")
    if kind == "tight":
        return Tight()
    if kind == "exploded":
        return Exploded(_parse_rational(_require(obj, "delta", "layout_mode"), "delta"))
    raise FormatError(f"unknown layout mode {kind!r}")


def _strand_to_obj(strand: Strand) -> dict:
    vertices = []
    for v in strand.vertices:
        vertices.append(
            {
                "x": _rational_str(v.position.x),
                "y": _rational_str(v.position.y),
                "side": _SIDE_NAMES[v.fold_side],
            }
        )
    return {"closed": strand.closed, "vertices": vertices}


def _strand_from_obj(obj: Any, index: int) -> Strand:
    what = f"strand {index}"
    closed = _require(obj, "closed", what)
    if not isinstance(closed, bool):
        raise FormatError(f"{what}.closed must be a boolean")
    raw_vertices = _require(obj, "vertices", what)
    if not isinstance(raw_vertices, list):
        raise FormatError(f"{what}.vertices must be a list")
    points = []
    sides = []
    for j, raw in enumerate(raw_vertices):
        where = f"{what} vertex {j}"
        x = _parse_rational(_require(raw, "x", where), f"{where}.x")
        y = _parse_rational(_require(raw, "y", where), f"{where}.y")
        side_name = _require(raw, "side", where)
        if side_name not in _SIDES_BY_NAME:
            raise FormatError(f"{where}.side must be 'front' or 'behind'")
        points.append(Point2(x, y))
        sides.append(_SIDES_BY_NAME[side_name])
    return Strand.from_points(points, closed=closed, sides=sides)


def _end_to_obj(end: CrossingEnd) -> dict:
    return {"strand": end.strand, "edge": end.edge, "t": _rational_str(end.param)}


def _end_from_obj(obj: Any, what: str) -> CrossingEnd:
    strand = _int_field(obj, "strand", what)
    edge = _int_field(obj, "edge", what)
    param = _parse_rational(_require(obj, "t", what), f"{what}.t")
    return CrossingEnd(strand, edge, param)


def to_document(diagram: RibbonDiagram) -> dict:
    """The JSON-ready dictionary form of a diagram."""
    crossings = []
    for rec in diagram.crossings:
        crossings.append(
            {
                "id": rec.id,
                "over": _end_to_obj(rec.over),
                "under": _end_to_obj(rec.under),
            }
        )
    body = {
        "strands": [_strand_to_obj(s) for s in diagram.strands],
        "width": _rational_str(diagram.width),
        "crossings": crossings,
        "family": family_to_obj(diagram.family),
        "edge_layers": (
            None
            if diagram.edge_layers is None
            else [list(row) for row in diagram.edge_layers]
        ),
        "layout_mode": _mode_to_obj(diagram.layout_mode),
    }
    return {"format_version": FORMAT_VERSION, "diagram": body}


def from_document(obj: Any) -> RibbonDiagram:
    """Rebuild a diagram, re-running every model validation.

    Raises :class:`FormatError` for structural problems with the document
    itself; geometric or ledger inconsistencies surface as the model's own
    errors.
    """
    version = _require(obj, "format_version", "document")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version!r}")
    body = _require(obj, "diagram", "document")
    raw_strands = _require(body, "strands", "diagram")
    if not isinstance(raw_strands, list):
        raise FormatError("diagram.strands must be a list")
    strands = tuple(
        _strand_from_obj(raw, i) for i, raw in enumerate(raw_strands)
    )
    width = _parse_rational(_require(body, "width", "diagram"), "width")
    records = []
    raw_crossings = body.get("crossings", [])
    if not isinstance(raw_crossings, list):
        raise FormatError("diagram.crossings must be a list")
    for raw in raw_crossings:
        what = "crossing"
        rec_id = _int_field(raw, "id", what)
        over = _end_from_obj(_require(raw, "over", what), "crossing.over")
        under = _end_from_obj(_require(raw, "under", what), "crossing.under")
        records.append(CrossingRecord(rec_id, over, under))
    raw_layers = body.get("edge_layers")
    if raw_layers is not None:
        if not isinstance(raw_layers, list) or not all(
            isinstance(row, list)
            and all(isinstance(v, int) and not isinstance(v, bool) for v in row)
            for row in raw_layers
        ):
            raise FormatError("diagram.edge_layers must be a list of integer lists")
        raw_layers = tuple(tuple(row) for row in raw_layers)
    return RibbonDiagram(
        strands=strands,
        width=width,
        crossings=tuple(records),
        family=family_from_obj(body.get("family")),
        edge_layers=raw_layers,
        layout_mode=_mode_from_obj(body.get("layout_mode")),
    )


def dumps(diagram: RibbonDiagram) -> str:
    """Serialize to canonical JSON text: sorted keys, newline-terminated."""
    return json.dumps(to_document(diagram), sort_keys=True, indent=2) + "\n"


def loads(text: str) -> RibbonDiagram:
    """Parse JSON text back into a validated diagram."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from exc
    return from_document(obj)


def save(diagram: RibbonDiagram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(diagram))


def load(path) -> RibbonDiagram:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
