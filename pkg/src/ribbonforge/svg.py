"""SVG rendering of ribbon diagrams.

The ribbon of width w is drawn as opaque panels around the centerline:
one quadrilateral for every maximal straight run and a pair of bevel
triangles at every genuine fold (fold angle < pi), the region where the
strip doubles over its own corner.  Panels are painted in increasing
layer order so that material the ledger stacks higher covers what lies
below; within one layer the element order is fixed by the walk, so the
byte output is deterministic.  Folds of angle zero (hairpins) get
zero-area triangles, and coincident tight-mode panels simply paint on
top of each other.

Coordinates here are floating point.  Exactness matters for the metrics,
not for pixels.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Optional

from .errors import ParameterError
from .families import LayoutMode
from .geometry import RibbonDiagram, Strand

__all__ = ["RenderOptions", "to_svg"]

_PALETTE = ("#4878a8", "#b05a4a", "#58935c", "#8a66a8", "#b08d48", "#4aa0a0")


@dataclass(frozen=True)
class RenderOptions:
    """Knobs for :func:`to_svg`.

    ``mode`` is purely descriptive (it is echoed in the SVG header so a
    figure records how its diagram was laid out); the geometry always
    comes from the diagram itself.
    """

    mode: Optional[LayoutMode] = None
    scale: float = 48.0
    show_fold_lines: bool = True
    show_centerline: bool = False
    opacity: float = 0.85
    label_ends: bool = False

    def __post_init__(self) -> None:
        if not self.scale > 0:
            raise ParameterError(f"scale must be positive, got {self.scale}")
        if not 0 <= self.opacity <= 1:
            raise ParameterError(f"opacity must lie in [0, 1], got {self.opacity}")


def _fmt(value: float) -> str:
    out = f"{value:.4f}".rstrip("0").rstrip(".")
    return "0" if out == "-0" else out


def _unit(x: float, y: float) -> tuple[float, float]:
    norm = math.hypot(x, y)
    return (x / norm, y / norm)


def _straight_runs(strand: Strand) -> list[list[int]]:
    """Edge indices grouped into maximal straight runs, in walk order."""
    edges = strand.edge_count
    if strand.closed:
        junctions = list(range(edges))
    else:
        junctions = list(range(1, edges))

    def straight(i: int) -> bool:
        before = strand.edge_vector((i - 1) % edges)
        after = strand.edge_vector(i)
        return before.cross(after) == 0 and before.dot(after) > 0

    breaks = [i for i in junctions if not straight(i)]
    if not strand.closed:
        runs = []
        current = [0]
        for i in range(1, edges):
            if i in breaks:
                runs.append(current)
                current = []
            current.append(i)
        runs.append(current)
        return runs
    if not breaks:
        # A closed strand cannot be straight everywhere; defensive fallback.
        return [list(range(edges))]
    runs = []
    for k, start in enumerate(breaks):
        stop = breaks[(k + 1) % len(breaks)]
        run = []
        i = start
        while True:
            run.append(i)
            i = (i + 1) % edges
            if i == stop:
                break
        runs.append(run)
    return runs


class _Painter:
    """Accumulates drawable pieces, then assembles deterministic SVG text."""

    def __init__(self, diagram: RibbonDiagram, opts: RenderOptions) -> None:
        self.diagram = diagram
        self.opts = opts
        self.panels: list[tuple[int, int, list[tuple[float, float]], str]] = []
        self.fold_lines: list[tuple[tuple[float, float], tuple[float, float]]] = []
        self.centerlines: list[tuple[bool, list[tuple[float, float]]]] = []
        self.labels: list[tuple[tuple[float, float], str]] = []
        self._seq = 0

    def _layer(self, strand: int, edge: int) -> int:
        layers = self.diagram.edge_layers
        if layers is None:
            return 0
        return layers[strand][edge]

    def _add_panel(self, layer: int, pts: list[tuple[float, float]], fill: str) -> None:
        self.panels.append((layer, self._seq, pts, fill))
        self._seq += 1

    def _bevel_triangle(
        self,
        v: tuple[float, float],
        direction: tuple[float, float],
        crease: tuple[float, float],
        halfw: float,
    ) -> list[tuple[float, float]]:
        """Triangle between the square panel end at v and the crease line.

        ``direction`` is the unit travel direction of the strip arriving at
        the fold; the triangle sits on whichever side of the centerline the
        crease juts forward of the square end.
        """
        ux, uy = direction
        nx, ny = -uy, ux
        dot_u = crease[0] * ux + crease[1] * uy
        dot_n = crease[0] * nx + crease[1] * ny
        sigma = 1.0 if dot_u * dot_n >= 0 else -1.0
        corner = (v[0] + sigma * halfw * nx, v[1] + sigma * halfw * ny)
        reach = sigma * halfw / dot_n
        tip = (v[0] + reach * crease[0], v[1] + reach * crease[1])
        return [v, corner, tip]

    def _crease_segment(
        self,
        v: tuple[float, float],
        direction: tuple[float, float],
        crease: tuple[float, float],
        halfw: float,
    ) -> tuple[tuple[float, float], tuple[float, float]]:
        ux, uy = direction
        nx, ny = -uy, ux
        dot_n = crease[0] * nx + crease[1] * ny
        reach = halfw / dot_n
        return (
            (v[0] + reach * crease[0], v[1] + reach * crease[1]),
            (v[0] - reach * crease[0], v[1] - reach * crease[1]),
        )

    def add_strand(self, index: int, strand: Strand) -> None:
        halfw = float(self.diagram.width) / 2.0
        fill = _PALETTE[index % len(_PALETTE)]
        pts = [(float(v.position.x), float(v.position.y)) for v in strand.vertices]
        runs = _straight_runs(strand)

        for run in runs:
            a = pts[run[0]]
            b = pts[(run[-1] + 1) % len(pts)]
            ux, uy = _unit(b[0] - a[0], b[1] - a[1])
            nx, ny = -uy, ux
            quad = [
                (a[0] + halfw * nx, a[1] + halfw * ny),
                (b[0] + halfw * nx, b[1] + halfw * ny),
                (b[0] - halfw * nx, b[1] - halfw * ny),
                (a[0] - halfw * nx, a[1] - halfw * ny),
            ]
            layer = max(self._layer(index, e) for e in run)
            self._add_panel(layer, quad, fill)

        # Folds live at the first edge of every run (closed) or at interior
        # run boundaries (open): the junction between consecutive runs.
        edges = strand.edge_count
        for k, run in enumerate(runs):
            if not strand.closed and k == 0:
                continue
            fold_edge = run[0]
            prev_edge = (fold_edge - 1) % edges
            v = pts[fold_edge]
            pv = pts[prev_edge]
            nv = pts[(fold_edge + 1) % len(pts)]
            u = _unit(v[0] - pv[0], v[1] - pv[1])
            w = _unit(nv[0] - v[0], nv[1] - v[1])
            sx, sy = u[0] + w[0], u[1] + w[1]
            if math.hypot(sx, sy) < 1e-9:
                crease = (-u[1], u[0])
            else:
                crease = _unit(sx, sy)
            layer = max(self._layer(index, prev_edge), self._layer(index, fold_edge))
            self._add_panel(layer, self._bevel_triangle(v, u, crease, halfw), fill)
            back = (-w[0], -w[1])
            self._add_panel(layer, self._bevel_triangle(v, back, crease, halfw), fill)
            if self.opts.show_fold_lines:
                self.fold_lines.append(self._crease_segment(v, u, crease, halfw))

        if self.opts.show_centerline:
            line = list(pts)
            if strand.closed:
                line.append(pts[0])
            self.centerlines.append((strand.closed, line))

        if self.opts.label_ends and not strand.closed:
            start_letter = chr(ord("A") + (2 * index) % 26)
            end_letter = chr(ord("A") + (2 * index + 1) % 26)
            self.labels.append((pts[0], start_letter))
            self.labels.append((pts[-1], end_letter))

    def render(self) -> str:
        everything: list[tuple[float, float]] = []
        for _, _, poly, _ in self.panels:
            everything.extend(poly)
        for a, b in self.fold_lines:
            everything.extend((a, b))
        for _, line in self.centerlines:
            everything.extend(line)
        everything.extend(p for p, _ in self.labels)
        if everything:
            min_x = min(p[0] for p in everything)
            max_x = max(p[0] for p in everything)
            min_y = min(p[1] for p in everything)
            max_y = max(p[1] for p in everything)
        else:
            min_x = max_x = min_y = max_y = 0.0
        scale = self.opts.scale

        def place(p: tuple[float, float]) -> tuple[float, float]:
            return (
                (p[0] - min_x + 1.0) * scale,
                (max_y + 1.0 - p[1]) * scale,
            )

        width = (max_x - min_x + 2.0) * scale
        height = (max_y - min_y + 2.0) * scale
        root = ET.Element(
            "svg",
            {
                "xmlns": "http://www.w3.org/2000/svg",
                "version": "1.1",
                "width": _fmt(width),
                "height": _fmt(height),
                "viewBox": f"0 0 {_fmt(width)} {_fmt(height)}",
            },
        )
        desc_bits = ["ribbon diagram"]
        family = self.diagram.family
        if family is not None:
            desc_bits.append(f"family={family.kind}")
        mode = self.opts.mode if self.opts.mode is not None else self.diagram.layout_mode
        if mode is not None:
            desc_bits.append(f"layout={mode.kind}")
        ET.SubElement(root, "desc").text = " ".join(desc_bits)

        for layer, _, poly, fill in sorted(self.panels, key=lambda t: (t[0], t[1])):
            points = " ".join(
                f"{_fmt(x)},{_fmt(y)}" for x, y in (place(p) for p in poly)
            )
            ET.SubElement(
                root,
                "polygon",
                {
                    "class": f"panel layer{layer}",
                    "points": points,
                    "fill": fill,
                    "fill-opacity": _fmt(self.opts.opacity),
                    "stroke": "#1c2430",
                    "stroke-width": _fmt(0.02 * scale),
                },
            )
        for a, b in self.fold_lines:
            pa, pb = place(a), place(b)
            ET.SubElement(
                root,
                "line",
                {
                    "class": "fold-line",
                    "x1": _fmt(pa[0]),
                    "y1": _fmt(pa[1]),
                    "x2": _fmt(pb[0]),
                    "y2": _fmt(pb[1]),
                    "stroke": "#1c1c1c",
                    "stroke-width": _fmt(0.03 * scale),
                    "stroke-dasharray": f"{_fmt(0.12 * scale)} {_fmt(0.08 * scale)}",
                },
            )
        for _, line in self.centerlines:
            points = " ".join(
                f"{_fmt(x)},{_fmt(y)}" for x, y in (place(p) for p in line)
            )
            ET.SubElement(
                root,
                "polyline",
                {
                    "class": "centerline",
                    "points": points,
                    "fill": "none",
                    "stroke": "#c03030",
                    "stroke-width": _fmt(0.04 * scale),
                },
            )
        for p, text in self.labels:
            x, y = place(p)
            el = ET.SubElement(
                root,
                "text",
                {
                    "class": "end-label",
                    "x": _fmt(x),
                    "y": _fmt(y - 0.15 * scale),
                    "text-anchor": "middle",
                    "font-size": _fmt(0.35 * scale),
                    "font-family": "sans-serif",
                },
            )
            el.text = text
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            + ET.tostring(root, encoding="unicode")
            + "\n"
        )


def to_svg(diagram: RibbonDiagram, opts: Optional[RenderOptions] = None) -> str:
    """Render a diagram to SVG 1.1 text.

    Output is deterministic: element order is layers-then-walk-order for
    panels, then fold lines, centerlines, and labels in walk order.  The
    viewBox covers the drawn geometry plus a one-unit margin.
    """
    options = opts if opts is not None else RenderOptions()
    painter = _Painter(diagram, options)
    for i, strand in enumerate(diagram.strands):
        painter.add_strand(i, strand)
    return painter.render()
