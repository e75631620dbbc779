"""SVG rendering tests: panel counts, ordering, determinism, options."""

import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from ribbonforge.constructions import (
    hopf_link,
    pentagon_trefoil,
    pretzel,
    torus_link,
    twist_knot,
    wrap,
)
from ribbonforge.errors import ParameterError
from ribbonforge.families import Exploded, Tight
from ribbonforge.geometry import Point2, RibbonDiagram, Strand
from ribbonforge.svg import RenderOptions, to_svg

SVG_NS = "{http://www.w3.org/2000/svg}"


def parse(text: str) -> ET.Element:
    assert text.startswith('<?xml version="1.0" encoding="UTF-8"?>\n')
    assert text.endswith("\n")
    return ET.fromstring(text)


def elements(root: ET.Element, tag: str, cls: str = None):
    found = root.findall(f"{SVG_NS}{tag}")
    if cls is None:
        return found
    return [el for el in found if el.get("class", "").split()[0] == cls]


def stick_count(strand: Strand) -> int:
    edges = strand.edge_count
    junctions = range(edges) if strand.closed else range(1, edges)
    merged = sum(
        1
        for i in junctions
        if strand.edge_vector((i - 1) % edges).cross(strand.edge_vector(i)) == 0
        and strand.edge_vector((i - 1) % edges).dot(strand.edge_vector(i)) > 0
    )
    return edges - merged


def expected_panels(diagram: RibbonDiagram) -> int:
    """One quad per stick plus two bevel triangles per genuine fold."""
    total = 0
    for s in diagram.strands:
        sticks = stick_count(s)
        folds = sticks if s.closed else sticks - 1
        total += sticks + 2 * folds
    return total


def unit_square() -> RibbonDiagram:
    strand = Strand.from_points(
        [Point2(0, 0), Point2(1, 0), Point2(1, 1), Point2(0, 1)], closed=True
    )
    return RibbonDiagram(strands=(strand,), width=Fraction(1, 4))


class TestPanelCounts:
    @pytest.mark.parametrize(
        "diagram",
        [
            torus_link(3),
            torus_link(4, mode=Exploded(Fraction(1, 64))),
            twist_knot(2),
            twist_knot(3, mode=Exploded(Fraction(1, 16))),
            pretzel((3, 1, -2)),
            pretzel((2, -2, 1), mode=Exploded(Fraction(1, 64))),
            hopf_link(),
        ],
        ids=lambda d: repr(d.family),
    )
    def test_construction_panel_counts(self, diagram):
        root = parse(to_svg(diagram))
        assert len(elements(root, "polygon", "panel")) == expected_panels(diagram)

    def test_unit_square_has_twelve_panels(self):
        root = parse(to_svg(unit_square()))
        assert len(elements(root, "polygon", "panel")) == 12

    def test_pentagon_panels_and_fold_lines(self):
        root = parse(to_svg(pentagon_trefoil()))
        assert len(elements(root, "polygon", "panel")) == 15
        assert len(elements(root, "line", "fold-line")) == 5

    def test_open_strand_fold_count(self):
        # An open zig with 3 sticks folds twice: 3 quads + 4 triangles.
        strand = Strand.from_points(
            [Point2(0, 0), Point2(2, 0), Point2(2, 2), Point2(4, 2)], closed=False
        )
        diagram = RibbonDiagram(strands=(strand,), width=Fraction(1, 2))
        root = parse(to_svg(diagram))
        assert len(elements(root, "polygon", "panel")) == 7
        assert len(elements(root, "line", "fold-line")) == 2


class TestOrderingAndDeterminism:
    def test_panels_sorted_by_layer(self):
        diagram = torus_link(5, mode=Exploded(Fraction(1, 64)))
        root = parse(to_svg(diagram))
        layers = [
            int(el.get("class").split("layer")[1])
            for el in elements(root, "polygon", "panel")
        ]
        assert layers == sorted(layers)
        assert len(set(layers)) > 1  # the stacking actually exercises the sort

    def test_byte_determinism(self):
        a = to_svg(pretzel((3, -1, 2), mode=Exploded(Fraction(1, 64))))
        b = to_svg(pretzel((3, -1, 2), mode=Exploded(Fraction(1, 64))))
        assert a == b

    def test_viewbox_margin(self):
        # Unit square of width 1/4 at scale 10: the ribbon juts half a width
        # (0.125) past the centerline on each side, so the drawn extent is
        # 1.25, plus a one-unit margin per side: (1.25 + 2) * 10 = 32.5.
        svg = to_svg(unit_square(), RenderOptions(scale=10.0))
        root = parse(svg)
        assert root.get("viewBox") == "0 0 32.5 32.5"
        assert root.get("width") == "32.5"
        assert root.get("height") == "32.5"


class TestOptions:
    def test_scale_must_be_positive(self):
        with pytest.raises(ParameterError, match="scale"):
            RenderOptions(scale=0)

    @pytest.mark.parametrize("bad", [-0.1, 1.5])
    def test_opacity_range(self, bad):
        with pytest.raises(ParameterError, match="opacity"):
            RenderOptions(opacity=bad)

    def test_fold_lines_off(self):
        root = parse(to_svg(torus_link(3), RenderOptions(show_fold_lines=False)))
        assert elements(root, "line", "fold-line") == []
        assert len(elements(root, "polygon", "panel")) > 0

    def test_centerline_per_strand(self):
        diagram = torus_link(4)  # two components
        root = parse(to_svg(diagram, RenderOptions(show_centerline=True)))
        lines = elements(root, "polyline", "centerline")
        assert len(lines) == len(diagram.strands)
        # Closed centerlines repeat their starting point.
        first = lines[0].get("points").split()
        assert first[0] == first[-1]

    def test_end_labels_only_on_open_strands(self):
        frag = wrap(2)
        diagram = RibbonDiagram(
            strands=(frag.strand_AB, frag.strand_CD),
            width=Fraction(1),
            crossings=frag.crossings,
            edge_layers=frag.edge_layers,
        )
        root = parse(to_svg(diagram, RenderOptions(label_ends=True)))
        texts = [el.text for el in elements(root, "text", "end-label")]
        assert texts == ["A", "B", "C", "D"]
        closed_root = parse(to_svg(torus_link(3), RenderOptions(label_ends=True)))
        assert elements(closed_root, "text", "end-label") == []

    def test_opacity_echoed(self):
        root = parse(to_svg(unit_square(), RenderOptions(opacity=0.5)))
        panel = elements(root, "polygon", "panel")[0]
        assert panel.get("fill-opacity") == "0.5"

    def test_desc_names_family_and_layout(self):
        diagram = twist_knot(2, mode=Exploded(Fraction(1, 64)))
        root = parse(to_svg(diagram))
        desc = root.find(f"{SVG_NS}desc").text
        assert "family=twist" in desc
        assert "layout=exploded" in desc

    def test_desc_mode_override(self):
        root = parse(to_svg(unit_square(), RenderOptions(mode=Tight())))
        assert "layout=tight" in root.find(f"{SVG_NS}desc").text
