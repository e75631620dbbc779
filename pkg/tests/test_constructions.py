"""Wrap fragments and the closed constructions built from them."""

from __future__ import annotations

from fractions import Fraction

import pytest

from ribbonforge.constructions import (
    hopf_link,
    modified_wrap,
    pentagon_trefoil,
    pretzel,
    torus_link,
    twist_knot,
    wrap,
)
from ribbonforge.errors import ParameterError
from ribbonforge.families import Exploded, Hopf, PentagonTrefoil, Pretzel, Tight, Torus2, Twist
from ribbonforge.geometry import Angle, FoldSide, Point2, WrapFragment
from ribbonforge.laurent import LaurentPolynomial
from ribbonforge.topology import (
    Verdict,
    canonical_pd,
    declared_pd,
    extract_pd,
    jones_in_A,
    linking_number,
    same_type,
    writhe,
)

JONES_RIGHT_TREFOIL = LaurentPolynomial({-4: 1, -12: 1, -16: -1})


def crossing_signs(fragment: WrapFragment) -> list[int]:
    strands = (fragment.strand_AB, fragment.strand_CD)
    signs = []
    for record in fragment.crossings:
        over = strands[record.over.strand].edge_vector(record.over.edge)
        under = strands[record.under.strand].edge_vector(record.under.edge)
        cross = over.cross(under)
        assert cross != 0
        signs.append(1 if cross > 0 else -1)
    return signs


class TestWrap:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 12, -1, -2, -5, -12])
    def test_interior_ledger(self, n):
        frag = wrap(n)
        assert frag.interior_length == abs(n) + 2
        assert frag.interior_sticks == abs(n) + 3
        assert len(frag.crossings) == abs(n)
        assert frag.twist_count == n

    def test_zero_rejected(self):
        with pytest.raises(ParameterError):
            wrap(0)

    def test_non_integer_rejected(self):
        with pytest.raises(ParameterError):
            wrap(Fraction(3, 2))
        with pytest.raises(ParameterError):
            wrap(True)

    def test_signs_follow_twist_sign(self):
        for n in (1, 2, 3, 5):
            assert crossing_signs(wrap(n)) == [1] * n
            assert crossing_signs(wrap(-n)) == [-1] * n

    def test_mirror_preserves_lengths(self):
        plus, minus = wrap(4), wrap(-4)
        assert plus.interior_length == minus.interior_length
        assert plus.interior_sticks == minus.interior_sticks

    def test_ends(self):
        frag = wrap(3)
        assert frag.end_A == Point2(Fraction(-1, 2), Fraction(1, 2))
        assert frag.end_D == Point2(Fraction(3, 2), Fraction(1, 2))
        # Odd twist count: B leaves upward; even: downward.
        assert frag.end_B.y == Fraction(3, 2)
        assert wrap(2).end_B.y == Fraction(-1, 2)
        assert wrap(-3).end_B.y == Fraction(-1, 2)

    def test_open_strands(self):
        frag = wrap(2)
        assert not frag.strand_AB.closed
        assert not frag.strand_CD.closed

    def test_interior_matches_recount(self):
        # Recompute the interior ledger directly from the strand geometry.
        frag = wrap(5, Tight())
        total = Fraction(0)
        sticks = 0
        for strand in (frag.strand_AB, frag.strand_CD):
            for i in range(strand.edge_count):
                a = strand.positions[i]
                b = strand.positions[(i + 1) % len(strand.positions)]
                if a.x == b.x:
                    if not 0 <= a.x <= 1:
                        continue
                    lo, hi = sorted((a.y, b.y))
                else:
                    if not 0 <= a.y <= 1:
                        continue
                    lo, hi = sorted((a.x, b.x))
                part = min(hi, Fraction(1)) - max(lo, Fraction(0))
                if part > 0:
                    total += part
                    sticks += 1
        assert total == frag.interior_length
        assert sticks == frag.interior_sticks


class TestModifiedWrap:
    @pytest.mark.parametrize("n", [1, 2, 3, 6, -1, -4])
    def test_interior_ledger(self, n):
        frag = modified_wrap(n)
        assert frag.interior_length == abs(n) + 2
        assert frag.interior_sticks == abs(n) + 4
        assert len(frag.crossings) == abs(n)

    def test_zero_twists(self):
        frag = modified_wrap(0)
        assert frag.crossings == ()
        # Both strands run straight through the square.
        assert frag.strand_AB.edge_count == 1
        assert frag.strand_CD.edge_count == 1
        assert frag.interior_length == 2

    def test_all_ends_horizontal(self):
        for n in (0, 3, -4):
            ends = modified_wrap(n).ends()
            assert ends["A"].x == Fraction(-1, 2)
            assert ends["B"].x == Fraction(3, 2)
            assert ends["C"].x == Fraction(-1, 2)
            assert ends["D"].x == Fraction(3, 2)

    def test_signs(self):
        assert crossing_signs(modified_wrap(3)) == [1, 1, 1]
        assert crossing_signs(modified_wrap(-3)) == [-1, -1, -1]


def tight_length(diagram) -> Fraction:
    """Total centerline length; construction edges are all axis-aligned."""
    from math import isqrt

    total = Fraction(0)
    for strand in diagram.strands:
        pts = strand.positions
        for i in range(strand.edge_count):
            sq = (pts[(i + 1) % len(pts)] - pts[i]).norm_sq()
            num, den = sq.numerator, sq.denominator
            assert isqrt(num) ** 2 == num and isqrt(den) ** 2 == den
            total += Fraction(isqrt(num), isqrt(den))
    return total


class TestTorusLink:
    @pytest.mark.parametrize("q", list(range(2, 16)))
    def test_length_sticks_components(self, q):
        d = torus_link(q)
        assert tight_length(d) == q + 3
        assert sum(s.edge_count for s in d.strands) == q + 5
        assert len(d.strands) == (1 if q % 2 else 2)
        assert len(d.crossings) == 3 * q - 1

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 6])
    def test_type(self, q):
        verdict = same_type(declared_pd(torus_link(q)), Torus2(q)).verdict
        assert verdict in (Verdict.VERIFIED, Verdict.MIRROR_VERIFIED)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_linking_number(self, n):
        assert abs(linking_number(declared_pd(torus_link(2 * n)))) == n

    def test_q_too_small(self):
        with pytest.raises(ParameterError):
            torus_link(1)

    def test_family_and_mode_recorded(self):
        d = torus_link(4, Exploded())
        assert d.family == Torus2(4)
        assert isinstance(d.layout_mode, Exploded)


class TestTwistKnot:
    @pytest.mark.parametrize("n", list(range(1, 16)))
    def test_length_sticks(self, n):
        d = twist_knot(n)
        assert tight_length(d) == n + 6
        assert sum(s.edge_count for s in d.strands) == n + 8
        assert len(d.strands) == 1

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_type(self, n):
        verdict = same_type(declared_pd(twist_knot(n)), Twist(n)).verdict
        assert verdict in (Verdict.VERIFIED, Verdict.MIRROR_VERIFIED)

    def test_rejects_bad_n(self):
        with pytest.raises(ParameterError):
            twist_knot(0)
        with pytest.raises(ParameterError):
            twist_knot(-2)


class TestPretzel:
    @pytest.mark.parametrize(
        "twists,expected_components",
        [((1, 2, 3), 1), ((2, 2, 2), 3), ((2, 1, 0), 2), ((1, 1, 1), 1), ((0, 0, 0), 3)],
    )
    def test_components(self, twists, expected_components):
        assert len(pretzel(twists).strands) == expected_components

    @pytest.mark.parametrize("twists", [(1, 2, 3), (2, 1, -3, 1), (3, 0, -2), (1, 1, 1, 1, 1)])
    def test_crossing_census_and_length(self, twists):
        d = pretzel(twists)
        assert len(d.crossings) == sum(abs(t) for t in twists)
        assert tight_length(d) == sum(abs(t) + 2 for t in twists)
        # Stick count: zero-twist strands run straight through, two sticks.
        expected = sum(abs(t) + 4 if t else 2 for t in twists)
        assert sum(s.edge_count for s in d.strands) == expected

    @pytest.mark.parametrize("twists", [(1, 1, 1), (1, 2, 3), (2, 1, -3, 1)])
    def test_type(self, twists):
        verdict = same_type(declared_pd(pretzel(twists)), Pretzel(twists)).verdict
        assert verdict in (Verdict.VERIFIED, Verdict.MIRROR_VERIFIED)

    def test_two_one_zero_is_hopf(self):
        verdict = same_type(declared_pd(pretzel((2, 1, 0))), Hopf()).verdict
        assert verdict in (Verdict.VERIFIED, Verdict.MIRROR_VERIFIED)

    def test_needs_three_strands(self):
        with pytest.raises(ParameterError):
            pretzel((1, 2))


class TestDeclaredVersusGeometry:
    """The ledger must be the same diagram in every layout."""

    CASES = (
        lambda: (torus_link(3, Tight()), torus_link(3, Exploded())),
        lambda: (torus_link(6, Tight()), torus_link(6, Exploded())),
        lambda: (twist_knot(2, Tight()), twist_knot(2, Exploded())),
        lambda: (twist_knot(3, Tight()), twist_knot(3, Exploded())),
        lambda: (pretzel((1, 2, 3), Tight()), pretzel((1, 2, 3), Exploded())),
        lambda: (pretzel((2, 1, 0), Tight()), pretzel((2, 1, 0), Exploded())),
    )

    @pytest.mark.parametrize("case", range(len(CASES)))
    def test_tight_equals_exploded(self, case):
        tight, exploded = self.CASES[case]()
        assert canonical_pd(declared_pd(tight)) == canonical_pd(declared_pd(exploded))

    @pytest.mark.parametrize("case", range(len(CASES)))
    def test_extraction_matches_ledger(self, case):
        _, exploded = self.CASES[case]()
        assert canonical_pd(extract_pd(exploded)) == canonical_pd(declared_pd(exploded))

    def test_extraction_at_other_deltas(self):
        for delta in (Fraction(1, 32), Fraction(1, 100), Fraction(1, 1000)):
            d = twist_knot(2, Exploded(delta))
            assert canonical_pd(extract_pd(d)) == canonical_pd(declared_pd(d))

    def test_tight_extraction_rejected(self):
        with pytest.raises(ParameterError):
            extract_pd(torus_link(3, Tight()))


class TestHopfLink:
    def test_structure(self):
        d = hopf_link()
        assert len(d.strands) == 2
        assert all(s.closed and s.edge_count == 2 for s in d.strands)
        assert len(d.crossings) == 2
        assert tight_length(d) == 4

    def test_linking(self):
        assert abs(linking_number(declared_pd(hopf_link()))) == 1

    def test_type(self):
        verdict = same_type(declared_pd(hopf_link()), Hopf()).verdict
        assert verdict in (Verdict.VERIFIED, Verdict.MIRROR_VERIFIED)

    def test_doubled_back_folds(self):
        d = hopf_link()
        for strand in d.strands:
            for vertex in strand.vertices:
                assert vertex.fold_angle == Angle.zero()


class TestPentagonTrefoil:
    def test_five_sticks_one_component(self):
        d = pentagon_trefoil()
        assert len(d.strands) == 1
        assert d.strands[0].edge_count == 5
        assert len(d.crossings) == 3

    def test_is_a_trefoil(self):
        assert jones_in_A(declared_pd(pentagon_trefoil())) == JONES_RIGHT_TREFOIL

    def test_total_length(self):
        import math

        d = pentagon_trefoil()
        pts = d.strands[0].positions
        total = 0.0
        for i in range(5):
            v = pts[(i + 1) % 5] - pts[i]
            total += math.sqrt(float(v.norm_sq()))
        assert abs(total - 5 / math.tan(math.pi / 5)) < 1e-9

    def test_tight_layout_not_extractable(self):
        with pytest.raises(ParameterError):
            extract_pd(pentagon_trefoil())


class TestFoldConsistency:
    """Every construction's vertices satisfy the mirror fold identity."""

    def diagrams(self):
        yield torus_link(5)
        yield torus_link(4, Exploded())
        yield twist_knot(3, Exploded())
        yield pretzel((2, 1, -3, 1))
        yield hopf_link()
        yield pentagon_trefoil()

    def test_fold_angles_consistent(self):
        # Strand.from_points already computes the geometric fold angle at
        # every vertex; building the diagrams without error is the check.
        for diagram in self.diagrams():
            for strand in diagram.strands:
                assert len(strand.vertices) == len(strand.positions)
