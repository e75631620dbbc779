"""Planar diagram codes: validation, text form, invariants, references."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _pdrand import random_pd
from ribbonforge.errors import (
    ComponentError,
    FormatError,
    ParameterError,
    PDError,
)
from ribbonforge.families import Hopf, PentagonTrefoil, Pretzel, Torus2, Twist, Unknot
from ribbonforge.laurent import LOOP, LaurentPolynomial
from ribbonforge.topology import (
    OrientationAssignment,
    PDCode,
    TypeCheck,
    Verdict,
    canonical_pd,
    components,
    insert_kink,
    jones_in_A,
    kauffman_bracket,
    linking_number,
    pd_from_text,
    pd_to_text,
    reference_pd,
    same_type,
    writhe,
)

RIGHT_TREFOIL = PDCode(((4, 5, 2, 1), (5, 6, 3, 2), (6, 4, 1, 3)), 6)
LEFT_TREFOIL = PDCode(((1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)), 6)

# Frozen by hand from the bracket anchors and (-A^3)^(-w) normalization.
JONES_RIGHT_TREFOIL = LaurentPolynomial({-4: 1, -12: 1, -16: -1})
JONES_LEFT_TREFOIL = LaurentPolynomial({4: 1, 12: 1, 16: -1})
# The figure-eight knot is amphichiral; its Jones polynomial is its own mirror.
JONES_FIGURE_EIGHT = LaurentPolynomial({8: 1, 4: -1, 0: 1, -4: -1, -8: 1})


class TestPDCodeValidation:
    def test_components_derived(self):
        assert RIGHT_TREFOIL.components == ((1, 5, 3, 4, 2, 6),)
        assert components(RIGHT_TREFOIL) == 1

    def test_free_loops_count_as_components(self):
        pd = PDCode((), 0, None, 2)
        assert components(pd) == 2

    def test_label_out_of_range(self):
        with pytest.raises(PDError):
            PDCode(((1, 2, 3, 7),), 3)

    def test_label_multiplicity(self):
        with pytest.raises(PDError):
            PDCode(((1, 1, 1, 2),), 2)

    def test_arc_count_mismatch(self):
        with pytest.raises(PDError):
            PDCode(((1, 2, 2, 1),), 3)

    def test_inconsistent_orientation(self):
        # Arc 1 would have to be incoming-under at both crossings.
        with pytest.raises(PDError):
            PDCode(((1, 3, 2, 4), (1, 4, 2, 3)), 4)

    def test_good_components_hint_accepted(self):
        pd = PDCode(RIGHT_TREFOIL.crossings, 6, ((1, 5, 3, 4, 2, 6),))
        assert pd == RIGHT_TREFOIL

    def test_bad_components_hint_rejected(self):
        with pytest.raises(PDError):
            PDCode(RIGHT_TREFOIL.crossings, 6, ((1, 2, 3, 4, 5, 6),))

    def test_hint_partition_must_cover_arcs(self):
        with pytest.raises(PDError):
            PDCode(RIGHT_TREFOIL.crossings, 6, ((1, 5, 3),))

    def test_equality_and_hash(self):
        again = PDCode(((4, 5, 2, 1), (5, 6, 3, 2), (6, 4, 1, 3)), 6)
        assert again == RIGHT_TREFOIL
        assert hash(again) == hash(RIGHT_TREFOIL)
        assert again != LEFT_TREFOIL


class TestTextForm:
    def test_serialize(self):
        text = pd_to_text(LEFT_TREFOIL)
        assert text == "pd 3 6\n\nX 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n"

    def test_round_trip_is_exact(self):
        for pd in (
            RIGHT_TREFOIL,
            LEFT_TREFOIL,
            PDCode((), 0, None, 2),
            PDCode(((1, 1, 2, 2),), 2, None, 1),
            PDCode((), 0),
        ):
            text = pd_to_text(pd)
            back = pd_from_text(text)
            assert back == pd
            assert pd_to_text(back) == text

    def test_unknot_lines(self):
        assert pd_to_text(PDCode((), 0, None, 2)) == "pd 0 0\n\nunknot\nunknot\n"

    def test_bad_header(self):
        with pytest.raises(FormatError):
            pd_from_text("PD 3 6\n\nX 1 4 2 5\n")

    def test_missing_blank_line(self):
        with pytest.raises(FormatError):
            pd_from_text("pd 1 2\nX 1 1 2 2\n")

    def test_count_mismatch(self):
        with pytest.raises(FormatError):
            pd_from_text("pd 2 2\n\nX 1 1 2 2\n")

    def test_crossing_after_unknot(self):
        with pytest.raises(FormatError):
            pd_from_text("pd 1 2\n\nunknot\nX 1 1 2 2\n")

    def test_garbage_line(self):
        with pytest.raises(FormatError):
            pd_from_text("pd 1 2\n\nX 1 one 2 2\n")

    def test_structurally_invalid_raises_pderror(self):
        with pytest.raises(PDError):
            pd_from_text("pd 1 2\n\nX 1 1 1 2\n")

    @settings(max_examples=40)
    @given(st.integers(0, 10**6))
    def test_round_trip_random(self, seed):
        rng = random.Random(seed)
        pd = random_pd(rng, rng.randint(0, 7), free_loops=rng.randint(0, 2))
        assert pd_from_text(pd_to_text(pd)) == pd


class TestOrientedInvariants:
    def test_trefoil_writhes(self):
        assert writhe(RIGHT_TREFOIL) == 3
        assert writhe(LEFT_TREFOIL) == -3

    def test_writhe_orientation_invariance_for_knots(self):
        assert writhe(RIGHT_TREFOIL, (True,)) == 3

    def test_hopf_writhe_flips_with_one_reversal(self):
        hopf = reference_pd(Hopf())
        assert writhe(hopf) == 2
        assert writhe(hopf, (True, False)) == -2
        assert writhe(hopf, (True, True)) == 2

    def test_linking_number(self):
        hopf = reference_pd(Hopf())
        assert linking_number(hopf) == 1
        assert linking_number(hopf, (False, True)) == -1
        assert linking_number(hopf, OrientationAssignment((True, False))) == -1

    def test_linking_needs_two_components(self):
        with pytest.raises(ComponentError):
            linking_number(RIGHT_TREFOIL)

    def test_torus_linking_magnitude(self):
        for n in range(1, 6):
            assert abs(linking_number(reference_pd(Torus2(2 * n)))) == n

    def test_orientation_length_checked(self):
        with pytest.raises(ParameterError):
            writhe(RIGHT_TREFOIL, (True, False))

    def test_default_assignment(self):
        o = OrientationAssignment.default(RIGHT_TREFOIL)
        assert o.reversed_components == (False,)


class TestJones:
    def test_trefoil_values(self):
        assert jones_in_A(RIGHT_TREFOIL) == JONES_RIGHT_TREFOIL
        assert jones_in_A(LEFT_TREFOIL) == JONES_LEFT_TREFOIL

    def test_mirror_pair(self):
        assert JONES_RIGHT_TREFOIL.mirror() == JONES_LEFT_TREFOIL

    def test_unknot(self):
        assert jones_in_A(PDCode((), 0, None, 1)) == LaurentPolynomial.one()

    def test_figure_eight(self):
        pd = reference_pd(Twist(2))
        assert jones_in_A(pd) == JONES_FIGURE_EIGHT
        assert JONES_FIGURE_EIGHT.mirror() == JONES_FIGURE_EIGHT


class TestInsertKink:
    def test_positive_kink_scales_bracket(self):
        kinked = insert_kink(RIGHT_TREFOIL, 1, True)
        assert kauffman_bracket(kinked) == kauffman_bracket(RIGHT_TREFOIL) * LaurentPolynomial.term(-1, 3)
        assert writhe(kinked) == writhe(RIGHT_TREFOIL) + 1

    def test_negative_kink_scales_bracket(self):
        kinked = insert_kink(RIGHT_TREFOIL, 4, False)
        assert kauffman_bracket(kinked) == kauffman_bracket(RIGHT_TREFOIL) * LaurentPolynomial.term(-1, -3)
        assert writhe(kinked) == writhe(RIGHT_TREFOIL) - 1

    def test_jones_is_kink_invariant_on_anchor(self):
        for arc in range(1, 7):
            for positive in (True, False):
                kinked = insert_kink(RIGHT_TREFOIL, arc, positive)
                assert jones_in_A(kinked) == JONES_RIGHT_TREFOIL

    def test_kink_on_free_loop(self):
        pd = PDCode((), 0, None, 1)
        kinked = insert_kink(pd, None, True)
        assert kinked.crossings == ((1, 1, 2, 2),)
        assert jones_in_A(kinked) == LaurentPolynomial.one()

    def test_kink_needs_valid_arc(self):
        with pytest.raises(ParameterError):
            insert_kink(RIGHT_TREFOIL, 7, True)
        with pytest.raises(ParameterError):
            insert_kink(RIGHT_TREFOIL, None, True)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6))
    def test_jones_kink_invariance_random(self, seed):
        rng = random.Random(seed)
        pd = random_pd(rng, rng.randint(1, 6))
        arc = rng.randint(1, pd.n_arcs)
        kinked = insert_kink(pd, arc, rng.random() < 0.5)
        assert jones_in_A(kinked) == jones_in_A(pd)


class TestCanonical:
    def test_idempotent_and_invariant(self):
        canon = canonical_pd(RIGHT_TREFOIL)
        assert canonical_pd(canon) == canon
        assert list(canon.crossings) == sorted(canon.crossings)
        assert kauffman_bracket(canon) == kauffman_bracket(RIGHT_TREFOIL)
        assert writhe(canon) == writhe(RIGHT_TREFOIL)

    def test_labels_follow_walk(self):
        canon = canonical_pd(RIGHT_TREFOIL)
        assert canon.components == ((1, 2, 3, 4, 5, 6),)

    @settings(max_examples=40)
    @given(st.integers(0, 10**6))
    def test_canonical_preserves_bracket(self, seed):
        rng = random.Random(seed)
        pd = random_pd(rng, rng.randint(1, 6))
        assert kauffman_bracket(canonical_pd(pd)) == kauffman_bracket(pd)


class TestReferences:
    def test_torus_matches_braid_closure(self):
        assert reference_pd(Torus2(3)) == RIGHT_TREFOIL

    def test_torus_component_parity(self):
        for q in range(2, 9):
            expected = 1 if q % 2 else 2
            assert components(reference_pd(Torus2(q))) == expected

    def test_hopf_is_two_twist_torus(self):
        assert reference_pd(Hopf()) == reference_pd(Torus2(2))

    def test_unknot(self):
        pd = reference_pd(Unknot())
        assert components(pd) == 1
        assert kauffman_bracket(pd) == LaurentPolynomial.one()

    def test_twist_crossing_counts(self):
        for n in range(1, 6):
            pd = reference_pd(Twist(n))
            assert len(pd.crossings) == n + 2
            assert components(pd) == 1

    def test_twist_one_is_a_trefoil(self):
        poly = jones_in_A(reference_pd(Twist(1)))
        assert poly in (JONES_RIGHT_TREFOIL, JONES_LEFT_TREFOIL)

    def test_figure_eight_writhe_zero(self):
        assert writhe(reference_pd(Twist(2))) == 0

    def test_pretzel_crossing_count_and_components(self):
        pd = reference_pd(Pretzel((3, 1, -2)))
        assert len(pd.crossings) == 6
        assert components(pd) == 1

    def test_all_zero_pretzel_is_an_unlink(self):
        pd = reference_pd(Pretzel((0, 0, 0)))
        assert len(pd.crossings) == 0
        assert components(pd) == 3
        assert kauffman_bracket(pd) == LOOP**2

    def test_pretzel_111_is_a_trefoil(self):
        poly = jones_in_A(reference_pd(Pretzel((1, 1, 1))))
        assert poly in (JONES_RIGHT_TREFOIL, JONES_LEFT_TREFOIL)

    def test_pentagon_has_no_primitive_reference(self):
        with pytest.raises(ParameterError):
            reference_pd(PentagonTrefoil())


class TestSameType:
    def test_verified(self):
        check = same_type(reference_pd(Torus2(3)), Torus2(3))
        assert check.verdict is Verdict.VERIFIED
        assert bool(check)

    def test_mirror_verified(self):
        check = same_type(LEFT_TREFOIL, Torus2(3))
        assert check.verdict is Verdict.MIRROR_VERIFIED
        assert bool(check)

    def test_failed_on_wrong_knot(self):
        check = same_type(reference_pd(Torus2(5)), Torus2(3))
        assert check.verdict is Verdict.FAILED
        assert not check

    def test_failed_on_component_mismatch(self):
        check = same_type(reference_pd(Hopf()), Torus2(3))
        assert check.verdict is Verdict.FAILED
        assert "components" in check.detail

    def test_pentagon_compares_against_trefoil(self):
        check = same_type(reference_pd(Torus2(3)), PentagonTrefoil())
        assert check.verdict is Verdict.VERIFIED

    def test_pretzel_210_is_a_hopf_link(self):
        check = same_type(reference_pd(Pretzel((2, 1, 0))), Hopf())
        assert bool(check)

    def test_twist_against_torus(self):
        check = same_type(reference_pd(Twist(1)), Torus2(3))
        assert bool(check)

    def test_inconclusive_over_limit(self):
        check = same_type(reference_pd(Torus2(3)), Torus2(3), limit=2)
        assert check.verdict is Verdict.INCONCLUSIVE

    def test_two_component_linking_guard(self):
        # Torus2(4) and Torus2(8) have two components each but different
        # absolute linking numbers, so the check must fail fast.
        check = same_type(reference_pd(Torus2(4)), Torus2(8))
        assert check.verdict is Verdict.FAILED
        assert "linking" in check.detail

    def test_result_type(self):
        check = same_type(reference_pd(Unknot()), Unknot())
        assert isinstance(check, TypeCheck)
        assert check.verdict is Verdict.VERIFIED
