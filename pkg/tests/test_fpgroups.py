"""Finitely presented groups: coset enumeration, low-index subgroup
search, and subgroup presentation rewriting."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatact.fpgroups import (CosetLimitExceeded, CosetTable, FpGroup,
                              PresentationError, SearchBoundExceeded,
                              coxeter_group, cyclic_reduce,
                              dihedral_presentation, e7_weyl_presentation,
                              free_reduce, invert_word, letters_to_word,
                              low_index_subgroups,
                              rewrite_subgroup_presentation,
                              schreier_generators, symmetric_presentation,
                              todd_coxeter, word_to_letters)
from flatact.groups import PermGroup

words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12).map(tuple)


class TestWords:
    @given(words)
    @settings(max_examples=100, deadline=None)
    def test_free_reduce_idempotent_and_no_cancellation(self, w):
        r = free_reduce(w)
        assert free_reduce(r) == r
        assert all(r[i] != -r[i + 1] for i in range(len(r) - 1))

    @given(words)
    @settings(max_examples=100, deadline=None)
    def test_inverse_cancels(self, w):
        assert free_reduce(w + invert_word(w)) == ()

    @given(words)
    @settings(max_examples=100, deadline=None)
    def test_letters_roundtrip(self, w):
        assert letters_to_word(word_to_letters(w)) == w

    def test_cyclic_reduce(self):
        assert cyclic_reduce((1, 2, 3, -1)) == (2, 3)


class TestFpGroup:
    def test_relators_are_reduced(self):
        g = FpGroup(2, ((1, -1, 2, 2), ()))
        assert g.relators == ((2, 2),)

    def test_out_of_range_letter_rejected(self):
        with pytest.raises(PresentationError):
            FpGroup(1, ((1, 2),))
        with pytest.raises(PresentationError):
            FpGroup(1, ((0,),))

    def test_text_roundtrip(self):
        g = symmetric_presentation(4)
        assert FpGroup.from_text(g.to_text()) == g

    def test_malformed_text(self):
        with pytest.raises(PresentationError):
            FpGroup.from_text("nope\n")
        with pytest.raises(PresentationError):
            FpGroup.from_text("gens 2\n1 x\n")

    def test_coxeter_matrix_validation(self):
        with pytest.raises(PresentationError):
            coxeter_group([[2, 3], [3, 1]])  # diagonal must be 1
        with pytest.raises(PresentationError):
            coxeter_group([[1, 3], [4, 1]])  # must be symmetric


class TestToddCoxeter:
    def test_cyclic_group(self):
        g = FpGroup(1, ((1,) * 5,))
        assert todd_coxeter(g).index == 5

    def test_subgroup_cosets_in_s3(self):
        g = symmetric_presentation(3)
        assert todd_coxeter(g).index == 6
        assert todd_coxeter(g, [(1,)]).index == 3
        assert todd_coxeter(g, [(1,), (2,)]).index == 1

    @pytest.mark.parametrize("n", range(2, 7))
    def test_symmetric_presentation_orders(self, n):
        assert todd_coxeter(symmetric_presentation(n)).index == math.factorial(n)

    @pytest.mark.parametrize("m", [2, 3, 5, 8])
    def test_dihedral(self, m):
        assert todd_coxeter(dihedral_presentation(m)).index == 2 * m

    def test_engines_agree(self):
        g = symmetric_presentation(5)
        pure = todd_coxeter(g, [(1,)], engine="pure")
        try:
            comp = todd_coxeter(g, [(1,)], engine="compiled")
        except PresentationError:
            pytest.skip("compiled engine unavailable")
        assert np.array_equal(pure.table, comp.table)

    def test_coset_limit(self):
        with pytest.raises(CosetLimitExceeded):
            todd_coxeter(symmetric_presentation(6), coset_limit=100)

    def test_generator_permutations_generate_the_group(self):
        ct = todd_coxeter(symmetric_presentation(4))
        perms = ct.generator_permutations()
        assert PermGroup(perms, ct.index).order() == 24

    def test_trace_word(self):
        ct = todd_coxeter(symmetric_presentation(3), [(1,)])
        assert ct.trace_word(0, (1,)) == 0
        assert ct.trace_word(0, (2, -2)) == 0

    def test_validation_rejects_tampered_table(self):
        ct = todd_coxeter(symmetric_presentation(3), [(1,)])
        bad = ct.table.copy()
        bad[0, 0], bad[1, 0] = bad[1, 0], bad[0, 0]
        with pytest.raises(PresentationError):
            CosetTable(ct.group, ct.subgroup_words, bad)


class TestLowIndex:
    def test_s3_classes(self):
        g = symmetric_presentation(3)
        results = low_index_subgroups(g, 3)
        assert [t.index for t, _ in results] == [1, 2, 3]

    def test_cyclic_c4(self):
        g = FpGroup(1, ((1, 1, 1, 1),))
        results = low_index_subgroups(g, 4)
        assert sorted(t.index for t, _ in results) == [1, 2, 4]

    def test_free_rank_one(self):
        # Z has exactly one subgroup of each index
        g = FpGroup(1, ())
        results = low_index_subgroups(g, 3)
        assert sorted(t.index for t, _ in results) == [1, 2, 3]

    def test_s4_classes_up_to_index_4(self):
        g = symmetric_presentation(4)
        results = low_index_subgroups(g, 4)
        # S4, A4, dihedral of order 8, point stabilizer S3
        assert sorted(t.index for t, _ in results) == [1, 2, 3, 4]

    def test_generator_words_lie_in_subgroup(self):
        g = symmetric_presentation(4)
        for table, gen_words in low_index_subgroups(g, 4):
            for w in gen_words:
                assert table.trace_word(0, w) == 0

    def test_node_limit(self):
        with pytest.raises(SearchBoundExceeded):
            low_index_subgroups(symmetric_presentation(5), 6, node_limit=10)

    def test_invalid_index(self):
        with pytest.raises(PresentationError):
            low_index_subgroups(symmetric_presentation(3), 0)


class TestRewriting:
    def test_schreier_generators_lie_in_subgroup(self):
        ct = todd_coxeter(symmetric_presentation(4), [(1,), (2,)])
        for w in schreier_generators(ct):
            assert ct.trace_word(0, w) == 0

    def test_alternating_subgroup_of_s4(self):
        g = symmetric_presentation(4)
        (table, _), = [r for r in low_index_subgroups(g, 2) if r[0].index == 2]
        sub, gen_words = rewrite_subgroup_presentation(table)
        assert todd_coxeter(sub).index == 12
        for w in gen_words:
            assert table.trace_word(0, w) == 0

    def test_index_three_subgroup_of_s3_is_c2(self):
        g = symmetric_presentation(3)
        ct = todd_coxeter(g, [(1,)])
        sub, gen_words = rewrite_subgroup_presentation(ct)
        assert todd_coxeter(sub).index == 2
        assert len(gen_words) == sub.ngens

    def test_subgroup_order_times_index_is_group_order(self):
        g = symmetric_presentation(4)
        for table, _ in low_index_subgroups(g, 4):
            sub, _ = rewrite_subgroup_presentation(table)
            assert todd_coxeter(sub).index * table.index == 24


class TestWeylPresentations:
    def test_e7_parabolic_has_index_56(self):
        # cosets of the subgroup generated by the first six reflections
        g = e7_weyl_presentation()
        ct = todd_coxeter(g, [(i,) for i in range(1, 7)])
        assert ct.index == 56
        perms = ct.generator_permutations()
        assert PermGroup(perms, 56).order() == 2903040
