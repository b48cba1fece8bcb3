"""Order screening over the rational irreducible maximal finite subgroup
catalogue, and the epimorphism search."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatact.fpgroups import FpGroup, SearchBoundExceeded, symmetric_presentation
from flatact.groups import PermGroup
from flatact.screening import (CatalogError, E7_WEYL_ORDER, ImfCatalog,
                               ScreeningHit, alternating_order,
                               e7_weyl_permutation_group, epimorphism_search,
                               partitions, screen_dimensions)


def partition_count_oracle(n):
    """p(n) by Euler's recurrence with generalized pentagonal numbers."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        k = 1
        while True:
            for pent in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
                if pent > m:
                    break
                p[m] += (-1) ** (k + 1) * p[m - pent]
            if k * (3 * k - 1) // 2 > m:
                break
            k += 1
    return p[n]


class TestPartitions:
    @pytest.mark.parametrize("n,count", [(1, 1), (4, 5), (7, 15), (24, 1575)])
    def test_counts(self, n, count):
        assert len(partitions(n)) == count
        assert len(partitions(n)) == partition_count_oracle(n)

    @given(st.integers(1, 20))
    @settings(max_examples=40, deadline=None)
    def test_structure(self, n):
        parts = partitions(n)
        assert len(set(parts)) == len(parts)
        assert parts == sorted(parts)
        for p in parts:
            assert sum(p) == n
            assert all(a >= b for a, b in zip(p, p[1:]))

    def test_invalid(self):
        with pytest.raises(ValueError):
            partitions(0)


class TestCatalog:
    def test_load_and_consistency(self):
        cat = ImfCatalog.load()
        assert cat.covers(range(1, 25))
        assert E7_WEYL_ORDER in cat.orders(7)
        assert len(cat.orders(8)) == 9

    def test_bad_residues_rejected(self):
        cat = ImfCatalog.load()
        orders = {k: list(cat.orders(k)) for k in cat.dimensions()}
        orders[7] = [12345]
        with pytest.raises(CatalogError):
            ImfCatalog(orders)
        # the same data passes with the check disabled
        ImfCatalog(orders, check=False)

    def test_malformed_text(self):
        with pytest.raises(CatalogError):
            ImfCatalog.from_text("7 645120\n", check=False)
        with pytest.raises(CatalogError):
            ImfCatalog.from_text("7: x\n", check=False)
        with pytest.raises(CatalogError):
            ImfCatalog.from_text("7:\n", check=False)

    def test_missing_dimension(self):
        cat = ImfCatalog.from_text("1: 2\n", check=False)
        with pytest.raises(CatalogError):
            cat.orders(3)


class TestScreening:
    def test_hits_are_exactly_dimensions_7_and_8(self):
        hits = screen_dimensions(ImfCatalog.load())
        assert sorted(h.dimension for h in hits) == [7, 8]
        h7 = next(h for h in hits if h.dimension == 7)
        assert h7.partition == (7,)
        assert h7.orders == (E7_WEYL_ORDER,)
        assert h7.target_order == alternating_order(9)
        h8 = next(h for h in hits if h.dimension == 8)
        assert h8.partition == (8,)
        assert h8.orders == (696729600,)

    def test_removing_non_hit_orders_changes_nothing(self):
        cat = ImfCatalog.load()
        orders = {k: list(cat.orders(k)) for k in cat.dimensions()}
        # drop the largest order in dimension 5 (not part of any hit)
        orders[5] = [min(orders[5])]
        thinned = ImfCatalog(orders, check=False)
        assert screen_dimensions(thinned) == screen_dimensions(cat)

    def test_divisibility_invariant(self):
        for h in screen_dimensions(ImfCatalog.load()):
            assert math.prod(h.orders) % h.target_order == 0

    def test_hit_validation(self):
        with pytest.raises(ValueError):
            ScreeningHit(3, (3,), (10,), 10, 60)

    def test_uncovered_range_rejected(self):
        cat = ImfCatalog.from_text("1: 2\n2: 8 12\n3: 48\n", check=False)
        with pytest.raises(CatalogError):
            screen_dimensions(cat, dims=[4])


class TestEpimorphismSearch:
    def test_a5_onto_itself(self):
        a5 = PermGroup.alternating(5)
        result = epimorphism_search(a5, a5)
        assert result.found
        assert len(result.epimorphisms) >= 1

    def test_s5_has_no_epimorphism_onto_a5(self):
        result = epimorphism_search(PermGroup.symmetric(5),
                                    PermGroup.alternating(5))
        assert not result.found
        assert result.epimorphisms == ()

    def test_presented_source(self):
        # S3 presented, mapped onto the symmetric group of degree 3
        result = epimorphism_search(symmetric_presentation(3),
                                    PermGroup.symmetric(3))
        assert result.found

    def test_presented_source_no_epimorphism(self):
        # no surjection from C4 onto S3
        result = epimorphism_search(FpGroup(1, ((1, 1, 1, 1),)),
                                    PermGroup.symmetric(3))
        assert not result.found

    def test_cyclic_counts_up_to_automorphism(self):
        # surjections C6 -> C6 up to Aut(C6) = one class
        c6 = PermGroup.cyclic(6)
        result = epimorphism_search(FpGroup(1, ((1,) * 6,)), c6)
        assert len(result.epimorphisms) == 1

    def test_node_limit(self):
        with pytest.raises(SearchBoundExceeded):
            epimorphism_search(PermGroup.symmetric(5),
                               PermGroup.alternating(5), node_limit=3)


class TestE7Realization:
    def test_degree_56_realization(self):
        group, table = e7_weyl_permutation_group()
        assert group.degree == 56
        assert table.index == 56
        assert group.order() == E7_WEYL_ORDER
