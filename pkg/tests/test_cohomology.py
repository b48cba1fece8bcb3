"""Group cohomology: bar resolution vs the periodic cyclic resolution,
induced and restriction maps, extension classes, torsion tests."""

import random

import pytest

from flatact.cohomology import (Cocycle2, CohomologyError, CyclicCohomology,
                                ZQModule, cocycle_from_text, cocycle_to_text,
                                cyclic_cocycle_from_invariant, extension_class,
                                h1, h2, induced_h2, is_in_image,
                                restriction_h2, torsion_free_check,
                                torsion_free_check_by_restriction)
from flatact.certificates import abelian_identification
from flatact.groups import PermGroup, Permutation, TableGroup
from flatact.zlinalg import AbHom, FinAbGroup, IntMatrix


def trivial_lattice_module(group, rank=1):
    gens = group.generators()
    return ZQModule.lattice(group, [IntMatrix.identity(rank) for _ in gens],
                            rank=rank)


def cyclic_with_matrix(order, mat):
    group = TableGroup.cyclic(order)
    return group, ZQModule.lattice(group, [mat])


class TestBarVsCyclicOracle:
    @pytest.mark.parametrize("m", range(2, 9))
    def test_h2_trivial_z_coefficients(self, m):
        group = TableGroup.cyclic(m)
        module = trivial_lattice_module(group)
        bar = h2(module)
        assert bar.group.invariant_factors == (m,)
        oracle = CyclicCohomology(m, IntMatrix.identity(1))
        assert oracle.group.invariant_factors == (m,)

    def test_h2_sign_action_vanishes(self):
        group, module = cyclic_with_matrix(2, IntMatrix.from_rows([[-1]]))
        assert h2(module).group.order == 1
        assert CyclicCohomology(2, IntMatrix.from_rows([[-1]])).group.order == 1

    def test_h1_sign_action(self):
        group, module = cyclic_with_matrix(2, IntMatrix.from_rows([[-1]]))
        assert h1(module).group.invariant_factors == (2,)
        cc = CyclicCohomology(2, IntMatrix.from_rows([[-1]]), degree=1)
        assert cc.group.invariant_factors == (2,)

    def test_bar_class_matches_cyclic_class(self):
        # rotation action of C4 on Z^2
        mat = IntMatrix.from_rows([[0, -1], [1, 0]])
        group, module = cyclic_with_matrix(4, mat)
        bar = h2(module)
        cc = CyclicCohomology(4, mat)
        assert bar.group.invariant_factors == cc.group.invariant_factors
        t = 1  # generator of the cyclic table group
        for rep in bar.generator_representatives():
            coords = cc.class_of_cocycle(rep, t)
            assert any(coords)

    def test_cyclic_cocycle_from_invariant_roundtrip(self):
        mat = IntMatrix.identity(1)
        group, module = cyclic_with_matrix(3, mat)
        coc = cyclic_cocycle_from_invariant(module, 1, (1,))
        assert coc.is_cocycle()
        cc = CyclicCohomology(3, mat)
        assert cc.class_of_cocycle(coc, 1) == (1,)


class TestKnownGroups:
    def test_h2_s3_trivial_z(self):
        # H^2(G; Z) is the dual of the abelianization: Z/2 for S3
        module = trivial_lattice_module(PermGroup.symmetric(3))
        assert h2(module).group.invariant_factors == (2,)

    def test_h2_klein_trivial_z(self):
        klein = TableGroup.from_function(
            [(i, j) for i in range(2) for j in range(2)],
            lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2), (0, 0))
        factors = h2(trivial_lattice_module(klein)).group.invariant_factors
        assert factors == (2, 2)

    def test_h2_finite_coefficients(self):
        group = TableGroup.cyclic(2)
        module = ZQModule.finite(group, FinAbGroup.of(2),
                                 [IntMatrix.identity(1)])
        assert h2(module).group.invariant_factors == (2,)


class TestCocycles:
    def test_coboundary_is_cocycle_with_zero_class(self):
        mat = IntMatrix.from_rows([[0, -1], [1, -1]])
        group, module = cyclic_with_matrix(3, mat)
        rng = random.Random(7)
        coh = h2(module)
        for _ in range(5):
            b = {x: (rng.randrange(-3, 4), rng.randrange(-3, 4))
                 for x in group.elements() if x != group.identity()}
            cob = Cocycle2.coboundary(module, b)
            assert cob.is_cocycle()
            assert coh.is_zero_class(cob)
            witness = coh.coboundary_witness(cob)
            assert witness is not None
            again = Cocycle2.coboundary(module, witness)
            assert all(module.equal(cob.value(g, h), again.value(g, h))
                       for g in group.elements() for h in group.elements())

    def test_representative_has_its_class(self):
        group = TableGroup.cyclic(4)
        module = trivial_lattice_module(group)
        coh = h2(module)
        for coords in [(1,), (2,), (3,)]:
            rep = coh.representative(coords)
            assert coh.class_of(rep) == coords

    def test_non_cocycle_rejected(self):
        group = TableGroup.cyclic(3)
        module = trivial_lattice_module(group)
        values = {(1, 1): (1,), (1, 2): (0,), (2, 1): (0,), (2, 2): (1,)}
        bad = Cocycle2(module, values)
        if not bad.is_cocycle():
            with pytest.raises(CohomologyError):
                h2(module).class_of(bad)

    def test_text_roundtrip(self):
        group = TableGroup.cyclic(4)
        module = trivial_lattice_module(group)
        rep = h2(module).representative((1,))
        back = cocycle_from_text(cocycle_to_text(rep), module)
        assert all(back.value(g, h) == rep.value(g, h)
                   for g in group.elements() for h in group.elements())


class TestInducedAndRestriction:
    def test_coefficient_reduction_is_iso_for_c2(self):
        group = TableGroup.cyclic(2)
        lat = trivial_lattice_module(group)
        fin = ZQModule.finite(group, FinAbGroup.of(2), [IntMatrix.identity(1)])
        src = h2(lat)
        tgt = h2(fin)
        alpha = AbHom(1, FinAbGroup.of(2), IntMatrix.identity(1))
        ind = induced_h2(alpha, src, tgt)
        gen = ind.apply((1,))
        assert gen == (1,)
        pre = is_in_image((1,), ind)
        assert pre is not None and ind.apply(pre) == (1,)

    def test_restriction_c4_to_c2(self):
        group = TableGroup.cyclic(4)
        module = trivial_lattice_module(group)
        src = h2(module)
        res, tgt = restriction_h2(src, [2])
        assert tgt.group.invariant_factors == (2,)
        # generator restricts to the generator; its double restricts to zero
        assert res.apply((1,)) == (1,)
        assert res.apply((2,)) == (0,)

    def test_equivariance_enforced(self):
        group, module = cyclic_with_matrix(2, IntMatrix.from_rows([[-1]]))
        fin = ZQModule.finite(group, FinAbGroup.of(3), [IntMatrix.identity(1)])
        src = h2(module)
        tgt = h2(fin)
        alpha = AbHom(1, FinAbGroup.of(3), IntMatrix.identity(1))
        with pytest.raises(CohomologyError):
            induced_h2(alpha, src, tgt)


class TestExtensionClass:
    def _a4_extension(self):
        g = PermGroup.alternating(4)
        a_gens = [Permutation.from_cycles(4, [(0, 1), (2, 3)]),
                  Permutation.from_cycles(4, [(0, 2), (1, 3)])]
        a_els, a_group, ident = abelian_identification(g, a_gens)
        return g, a_els, ident, a_group

    def test_cocycle_valid_and_class_well_defined(self):
        g, a_els, ident, a_group = self._a4_extension()
        ext = extension_class(g, a_els, ident, a_group)
        assert ext.cocycle.is_cocycle()
        assert ext.quotient.order() == 3

    def test_section_independence(self):
        g, a_els, ident, a_group = self._a4_extension()
        ext = extension_class(g, a_els, ident, a_group)
        coh = h2(ext.module)
        base = coh.class_of(ext.cocycle)
        rng = random.Random(3)
        for _ in range(5):
            section = {}
            for q in ext.quotient.elements():
                coset = [x for x in g.elements()
                         if ext.projection(x) == q]
                section[q] = rng.choice(coset)
            section[ext.quotient.identity()] = g.identity()
            ext2 = extension_class(g, a_els, ident, a_group, section=section)
            assert coh.class_of(ext2.cocycle) == base


class TestTorsionChecks:
    def test_klein_bottle_is_torsion_free(self):
        group = TableGroup.cyclic(2)
        mat = IntMatrix.from_rows([[1, 0], [0, -1]])
        module = ZQModule.lattice(group, [mat])
        coc = cyclic_cocycle_from_invariant(module, 1, (1, 0))
        ok, witness = torsion_free_check(group, module, coc)
        assert ok and witness is None
        ok2, _ = torsion_free_check_by_restriction(group, module, coc)
        assert ok2

    def test_infinite_dihedral_has_torsion(self):
        group = TableGroup.cyclic(2)
        module = ZQModule.lattice(group, [IntMatrix.from_rows([[-1]])])
        coc = Cocycle2.zero(module)
        ok, witness = torsion_free_check(group, module, coc)
        assert not ok
        x, phi = witness
        assert group.element_order(phi) == 2
        ok2, phi2 = torsion_free_check_by_restriction(group, module, coc)
        assert not ok2 and group.element_order(phi2) == 2

    def test_engines_agree_on_small_random_sample(self):
        rng = random.Random(11)
        cases = []
        c2 = TableGroup.cyclic(2)
        cases.append((c2, ZQModule.lattice(c2, [IntMatrix.from_rows([[0, 1], [1, 0]])])))
        c3 = TableGroup.cyclic(3)
        cases.append((c3, ZQModule.lattice(
            c3, [IntMatrix.from_rows([[0, -1], [1, -1]])])))
        s3 = PermGroup.symmetric(3)
        perm_mats = [IntMatrix.from_rows(
            [[1 if g(j) == i else 0 for j in range(3)] for i in range(3)])
            for g in s3.generators()]
        cases.append((s3, ZQModule.lattice(s3, perm_mats)))
        for group, module in cases:
            coh = h2(module)
            for _ in range(10):
                coords = tuple(rng.randrange(f)
                               for f in coh.group.invariant_factors)
                coc = coh.representative(coords)
                v1, _ = torsion_free_check(group, module, coc)
                v2, _ = torsion_free_check_by_restriction(group, module, coc)
                assert v1 == v2
