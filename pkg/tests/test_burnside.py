import random

import pytest

from mackey_kit.groups import (
    cyclic, dihedral, symmetric_3, klein_four, subgroup_lattice, weyl_group,
)
from mackey_kit.gsets import orbit, cartesian_product, disjoint_union
from mackey_kit.burnside import (
    BurnsideElement, BurnsideError, basis_element, unit_element, from_gset,
    multiply_geometric, multiply_marks, table_of_marks, marks_hom,
    group_homology, derived_burnside_ranks, bar_complex,
)

TEST_GROUPS = {
    "c2": cyclic(2),
    "c3": cyclic(3),
    "c4": cyclic(4),
    "c6": cyclic(6),
    "v4": klein_four(),
    "s3": symmetric_3(),
    "d8": dihedral(4),
    "c12": cyclic(12),
}


def all_basis(G):
    lat = subgroup_lattice(G)
    return [basis_element(G, H) for H in lat.representatives]


class TestFromGSet:
    def test_point(self):
        G = symmetric_3()
        a = from_gset(orbit(G, tuple(G.elements())))
        assert a == unit_element(G)

    def test_disjoint_union_doubles(self):
        G = cyclic(4)
        S = orbit(G, (0, 2))
        SS, _ = disjoint_union(S, S)
        assert from_gset(SS) == 2 * from_gset(S)

    def test_square_of_free_c2(self):
        G = cyclic(2)
        free = orbit(G, (0,))
        P, _, _ = cartesian_product(free, free)
        a = from_gset(P)
        lat = subgroup_lattice(G)
        assert a.coords[lat.class_of[(0,)]] == 2
        assert sum(a.coords) == 2


class TestGeometricProduct:
    def test_unit(self):
        for G in TEST_GROUPS.values():
            one = unit_element(G)
            for x in all_basis(G):
                assert multiply_geometric(one, x) == x

    def test_free_square(self):
        for G in TEST_GROUPS.values():
            free = basis_element(G, (0,))
            sq = multiply_geometric(free, free)
            assert sq == G.order * free

    def test_c6_coprime_orbits(self):
        G = cyclic(6)
        a = basis_element(G, (0, 2, 4))
        b = basis_element(G, (0, 3))
        prod = multiply_geometric(a, b)
        # oracle: orbit decomposition of the product G-set
        P, _, _ = cartesian_product(orbit(G, (0, 2, 4)), orbit(G, (0, 3)))
        assert prod == from_gset(P)
        assert prod == basis_element(G, (0,))

    def test_matches_product_gset(self):
        for G in (cyclic(4), symmetric_3(), dihedral(4)):
            lat = subgroup_lattice(G)
            for H in lat.representatives:
                for K in lat.representatives:
                    P, _, _ = cartesian_product(orbit(G, H), orbit(G, K))
                    assert multiply_geometric(
                        basis_element(G, H), basis_element(G, K)) == from_gset(P)

    def test_ring_laws_on_basis(self):
        rng = random.Random(2)
        for G in (cyclic(6), symmetric_3(), dihedral(4)):
            basis = all_basis(G)
            for _ in range(10):
                a, b, c = (rng.choice(basis) for _ in range(3))
                assert multiply_geometric(a, b) == multiply_geometric(b, a)
                assert multiply_geometric(multiply_geometric(a, b), c) == \
                    multiply_geometric(a, multiply_geometric(b, c))

    def test_mismatched_groups(self):
        with pytest.raises(BurnsideError):
            multiply_geometric(unit_element(cyclic(2)), unit_element(cyclic(3)))


class TestMarks:
    def test_cyclic2_table(self):
        tom = table_of_marks(cyclic(2))
        assert tom.marks == ((2, 1), (0, 1))

    def test_unit_marks_all_ones(self):
        for G in TEST_GROUPS.values():
            assert set(marks_hom(unit_element(G))) == {1}

    def test_free_marks_square(self):
        G = cyclic(2)
        free = basis_element(G, (0,))
        assert marks_hom(free) == (2, 0)
        sq = multiply_geometric(free, free)
        assert marks_hom(sq) == (4, 0)

    def test_triangular_positive_diagonal(self):
        for G in TEST_GROUPS.values():
            lat = subgroup_lattice(G)
            tom = table_of_marks(G)
            k = len(lat.classes)
            for i in range(k):
                assert tom.marks[i][i] > 0
                norm = lat.normalizers[lat.representatives[i]]
                assert tom.marks[i][i] == len(norm) // len(lat.representatives[i])
                for j in range(i):
                    assert tom.marks[i][j] == 0

    def test_marks_multiplicative(self):
        rng = random.Random(5)
        for G in (cyclic(6), dihedral(4)):
            basis = all_basis(G)
            k = len(basis)
            for _ in range(8):
                a = BurnsideElement(G, tuple(rng.randint(-3, 3) for _ in range(k)))
                b = BurnsideElement(G, tuple(rng.randint(-3, 3) for _ in range(k)))
                ma, mb = marks_hom(a), marks_hom(b)
                mab = marks_hom(multiply_geometric(a, b))
                assert mab == tuple(x * y for x, y in zip(ma, mb))


class TestMarksProduct:
    def test_agrees_with_geometric_everywhere(self):
        for name, G in TEST_GROUPS.items():
            for a in all_basis(G):
                for b in all_basis(G):
                    assert multiply_marks(a, b) == multiply_geometric(a, b), name

    def test_c6_example(self):
        G = cyclic(6)
        a = basis_element(G, (0, 2, 4))
        b = basis_element(G, (0, 3))
        assert multiply_marks(a, b) == basis_element(G, (0,))


class TestGroupHomology:
    def test_trivial_group(self):
        hs = group_homology(cyclic(1), 3)
        assert hs[0].invariants() == (1, ())
        for h in hs[1:]:
            assert h.is_zero_module()

    def test_cyclic_p_low_degrees(self):
        # H_0 = Z, H_1 = Z/p, H_2 = 0, H_3 = Z/p
        for p in (2, 3):
            hs = group_homology(cyclic(p), 3)
            assert hs[0].invariants() == (1, ())
            assert hs[1].invariants() == (0, (p,))
            assert hs[2].is_zero_module()
            assert hs[3].invariants() == (0, (p,))

    def test_klein_h1(self):
        # H_1(V4) = V4^ab = Z/2 x Z/2
        hs = group_homology(klein_four(), 1)
        assert hs[1].invariants() == (0, (2, 2))

    def test_degree0_reproduces_class_count(self):
        for G in TEST_GROUPS.values():
            lat = subgroup_lattice(G)
            per_class = derived_burnside_ranks(G, 0)
            assert len(per_class) == len(lat.classes)
            for hs in per_class:
                assert hs[0].invariants() == (1, ())

    def test_s3_h1_abelianization(self):
        hs = group_homology(symmetric_3(), 1)
        assert hs[1].invariants() == (0, (2,))

    def test_bar_bound(self):
        with pytest.raises(BurnsideError):
            bar_complex(cyclic(12), 4)
