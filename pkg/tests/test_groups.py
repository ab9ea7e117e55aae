from itertools import combinations

import pytest

from mackey_kit.groups import (
    Group, GroupError, cyclic, dihedral, symmetric_3, klein_four,
    direct_product, group_from_table, group_from_permutations, make_group,
    subgroup_lattice, generated_subgroup, is_subgroup, weyl_group, weyl_data,
    double_cosets, quotient_group, subgroup_as_group, conjugate_subgroup,
)


def brute_force_subgroups(G):
    """Oracle: closures of every element subset (small groups only)."""
    found = set()
    elems = list(G.elements())
    for r in range(len(elems) + 1):
        for subset in combinations(elems, r):
            found.add(generated_subgroup(G, subset))
    return sorted(found, key=lambda H: (len(H), H))


class TestMakeGroup:
    def test_cyclic_1(self):
        G = cyclic(1)
        assert G.order == 1

    def test_cyclic_prime(self):
        for p in (2, 3, 5):
            G = cyclic(p)
            assert G.order == p
            assert all(G.element_order(a) in (1, p) for a in G.elements())

    def test_permutation_closure_s3(self):
        G = group_from_permutations([(1, 0, 2), (1, 2, 0)])
        assert G.order == 6
        assert not G.is_abelian()

    def test_bad_table_rejected(self):
        with pytest.raises(GroupError):
            group_from_table([[0, 1], [1, 1]])   # non-bijective row

    def test_non_associative_rejected(self):
        # bijective rows/columns with identity but broken associativity
        table = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ]
        with pytest.raises(GroupError):
            group_from_table(table)

    def test_direct_product_order(self):
        assert klein_four().order == 4
        assert direct_product(cyclic(2), cyclic(3)).order == 6

    def test_make_group_specs(self):
        assert make_group({"cyclic": 4}).order == 4
        assert make_group({"perm_generators": [[1, 0]]}).order == 2
        assert make_group({"product": [{"cyclic": 2}, {"cyclic": 2}]}).order == 4


class TestLattice:
    def test_cyclic6_counts(self):
        G = cyclic(6)
        lat = subgroup_lattice(G)
        oracle = brute_force_subgroups(G)
        assert list(lat.subgroups) == oracle
        assert len(lat.subgroups) == 4
        assert len(lat.classes) == 4

    def test_s3_counts(self):
        G = symmetric_3()
        lat = subgroup_lattice(G)
        oracle = brute_force_subgroups(G)
        assert list(lat.subgroups) == oracle
        assert len(lat.subgroups) == 6
        assert len(lat.classes) == 4

    def test_trivial_group(self):
        lat = subgroup_lattice(cyclic(1))
        assert len(lat.subgroups) == 1

    def test_dihedral8(self):
        G = dihedral(4)
        assert G.order == 8
        lat = subgroup_lattice(G)
        assert list(lat.subgroups) == brute_force_subgroups(G)
        assert len(lat.subgroups) == 10
        assert len(lat.classes) == 8

    def test_representatives_minimal(self):
        lat = subgroup_lattice(dihedral(4))
        for idx, rep in enumerate(lat.representatives):
            members = lat.class_members(idx)
            assert rep == min(members)

    def test_class_counts_stable_under_relabeling(self):
        # conjugating the ambient numbering: isomorphic input, equal counts
        G = symmetric_3()
        perm = [0, 2, 1, 4, 3, 5]
        inv = [perm.index(i) for i in range(6)]
        table = [[inv[G.mul(perm[a], perm[b])] for b in range(6)]
                 for a in range(6)]
        # only a valid relabeling if perm[0] = 0
        H = group_from_table(table)
        assert len(subgroup_lattice(H).classes) == len(subgroup_lattice(G).classes)

    def test_order_bound(self):
        big = direct_product(dihedral(4), cyclic(7))   # order 56
        with pytest.raises(GroupError):
            subgroup_lattice(big)


class TestWeyl:
    def test_abelian_weyl_is_quotient(self):
        G = cyclic(4)
        H = (0, 2)
        W = weyl_group(G, H)
        assert W.order == 2

    def test_weyl_of_whole_group(self):
        G = symmetric_3()
        W = weyl_group(G, tuple(sorted(G.elements())))
        assert W.order == 1

    def test_weyl_of_order2_in_s3(self):
        G = symmetric_3()
        lat = subgroup_lattice(G)
        H = next(H for H in lat.subgroups if len(H) == 2)
        # normalizer of an order-2 subgroup of S3 is itself
        assert weyl_group(G, H).order == 1

    def test_weyl_of_trivial_is_G(self):
        for G in (cyclic(6), symmetric_3(), dihedral(4)):
            W = weyl_group(G, (0,))
            assert W.order == G.order
            wd = weyl_data(G, (0,))
            # reps give a section: table matches G up to the relabeling
            for a in range(W.order):
                for b in range(W.order):
                    ga, gb = wd.reps[a], wd.reps[b]
                    assert wd.to_w[G.mul(ga, gb)] == W.mul(a, b)


class TestQuotient:
    def test_quotient_of_cyclic(self):
        q = quotient_group(cyclic(6), (0, 3))
        assert q.group.order == 3
        assert q.group.table == cyclic(3).table

    def test_quotient_labeling_composes(self):
        # (Z/12 / <6>) / image(<2>) has the same labels as Z/12 / <2>
        G = cyclic(12)
        q1 = quotient_group(G, (0, 6))
        W = q1.group
        img = tuple(sorted({q1.projection[g] for g in (0, 2, 4, 6, 8, 10)}))
        q2 = quotient_group(W, img)
        q3 = quotient_group(G, (0, 2, 4, 6, 8, 10))
        assert q2.group.table == q3.group.table
        for g in G.elements():
            assert q2.projection[q1.projection[g]] == q3.projection[g]

    def test_non_normal_rejected(self):
        G = symmetric_3()
        lat = subgroup_lattice(G)
        H = next(H for H in lat.subgroups if len(H) == 2)
        with pytest.raises(GroupError):
            quotient_group(G, H)


class TestDoubleCosets:
    def test_whole_group(self):
        G = dihedral(4)
        full = tuple(sorted(G.elements()))
        dcs = double_cosets(G, full, full)
        assert len(dcs) == 1
        assert dcs[0].size == G.order

    def test_cyclic4_order2(self):
        G = cyclic(4)
        H = (0, 2)
        dcs = double_cosets(G, H, H)
        assert len(dcs) == 2

    def test_abelian_count(self):
        # |H g K| = |HK| for abelian G, so #cosets = |G| / |HK|
        G = cyclic(12)
        lat = subgroup_lattice(G)
        for H in lat.subgroups:
            for K in lat.subgroups:
                hk = {G.mul(h, k) for h in H for k in K}
                dcs = double_cosets(G, H, K)
                assert len(dcs) == G.order // len(hk)

    def test_sizes_cover_group(self):
        for G in (symmetric_3(), dihedral(4)):
            lat = subgroup_lattice(G)
            for H in lat.subgroups:
                for K in lat.subgroups:
                    dcs = double_cosets(G, H, K)
                    assert sum(d.size for d in dcs) == G.order

    def test_intersections(self):
        G = symmetric_3()
        lat = subgroup_lattice(G)
        for H in lat.subgroups:
            for K in lat.subgroups:
                for d in double_cosets(G, H, K):
                    expected = tuple(sorted(
                        set(H) & set(conjugate_subgroup(G, K, d.rep))))
                    assert d.intersection == expected
