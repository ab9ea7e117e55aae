import pytest

from mackey_kit.exactalg import ZZ, modules_isomorphic
from mackey_kit.groups import (
    cyclic, dihedral, symmetric_3, klein_four, subgroup_lattice,
    quotient_group, conjugate_subgroup,
)
from mackey_kit.mackey import (
    check_axioms, burnside_mackey, fixed_point_mackey,
    trivial_representation, regular_representation, box_product,
)
from mackey_kit.fixedpoints import (
    categorical_fixed_points, inflation, geometric_fixed_points,
    burnside_comparison_map, adjunction_checks, natural_iso_check,
    _preimage_subgroup,
)


def normal_subgroups(G):
    lat = subgroup_lattice(G)
    out = []
    for H in lat.subgroups:
        if all(conjugate_subgroup(G, H, g) == H for g in G.elements()):
            out.append(H)
    return out


class TestCategorical:
    def test_psi_G_is_M(self):
        G = cyclic(4)
        M = burnside_mackey(G, ZZ)
        full = tuple(sorted(G.elements()))
        P = categorical_fixed_points(M, full)
        assert P.group.table == G.table
        for H in subgroup_lattice(G).subgroups:
            assert modules_isomorphic(P.module(H), M.module(H))
        assert check_axioms(P).passed

    def test_psi_trivial(self):
        G = symmetric_3()
        M = burnside_mackey(G, ZZ)
        P = categorical_fixed_points(M, (0,))
        assert P.group.order == 1
        assert modules_isomorphic(P.module((0,)), M.module((0,)))

    def test_psi_matches_independent_burnside(self):
        G = cyclic(4)
        M = burnside_mackey(G, ZZ)
        H = (0, 2)
        P = categorical_fixed_points(M, H)
        B = burnside_mackey(P.group, ZZ)
        assert check_axioms(P).passed
        for K in subgroup_lattice(P.group).subgroups:
            assert modules_isomorphic(P.module(K), B.module(K))


class TestInflation:
    def test_trivial_N_is_identity(self):
        G = cyclic(4)
        M = burnside_mackey(G, ZZ)
        I = inflation(M, G, (0,))
        assert check_axioms(I).passed
        for H in subgroup_lattice(G).subgroups:
            assert modules_isomorphic(I.module(H), M.module(H))

    def test_N_equals_G(self):
        G = cyclic(2)
        M = burnside_mackey(G, ZZ)
        phi = geometric_fixed_points(M, (0, 1))
        I = inflation(phi, G, (0, 1))
        full = (0, 1)
        # value at subgroups containing N is M'(pt); below N it is 0
        assert modules_isomorphic(I.module(full), phi.module((0,)))
        assert I.module((0,)).is_zero_module()

    def test_inflation_passes_axioms(self):
        s3 = symmetric_3()
        n3 = next(H for H in normal_subgroups(s3) if len(H) == 3)
        for G, N in ((cyclic(4), (0, 2)), (s3, n3)):
            M = burnside_mackey(G, ZZ)
            phi = geometric_fixed_points(M, N)
            I = inflation(phi, G, N)
            assert check_axioms(I).passed


class TestGeometric:
    def test_trivial_N_is_M(self):
        G = cyclic(4)
        M = burnside_mackey(G, ZZ)
        phi = geometric_fixed_points(M, (0,))
        assert phi.group.table == G.table
        for H in subgroup_lattice(G).subgroups:
            assert modules_isomorphic(phi.module(H), M.module(H))
        assert check_axioms(phi).passed

    def test_phi_point_value_c2(self):
        G = cyclic(2)
        M = burnside_mackey(G, ZZ)
        phi = geometric_fixed_points(M, (0, 1))
        # coker(tr: Z -> Z^2) = Z
        assert phi.module((0,)).invariants() == (1, ())

    def test_phi_burnside_is_quotient_burnside(self):
        for G in (cyclic(4), symmetric_3(), dihedral(4)):
            for Nsub in normal_subgroups(G):
                A, phi, Aw, maps, q = burnside_comparison_map(G, Nsub, ZZ)
                rep = natural_iso_check(phi, Aw, maps)
                assert rep.passed, (G.order, Nsub, rep.violations)

    def test_phi_axioms(self):
        G = dihedral(4)
        M = burnside_mackey(G, ZZ)
        for N in normal_subgroups(G):
            assert check_axioms(geometric_fixed_points(M, N)).passed

    def test_phi_composition(self):
        # Phi^{N'/N} of Phi^N agrees with Phi^{N'}
        G = cyclic(12)
        M = burnside_mackey(G, ZZ)
        N = (0, 6)
        Np = (0, 3, 6, 9)
        q = quotient_group(G, N)
        phi1 = geometric_fixed_points(M, N)
        Nbar = tuple(sorted({q.projection[x] for x in Np}))
        phi21 = geometric_fixed_points(phi1, Nbar)
        phi2 = geometric_fixed_points(M, Np)
        assert phi21.group.table == phi2.group.table
        lat = subgroup_lattice(phi2.group)
        for H in lat.subgroups:
            assert modules_isomorphic(phi21.module(H), phi2.module(H))


class TestAdjunction:
    def test_burnside_c2(self):
        G = cyclic(2)
        M = burnside_mackey(G, ZZ)
        rep = adjunction_checks(M, (0, 1))
        assert rep.passed, rep.violations

    def test_all_normals_c4_s3(self):
        for G in (cyclic(4), symmetric_3()):
            M = burnside_mackey(G, ZZ)
            for N in normal_subgroups(G):
                rep = adjunction_checks(M, N)
                assert rep.passed, (N, rep.violations)

    def test_trivial_N(self):
        G = cyclic(3)
        M = burnside_mackey(G, ZZ)
        assert adjunction_checks(M, (0,)).passed

    def test_fixed_point_functor(self):
        G = cyclic(4)
        M = fixed_point_mackey(G, regular_representation(G, ZZ), ZZ)
        for N in normal_subgroups(G):
            rep = adjunction_checks(M, N)
            assert rep.passed, (N, rep.violations)


class TestBoxCompatibility:
    def test_psi_commutes_with_box(self):
        G = cyclic(4)
        A = burnside_mackey(G, ZZ)
        T = fixed_point_mackey(G, trivial_representation(G, ZZ), ZZ)
        box = box_product(A, T, validate=False)
        H = (0, 2)
        psi_box = categorical_fixed_points(box, H)
        box_psi = box_product(categorical_fixed_points(A, H),
                              categorical_fixed_points(T, H), validate=False)
        for K in subgroup_lattice(psi_box.group).subgroups:
            assert modules_isomorphic(psi_box.module(K), box_psi.module(K))

    def test_phi_commutes_with_box(self):
        G = cyclic(2)
        N = (0, 1)
        A = burnside_mackey(G, ZZ)
        box = box_product(A, A, validate=False)
        phi_box = geometric_fixed_points(box, N)
        phiA = geometric_fixed_points(A, N)
        box_phi = box_product(phiA, phiA, validate=False)
        for K in subgroup_lattice(phi_box.group).subgroups:
            assert modules_isomorphic(phi_box.module(K), box_phi.module(K))
