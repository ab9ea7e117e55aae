import random

import pytest

from mackey_kit.exactalg import ZZ, QQ, Matrix, ModuleMap, modules_isomorphic
from mackey_kit.groups import (
    cyclic, dihedral, symmetric_3, klein_four, subgroup_lattice,
)
from mackey_kit.gsets import (
    GMap, orbit, disjoint_union, cartesian_product, fibered_product,
    empty_gset, trivial_gset,
)
from mackey_kit.burnside import basis_element, unit_element, multiply_geometric
from mackey_kit.mackey import (
    MackeyError, check_axioms, evaluate, induced_map, burnside_mackey,
    fixed_point_mackey, trivial_representation, regular_representation,
    box_product, box_unit_map, burnside_action, relabel_mackey,
)


class TestBurnsideMackey:
    def test_axioms_cyclic4(self):
        M = burnside_mackey(cyclic(4), ZZ)
        assert check_axioms(M).passed

    def test_axioms_s3(self):
        M = burnside_mackey(symmetric_3(), ZZ)
        assert check_axioms(M).passed

    def test_value_ranks(self):
        G = cyclic(2)
        M = burnside_mackey(G, ZZ)
        assert M.module(tuple(sorted(G.elements()))).ngens == 2
        assert M.module((0,)).ngens == 1

    def test_res_tr_roundtrip_is_multiplication_by_index(self):
        G = cyclic(2)
        M = burnside_mackey(G, ZZ)
        full = (0, 1)
        comp = M.res(full, (0,)) @ M.tr(full, (0,))
        assert comp.matrix.data == [[2]]

    def test_trivial_group(self):
        M = burnside_mackey(cyclic(1), ZZ)
        assert M.module((0,)).ngens == 1
        assert check_axioms(M).passed

    def test_corrupted_transfer_is_reported(self):
        G = cyclic(2)
        M = burnside_mackey(G, ZZ)
        full = (0, 1)
        bad = ModuleMap(M.module((0,)), M.module(full),
                        Matrix.from_rows(ZZ, [[1], [1]]), validate=False)
        M._tr[(full, (0,))] = bad
        rep = check_axioms(M)
        assert not rep.passed
        assert any(name == "double_coset" and ctx["Hpp"] == (0,)
                   for name, ctx in rep.violations)


class TestFixedPointMackey:
    def test_trivial_rep_transfer_is_index(self):
        G = symmetric_3()
        M = fixed_point_mackey(G, trivial_representation(G, ZZ), ZZ)
        lat = subgroup_lattice(G)
        full = tuple(sorted(G.elements()))
        for K in lat.subgroups:
            tr = M.tr(full, K)
            assert tr.matrix.data == [[G.order // len(K)]]
        assert check_axioms(M).passed

    def test_regular_rep_ranks(self):
        G = cyclic(2)
        M = fixed_point_mackey(G, regular_representation(G, ZZ), ZZ)
        assert M.module((0, 1)).ngens == 1
        assert M.module((0,)).ngens == 2
        assert check_axioms(M).passed

    def test_trivial_group_keeps_module(self):
        G = cyclic(1)
        mats = [Matrix.identity(ZZ, 3)]
        M = fixed_point_mackey(G, mats, ZZ)
        assert M.module((0,)).ngens == 3

    def test_non_action_rejected(self):
        G = cyclic(2)
        mats = [Matrix.identity(ZZ, 2), Matrix.from_rows(ZZ, [[1, 1], [0, 1]])]
        with pytest.raises(MackeyError):
            fixed_point_mackey(G, mats, ZZ)

    def test_fv_relation_regular_c2(self):
        G = cyclic(2)
        M = fixed_point_mackey(G, regular_representation(G, ZZ), ZZ)
        full = (0, 1)
        fv = (M.res(full, (0,)) @ M.tr(full, (0,))).matrix
        sigma = M.conj(1, (0,)).matrix
        expected = Matrix.identity(ZZ, 2) + sigma
        assert fv == expected


class TestEvaluate:
    def test_empty(self):
        G = cyclic(2)
        M = burnside_mackey(G, ZZ)
        ev = evaluate(M, empty_gset(G))
        assert ev.module.ngens == 0

    def test_additivity_example(self):
        G = cyclic(2)
        M = burnside_mackey(G, ZZ)
        S, _ = disjoint_union(orbit(G, (0,)), orbit(G, (0, 1)))
        ev = evaluate(M, S)
        assert ev.module.invariants() == (3, ())

    def test_disjoint_union_isomorphism(self):
        G = dihedral(4)
        M = burnside_mackey(G, ZZ)
        lat = subgroup_lattice(G)
        rng = random.Random(9)
        for _ in range(4):
            H1, H2 = rng.choice(lat.subgroups), rng.choice(lat.subgroups)
            S1, S2 = orbit(G, H1), orbit(G, H2)
            both, _ = disjoint_union(S1, S2)
            a = evaluate(M, both).module
            b1 = evaluate(M, S1).module
            b2 = evaluate(M, S2).module
            assert a.invariants()[0] == b1.invariants()[0] + b2.invariants()[0]

    def test_transfer_span(self):
        G = cyclic(2)
        M = burnside_mackey(G, ZZ)
        free = orbit(G, (0,))
        pt = orbit(G, (0, 1))
        f = GMap(free, pt, [0, 0])
        ev_free = evaluate(M, free)
        ev_pt = evaluate(M, pt)
        tr = induced_map(M, GMap.identity(free), f,
                         source_eval=ev_free, target_eval=ev_pt)
        # generator of A^e goes to the [G/e] coordinate of A^G
        # (basis order: class of {e} first, then class of G)
        assert tr.matrix.data == [[1], [0]]


class TestSpanComposition:
    def test_composition_law(self):
        # composing spans via fibered product = composing induced maps
        G = symmetric_3()
        M = burnside_mackey(G, ZZ)
        lat = subgroup_lattice(G)
        rng = random.Random(31)
        pt = orbit(G, tuple(sorted(G.elements())))
        for _ in range(6):
            H1, H2, H3 = (rng.choice(lat.subgroups) for _ in range(3))
            A, B, C = orbit(G, H1), orbit(G, H2), orbit(G, H3)
            # span1: A <- AxB -> B, span2: B <- BxC -> C
            P1, pa, pb = cartesian_product(A, B)
            P2, qb, qc = cartesian_product(B, C)
            f1 = induced_map(M, pa, pb)
            f2 = induced_map(M, qb, qc)
            Q, u1, u2 = fibered_product(pb, qb)
            comp = induced_map(M, pa.compose(u1), qc.compose(u2))
            assert (f2 @ f1).equal_mod_relations(comp)


class TestBoxProduct:
    def test_box_over_trivial_group_is_tensor(self):
        G = cyclic(1)
        M = burnside_mackey(G, ZZ)
        box = box_product(M, M)
        assert box.module((0,)).invariants() == (1, ())

    def test_box_unit_c2(self):
        G = cyclic(2)
        A = burnside_mackey(G, ZZ)
        box, unit = box_unit_map(A, A)
        assert check_axioms(box).passed
        for H in subgroup_lattice(G).subgroups:
            assert unit[H].is_isomorphism()

    def test_box_aa_value_c2(self):
        G = cyclic(2)
        A = burnside_mackey(G, ZZ)
        box = box_product(A, A)
        full = (0, 1)
        assert modules_isomorphic(box.module(full), A.module(full))

    def test_box_unit_squares_commute(self):
        G = cyclic(2)
        A = burnside_mackey(G, ZZ)
        M = fixed_point_mackey(G, regular_representation(G, ZZ), ZZ)
        box, unit = box_unit_map(A, M)
        lat = subgroup_lattice(G)
        for H in lat.subgroups:
            for K in [K for K in lat.subgroups if set(K) <= set(H)]:
                lhs = unit[K] @ box.res(H, K)
                rhs = M.res(H, K) @ unit[H]
                assert lhs.equal_mod_relations(rhs)
                lhs = unit[H] @ box.tr(H, K)
                rhs = M.tr(H, K) @ unit[K]
                assert lhs.equal_mod_relations(rhs)

    def test_ring_mismatch(self):
        G = cyclic(2)
        with pytest.raises(MackeyError):
            box_product(burnside_mackey(G, ZZ), burnside_mackey(G, QQ))


class TestBurnsideAction:
    def test_unit_acts_as_identity(self):
        G = cyclic(4)
        M = burnside_mackey(G, ZZ)
        S = orbit(G, (0, 2))
        ev = evaluate(M, S)
        act = burnside_action(unit_element(G), M, S, evaluated=ev)
        assert act.equal_mod_relations(ModuleMap.identity(ev.module))

    def test_free_acts_as_tr_res(self):
        G = cyclic(2)
        M = burnside_mackey(G, ZZ)
        full = (0, 1)
        S = orbit(G, full)
        act = burnside_action(basis_element(G, (0,)), M, S)
        expected = M.tr(full, (0,)) @ M.res(full, (0,))
        assert act.matrix == expected.matrix

    def test_multiplicative(self):
        G = cyclic(6)
        M = burnside_mackey(G, ZZ)
        lat = subgroup_lattice(G)
        S = orbit(G, tuple(sorted(G.elements())))
        ev = evaluate(M, S)
        rng = random.Random(13)
        for _ in range(5):
            a = basis_element(G, rng.choice(lat.representatives))
            b = basis_element(G, rng.choice(lat.representatives))
            fa = burnside_action(a, M, S, evaluated=ev)
            fb = burnside_action(b, M, S, evaluated=ev)
            fab = burnside_action(multiply_geometric(a, b), M, S, evaluated=ev)
            assert (fa @ fb).equal_mod_relations(fab)


class TestRelabel:
    def test_roundtrip(self):
        G = cyclic(4)
        M = burnside_mackey(G, ZZ)
        phi = list(range(G.order))
        M2 = relabel_mackey(M, phi, G)
        assert check_axioms(M2).passed
