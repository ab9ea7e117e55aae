"""Categorical fixed points, inflation, geometric fixed points.

Geometric fixed points of M at a normal subgroup N live over W = G/N: the
value at H/N is the cokernel of all transfers into M^H from subgroups that
do not contain N.  By additivity the stacked transfer is itself a single
induced map of a disjoint union, so the image of the sum is the union of
the individual images.  Inflation evaluates a W-functor on N-fixed points,
and the two sit in an adjunction whose unit is levelwise surjective and
whose counit is an isomorphism; both facts are checked on concrete objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactalg import FPModule, Matrix, ModuleMap, cokernel, hstack, \
    direct_sum_modules, modules_isomorphic
from .groups import (
    subgroup_lattice, quotient_group, subgroup_as_group, conjugate_subgroup,
    is_subgroup, GroupError,
)
from .gsets import GMap, orbit, fixed_points, orbit_decomposition
from .mackey import (
    MackeyFunctor, MackeyError, evaluate, induced_map, burnside_mackey,
    _subgroups_sorted,
)


# ---------------------------------------------------------------------------
# Categorical fixed points
# ---------------------------------------------------------------------------

def categorical_fixed_points(M, H):
    """Restriction of M to the subgroup H, as a Mackey functor over H."""
    G = M.group
    H = tuple(sorted(H))
    Hgrp, embed = subgroup_as_group(G, H)
    to_inner = {g: i for i, g in enumerate(embed)}

    def relabel(K_g):
        return tuple(sorted(to_inner[x] for x in K_g))

    lat_h = subgroup_lattice(Hgrp)
    modules = {}
    res = {}
    tr = {}
    conj = {}
    for Kh in lat_h.subgroups:
        Kg = tuple(sorted(embed[x] for x in Kh))
        modules[Kh] = M.module(Kg)
        for Lh in _subgroups_sorted(lat_h, Kh):
            Lg = tuple(sorted(embed[x] for x in Lh))
            res[(Kh, Lh)] = ModuleMap(modules[Kh], M.module(Lg),
                                      M.res(Kg, Lg).matrix, validate=False)
            tr[(Kh, Lh)] = ModuleMap(M.module(Lg), modules[Kh],
                                     M.tr(Kg, Lg).matrix, validate=False)
        for h in Hgrp.elements():
            g = embed[h]
            Kg2 = conjugate_subgroup(G, Kg, g)
            conj[(h, Kh)] = ModuleMap(modules[Kh], M.module(Kg2),
                                      M.conj(g, Kg).matrix, validate=False)
    # second pass: targets of res/tr/conj must be the new module objects
    fixed_res = {(a, b): ModuleMap(modules[a], modules[b], m.matrix, validate=False)
                 for (a, b), m in res.items()}
    fixed_tr = {(a, b): ModuleMap(modules[b], modules[a], m.matrix, validate=False)
                for (a, b), m in tr.items()}
    fixed_conj = {}
    for (h, Kh), m in conj.items():
        Kh2 = conjugate_subgroup(Hgrp, Kh, h)
        fixed_conj[(h, Kh)] = ModuleMap(modules[Kh], modules[Kh2], m.matrix,
                                        validate=False)
    return MackeyFunctor(Hgrp, M.ring, modules, fixed_res, fixed_tr,
                         fixed_conj)


# ---------------------------------------------------------------------------
# Orbit plumbing
# ---------------------------------------------------------------------------

def orbit_projection(G, H, K):
    """The canonical G-map [G/K] -> [G/H] for K <= H (xK goes to xH)."""
    S, T = orbit(G, K), orbit(G, H)
    dec_t = orbit_decomposition(T)
    hset = set(H)
    points = []
    for i in range(S.size):
        # point i of [G/K] is the coset of its least element; recover it
        x = _coset_rep(G, K, i)
        points.append(_coset_index(G, H, x))
    return GMap(S, T, points, validate=False), S, T


def _coset_rep(G, K, index):
    """Least element of the index-th coset of K (orbit labeling order)."""
    seen = set()
    reps = []
    for g in G.elements():
        if g in seen:
            continue
        coset = sorted(G.mul(g, k) for k in K)
        seen.update(coset)
        reps.append(coset[0])
    reps.sort()
    return reps[index]

def _coset_index(G, H, x):
    seen = set()
    reps = []
    for g in G.elements():
        if g in seen:
            continue
        coset = sorted(G.mul(g, h) for h in H)
        seen.update(coset)
        reps.append(coset[0])
    reps.sort()
    coset_x = min(G.mul(x, h) for h in H)
    return reps.index(coset_x)


def orbit_conjugation_iso(G, H, g):
    """The G-iso [G/gHg^-1] -> [G/H], x(gHg^-1) goes to (xg)H."""
    Hg = conjugate_subgroup(G, H, g)
    S, T = orbit(G, Hg), orbit(G, H)
    points = []
    for i in range(S.size):
        x = _coset_rep(G, Hg, i)
        points.append(_coset_index(G, H, G.mul(x, g)))
    return GMap(S, T, points, validate=False), S, T


def _fixed_map(f, pts_source, pts_target, F_source, F_target):
    """Restrict a G-map to N-fixed points, as a W-map."""
    where = {p: i for i, p in enumerate(pts_target)}
    return GMap(F_source, F_target, [where[f(p)] for p in pts_source],
                validate=False)


# ---------------------------------------------------------------------------
# Inflation
# ---------------------------------------------------------------------------

def inflation(Mw, G, N):
    """Inflate a W = G/N Mackey functor to G: (Infl M)(S) = M(S^N)."""
    N = tuple(sorted(N))
    q = quotient_group(G, N)
    if q.group.table != Mw.group.table:
        raise MackeyError("functor is not over the quotient group G/N")
    lat = subgroup_lattice(G)
    ring = Mw.ring
    fixed_data = {}
    for H in lat.subgroups:
        S = orbit(G, H)
        F, pts, _ = fixed_points(S, N)
        fixed_data[H] = (S, F, pts)
    evs = {H: evaluate(Mw, fixed_data[H][1]) for H in lat.subgroups}
    modules = {H: evs[H].module for H in lat.subgroups}
    res = {}
    tr = {}
    conj = {}
    for H in lat.subgroups:
        for K in _subgroups_sorted(lat, H):
            f, S_K, S_H = orbit_projection(G, H, K)
            fN = _fixed_map(f, fixed_data[K][2], fixed_data[H][2],
                            fixed_data[K][1], fixed_data[H][1])
            idK = GMap.identity(fixed_data[K][1])
            res[(H, K)] = induced_map(Mw, fN, idK,
                                      source_eval=evs[H], target_eval=evs[K])
            tr[(H, K)] = induced_map(Mw, idK, fN,
                                     source_eval=evs[K], target_eval=evs[H])
        for g in G.elements():
            Hg = conjugate_subgroup(G, H, g)
            c, S_Hg, S_H = orbit_conjugation_iso(G, H, g)
            cN = _fixed_map(c, fixed_data[Hg][2], fixed_data[H][2],
                            fixed_data[Hg][1], fixed_data[H][1])
            conj[(g, H)] = induced_map(Mw, cN, GMap.identity(fixed_data[Hg][1]),
                                       source_eval=evs[H], target_eval=evs[Hg])
    return MackeyFunctor(G, ring, modules, res, tr, conj)


# ---------------------------------------------------------------------------
# Geometric fixed points
# ---------------------------------------------------------------------------

def _preimage_subgroup(G, q, Hbar):
    hs = set(Hbar)
    return tuple(sorted(g for g in G.elements() if q.projection[g] in hs))


def geometric_fixed_points(M, N, return_projections=False):
    """Phi^N(M) over W = G/N: value at H/N is M^H modulo all transfers
    from subgroups of H that do not contain N."""
    G = M.group
    N = tuple(sorted(N))
    q = quotient_group(G, N)
    W = q.group
    lat_w = subgroup_lattice(W)
    lat = M.lattice
    ring = M.ring
    nset = set(N)
    modules = {}
    projections = {}
    for Hbar in lat_w.subgroups:
        H = _preimage_subgroup(G, q, Hbar)
        target = M.module(H)
        sources = [K for K in _subgroups_sorted(lat, H) if not nset <= set(K)]
        if sources:
            mats = [M.tr(H, K).matrix for K in sources]
            dom, _ = direct_sum_modules(ring, [M.module(K) for K in sources])
            f = ModuleMap(dom, target, hstack(*mats), validate=False)
        else:
            f = ModuleMap.zero(FPModule(ring, 0), target)
        mod, proj = cokernel(f)
        modules[Hbar] = mod
        projections[Hbar] = proj
    res = {}
    tr = {}
    conj = {}
    for Hbar in lat_w.subgroups:
        H = _preimage_subgroup(G, q, Hbar)
        for Kbar in _subgroups_sorted(lat_w, Hbar):
            K = _preimage_subgroup(G, q, Kbar)
            res[(Hbar, Kbar)] = ModuleMap(modules[Hbar], modules[Kbar],
                                          M.res(H, K).matrix)
            tr[(Hbar, Kbar)] = ModuleMap(modules[Kbar], modules[Hbar],
                                         M.tr(H, K).matrix)
        for w in W.elements():
            g = q.reps[w]
            Hw = conjugate_subgroup(W, Hbar, w)
            conj[(w, Hbar)] = ModuleMap(modules[Hbar], modules[Hw],
                                        M.conj(g, H).matrix)
    phi = MackeyFunctor(W, ring, modules, res, tr, conj)
    if return_projections:
        return phi, projections, q
    return phi


def burnside_comparison_map(G, N, ring):
    """The natural map Phi^N(A_G) -> A_{G/N} (an isomorphism, levelwise).

    On the generator [H/L]: the class of (H/L)^N, i.e. [ (H/N) / (L/N) ]
    when N <= L and zero otherwise.
    """
    from .mackey import _local_classes

    A = burnside_mackey(G, ring)
    phi, projections, q = geometric_fixed_points(A, N, return_projections=True)
    W = q.group
    Aw = burnside_mackey(W, ring)
    lat_w = subgroup_lattice(W)
    nset = set(N)
    unit_maps = {}
    for Hbar in lat_w.subgroups:
        H = _preimage_subgroup(G, q, Hbar)
        reps_h, _, _ = _local_classes(G, H)
        reps_w, rep_of_w, idx_w = _local_classes(W, Hbar)
        mat = Matrix.zeros(ring, len(reps_w), len(reps_h))
        for j, L in enumerate(reps_h):
            if nset <= set(L):
                Lbar = tuple(sorted({q.projection[x] for x in L}))
                mat.data[idx_w[rep_of_w[Lbar]]][j] = ring.one()
        unit_maps[Hbar] = ModuleMap(phi.module(Hbar), Aw.module(Hbar), mat)
    return A, phi, Aw, unit_maps, q


# ---------------------------------------------------------------------------
# Adjunction checks
# ---------------------------------------------------------------------------

@dataclass
class AdjunctionReport:
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations

    def add(self, check, **ctx):
        self.violations.append((check, ctx))


def adjunction_checks(M, N, counit_test_functor=None):
    """(a) the unit M -> Infl Phi M is levelwise surjective;
    (b) Phi . Infl is the identity on a test functor over W
        (the computational content of full faithfulness)."""
    G = M.group
    N = tuple(sorted(N))
    report = AdjunctionReport()
    phi, projections, q = geometric_fixed_points(M, N, return_projections=True)
    infl = inflation(phi, G, N)
    lat = M.lattice
    nset = set(N)
    for H in lat.subgroups:
        target = infl.module(H)
        if not nset <= set(H):
            if not target.is_zero_module():
                report.add("unit_target_nonzero", H=H)
            continue
        unit = ModuleMap(M.module(H), target,
                         Matrix.identity(M.ring, M.module(H).ngens),
                         validate=False)
        if not unit.is_surjective():
            report.add("unit_not_surjective", H=H)
    Mw = counit_test_functor or phi
    infl_w = inflation(Mw, G, N)
    back, back_proj, _ = geometric_fixed_points(infl_w, N,
                                                return_projections=True)
    lat_w = subgroup_lattice(q.group)
    counit_maps = {}
    for Hbar in lat_w.subgroups:
        src = back.module(Hbar)
        tgt = Mw.module(Hbar)
        if src.ngens != tgt.ngens:
            report.add("counit_shape", Hbar=Hbar)
            continue
        counit = ModuleMap(src, tgt, Matrix.identity(Mw.ring, src.ngens),
                           validate=False)
        counit_maps[Hbar] = counit
        if not counit.is_isomorphism():
            report.add("counit_not_iso", Hbar=Hbar)
    # counit commutes with structure maps
    for Hbar in lat_w.subgroups:
        if Hbar not in counit_maps:
            continue
        for Kbar in _subgroups_sorted(lat_w, Hbar):
            if Kbar not in counit_maps:
                continue
            lhs = counit_maps[Kbar] @ back.res(Hbar, Kbar)
            rhs = Mw.res(Hbar, Kbar) @ counit_maps[Hbar]
            if not lhs.equal_mod_relations(rhs):
                report.add("counit_res_square", Hbar=Hbar, Kbar=Kbar)
            lhs = counit_maps[Hbar] @ back.tr(Hbar, Kbar)
            rhs = Mw.tr(Hbar, Kbar) @ counit_maps[Kbar]
            if not lhs.equal_mod_relations(rhs):
                report.add("counit_tr_square", Hbar=Hbar, Kbar=Kbar)
        for w in q.group.elements():
            Hw = conjugate_subgroup(q.group, Hbar, w)
            lhs = counit_maps[Hw] @ back.conj(w, Hbar)
            rhs = Mw.conj(w, Hbar) @ counit_maps[Hbar]
            if not lhs.equal_mod_relations(rhs):
                report.add("counit_conj_square", Hbar=Hbar, w=w)
    return report


def natural_iso_check(F1, F2, maps):
    """Levelwise isomorphism commuting with res/tr/conj; returns report."""
    report = AdjunctionReport()
    lat = F1.lattice
    for H in lat.subgroups:
        m = maps[H]
        if not m.is_isomorphism():
            report.add("not_iso", H=H)
    for H in lat.subgroups:
        for K in _subgroups_sorted(lat, H):
            lhs = maps[K] @ F1.res(H, K)
            rhs = F2.res(H, K) @ maps[H]
            if not lhs.equal_mod_relations(rhs):
                report.add("res_square", H=H, K=K)
            lhs = maps[H] @ F1.tr(H, K)
            rhs = F2.tr(H, K) @ maps[K]
            if not lhs.equal_mod_relations(rhs):
                report.add("tr_square", H=H, K=K)
        for g in F1.group.elements():
            Hg = conjugate_subgroup(F1.group, H, g)
            lhs = maps[Hg] @ F1.conj(g, H)
            rhs = F2.conj(g, H) @ maps[H]
            if not lhs.equal_mod_relations(rhs):
                report.add("conj_square", H=H, g=g)
    return report
