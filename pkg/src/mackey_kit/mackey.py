"""Mackey functors as checked data.

A Mackey functor assigns a presented module to *every* subgroup (not just
class representatives), with restriction, transfer and conjugation maps
stored explicitly.  That makes the double coset formula checkable verbatim,
with no canonicalization bookkeeping.

Spans of G-sets induce maps: the backwards leg acts contravariantly
(restriction), the forwards leg covariantly (transfer).  `induced_map` is
the single workhorse behind evaluation, the Burnside-ring action, box
products, inflation and simplicial differentials.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactalg import (
    FPModule, Matrix, ModuleMap, direct_sum_modules, modules_isomorphic,
)
from .groups import subgroup_lattice, conjugate_subgroup
from .gsets import GSet, orbit, orbit_decomposition


class MackeyError(Exception):
    pass


def _subgroups_sorted(lat, H):
    return sorted(lat.subgroups_of(H), key=lambda K: (len(K), K))


def _double_cosets_within(G, ambient, A, B):
    """Double cosets A\\ambient/B inside the subgroup `ambient` of G.

    Yields (rep, A meet rep*B*rep^-1) with rep the least uncovered element.
    """
    aset, bset = set(A), set(B)
    covered = set()
    out = []
    for g in sorted(ambient):
        if g in covered:
            continue
        coset = set()
        for a in aset:
            ag = G.mul(a, g)
            for b in bset:
                coset.add(G.mul(ag, b))
        covered |= coset
        ginv = G.inv(g)
        inter = tuple(sorted(
            a for a in aset if G.mul(G.mul(ginv, a), g) in bset))
        out.append((g, inter))
    return out


class MackeyFunctor:
    """Modules indexed by subgroups plus res/tr/conj structure maps.

    modules: subgroup tuple -> FPModule
    res[(H, K)]: M^H -> M^K     for K <= H
    tr[(H, K)]:  M^K -> M^H     for K <= H
    conj[(g, H)]: M^H -> M^{gHg^-1}
    """

    def __init__(self, group, ring, modules, res, tr, conj, validate=True):
        self.group = group
        self.ring = ring
        self.lattice = subgroup_lattice(group)
        self.modules = dict(modules)
        self._res = dict(res)
        self._tr = dict(tr)
        self._conj = dict(conj)
        if validate:
            self._validate_shapes()

    def _validate_shapes(self):
        lat = self.lattice
        for H in lat.subgroups:
            if H not in self.modules:
                raise MackeyError(f"missing module at subgroup {H}")
            for K in _subgroups_sorted(lat, H):
                if (H, K) not in self._res or (H, K) not in self._tr:
                    raise MackeyError(f"missing res/tr for {K} <= {H}")
            for g in self.group.elements():
                if (g, H) not in self._conj:
                    raise MackeyError(f"missing conj for g={g} at {H}")

    def module(self, H):
        return self.modules[tuple(sorted(H))]

    def res(self, H, K):
        return self._res[(tuple(sorted(H)), tuple(sorted(K)))]

    def tr(self, H, K):
        return self._tr[(tuple(sorted(H)), tuple(sorted(K)))]

    def conj(self, g, H):
        return self._conj[(g, tuple(sorted(H)))]

    def __repr__(self):
        return f"MackeyFunctor(|G|={self.group.order}, {self.ring.describe()})"


# ---------------------------------------------------------------------------
# Axiom checking
# ---------------------------------------------------------------------------

@dataclass
class AxiomReport:
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations

    def add(self, axiom, **context):
        self.violations.append((axiom, context))

    def summary(self):
        if self.passed:
            return "pass"
        lines = [f"{name}: {ctx}" for name, ctx in self.violations]
        return "FAIL\n" + "\n".join(lines)


def check_axioms(M):
    """Exhaustive functoriality, conjugation and double-coset checks."""
    G = M.group
    lat = M.lattice
    report = AxiomReport()
    for H in lat.subgroups:
        if not M.res(H, H).equal_mod_relations(ModuleMap.identity(M.module(H))):
            report.add("res_identity", H=H)
        if not M.tr(H, H).equal_mod_relations(ModuleMap.identity(M.module(H))):
            report.add("tr_identity", H=H)
    # transitivity over chains K <= L <= H
    for H in lat.subgroups:
        subs = _subgroups_sorted(lat, H)
        for L in subs:
            for K in _subgroups_sorted(lat, L):
                lhs = M.res(L, K) @ M.res(H, L)
                if not lhs.equal_mod_relations(M.res(H, K)):
                    report.add("res_transitive", H=H, L=L, K=K)
                lhs = M.tr(H, L) @ M.tr(L, K)
                if not lhs.equal_mod_relations(M.tr(H, K)):
                    report.add("tr_transitive", H=H, L=L, K=K)
    # conjugation laws
    for H in lat.subgroups:
        hset = set(H)
        for g in G.elements():
            cg = M.conj(g, H)
            if g in hset and not cg.equal_mod_relations(
                    ModuleMap.identity(M.module(H))):
                report.add("conj_inner_identity", H=H, g=g)
            for h in G.elements():
                Hh = conjugate_subgroup(G, H, h)
                comp = M.conj(g, Hh) @ M.conj(h, H)
                if not comp.equal_mod_relations(M.conj(G.mul(g, h), H)):
                    report.add("conj_composition", H=H, g=g, h=h)
                    break
        for K in _subgroups_sorted(lat, H):
            for g in G.elements():
                Hg = conjugate_subgroup(G, H, g)
                Kg = conjugate_subgroup(G, K, g)
                lhs = M.conj(g, K) @ M.res(H, K)
                rhs = M.res(Hg, Kg) @ M.conj(g, H)
                if not lhs.equal_mod_relations(rhs):
                    report.add("conj_res_compat", H=H, K=K, g=g)
                lhs = M.conj(g, H) @ M.tr(H, K)
                rhs = M.tr(Hg, Kg) @ M.conj(g, K)
                if not lhs.equal_mod_relations(rhs):
                    report.add("conj_tr_compat", H=H, K=K, g=g)
    # double coset formula inside every ambient subgroup
    for H in lat.subgroups:
        subs = _subgroups_sorted(lat, H)
        for Hp in subs:
            for Hpp in subs:
                lhs = M.res(H, Hp) @ M.tr(H, Hpp)
                total = None
                for g, inter in _double_cosets_within(G, H, Hp, Hpp):
                    ginv = G.inv(g)
                    src_sub = conjugate_subgroup(G, inter, ginv)  # g^-1 Hp g meet Hpp
                    term = M.tr(Hp, inter) @ M.conj(g, src_sub) @ M.res(Hpp, src_sub)
                    total = term if total is None else total + term
                if total is None:
                    total = ModuleMap.zero(M.module(Hpp), M.module(Hp))
                if not lhs.equal_mod_relations(total):
                    report.add("double_coset", H=H, Hp=Hp, Hpp=Hpp)
    return report


# ---------------------------------------------------------------------------
# Evaluation on G-sets and maps induced by spans
# ---------------------------------------------------------------------------

@dataclass
class EvaluatedModule:
    """evaluate(M, S): direct sum of M^{H_s} over the orbits of S."""
    mackey: MackeyFunctor
    gset: GSet
    module: FPModule
    decomposition: object      # OrbitDecomposition
    offsets: list              # block offset per orbit


def evaluate(M, S):
    dec = orbit_decomposition(S)
    mods = [M.module(orb.stabilizer) for orb in dec.orbits]
    total, offsets = direct_sum_modules(M.ring, mods)
    return EvaluatedModule(M, S, total, dec, offsets)


def induced_map(M, left, right, source_eval=None, target_eval=None):
    """Map evaluate(M, A) -> evaluate(M, B) induced by the span
    A <--left-- C --right--> B.

    The backwards leg acts by restriction (contravariant), the forwards leg
    by transfer (covariant), assembled orbitwise through conjugations.
    """
    A, B = left.target, right.target
    C = left.source
    if right.source is not C and right.source != C:
        raise MackeyError("span legs must share their apex")
    ev_a = source_eval or evaluate(M, A)
    ev_b = target_eval or evaluate(M, B)
    ring = M.ring
    mat = Matrix.zeros(ring, ev_b.module.ngens, ev_a.module.ngens)
    dec_c = orbit_decomposition(C)
    G = M.group
    for orb in dec_c.orbits:
        c = orb.base
        K = orb.stabilizer
        ia, u = ev_a.decomposition.locate(left(c))
        Ha = ev_a.decomposition.orbits[ia].stabilizer
        ib, v = ev_b.decomposition.locate(right(c))
        Hb = ev_b.decomposition.orbits[ib].stabilizer
        # contravariant: M^{Ha} --conj_u--> M^{uHau^-1} --res--> M^K
        uHa = conjugate_subgroup(G, Ha, u)
        down = M.res(uHa, K) @ M.conj(u, Ha)
        # covariant: M^K --conj_{v^-1}--> M^{v^-1Kv} --tr--> M^{Hb}
        vinv = G.inv(v)
        Kv = conjugate_subgroup(G, K, vinv)
        up = M.tr(Hb, Kv) @ M.conj(vinv, K)
        block = up.matrix @ down.matrix
        oa = ev_a.offsets[ia]
        ob = ev_b.offsets[ib]
        for r in range(block.rows):
            row = mat.data[ob + r]
            brow = block.data[r]
            for s in range(block.cols):
                row[oa + s] = ring.add(row[oa + s], brow[s])
    return ModuleMap(ev_a.module, ev_b.module, mat, validate=False)


# ---------------------------------------------------------------------------
# The Burnside Mackey functor
# ---------------------------------------------------------------------------

def _local_classes(G, H):
    """H-conjugacy classes of subgroups of H: (sorted reps, index lookup)."""
    lat = subgroup_lattice(G)
    subs = _subgroups_sorted(lat, H)
    rep_of = {}
    reps = []
    for L in subs:
        if L in rep_of:
            continue
        members = {conjugate_subgroup(G, L, h) for h in H}
        rep = min(members)
        if rep not in [r for r in reps]:
            reps.append(rep)
        for member in members:
            rep_of[member] = rep
    reps.sort(key=lambda L: (len(L), L))
    index = {rep: i for i, rep in enumerate(reps)}
    return reps, rep_of, index


def burnside_mackey(G, ring):
    """The Burnside Mackey functor: M^H = A(H) tensor ring.

    Basis of M^H: H-conjugacy classes of subgroups of H.  Restriction is
    restriction of H-sets, transfer is induction, conjugation translates.
    """
    lat = subgroup_lattice(G)
    local = {H: _local_classes(G, H) for H in lat.subgroups}
    modules = {H: FPModule(ring, len(local[H][0])) for H in lat.subgroups}
    res = {}
    tr = {}
    for H in lat.subgroups:
        reps_h, rep_of_h, idx_h = local[H]
        for K in _subgroups_sorted(lat, H):
            reps_k, rep_of_k, idx_k = local[K]
            rmat = Matrix.zeros(ring, len(reps_k), len(reps_h))
            for j, L in enumerate(reps_h):
                for g, inter in _double_cosets_within(G, H, K, L):
                    rmat.data[idx_k[rep_of_k[inter]]][j] += 1
            tmat = Matrix.zeros(ring, len(reps_h), len(reps_k))
            for j, L in enumerate(reps_k):
                tmat.data[idx_h[rep_of_h[L]]][j] += 1
            res[(H, K)] = ModuleMap(modules[H], modules[K],
                                    Matrix(ring, len(reps_k), len(reps_h), rmat.data),
                                    validate=False)
            tr[(H, K)] = ModuleMap(modules[K], modules[H],
                                   Matrix(ring, len(reps_h), len(reps_k), tmat.data),
                                   validate=False)
    conj = {}
    for H in lat.subgroups:
        reps_h, rep_of_h, idx_h = local[H]
        for g in G.elements():
            Hg = conjugate_subgroup(G, H, g)
            reps_g, rep_of_g, idx_g = local[Hg]
            mat = Matrix.zeros(ring, len(reps_g), len(reps_h))
            for j, L in enumerate(reps_h):
                Lg = conjugate_subgroup(G, L, g)
                mat.data[idx_g[rep_of_g[Lg]]][j] = 1
            conj[(g, H)] = ModuleMap(modules[H], modules[Hg], mat, validate=False)
    return MackeyFunctor(G, ring, modules, res, tr, conj)


def burnside_value_basis(M, H):
    """Class representatives indexing the basis of the Burnside value M^H."""
    return _local_classes(M.group, tuple(sorted(H)))[0]


# ---------------------------------------------------------------------------
# Fixed-point Mackey functors from a linear action
# ---------------------------------------------------------------------------

def fixed_point_mackey(G, rep_matrices, ring):
    """M^H = invariants of a linear G-action; tr sums over cosets.

    `rep_matrices[g]` is the matrix of g on a free module V.  Requires a
    genuine action (checked).
    """
    from .exactalg import kernel_generators, solve_matrix, vstack

    d = rep_matrices[0].rows
    if len(rep_matrices) != G.order:
        raise MackeyError("need one matrix per group element")
    idm = Matrix.identity(ring, d)
    if rep_matrices[0] != idm:
        raise MackeyError("identity element must act as the identity")
    for g in G.elements():
        for h in G.elements():
            if rep_matrices[g] @ rep_matrices[h] != rep_matrices[G.mul(g, h)]:
                raise MackeyError(f"matrices do not define an action at ({g},{h})")
    lat = subgroup_lattice(G)
    embeds = {}
    modules = {}
    for H in lat.subgroups:
        if len(H) == 1:
            E = idm
        else:
            stacked = vstack(*[rep_matrices[h] - idm for h in H if h != 0])
            E = kernel_generators(stacked)
        rel = kernel_generators(E) if E.cols else Matrix.zeros(ring, 0, 0)
        embeds[H] = E
        modules[H] = FPModule(ring, E.cols, rel)

    def _solve_into(H, vectors):
        X = solve_matrix(embeds[H], vectors)
        if X is None:
            raise MackeyError("vector does not lie in the invariant submodule")
        return X

    res = {}
    tr = {}
    for H in lat.subgroups:
        hset = set(H)
        for K in _subgroups_sorted(lat, H):
            res[(H, K)] = ModuleMap(modules[H], modules[K],
                                    _solve_into(K, embeds[H]), validate=False)
            # transfer: v |-> sum over coset reps of H/K of h.v
            kset = set(K)
            seen = set()
            total = Matrix.zeros(ring, d, d)
            for h in sorted(hset):
                coset = frozenset(G.mul(h, k) for k in kset)
                if coset in seen:
                    continue
                seen.add(coset)
                total = total + rep_matrices[h]
            tr[(H, K)] = ModuleMap(modules[K], modules[H],
                                   _solve_into(H, total @ embeds[K]),
                                   validate=False)
    conj = {}
    for H in lat.subgroups:
        for g in G.elements():
            Hg = conjugate_subgroup(G, H, g)
            conj[(g, H)] = ModuleMap(modules[H], modules[Hg],
                                     _solve_into(Hg, rep_matrices[g] @ embeds[H]),
                                     validate=False)
    return MackeyFunctor(G, ring, modules, res, tr, conj)


def trivial_representation(G, ring):
    return [Matrix.identity(ring, 1) for _ in G.elements()]


def regular_representation(G, ring):
    mats = []
    for g in G.elements():
        m = Matrix.zeros(ring, G.order, G.order)
        for x in G.elements():
            m.data[G.mul(g, x)][x] = ring.one()
        mats.append(m)
    return mats


# ---------------------------------------------------------------------------
# Box product
# ---------------------------------------------------------------------------

def _box_blocks(M, N, H):
    """Generator layout of (M box N)^H: one block M^K (x) N^K per K <= H."""
    lat = M.lattice
    subs = _subgroups_sorted(lat, H)
    offsets = {}
    pos = 0
    for K in subs:
        offsets[K] = pos
        pos += M.module(K).ngens * N.module(K).ngens
    return subs, offsets, pos


def _box_index(M, N, offsets, K, i, j):
    return offsets[K] + i * N.module(K).ngens + j


def box_product(M, N, validate=True):
    """The box product, presented per subgroup as an explicit coend.

    Generators at level H: M^K (x) N^K over all K <= H.  Relations: the
    tensor relations in each block, conjugation identifications for g in H,
    and the Frobenius relations pairing transfers with restrictions.
    """
    if M.group != N.group:
        raise MackeyError("box product needs a common group")
    if M.ring != N.ring:
        raise MackeyError("box product is implemented for equal coefficient rings")
    G = M.group
    ring = M.ring
    lat = M.lattice
    layouts = {H: _box_blocks(M, N, H) for H in lat.subgroups}
    modules = {}
    for H in lat.subgroups:
        subs, offsets, total = layouts[H]
        cols = []
        for K in subs:
            mK, nK = M.module(K), N.module(K)
            # tensor relations
            for c in range(mK.relations.cols):
                for j in range(nK.ngens):
                    col = [ring.zero()] * total
                    for i in range(mK.ngens):
                        col[_box_index(M, N, offsets, K, i, j)] = \
                            mK.relations.data[i][c]
                    cols.append(col)
            for c in range(nK.relations.cols):
                for i in range(mK.ngens):
                    col = [ring.zero()] * total
                    for j in range(nK.ngens):
                        col[_box_index(M, N, offsets, K, i, j)] = \
                            nK.relations.data[j][c]
                    cols.append(col)
        # conjugation identifications within H
        for K in subs:
            mK, nK = M.module(K), N.module(K)
            for g in H:
                Kg = conjugate_subgroup(G, K, g)
                cm = M.conj(g, K).matrix
                cn = N.conj(g, K).matrix
                for i in range(mK.ngens):
                    for j in range(nK.ngens):
                        col = [ring.zero()] * total
                        for a in range(cm.rows):
                            va = cm.data[a][i]
                            if va == 0:
                                continue
                            for b in range(cn.rows):
                                vb = cn.data[b][j]
                                if vb == 0:
                                    continue
                                idx = _box_index(M, N, offsets, Kg, a, b)
                                col[idx] = ring.add(col[idx], ring.mul(va, vb))
                        col[_box_index(M, N, offsets, K, i, j)] = ring.sub(
                            col[_box_index(M, N, offsets, K, i, j)], ring.one())
                        cols.append(col)
        # Frobenius relations for K' < K <= H
        for K in subs:
            mK, nK = M.module(K), N.module(K)
            for Kp in _subgroups_sorted(lat, K):
                if Kp == K:
                    continue
                mKp, nKp = M.module(Kp), N.module(Kp)
                trM = M.tr(K, Kp).matrix
                reN = N.res(K, Kp).matrix
                for i in range(mKp.ngens):
                    for j in range(nK.ngens):
                        col = [ring.zero()] * total
                        for a in range(mK.ngens):
                            v = trM.data[a][i]
                            if v != 0:
                                idx = _box_index(M, N, offsets, K, a, j)
                                col[idx] = ring.add(col[idx], v)
                        for b in range(nKp.ngens):
                            v = reN.data[b][j]
                            if v != 0:
                                idx = _box_index(M, N, offsets, Kp, i, b)
                                col[idx] = ring.sub(col[idx], v)
                        cols.append(col)
                reM = M.res(K, Kp).matrix
                trN = N.tr(K, Kp).matrix
                for i in range(mK.ngens):
                    for j in range(nKp.ngens):
                        col = [ring.zero()] * total
                        for b in range(nK.ngens):
                            v = trN.data[b][j]
                            if v != 0:
                                idx = _box_index(M, N, offsets, K, i, b)
                                col[idx] = ring.add(col[idx], v)
                        for a in range(mKp.ngens):
                            v = reM.data[a][i]
                            if v != 0:
                                idx = _box_index(M, N, offsets, Kp, a, j)
                                col[idx] = ring.sub(col[idx], v)
                        cols.append(col)
        rel = Matrix(ring, total, len(cols),
                     [[c[r] for c in cols] for r in range(total)]) \
            if cols else Matrix.zeros(ring, total, 0)
        modules[H] = FPModule(ring, total, rel)

    res = {}
    tr = {}
    conj = {}
    for H in lat.subgroups:
        subs_h, off_h, total_h = layouts[H]
        for Hp in _subgroups_sorted(lat, H):
            subs_p, off_p, total_p = layouts[Hp]
            # transfer (Hp -> H): block K at Hp goes to block K at H
            tmat = Matrix.zeros(ring, total_h, total_p)
            for K in subs_p:
                nk = M.module(K).ngens * N.module(K).ngens
                for t in range(nk):
                    tmat.data[off_h[K] + t][off_p[K] + t] = ring.one()
            tr[(H, Hp)] = ModuleMap(modules[Hp], modules[H], tmat,
                                    validate=validate)
            # restriction (H -> Hp): double coset expansion per block
            rmat = Matrix.zeros(ring, total_p, total_h)
            for K in subs_h:
                mK, nK = M.module(K), N.module(K)
                for g, inter in _double_cosets_within(G, H, Hp, K):
                    ginv = G.inv(g)
                    src = conjugate_subgroup(G, inter, ginv)   # g^-1 Hp g meet K
                    routeM = (M.conj(g, src) @ M.res(K, src)).matrix
                    routeN = (N.conj(g, src) @ N.res(K, src)).matrix
                    for i in range(mK.ngens):
                        for j in range(nK.ngens):
                            cidx = _box_index(M, N, off_h, K, i, j)
                            for a in range(routeM.rows):
                                va = routeM.data[a][i]
                                if va == 0:
                                    continue
                                for b in range(routeN.rows):
                                    vb = routeN.data[b][j]
                                    if vb == 0:
                                        continue
                                    ridx = _box_index(M, N, off_p, inter, a, b)
                                    rmat.data[ridx][cidx] = ring.add(
                                        rmat.data[ridx][cidx], ring.mul(va, vb))
            res[(H, Hp)] = ModuleMap(modules[H], modules[Hp], rmat,
                                     validate=validate)
        for g in G.elements():
            Hg = conjugate_subgroup(G, H, g)
            subs_g, off_g, total_g = layouts[Hg]
            cmat = Matrix.zeros(ring, total_g, total_h)
            for K in subs_h:
                Kg = conjugate_subgroup(G, K, g)
                cm = M.conj(g, K).matrix
                cn = N.conj(g, K).matrix
                mK, nK = M.module(K), N.module(K)
                for i in range(mK.ngens):
                    for j in range(nK.ngens):
                        cidx = _box_index(M, N, off_h, K, i, j)
                        for a in range(cm.rows):
                            va = cm.data[a][i]
                            if va == 0:
                                continue
                            for b in range(cn.rows):
                                vb = cn.data[b][j]
                                if vb == 0:
                                    continue
                                ridx = _box_index(M, N, off_g, Kg, a, b)
                                cmat.data[ridx][cidx] = ring.add(
                                    cmat.data[ridx][cidx], ring.mul(va, vb))
            conj[(g, H)] = ModuleMap(modules[H], modules[Hg], cmat,
                                     validate=validate)
    return MackeyFunctor(G, ring, modules, res, tr, conj)


def box_unit_map(A, M, box=None):
    """The natural map A box M -> M (unit isomorphism), levelwise.

    On the K-block generator [K/L] (x) m it evaluates tr^H_L(res^K_L m).
    Returns dict subgroup -> ModuleMap.
    """
    if box is None:
        box = box_product(A, M, validate=False)
    G = A.group
    lat = A.lattice
    ring = A.ring
    out = {}
    for H in lat.subgroups:
        subs, offsets, total = _box_blocks(A, M, H)
        target = M.module(H)
        mat = Matrix.zeros(ring, target.ngens, total)
        for K in subs:
            reps, _, _ = _local_classes(G, K)
            for i, L in enumerate(reps):
                route = (M.tr(H, L) @ M.res(K, L)).matrix
                for j in range(M.module(K).ngens):
                    cidx = _box_index(A, M, offsets, K, i, j)
                    for r in range(route.rows):
                        mat.data[r][cidx] = ring.add(mat.data[r][cidx],
                                                     route.data[r][j])
        out[H] = ModuleMap(box.module(H), target, mat, validate=False)
    return box, out


# ---------------------------------------------------------------------------
# Burnside-ring action
# ---------------------------------------------------------------------------

def burnside_action(a, M, S, evaluated=None):
    """Action of a Burnside element on evaluate(M, S).

    Basis class [T] acts through the span S <- S x T -> S (both legs the
    projection).  Additive in `a`; the unit class acts as the identity.
    """
    from .gsets import cartesian_product

    if a.group != M.group:
        raise MackeyError("Burnside element over the wrong group")
    lat = M.lattice
    ev = evaluated or evaluate(M, S)
    total = None
    for idx, coeff in enumerate(a.coords):
        if coeff == 0:
            continue
        T = orbit(M.group, lat.representatives[idx])
        P, p_s, _ = cartesian_product(S, T)
        f = induced_map(M, p_s, p_s, source_eval=ev, target_eval=ev)
        f = f.scaled(coeff)
        total = f if total is None else total + f
    if total is None:
        total = ModuleMap.zero(ev.module, ev.module)
    return total


# ---------------------------------------------------------------------------
# Relabeling along a group isomorphism
# ---------------------------------------------------------------------------

def relabel_mackey(M, phi, G2, ring=None):
    """Transport M along an isomorphism phi: G1 -> G2 (index map)."""
    ring = ring or M.ring
    G1 = M.group

    def ph(H):
        return tuple(sorted(phi[h] for h in H))

    modules = {ph(H): mod for H, mod in M.modules.items()}
    res = {}
    tr = {}
    conj = {}
    lat = M.lattice
    for H in lat.subgroups:
        for K in _subgroups_sorted(lat, H):
            r = M.res(H, K)
            t = M.tr(H, K)
            res[(ph(H), ph(K))] = ModuleMap(modules[ph(H)], modules[ph(K)],
                                            r.matrix, validate=False)
            tr[(ph(H), ph(K))] = ModuleMap(modules[ph(K)], modules[ph(H)],
                                           t.matrix, validate=False)
        for g in G1.elements():
            c = M.conj(g, H)
            Hg = conjugate_subgroup(G1, H, g)
            conj[(phi[g], ph(H))] = ModuleMap(modules[ph(H)], modules[ph(Hg)],
                                              c.matrix, validate=False)
    return MackeyFunctor(G2, ring, modules, res, tr, conj)
