"""Truncated pointed simplicial G-sets and their chain-level invariants.

The central construction: for a normal subgroup N, take the union S of
orbits whose stabilizers do not contain N, form the nerve-style object
E(S) with E(S)_n = S^{n+1}, and take the reduced mapping cone of
E(S)_+ -> [1]_+.  The result X has X^N = [1]_+ on the nose, and X^H is
acyclic whenever H does not contain N; `is_adapted` certifies both
within the truncation window.  Homology with Mackey coefficients turns
each level into evaluate(M, X_n minus basepoint) and each face map into
a span-induced map (restrict to the preimage of non-basepoints, then
transfer); its degree 0 recovers geometric fixed points.

Cone points are pairs (a, t) with a in S^{n+1} and 1 <= t <= n: t counts
the cone coordinate, t -> 0 glues to the non-base point of [1]_+ and
t -> n+1 collapses to the basepoint.  Basepoints are always index 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactalg import (
    ZZ, FPModule, Matrix, ModuleMap, ChainComplex, sparse_rank_invariants,
)
from .groups import subgroup_lattice, conjugate_subgroup
from .gsets import GSet, GMap, fixed_points, sub_gset, orbit, disjoint_union
from .mackey import evaluate, induced_map


class SimplicialError(Exception):
    pass


class PointedSimplicialGSet:
    """Levels 0..depth of pointed G-sets with faces and degeneracies.

    The basepoint of every level is index 0; it is G-fixed and preserved
    by all structure maps.  Simplicial identities are validated on
    construction over the whole window.
    """

    def __init__(self, group, depth, levels, faces, degens, validate=True):
        self.group = group
        self.depth = depth
        self.levels = list(levels)
        self.faces = {k: tuple(v) for k, v in faces.items()}
        self.degens = {k: tuple(v) for k, v in degens.items()}
        if validate:
            self.validate()

    def face(self, n, i):
        return self.faces[(n, i)]

    def degen(self, n, j):
        return self.degens[(n, j)]

    def validate(self):
        G = self.group
        if len(self.levels) != self.depth + 1:
            raise SimplicialError("level count does not match depth")
        for n, lv in enumerate(self.levels):
            if lv.size < 1:
                raise SimplicialError(f"level {n} lost its basepoint")
            for g in G.elements():
                if lv.action[g][0] != 0:
                    raise SimplicialError(f"basepoint moves at level {n}")
            row0 = lv.action[0]
            if tuple(row0) != tuple(range(lv.size)):
                raise SimplicialError(f"identity acts nontrivially at level {n}")
            for g in G.elements():
                ag = lv.action[g]
                for h in G.elements():
                    ah = lv.action[h]
                    agh = lv.action[G.mul(g, h)]
                    if [ag[x] for x in ah] != list(agh):
                        raise SimplicialError(
                            f"action incompatibility at level {n}")
        for n in range(1, self.depth + 1):
            size = self.levels[n].size
            for i in range(n + 1):
                f = self.faces.get((n, i))
                if f is None or len(f) != size:
                    raise SimplicialError(f"missing/short face d_{i} at level {n}")
                if f[0] != 0:
                    raise SimplicialError(f"face d_{i} at level {n} moves basepoint")
                self._check_equivariant(f, n, n - 1, f"d_{i}")
        for n in range(0, self.depth):
            size = self.levels[n].size
            for j in range(n + 1):
                s = self.degens.get((n, j))
                if s is None or len(s) != size:
                    raise SimplicialError(f"missing/short degeneracy s_{j} at {n}")
                if s[0] != 0:
                    raise SimplicialError(f"degeneracy s_{j} at {n} moves basepoint")
                self._check_equivariant(s, n, n + 1, f"s_{j}")
        # simplicial identities
        for n in range(2, self.depth + 1):
            for j in range(n + 1):
                dj = self.faces[(n, j)]
                for i in range(j):
                    di_low = self.faces[(n - 1, i)]
                    dj1 = self.faces[(n - 1, j - 1)]
                    di = self.faces[(n, i)]
                    if [di_low[x] for x in dj] != [dj1[x] for x in di]:
                        raise SimplicialError(
                            f"d_{i} d_{j} identity fails at level {n}")
        for n in range(0, self.depth - 1):
            for j in range(n + 1):
                sj = self.degens[(n, j)]
                for i in range(j + 1):
                    si_up = self.degens[(n + 1, i)]
                    sj1 = self.degens[(n + 1, j + 1)]
                    si = self.degens[(n, i)]
                    if [si_up[x] for x in sj] != [sj1[x] for x in si]:
                        raise SimplicialError(
                            f"s_{i} s_{j} identity fails at level {n}")
        for n in range(1, self.depth):
            # d_i s_j on level n
            for j in range(n + 1):
                sj = self.degens[(n, j)]
                for i in range(n + 2):
                    di = self.faces[(n + 1, i)]
                    comp = [di[x] for x in sj]
                    if i == j or i == j + 1:
                        if comp != list(range(self.levels[n].size)):
                            raise SimplicialError(
                                f"d_{i} s_{j} is not the identity at level {n}")
                    elif i < j:
                        sj1 = self.degens[(n - 1, j - 1)]
                        di_low = self.faces[(n, i)]
                        if comp != [sj1[x] for x in di_low]:
                            raise SimplicialError(
                                f"d_{i} s_{j} identity fails at level {n}")
                    else:
                        sj_low = self.degens[(n - 1, j)]
                        di_low = self.faces[(n, i - 1)]
                        if comp != [sj_low[x] for x in di_low]:
                            raise SimplicialError(
                                f"d_{i} s_{j} identity fails at level {n}")

    def _check_equivariant(self, mp, n_from, n_to, name):
        src = self.levels[n_from]
        tgt = self.levels[n_to]
        for g in self.group.elements():
            if [mp[x] for x in src.action[g]] != \
                    [tgt.action[g][mp[x]] for x in range(src.size)]:
                raise SimplicialError(
                    f"{name} not equivariant at level {n_from}")

    def truncate(self, depth):
        if depth > self.depth:
            raise SimplicialError("cannot extend a truncation")
        faces = {k: v for k, v in self.faces.items() if k[0] <= depth}
        degens = {k: v for k, v in self.degens.items() if k[0] < depth}
        return PointedSimplicialGSet(self.group, depth,
                                     self.levels[:depth + 1], faces, degens,
                                     validate=False)

    def is_degenerate(self, n, x):
        if n == 0:
            return False
        for j in range(n):
            y = self.faces[(n, j)][x]
            if self.degens[(n - 1, j)][y] == x:
                return True
        return False

    def fixed(self, H):
        """X^H as a pointed simplicial set over the Weyl group of H."""
        fixed_levels = []
        pts = []
        wd = None
        for lv in self.levels:
            F, fpts, wd = fixed_points(lv, H)
            fixed_levels.append(F)
            pts.append({p: i for i, p in enumerate(fpts)})
        faces = {}
        degens = {}
        for (n, i), f in self.faces.items():
            if n > self.depth:
                continue
            faces[(n, i)] = tuple(pts[n - 1][f[p]] for p in sorted(pts[n]))
        for (n, j), s in self.degens.items():
            degens[(n, j)] = tuple(pts[n + 1][s[p]] for p in sorted(pts[n]))
        return PointedSimplicialGSet(wd.group, self.depth, fixed_levels,
                                     faces, degens, validate=False)

    def __repr__(self):
        sizes = [lv.size for lv in self.levels]
        return f"PointedSimplicialGSet(depth={self.depth}, sizes={sizes})"


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def constant_two_point(G, depth):
    """[1]_+: base plus one G-fixed point, all structure maps identity."""
    lv = GSet(G, 2, [(0, 1)] * G.order, validate=False)
    levels = [lv] * (depth + 1)
    faces = {(n, i): (0, 1) for n in range(1, depth + 1) for i in range(n + 1)}
    degens = {(n, j): (0, 1) for n in range(depth) for j in range(n + 1)}
    return PointedSimplicialGSet(G, depth, levels, faces, degens)


def _maximal_classes(G, reps):
    """Drop classes subconjugate to another class in the list."""
    out = []
    for K in reps:
        kset = set(K)
        dominated = False
        for Kp in reps:
            if Kp == K:
                continue
            for g in G.elements():
                if {G.conj(g, x) for x in K} <= set(Kp):
                    dominated = True
                    break
            if dominated:
                break
        if not dominated:
            out.append(K)
    return out


def adapted_orbit_union(G, N, all_classes=False):
    """The G-set S_N: one orbit [G/H] per conjugacy class with N not in H.

    By default only the maximal such classes are used; every smaller class
    has nonempty fixed points on one of these orbits already, so the cone
    is adapted either way and stays small.  `all_classes=True` takes the
    full union of classes.
    """
    lat = subgroup_lattice(G)
    nset = set(N)
    reps = [rep for rep in lat.representatives if not nset <= set(rep)]
    if not all_classes:
        reps = _maximal_classes(G, reps)
    if not reps:
        return None
    orbits = [orbit(G, rep) for rep in reps]
    if len(orbits) == 1:
        return orbits[0]
    total, _ = disjoint_union(*orbits)
    return total


def build_adapted_candidate(G, N, depth, all_classes=False):
    """The reduced mapping cone of E(S_N)_+ -> [1]_+, truncated at `depth`.

    E(S)_n = S^{n+1} with a disjoint basepoint added in every level; the
    cone has X^N = [1]_+ exactly and acyclic fixed points at subgroups not
    containing N.  With S_N empty (N trivial) this degenerates to [1]_+.
    """
    if depth < 1:
        raise SimplicialError("need depth >= 1")
    N = tuple(sorted(N))
    S = adapted_orbit_union(G, N, all_classes=all_classes)
    if S is None or S.size == 0:
        return constant_two_point(G, depth)
    m = S.size

    def level_size(n):
        return 2 + (m ** (n + 1)) * n if n >= 1 else 2

    def cone_index(n, a_idx, t):
        return 2 + a_idx * n + (t - 1)

    def decode(n, p):
        q, r = divmod(p - 2, n)
        return q, r + 1

    def digits(a_idx, n):
        out = []
        for _ in range(n + 1):
            a_idx, d = divmod(a_idx, m)
            out.append(d)
        return out[::-1]

    def undigits(ds):
        v = 0
        for d in ds:
            v = v * m + d
        return v

    levels = []
    for n in range(depth + 1):
        size = level_size(n)
        action = []
        for g in G.elements():
            row = [0, 1] + [0] * (size - 2)
            srow = S.action[g]
            if n >= 1:
                for p in range(2, size):
                    a_idx, t = decode(n, p)
                    moved = undigits([srow[d] for d in digits(a_idx, n)])
                    row[p] = cone_index(n, moved, t)
            action.append(tuple(row))
        levels.append(GSet(G, size, action, validate=False))

    faces = {}
    degens = {}
    for n in range(1, depth + 1):
        size = level_size(n)
        for i in range(n + 1):
            f = [0, 1] + [0] * (size - 2)
            for p in range(2, size):
                a_idx, t = decode(n, p)
                ds = digits(a_idx, n)
                del ds[i]
                t2 = t - 1 if i < t else t
                if t2 == 0:
                    f[p] = 1
                elif t2 == n:      # the all-zeros cone end: collapsed
                    f[p] = 0
                else:
                    f[p] = cone_index(n - 1, undigits(ds), t2)
            faces[(n, i)] = tuple(f)
    for n in range(depth):
        size = level_size(n)
        for j in range(n + 1):
            s = [0, 1] + [0] * (size - 2)
            for p in range(2, size):
                a_idx, t = decode(n, p)
                ds = digits(a_idx, n)
                ds.insert(j, ds[j])
                t2 = t + 1 if j < t else t
                s[p] = cone_index(n + 1, undigits(ds), t2)
            degens[(n, j)] = tuple(s)
        # level 0 has no cone points; nothing extra to do
    return PointedSimplicialGSet(G, depth, levels, faces, degens)


def simplicial_circle(G, depth):
    """Delta^1 with its boundary collapsed to the basepoint, trivial action.

    Level n holds the basepoint plus the n interior simplex classes (the
    monotone maps [n] -> [1] with both constant ones collapsed); the single
    nondegenerate 1-simplex carries the fundamental class.
    """
    levels = []
    for n in range(depth + 1):
        size = 1 + (n if n >= 1 else 0)
        levels.append(GSet(G, size, [tuple(range(size))] * G.order,
                           validate=False))
    faces = {}
    degens = {}
    for n in range(1, depth + 1):
        for i in range(n + 1):
            f = [0] * levels[n].size
            for t in range(1, n + 1):
                t2 = t - 1 if i < t else t
                f[t] = 0 if t2 in (0, n) else t2
            faces[(n, i)] = tuple(f)
    for n in range(depth):
        for j in range(n + 1):
            s = [0] * levels[n].size
            for t in range(1, n + 1):
                s[t] = t + 1 if j < t else t
            degens[(n, j)] = tuple(s)
    return PointedSimplicialGSet(G, depth, levels, faces, degens)


def sign_circle(G, depth):
    """The sign-representation circle over a group of order 2.

    Two arcs from the basepoint to a second fixed vertex, swapped by the
    nontrivial element: the fixed points of the full group form S^0, the
    underlying space is a circle.
    """
    if G.order != 2:
        raise SimplicialError("sign circle needs a group of order 2")

    def idx(n, c, t):
        return 2 + c * n + (t - 1)

    levels = []
    for n in range(depth + 1):
        size = 2 + 2 * n
        rows = [tuple(range(size))]
        swap = [0, 1] + [0] * (size - 2)
        for c in (0, 1):
            for t in range(1, n + 1):
                swap[idx(n, c, t)] = idx(n, 1 - c, t)
        rows.append(tuple(swap))
        levels.append(GSet(G, size, rows, validate=False))
    faces = {}
    degens = {}
    for n in range(1, depth + 1):
        for i in range(n + 1):
            f = [0, 1] + [0] * (2 * n)
            for c in (0, 1):
                for t in range(1, n + 1):
                    t2 = t - 1 if i < t else t
                    if t2 == 0:
                        f[idx(n, c, t)] = 1       # the non-base vertex
                    elif t2 == n:
                        f[idx(n, c, t)] = 0       # the basepoint end
                    else:
                        f[idx(n, c, t)] = idx(n - 1, c, t2)
            faces[(n, i)] = tuple(f)
    for n in range(depth):
        for j in range(n + 1):
            s = [0, 1] + [0] * (2 * n)
            for c in (0, 1):
                for t in range(1, n + 1):
                    t2 = t + 1 if j < t else t
                    s[idx(n, c, t)] = idx(n + 1, c, t2)
            degens[(n, j)] = tuple(s)
    return PointedSimplicialGSet(G, depth, levels, faces, degens)


# ---------------------------------------------------------------------------
# Reduced normalized chains
# ---------------------------------------------------------------------------

def _nondegenerate_points(X, n):
    lv = X.levels[n]
    return [x for x in range(1, lv.size) if not X.is_degenerate(n, x)]


def reduced_chain_data(X, top):
    """Per-degree generator counts and sparse boundary entries.

    Degree n generators: nondegenerate non-basepoint n-simplices; boundary
    is the alternating face sum with degenerate or basepoint faces dropped
    (normalized chains with the basepoint collapsed).
    """
    top = min(top, X.depth)
    gens = {}
    index = {}
    for n in range(top + 1):
        pts = _nondegenerate_points(X, n)
        gens[n] = pts
        index[n] = {x: i for i, x in enumerate(pts)}
    boundaries = {}
    for n in range(1, top + 1):
        entries = []
        lower = index[n - 1]
        for col, x in enumerate(gens[n]):
            for i in range(n + 1):
                y = X.faces[(n, i)][x]
                j = lower.get(y)
                if j is not None:
                    entries.append((j, col, 1 if i % 2 == 0 else -1))
        boundaries[n] = entries
    counts = {n: len(gens[n]) for n in range(top + 1)}
    return counts, boundaries


def reduced_chain_complex(X, top=None):
    """The reduced normalized chain complex as an explicit ChainComplex."""
    if top is None:
        top = X.depth - 1
    counts, boundaries = reduced_chain_data(X, top)
    mods = {n: FPModule(ZZ, counts[n]) for n in range(top + 1)}
    diffs = {}
    for n in range(1, top + 1):
        mat = Matrix.zeros(ZZ, counts[n - 1], counts[n])
        for r, c, v in boundaries[n]:
            mat.data[r][c] += v
        diffs[n] = ModuleMap(mods[n], mods[n - 1], mat, validate=False)
    return ChainComplex(ZZ, 0, top, mods, diffs)


def _sparse_homology(counts, boundaries, n):
    """(free rank, invariant factors) of H_n from sparse boundary data."""
    cn = counts.get(n, 0)
    if cn == 0:
        return 0, []
    if n in boundaries:
        rank_dn, _ = sparse_rank_invariants(cn, counts[n - 1], boundaries[n])
    else:
        rank_dn = 0
    if (n + 1) in boundaries:
        rank_dn1, factors = sparse_rank_invariants(
            counts[n + 1], cn, boundaries[n + 1])
    else:
        rank_dn1, factors = 0, []
    return cn - rank_dn - rank_dn1, factors


def reduced_homology(X, n, top=None):
    """H_n of the reduced chains, canonical FPModule (valid for n <= top-1)."""
    if top is None:
        top = X.depth
    counts, boundaries = reduced_chain_data(X, min(top, X.depth))
    free, factors = _sparse_homology(counts, boundaries, n)
    return FPModule.from_invariants(ZZ, free, factors)


# ---------------------------------------------------------------------------
# Adaptedness and homological spheres
# ---------------------------------------------------------------------------

@dataclass
class AdaptednessReport:
    normal_subgroup: tuple
    verified_degrees: tuple      # homology degrees certified acyclic
    fixed_point_clause: bool
    acyclicity_failures: list = field(default_factory=list)
    fixed_point_witness: str = ""

    @property
    def passed(self):
        return self.fixed_point_clause and not self.acyclicity_failures

    def summary(self):
        status = "adapted" if self.passed else "NOT adapted"
        rng = f"degrees {self.verified_degrees[0]}..{self.verified_degrees[-1]}" \
            if self.verified_degrees else "no degrees"
        return f"{status} (clause (ii) verified in {rng})"


def is_adapted(X, N, depth=None):
    """Check the two adaptedness clauses within the truncation window.

    Clause (i): X^N is the constant two-point object, checked exactly on
    every level of the window.  Clause (ii): reduced homology of X^H
    vanishes for subgroup classes H not containing N, checked in degrees
    0..depth-2 (the window boundary degree is excluded).
    """
    if depth is None:
        depth = X.depth
    depth = min(depth, X.depth)
    N = tuple(sorted(N))
    G = X.group
    lat = subgroup_lattice(G)
    nset = set(N)
    report = AdaptednessReport(normal_subgroup=N,
                               verified_degrees=tuple(range(max(depth - 1, 0))),
                               fixed_point_clause=True)
    fixed_n = X.fixed(N)
    for n, lv in enumerate(fixed_n.levels):
        if lv.size != 2:
            report.fixed_point_clause = False
            report.fixed_point_witness = f"level {n} has {lv.size} fixed points"
            break
    if report.fixed_point_clause:
        for (n, i), f in fixed_n.faces.items():
            if tuple(f) != (0, 1):
                report.fixed_point_clause = False
                report.fixed_point_witness = f"face d_{i} at level {n} not constant"
        for (n, j), s in fixed_n.degens.items():
            if tuple(s) != (0, 1):
                report.fixed_point_clause = False
                report.fixed_point_witness = f"degeneracy s_{j} at level {n}"
    for H in lat.representatives:
        if nset <= set(H):
            continue
        XH = X.fixed(H)
        counts, boundaries = reduced_chain_data(XH, depth)
        for n in range(depth - 1):
            free, factors = _sparse_homology(counts, boundaries, n)
            if free or factors:
                report.acyclicity_failures.append(
                    (H, n, FPModule.from_invariants(ZZ, free, factors).describe()))
    return report


@dataclass
class SphereReport:
    entries: dict = field(default_factory=dict)   # class rep -> (ok, detail)

    @property
    def passed(self):
        return all(ok for ok, _ in self.entries.values())

    def dimension(self, H):
        ok, detail = self.entries[tuple(sorted(H))]
        return detail if ok else None


def is_homological_sphere(X, depth=None):
    """Per-subgroup-class report: a single Z in one degree d_H and zero
    elsewhere within the window, or a failure witness.

    Verification covers homology degrees 0..depth-2 only; spheres of
    higher dimension than the window cannot be certified.
    """
    if depth is None:
        depth = X.depth
    depth = min(depth, X.depth)
    lat = subgroup_lattice(X.group)
    report = SphereReport()
    for H in lat.representatives:
        XH = X.fixed(H)
        counts, boundaries = reduced_chain_data(XH, depth)
        hits = []
        bad = None
        for n in range(depth - 1):
            free, factors = _sparse_homology(counts, boundaries, n)
            if factors or free > 1:
                bad = (n, FPModule.from_invariants(ZZ, free, factors).describe())
                break
            if free == 1:
                hits.append(n)
        if bad is not None:
            report.entries[H] = (False, f"H_{bad[0]} = {bad[1]}")
        elif len(hits) == 1:
            report.entries[H] = (True, hits[0])
        else:
            report.entries[H] = (False, f"degrees with Z: {hits}")
    return report


# ---------------------------------------------------------------------------
# Smash products
# ---------------------------------------------------------------------------

def smash(X, S):
    """X wedge-smash S_+ levelwise: points are (x, s) for non-base x.

    S is a G-set (inflate a W-set along the quotient first if needed).
    """
    G = X.group
    if S.group != G:
        raise SimplicialError("smash with a set over a different group")
    k = S.size
    levels = []
    for lv in X.levels:
        size = 1 + (lv.size - 1) * k
        action = []
        for g in G.elements():
            row = [0] * size
            xrow = lv.action[g]
            srow = S.action[g]
            for x in range(1, lv.size):
                base = 1 + (x - 1) * k
                xb = 1 + (xrow[x] - 1) * k
                for s in range(k):
                    row[base + s] = xb + srow[s]
            action.append(tuple(row))
        levels.append(GSet(G, size, action, validate=False))
    faces = {}
    for (n, i), f in X.faces.items():
        out = [0] * levels[n].size
        for x in range(1, X.levels[n].size):
            y = f[x]
            for s in range(k):
                out[1 + (x - 1) * k + s] = 0 if y == 0 else 1 + (y - 1) * k + s
        faces[(n, i)] = tuple(out)
    degens = {}
    for (n, j), sm in X.degens.items():
        out = [0] * levels[n].size
        for x in range(1, X.levels[n].size):
            y = sm[x]
            for s in range(k):
                out[1 + (x - 1) * k + s] = 1 + (y - 1) * k + s
        degens[(n, j)] = tuple(out)
    return PointedSimplicialGSet(G, X.depth, levels, faces, degens,
                                 validate=False)


def smash_pointed(X, Y):
    """Levelwise smash of two pointed simplicial G-sets (same group)."""
    G = X.group
    if Y.group != G or Y.depth != X.depth:
        raise SimplicialError("smash of mismatched simplicial sets")

    def pair_maps(n):
        nx = X.levels[n].size - 1
        ny = Y.levels[n].size - 1

        def enc(x, y):
            if x == 0 or y == 0:
                return 0
            return 1 + (x - 1) * ny + (y - 1)
        return nx, ny, enc

    levels = []
    encs = []
    for n in range(X.depth + 1):
        nx, ny, enc = pair_maps(n)
        encs.append(enc)
        size = 1 + nx * ny
        action = []
        for g in G.elements():
            xr = X.levels[n].action[g]
            yr = Y.levels[n].action[g]
            row = [0] * size
            for x in range(1, nx + 1):
                for y in range(1, ny + 1):
                    row[enc(x, y)] = enc(xr[x], yr[y])
            action.append(tuple(row))
        levels.append(GSet(G, size, action, validate=False))
    faces = {}
    degens = {}
    for n in range(1, X.depth + 1):
        _, ny, enc = pair_maps(n)
        enc_low = encs[n - 1]
        nx = X.levels[n].size - 1
        for i in range(n + 1):
            fx = X.faces[(n, i)]
            fy = Y.faces[(n, i)]
            row = [0] * levels[n].size
            for x in range(1, nx + 1):
                for y in range(1, ny + 1):
                    row[enc(x, y)] = enc_low(fx[x], fy[y])
            faces[(n, i)] = tuple(row)
    for n in range(X.depth):
        _, ny, enc = pair_maps(n)
        enc_up = encs[n + 1]
        nx = X.levels[n].size - 1
        for j in range(n + 1):
            sx = X.degens[(n, j)]
            sy = Y.degens[(n, j)]
            row = [0] * levels[n].size
            for x in range(1, nx + 1):
                for y in range(1, ny + 1):
                    row[enc(x, y)] = enc_up(sx[x], sy[y])
            degens[(n, j)] = tuple(row)
    return PointedSimplicialGSet(G, X.depth, levels, faces, degens,
                                 validate=False)


# ---------------------------------------------------------------------------
# Homology with Mackey coefficients
# ---------------------------------------------------------------------------

def mackey_chain_complex(X, M, nmax):
    """C_n = evaluate(M, X_n minus basepoint) with span-induced differentials."""
    if X.depth < nmax + 2:
        raise SimplicialError(
            f"window too small: need depth >= {nmax + 2}, have {X.depth}")
    top = nmax + 2
    evs = {}
    subs = {}
    for n in range(top + 1):
        lv = X.levels[n]
        sub, pts = sub_gset(lv, range(1, lv.size))
        subs[n] = (sub, {p: i for i, p in enumerate(pts)})
        evs[n] = evaluate(M, sub)
    mods = {n: evs[n].module for n in range(top + 1)}
    diffs = {}
    for n in range(1, top + 1):
        total = None
        src, src_idx = subs[n]
        tgt, tgt_idx = subs[n - 1]
        for i in range(n + 1):
            f = X.faces[(n, i)]
            pre = [x for x in range(1, X.levels[n].size) if f[x] != 0]
            apex, apts = sub_gset(X.levels[n], pre)
            left = GMap(apex, src, [src_idx[p] for p in apts], validate=False)
            right = GMap(apex, tgt, [tgt_idx[f[p]] for p in apts],
                         validate=False)
            part = induced_map(M, left, right,
                               source_eval=evs[n], target_eval=evs[n - 1])
            if i % 2 == 1:
                part = -part
            total = part if total is None else total + part
        diffs[n] = total
    return ChainComplex(M.ring, 0, top, mods, diffs)


def mackey_homology(X, M, nmax):
    """Homology of the Mackey-coefficient complex in degrees 0..nmax."""
    C = mackey_chain_complex(X, M, nmax)
    return [C.homology(n) for n in range(nmax + 1)]
