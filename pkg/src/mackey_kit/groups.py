"""Finite groups as multiplication tables, with subgroup lattice data.

Groups are immutable: an n x n table of element indices with the identity
at index 0, plus an inverse table.  Subgroups are canonical sorted tuples
of element indices.  The lattice records all subgroups, their conjugacy
classes (representative = lexicographically least element tuple), the
inclusion relation and normalizers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product


MAX_LATTICE_ORDER = 48


class GroupError(Exception):
    pass


@dataclass(frozen=True)
class Group:
    table: tuple          # tuple of tuples of indices
    inverse: tuple

    @property
    def order(self):
        return len(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverse[a]

    def conj(self, g, x):
        """g * x * g^-1"""
        return self.table[self.table[g][x]][self.inverse[g]]

    def elements(self):
        return range(self.order)

    def element_order(self, a):
        x, n = a, 1
        while x != 0:
            x = self.mul(x, a)
            n += 1
        return n

    def is_abelian(self):
        t = self.table
        n = self.order
        return all(t[a][b] == t[b][a] for a in range(n) for b in range(a))

    def __repr__(self):
        return f"Group(order={self.order})"


def _build_inverse(table):
    n = len(table)
    inv = [None] * n
    for a in range(n):
        for b in range(n):
            if table[a][b] == 0:
                inv[a] = b
                break
        if inv[a] is None or table[inv[a]][a] != 0:
            raise GroupError(f"element {a} has no two-sided inverse")
    return tuple(inv)


def _validate_table(table):
    n = len(table)
    for i, row in enumerate(table):
        if len(row) != n:
            raise GroupError("multiplication table is not square")
        if sorted(row) != list(range(n)):
            raise GroupError(f"row {i} is not a bijection")
    for j in range(n):
        col = [table[i][j] for i in range(n)]
        if sorted(col) != list(range(n)):
            raise GroupError(f"column {j} is not a bijection")
    for a in range(n):
        if table[0][a] != a or table[a][0] != a:
            raise GroupError("index 0 is not an identity")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise GroupError(
                        f"associativity fails at ({a}, {b}, {c})")


def group_from_table(table):
    """Group from a raw multiplication table; validates all group laws."""
    table = tuple(tuple(row) for row in table)
    if not table:
        raise GroupError("empty table")
    _validate_table(table)
    return Group(table, _build_inverse(table))


def cyclic(n):
    if n < 1:
        raise GroupError("cyclic group needs order >= 1")
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return Group(table, tuple((-i) % n for i in range(n)))


def _perm_mul(p, q):
    return tuple(p[q[i]] for i in range(len(p)))


def group_from_permutations(generators):
    """Closure of permutation generators (index arrays) into a Group.

    Elements are ordered with the identity first, then lexicographically
    as permutation tuples.
    """
    if not generators:
        raise GroupError("need at least one generator")
    degree = len(generators[0])
    gens = []
    for g in generators:
        g = tuple(g)
        if sorted(g) != list(range(degree)):
            raise GroupError(f"{g} is not a permutation of 0..{degree - 1}")
        gens.append(g)
    identity = tuple(range(degree))
    elems = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _perm_mul(p, g)
                if q not in elems:
                    elems.add(q)
                    nxt.append(q)
        frontier = nxt
    ordered = [identity] + sorted(elems - {identity})
    index = {p: i for i, p in enumerate(ordered)}
    table = tuple(tuple(index[_perm_mul(p, q)] for q in ordered)
                  for p in ordered)
    return Group(table, _build_inverse(table))


def dihedral(n):
    """Dihedral group of order 2n (symmetries of the regular n-gon)."""
    if n < 3:
        raise GroupError("dihedral needs n >= 3")
    rot = tuple((i + 1) % n for i in range(n))
    refl = tuple((-i) % n for i in range(n))
    return group_from_permutations([rot, refl])


def symmetric_3():
    """The nonabelian group of order 6."""
    return group_from_permutations([(1, 2, 0), (1, 0, 2)])


def direct_product(G, H):
    """Direct product; element (a, b) gets index a * |H| + b."""
    nh = H.order
    n = G.order * nh
    table = []
    for a in range(G.order):
        for b in range(nh):
            row = []
            for c in range(G.order):
                for d in range(nh):
                    row.append(G.mul(a, c) * nh + H.mul(b, d))
            table.append(tuple(row))
    table = tuple(table)
    return Group(table, _build_inverse(table))


def klein_four():
    return direct_product(cyclic(2), cyclic(2))


def make_group(spec):
    """Build a group from one of the accepted descriptions.

    spec is a dict with exactly one of the keys:
      "table", "perm_generators", "cyclic", "product" (a list of specs).
    """
    if "table" in spec:
        return group_from_table(spec["table"])
    if "perm_generators" in spec:
        return group_from_permutations(spec["perm_generators"])
    if "cyclic" in spec:
        return cyclic(spec["cyclic"])
    if "product" in spec:
        parts = [make_group(s) for s in spec["product"]]
        if not parts:
            raise GroupError("empty product spec")
        out = parts[0]
        for p in parts[1:]:
            out = direct_product(out, p)
        return out
    raise GroupError("unrecognized group spec")


# ---------------------------------------------------------------------------
# Subgroups
# ---------------------------------------------------------------------------

def generated_subgroup(G, gens):
    """Sorted tuple of the subgroup generated by the given elements."""
    elems = {0}
    frontier = [0]
    gens = [g for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                for y in (G.mul(x, g), G.mul(x, G.inv(g))):
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
        frontier = nxt
    return tuple(sorted(elems))


def is_subgroup(G, elems):
    s = set(elems)
    if 0 not in s:
        return False
    return all(G.mul(a, b) in s for a in s for b in s) and \
        all(G.inv(a) in s for a in s)


def conjugate_subgroup(G, H, g):
    return tuple(sorted(G.conj(g, h) for h in H))


@dataclass(frozen=True)
class SubgroupLattice:
    group: Group
    subgroups: tuple                 # sorted by (order, elements)
    classes: tuple                   # tuple of tuples of subgroup indices
    class_of: dict                   # subgroup tuple -> class index
    representatives: tuple           # class index -> subgroup tuple
    normalizers: dict                # subgroup tuple -> subgroup tuple

    def subgroup_index(self, H):
        return self.subgroups.index(H)

    def contains(self, H, K):
        """K subset of H."""
        return set(K) <= set(H)

    def subgroups_of(self, H):
        hs = set(H)
        return [K for K in self.subgroups if set(K) <= hs]

    def class_members(self, idx):
        return [self.subgroups[i] for i in self.classes[idx]]


@lru_cache(maxsize=None)
def subgroup_lattice(G):
    """All subgroups up to conjugacy, by breadth-first cyclic extension."""
    if G.order > MAX_LATTICE_ORDER:
        raise GroupError(
            f"group order {G.order} exceeds the lattice bound {MAX_LATTICE_ORDER}")
    trivial = (0,)
    found = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            hset = set(H)
            for x in G.elements():
                if x in hset:
                    continue
                T = generated_subgroup(G, list(H) + [x])
                if T not in found:
                    found.add(T)
                    nxt.append(T)
        frontier = nxt
    subgroups = tuple(sorted(found, key=lambda H: (len(H), H)))
    class_of = {}
    classes = []
    reps = []
    for i, H in enumerate(subgroups):
        if H in class_of:
            continue
        orbit = {H}
        for g in G.elements():
            orbit.add(conjugate_subgroup(G, H, g))
        rep = min(orbit)
        idx = len(classes)
        members = sorted(subgroups.index(K) for K in orbit)
        classes.append(tuple(members))
        reps.append(rep)
        for K in orbit:
            class_of[K] = idx
    normalizers = {}
    for H in subgroups:
        normalizers[H] = tuple(sorted(
            g for g in G.elements() if conjugate_subgroup(G, H, g) == H))
    return SubgroupLattice(G, subgroups, tuple(classes), class_of,
                           tuple(reps), normalizers)


# ---------------------------------------------------------------------------
# Quotients, Weyl groups, double cosets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quotient:
    """G/N with the min-element coset labeling.

    `projection[g]` is the index of the coset of g; `reps[i]` is the least
    element of coset i.  Cosets are ordered by their least element, so the
    identity coset is index 0, and quotient-of-quotient labelings compose
    strictly.
    """
    group: Group          # the quotient group W
    projection: tuple     # G index -> W index
    reps: tuple           # W index -> G index


def quotient_group(G, N):
    if not is_subgroup(G, N):
        raise GroupError("quotient by a non-subgroup")
    nset = set(N)
    for g in G.elements():
        if conjugate_subgroup(G, tuple(sorted(nset)), g) != tuple(sorted(nset)):
            raise GroupError("quotient by a non-normal subgroup")
    seen = {}
    cosets = []
    for g in G.elements():
        if g in seen:
            continue
        coset = sorted(G.mul(g, n) for n in nset)
        for x in coset:
            seen[x] = None
        cosets.append(coset)
    cosets.sort(key=lambda c: c[0])
    proj = [None] * G.order
    for i, coset in enumerate(cosets):
        for x in coset:
            proj[x] = i
    reps = tuple(c[0] for c in cosets)
    table = tuple(tuple(proj[G.mul(reps[i], reps[j])] for j in range(len(cosets)))
                  for i in range(len(cosets)))
    W = Group(table, _build_inverse(table))
    return Quotient(W, tuple(proj), reps)


def subgroup_as_group(G, H):
    """(the subgroup as a standalone Group, embedding H-index -> G-index)."""
    if not is_subgroup(G, H):
        raise GroupError("not a subgroup")
    embed = tuple(sorted(H))
    index = {g: i for i, g in enumerate(embed)}
    table = tuple(tuple(index[G.mul(a, b)] for b in embed) for a in embed)
    return Group(table, _build_inverse(table)), embed


@dataclass(frozen=True)
class WeylData:
    """W = N_G(H)/H together with the maps needed to act with it."""
    group: Group          # W
    normalizer: tuple     # N_G(H) as sorted G-indices
    to_w: dict            # G-index in N_H -> W index
    reps: tuple           # W index -> G-index representative


def weyl_data(G, H):
    lat = subgroup_lattice(G)
    H = tuple(sorted(H))
    if H not in lat.normalizers:
        raise GroupError("H is not a subgroup of G")
    NH = lat.normalizers[H]
    Ngrp, embed = subgroup_as_group(G, NH)
    inner = {g: i for i, g in enumerate(embed)}
    Himg = tuple(sorted(inner[h] for h in H))
    q = quotient_group(Ngrp, Himg)
    to_w = {embed[g]: q.projection[g] for g in range(Ngrp.order)}
    reps = tuple(embed[r] for r in q.reps)
    return WeylData(q.group, NH, to_w, reps)


def weyl_group(G, H):
    """W = N_G(H)/H = Aut_G([G/H]) as a Group."""
    return weyl_data(G, H).group


@dataclass(frozen=True)
class DoubleCoset:
    rep: int
    intersection: tuple    # H  intersect  g K g^-1
    size: int


def double_cosets(G, H, K):
    """Representatives of H\\G/K, each with H meet gKg^-1 and the coset size."""
    hset, kset = set(H), set(K)
    covered = [False] * G.order
    out = []
    for g in G.elements():
        if covered[g]:
            continue
        coset = set()
        for h in hset:
            hg = G.mul(h, g)
            for k in kset:
                coset.add(G.mul(hg, k))
        for x in coset:
            covered[x] = True
        ginv = G.inv(g)
        inter = tuple(sorted(
            h for h in hset if G.mul(G.mul(ginv, h), g) in kset))
        out.append(DoubleCoset(rep=g, intersection=inter, size=len(coset)))
    return out
