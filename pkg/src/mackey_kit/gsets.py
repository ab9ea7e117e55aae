"""Finite G-sets: orbits, products, fibered products, fixed points.

A GSet carries an explicit action table (group element x point -> point),
so fibered products and fixed points are plain set computations.  Orbit
decompositions record a base point, the point stabilizer, and a transporter
for every point (an element moving the base there) -- the data every
transfer/restriction construction downstream needs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .groups import (
    GroupError, is_subgroup, subgroup_lattice, weyl_data,
)


class GSetError(Exception):
    pass


class GSet:
    """Finite set with a left action of a fixed group."""

    __slots__ = ("group", "size", "action")

    def __init__(self, group, size, action, validate=True):
        self.group = group
        self.size = size
        self.action = tuple(tuple(row) for row in action)
        if validate:
            self.validate()

    def validate(self):
        G = self.group
        if len(self.action) != G.order:
            raise GSetError("action table has wrong number of rows")
        for row in self.action:
            if len(row) != self.size or (
                    self.size and sorted(row) != list(range(self.size))):
                raise GSetError("action row is not a permutation")
        if self.size and self.action[0] != tuple(range(self.size)):
            raise GSetError("identity does not act as identity")
        for g in G.elements():
            for h in G.elements():
                gh = G.mul(g, h)
                for x in range(self.size):
                    if self.action[g][self.action[h][x]] != self.action[gh][x]:
                        raise GSetError(
                            f"action not compatible at g={g}, h={h}, x={x}")

    def __eq__(self, other):
        return (isinstance(other, GSet) and self.group == other.group
                and self.size == other.size and self.action == other.action)

    def __hash__(self):
        return hash((self.group, self.size, self.action))

    def act(self, g, x):
        return self.action[g][x]

    def stabilizer(self, x):
        return tuple(sorted(g for g in self.group.elements()
                            if self.action[g][x] == x))

    def is_fixed(self, x, H):
        return all(self.action[h][x] == x for h in H)

    def __repr__(self):
        return f"GSet(|S|={self.size}, |G|={self.group.order})"


class GMap:
    """Equivariant map of G-sets."""

    __slots__ = ("source", "target", "points")

    def __init__(self, source, target, points, validate=True):
        self.source = source
        self.target = target
        self.points = tuple(points)
        if validate:
            self.validate()

    def validate(self):
        if self.source.group is not self.target.group and \
                self.source.group != self.target.group:
            raise GSetError("map between sets over different groups")
        if len(self.points) != self.source.size:
            raise GSetError("point map has wrong length")
        if any(not (0 <= p < self.target.size) for p in self.points):
            raise GSetError("point map goes out of range")
        for g in self.source.group.elements():
            for x in range(self.source.size):
                if self.points[self.source.act(g, x)] != \
                        self.target.act(g, self.points[x]):
                    raise GSetError(f"map not equivariant at g={g}, x={x}")

    @classmethod
    def identity(cls, S):
        return cls(S, S, range(S.size), validate=False)

    def __call__(self, x):
        return self.points[x]

    def compose(self, other):
        """self after other."""
        return GMap(other.source, self.target,
                    [self.points[p] for p in other.points], validate=False)


def trivial_gset(G, size=1):
    return GSet(G, size, [tuple(range(size))] * G.order, validate=False)


def empty_gset(G):
    return GSet(G, 0, [()] * G.order, validate=False)


def orbit(G, H):
    """The coset space [G/H] with left translation, cosets labeled by
    their least element."""
    H = tuple(sorted(H))
    if not is_subgroup(G, H):
        raise GroupError("orbit of a non-subgroup")
    seen = {}
    cosets = []
    for g in G.elements():
        if g in seen:
            continue
        coset = sorted(G.mul(g, h) for h in H)
        for x in coset:
            seen[x] = None
        cosets.append(coset)
    cosets.sort(key=lambda c: c[0])
    point_of = {}
    for i, coset in enumerate(cosets):
        for x in coset:
            point_of[x] = i
    action = [tuple(point_of[G.mul(g, coset[0])] for coset in cosets)
              for g in G.elements()]
    return GSet(G, len(cosets), action, validate=False)


@dataclass(frozen=True)
class Orbit:
    points: tuple
    base: int
    stabilizer: tuple
    transporter: tuple     # same length as points: g with g*base = point


class OrbitDecomposition:
    """Orbits of a GSet, ordered by least point, with transporters."""

    def __init__(self, S):
        self.gset = S
        G = S.group
        seen = [False] * S.size
        orbits = []
        for x in range(S.size):
            if seen[x]:
                continue
            trans = {x: 0}
            frontier = [x]
            while frontier:
                nxt = []
                for y in frontier:
                    for g in G.elements():
                        z = S.act(g, y)
                        if z not in trans:
                            trans[z] = G.mul(g, trans[y])
                            nxt.append(z)
                frontier = nxt
            pts = tuple(sorted(trans))
            for p in pts:
                seen[p] = True
            orbits.append(Orbit(
                points=pts, base=x,
                stabilizer=S.stabilizer(x),
                transporter=tuple(trans[p] for p in pts)))
        self.orbits = orbits
        self._where = {}
        for i, orb in enumerate(orbits):
            for j, p in enumerate(orb.points):
                self._where[p] = (i, j)

    def locate(self, point):
        """(orbit index, g) with g * base = point."""
        i, j = self._where[point]
        return i, self.orbits[i].transporter[j]

    def class_multiset(self):
        """Multiset of stabilizer conjugacy classes (lattice class indices)."""
        lat = subgroup_lattice(self.gset.group)
        return Counter(lat.class_of[orb.stabilizer] for orb in self.orbits)


def orbit_decomposition(S):
    return OrbitDecomposition(S)


def disjoint_union(*gsets):
    """Disjoint union; returns (GSet, inclusion GMaps)."""
    G = gsets[0].group
    if any(S.group != G for S in gsets):
        raise GSetError("disjoint union over mismatched groups")
    size = sum(S.size for S in gsets)
    action = []
    for g in G.elements():
        row = []
        for S in gsets:
            off = len(row)
            row.extend(off + p for p in S.action[g])
        action.append(tuple(row))
    total = GSet(G, size, action, validate=False)
    incls = []
    off = 0
    for S in gsets:
        incls.append(GMap(S, total, range(off, off + S.size), validate=False))
        off += S.size
    return total, incls


def cartesian_product(S, T):
    """S x T with diagonal action; returns (GSet, proj_S, proj_T).

    Point (x, y) has index x * |T| + y.
    """
    if S.group != T.group:
        raise GSetError("product over mismatched groups")
    G = S.group
    n = S.size * T.size
    action = []
    for g in G.elements():
        srow, trow = S.action[g], T.action[g]
        row = [0] * n
        for x in range(S.size):
            base = x * T.size
            sx = srow[x] * T.size
            for y in range(T.size):
                row[base + y] = sx + trow[y]
        action.append(tuple(row))
    P = GSet(G, n, action, validate=False)
    proj_s = GMap(P, S, [i // T.size for i in range(n)], validate=False)
    proj_t = GMap(P, T, [i % T.size for i in range(n)], validate=False)
    return P, proj_s, proj_t


def fibered_product(f, g):
    """Pullback of f: S -> U and g: T -> U; returns (GSet, p_S, p_T)."""
    if f.target is not g.target and f.target != g.target:
        raise GSetError("fibered product needs a common target")
    S, T = f.source, g.source
    if S.group != T.group:
        raise GSetError("fibered product over mismatched groups")
    G = S.group
    pairs = [(x, y) for x in range(S.size) for y in range(T.size)
             if f(x) == g(y)]
    index = {p: i for i, p in enumerate(pairs)}
    action = []
    for gg in G.elements():
        srow, trow = S.action[gg], T.action[gg]
        action.append(tuple(index[(srow[x], trow[y])] for (x, y) in pairs))
    P = GSet(G, len(pairs), action, validate=False)
    p_s = GMap(P, S, [x for (x, _) in pairs], validate=False)
    p_t = GMap(P, T, [y for (_, y) in pairs], validate=False)
    return P, p_s, p_t


def fixed_points(S, H):
    """S^H with its Weyl-group action.

    Returns (GSet over W = N_G(H)/H, list of fixed point indices in S,
    WeylData).  Point i of the result is the i-th fixed point in the
    natural order.
    """
    G = S.group
    wd = weyl_data(G, tuple(sorted(H)))
    fixed = [x for x in range(S.size) if S.is_fixed(x, H)]
    where = {x: i for i, x in enumerate(fixed)}
    W = wd.group
    action = []
    for w in range(W.order):
        n = wd.reps[w]
        action.append(tuple(where[S.act(n, x)] for x in fixed))
    return GSet(W, len(fixed), action, validate=False), fixed, wd


def inflate_gset(S_w, quotient):
    """Turn a W-set into a G-set along G -> W = G/N (N acts trivially)."""
    proj = quotient.projection
    action = [S_w.action[proj[g]] for g in range(len(proj))]
    # the ambient group is recovered by the caller; keep W's data intact
    return action


def restrict_gset(S, G_sub, embed):
    """S as a set over a subgroup (embed: subgroup index -> G index)."""
    action = [S.action[embed[h]] for h in range(G_sub.order)]
    return GSet(G_sub, S.size, action, validate=False)


def sub_gset(S, points):
    """The G-stable subset on the given points (relabeled in order)."""
    points = sorted(points)
    where = {p: i for i, p in enumerate(points)}
    action = []
    for g in S.group.elements():
        row = []
        for p in points:
            q = S.act(g, p)
            if q not in where:
                raise GSetError("subset is not G-stable")
            row.append(where[q])
        action.append(tuple(row))
    return GSet(S.group, len(points), action, validate=False), points
