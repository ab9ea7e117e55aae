"""Burnside rings: two independent multiplications, marks, group homology.

Elements are integer coordinate vectors over the subgroup conjugacy
classes of the lattice (class order: non-decreasing subgroup order, then
lexicographic representative).  The geometric product expands basis pairs
through double cosets; the marks product goes through the table of marks
and back through triangular solving, with an integrality assertion that
doubles as a correctness alarm.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactalg import ZZ, FPModule, Matrix, ModuleMap, ChainComplex
from .groups import subgroup_lattice, double_cosets, conjugate_subgroup, \
    weyl_group
from .gsets import orbit_decomposition


class BurnsideError(Exception):
    pass


@dataclass(frozen=True)
class BurnsideElement:
    """Integer coordinates over subgroup conjugacy classes of `group`."""

    group: object
    coords: tuple

    def __post_init__(self):
        lat = subgroup_lattice(self.group)
        if len(self.coords) != len(lat.classes):
            raise BurnsideError("coordinate length does not match class count")

    def __add__(self, other):
        self._check(other)
        return BurnsideElement(self.group,
                               tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return BurnsideElement(self.group,
                               tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rmul__(self, n):
        return BurnsideElement(self.group, tuple(n * a for a in self.coords))

    def _check(self, other):
        if self.group != other.group:
            raise BurnsideError("elements of different Burnside rings")

    def __repr__(self):
        return f"BurnsideElement{self.coords}"


def zero_element(G):
    lat = subgroup_lattice(G)
    return BurnsideElement(G, (0,) * len(lat.classes))


def basis_element(G, H):
    """[G/H] as a Burnside element."""
    lat = subgroup_lattice(G)
    coords = [0] * len(lat.classes)
    coords[lat.class_of[tuple(sorted(H))]] = 1
    return BurnsideElement(G, tuple(coords))


def unit_element(G):
    return basis_element(G, tuple(sorted(G.elements())))


def from_gset(S):
    """[S] in the Burnside ring: orbit stabilizer classes with multiplicity."""
    G = S.group
    lat = subgroup_lattice(G)
    coords = [0] * len(lat.classes)
    for cls, mult in orbit_decomposition(S).class_multiset().items():
        coords[cls] = mult
    return BurnsideElement(G, tuple(coords))


@lru_cache(maxsize=None)
def _basis_product_table(G):
    """coords of [G/H_i] * [G/H_j] for all class pairs, via double cosets."""
    lat = subgroup_lattice(G)
    k = len(lat.classes)
    table = [[None] * k for _ in range(k)]
    for i, H in enumerate(lat.representatives):
        for j, K in enumerate(lat.representatives):
            coords = [0] * k
            for dc in double_cosets(G, H, K):
                coords[lat.class_of[dc.intersection]] += 1
            table[i][j] = tuple(coords)
    return tuple(tuple(row) for row in table)


def multiply_geometric(a, b):
    """Bilinear extension of [G/H].[G/K] = sum over HgK of [G/(H^gKg-1)]."""
    a._check(b)
    G = a.group
    table = _basis_product_table(G)
    k = len(a.coords)
    out = [0] * k
    for i in range(k):
        ai = a.coords[i]
        if ai == 0:
            continue
        for j in range(k):
            bj = b.coords[j]
            if bj == 0:
                continue
            prod = table[i][j]
            for t in range(k):
                out[t] += ai * bj * prod[t]
    return BurnsideElement(G, tuple(out))


@dataclass(frozen=True)
class TableOfMarks:
    """marks[i][j] = |[G/K_j]^{H_i}| over class representatives.

    Classes are ordered by non-decreasing subgroup order, then lex, so the
    matrix is triangular: the entry vanishes unless H_i is subconjugate
    to K_j, and the diagonal is [N_G(K) : K] > 0.
    """
    group: object
    marks: tuple

    def row(self, i):
        return self.marks[i]


@lru_cache(maxsize=None)
def table_of_marks(G):
    lat = subgroup_lattice(G)
    reps = lat.representatives
    k = len(reps)
    rows = []
    for i in range(k):
        H = set(reps[i])
        row = []
        for j in range(k):
            K = reps[j]
            # |[G/K]^H| = #{gK : g^-1 H g <= K}
            kset = set(K)
            count = 0
            seen = set()
            for g in G.elements():
                coset = frozenset(G.mul(g, x) for x in kset)
                if coset in seen:
                    continue
                seen.add(coset)
                ginv = G.inv(g)
                if all(G.mul(G.mul(ginv, h), g) in kset for h in H):
                    count += 1
            row.append(count)
        rows.append(tuple(row))
    return TableOfMarks(G, tuple(rows))


def marks_hom(a):
    """Fixed-point count vector; additive and multiplicative."""
    tom = table_of_marks(a.group)
    k = len(a.coords)
    return tuple(sum(a.coords[j] * tom.marks[i][j] for j in range(k))
                 for i in range(k))


def marks_of_class(G, j):
    tom = table_of_marks(G)
    return tuple(row[j] for row in tom.marks)


def multiply_marks(a, b):
    """Product through the marks homomorphism: coordinatewise product of
    marks, then back-substitution on the triangular marks system.

    A non-integral solution signals a bug and raises.
    """
    a._check(b)
    G = a.group
    tom = table_of_marks(G)
    k = len(a.coords)
    ma = marks_hom(a)
    mb = marks_hom(b)
    target = [ma[i] * mb[i] for i in range(k)]
    # marks matrix is upper triangular in this class order (row i needs
    # H_i subconjugate to K_j), with positive diagonal
    coords = [Fraction(0)] * k
    for i in range(k - 1, -1, -1):
        s = sum(tom.marks[i][j] * coords[j] for j in range(i + 1, k))
        diag = tom.marks[i][i]
        coords[i] = Fraction(target[i] - s, diag)
    out = []
    for c in coords:
        if c.denominator != 1:
            raise BurnsideError(f"marks product is non-integral: {coords}")
        out.append(int(c))
    return BurnsideElement(G, tuple(out))


# ---------------------------------------------------------------------------
# Truncated bar complex and the degree-0 derived Burnside check
# ---------------------------------------------------------------------------

BAR_SIZE_BOUND = 25000


def bar_complex(W, dmax):
    """Truncated bar complex computing H_i(W, Z) for i <= dmax.

    Degree n module is free on W^n; built through degree dmax + 1.
    """
    top = dmax + 1
    if W.order ** top > BAR_SIZE_BOUND:
        raise BurnsideError(
            f"bar complex of size {W.order}^{top} exceeds the bound")
    n_elems = W.order
    sizes = [n_elems ** d for d in range(top + 1)]

    def tuple_index(t):
        idx = 0
        for g in t:
            idx = idx * n_elems + g
        return idx

    def tuples(d):
        out = [()]
        for _ in range(d):
            out = [t + (g,) for t in out for g in range(n_elems)]
        return out

    mods = {d: FPModule(ZZ, sizes[d]) for d in range(top + 1)}
    diffs = {}
    for d in range(1, top + 1):
        mat = Matrix.zeros(ZZ, sizes[d - 1], sizes[d])
        for col, t in enumerate(tuples(d)):
            # standard bar differential with trivial coefficients
            faces = [t[1:]]
            for i in range(d - 1):
                faces.append(t[:i] + (W.mul(t[i], t[i + 1]),) + t[i + 2:])
            faces.append(t[:-1])
            for i, face in enumerate(faces):
                sign = 1 if i % 2 == 0 else -1
                mat.data[tuple_index(face)][col] += sign
        diffs[d] = ModuleMap(mods[d], mods[d - 1], mat, validate=False)
    return ChainComplex(ZZ, 0, top, mods, diffs)


def group_homology(W, dmax):
    """[H_0(W, Z), ..., H_dmax(W, Z)] via the truncated bar complex."""
    C = bar_complex(W, dmax)
    return [C.homology(d) for d in range(dmax + 1)]


def derived_burnside_ranks(G, dmax):
    """Per conjugacy class, H_i(W_H, Z) for 0 <= i <= dmax.

    Degree 0 recovers one copy of Z per class, i.e. the rank decomposition
    of the Burnside ring.
    """
    if dmax > 4:
        raise BurnsideError("derived Burnside ranks are truncated at degree 4")
    lat = subgroup_lattice(G)
    out = []
    for rep in lat.representatives:
        W = weyl_group(G, rep)
        out.append(group_homology(W, dmax))
    return out
