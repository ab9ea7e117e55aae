"""Exact linear algebra over the four supported coefficient rings.

Everything downstream (Burnside rings, Mackey functors, chain complexes)
reduces to matrix arithmetic here.  Supported rings:

  * Integers           -- plain ints
  * Rationals          -- fractions.Fraction
  * IntegersMod(m)     -- ints reduced to [0, m)
  * PLocalIntegers(p)  -- Fractions whose denominator is coprime to p

Modules are always *presented*: a module is a free module on `ngens`
generators modulo the span of the columns of a relations matrix.  Maps are
matrices on generators.  Isomorphism testing goes through invariant factors
(Smith form over Z, p-adic valuations over Z_(p), rank over Q, lifting to Z
for Z/m), so every "two modules agree" assertion in the library is decidable
and exact.

Matrices act on column coordinate vectors; ``(f @ g)(x) == f(g(x))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class ExactAlgError(Exception):
    """Domain error in exact linear algebra (bad shapes, rings, windows)."""


# ---------------------------------------------------------------------------
# Coefficient rings
# ---------------------------------------------------------------------------

def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class CoefficientRing:
    """One of Integers, Rationals, IntegersMod(m), PLocalIntegers(p)."""

    kind: str              # "Z" | "Q" | "Zmod" | "Zploc"
    modulus: int | None = None
    prime: int | None = None

    def __post_init__(self):
        if self.kind == "Zmod":
            if self.modulus is None or self.modulus < 2:
                raise ExactAlgError("IntegersMod needs a modulus >= 2")
        elif self.kind == "Zploc":
            if self.prime is None or not _is_prime(self.prime):
                raise ExactAlgError("PLocalIntegers needs a prime")
        elif self.kind not in ("Z", "Q"):
            raise ExactAlgError(f"unknown ring kind {self.kind!r}")

    # -- element arithmetic -------------------------------------------------

    def normalize(self, x):
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ExactAlgError(f"{x} is not an integer")
                return int(x)
            return int(x)
        if self.kind == "Zmod":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ExactAlgError(f"{x} is not an integer")
                x = int(x)
            return int(x) % self.modulus
        x = Fraction(x)
        if self.kind == "Zploc" and x.denominator % self.prime == 0:
            raise ExactAlgError(f"{x} is not {self.prime}-local")
        return x

    def zero(self):
        return 0 if self.kind in ("Z", "Zmod") else Fraction(0)

    def one(self):
        return 1 if self.kind in ("Z", "Zmod") else Fraction(1)

    def add(self, a, b):
        return self.normalize(a + b)

    def sub(self, a, b):
        return self.normalize(a - b)

    def mul(self, a, b):
        return self.normalize(a * b)

    def neg(self, a):
        return self.normalize(-a)

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        if self.is_zero(a):
            return False
        if self.kind == "Z":
            return a in (1, -1)
        if self.kind == "Q":
            return True
        if self.kind == "Zmod":
            return gcd(a, self.modulus) == 1
        return self.valuation(a) == 0

    def valuation(self, a):
        """p-adic valuation of a nonzero Zploc element."""
        if self.kind != "Zploc":
            raise ExactAlgError("valuation is only defined for PLocalIntegers")
        if a == 0:
            raise ExactAlgError("valuation of zero")
        num, p, v = a.numerator, self.prime, 0
        while num % p == 0:
            num //= p
            v += 1
        return v

    def divides(self, a, b):
        """True if a*x = b is solvable."""
        if self.is_zero(a):
            return self.is_zero(b)
        if self.kind == "Z":
            return b % a == 0
        if self.kind == "Q":
            return True
        if self.kind == "Zmod":
            return b % gcd(a, self.modulus) == 0
        return self.is_zero(b) or self.valuation(a) <= self.valuation(b)

    def exact_div(self, b, a):
        """A solution x of a*x = b (caller guarantees divisibility)."""
        if self.kind == "Z":
            return b // a
        if self.kind in ("Q", "Zploc"):
            return self.normalize(Fraction(b) / Fraction(a))
        g = gcd(a, self.modulus)
        # solve a*x = b mod m: divide through by g, invert a/g mod m/g
        m = self.modulus
        inv = pow((a // g) % (m // g), -1, m // g) if m // g > 1 else 0
        return ((b // g) * inv) % m

    def describe(self):
        if self.kind == "Z":
            return "Z"
        if self.kind == "Q":
            return "Q"
        if self.kind == "Zmod":
            return f"Z/{self.modulus}"
        return f"Z_({self.prime})"


ZZ = CoefficientRing("Z")
QQ = CoefficientRing("Q")


def integers_mod(m):
    return CoefficientRing("Zmod", modulus=m)


def p_local(p):
    return CoefficientRing("Zploc", prime=p)


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Dense exact matrix over a CoefficientRing (row-major)."""

    __slots__ = ("ring", "rows", "cols", "data")

    def __init__(self, ring, rows, cols, data):
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ExactAlgError("matrix data does not match shape")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.data = [[ring.normalize(x) for x in row] for row in data]

    @classmethod
    def zeros(cls, ring, rows, cols):
        z = ring.zero()
        return cls(ring, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, ring, n):
        one, zero = ring.one(), ring.zero()
        return cls(ring, n, n,
                   [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_rows(cls, ring, rows_data):
        rows = len(rows_data)
        cols = len(rows_data[0]) if rows else 0
        return cls(ring, rows, cols, rows_data)

    @classmethod
    def column(cls, ring, entries):
        return cls(ring, len(entries), 1, [[x] for x in entries])

    def copy(self):
        return Matrix(self.ring, self.rows, self.cols,
                      [row[:] for row in self.data])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.ring == other.ring
                and self.rows == other.rows and self.cols == other.cols
                and self.data == other.data)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ExactAlgError("matmul shape mismatch")
        ring = self.ring
        out = []
        for i in range(self.rows):
            ri = self.data[i]
            row = []
            for j in range(other.cols):
                s = sum(ri[k] * other.data[k][j] for k in range(self.cols))
                row.append(ring.normalize(s))
            out.append(row)
        return Matrix(ring, self.rows, other.cols, out)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ExactAlgError("add shape mismatch")
        r = self.ring
        return Matrix(r, self.rows, self.cols,
                      [[r.add(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        r = self.ring
        return Matrix(r, self.rows, self.cols,
                      [[r.neg(a) for a in row] for row in self.data])

    def scaled(self, c):
        r = self.ring
        c = r.normalize(c)
        return Matrix(r, self.rows, self.cols,
                      [[r.mul(c, a) for a in row] for row in self.data])

    def transpose(self):
        return Matrix(self.ring, self.cols, self.rows,
                      [[self.data[i][j] for i in range(self.rows)]
                       for j in range(self.cols)])

    def col(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def is_zero(self):
        return all(all(x == 0 for x in row) for row in self.data)

    def to_lists(self):
        return [row[:] for row in self.data]

    def __repr__(self):
        return f"Matrix({self.ring.describe()}, {self.rows}x{self.cols})"


def hstack(*mats):
    ring, rows = mats[0].ring, mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ExactAlgError("hstack row mismatch")
    data = [sum((m.data[i] for m in mats), []) for i in range(rows)]
    return Matrix(ring, rows, sum(m.cols for m in mats), data)


def vstack(*mats):
    ring, cols = mats[0].ring, mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ExactAlgError("vstack col mismatch")
    data = [row[:] for m in mats for row in m.data]
    return Matrix(ring, sum(m.rows for m in mats), cols, data)


def block_diag(ring, blocks):
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = Matrix.zeros(ring, rows, cols)
    i = j = 0
    for b in blocks:
        for r in range(b.rows):
            out.data[i + r][j:j + b.cols] = b.data[r][:]
        i += b.rows
        j += b.cols
    return out


def diagonal_matrix(ring, entries, rows=None, cols=None):
    n = len(entries)
    rows = n if rows is None else rows
    cols = n if cols is None else cols
    out = Matrix.zeros(ring, rows, cols)
    for i, e in enumerate(entries):
        out.data[i][i] = ring.normalize(e)
    return out


# ---------------------------------------------------------------------------
# Smith-type diagonalization with transforms
# ---------------------------------------------------------------------------

def _size_key(ring, x):
    # pivot preference: smaller is better, units are best
    if ring.kind == "Z":
        return abs(x)
    if ring.kind == "Q":
        return 1
    return ring.valuation(x)


class _Eliminator:
    """Row/column reduction over Z, Q or Z_(p), tracking U, Uinv, V."""

    def __init__(self, A):
        ring = A.ring
        if ring.kind not in ("Z", "Q", "Zploc"):
            raise ExactAlgError(f"no Smith reduction over {ring.describe()}")
        self.ring = ring
        self.M = [row[:] for row in A.data]
        self.rows, self.cols = A.rows, A.cols
        self.U = Matrix.identity(ring, A.rows).data
        self.Uinv = Matrix.identity(ring, A.rows).data
        self.V = Matrix.identity(ring, A.cols).data

    # elementary operations ------------------------------------------------

    def swap_rows(self, i, j):
        if i == j:
            return
        self.M[i], self.M[j] = self.M[j], self.M[i]
        self.U[i], self.U[j] = self.U[j], self.U[i]
        for row in self.Uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(self, i, j):
        if i == j:
            return
        for row in self.M:
            row[i], row[j] = row[j], row[i]
        for row in self.V:
            row[i], row[j] = row[j], row[i]

    def add_row(self, i, j, c):
        """row_i += c * row_j"""
        if c == 0:
            return
        n = self.ring.normalize
        Mi, Mj = self.M[i], self.M[j]
        for k in range(self.cols):
            Mi[k] = n(Mi[k] + c * Mj[k])
        Ui, Uj = self.U[i], self.U[j]
        for k in range(self.rows):
            Ui[k] = n(Ui[k] + c * Uj[k])
        for row in self.Uinv:             # inverse: col_j -= c * col_i
            row[j] = n(row[j] - c * row[i])

    def add_col(self, j, i, c):
        """col_j += c * col_i"""
        if c == 0:
            return
        n = self.ring.normalize
        for row in self.M:
            row[j] = n(row[j] + c * row[i])
        for row in self.V:
            row[j] = n(row[j] + c * row[i])

    def scale_row(self, i, u):
        """row_i *= u for a unit u"""
        n = self.ring.normalize
        self.M[i] = [n(x * u) for x in self.M[i]]
        self.U[i] = [n(x * u) for x in self.U[i]]
        if self.ring.kind == "Z":
            uinv = u        # only +-1
        else:
            uinv = Fraction(1) / Fraction(u)
        for row in self.Uinv:
            row[i] = n(row[i] * uinv)

    # the reduction ---------------------------------------------------------

    def _find_pivot(self, t):
        best = None
        for i in range(t, self.rows):
            Mi = self.M[i]
            for j in range(t, self.cols):
                if Mi[j] != 0:
                    key = _size_key(self.ring, Mi[j])
                    if best is None or key < best[0]:
                        best = (key, i, j)
                        if key == 0 or (self.ring.kind == "Z" and key == 1):
                            return best
        return best

    def _quotient(self, x, p):
        """Multiplier q so that x - q*p is small (zero when p | x)."""
        ring = self.ring
        if ring.kind == "Z":
            return x // p
        if ring.kind == "Q":
            return Fraction(x) / Fraction(p)
        if ring.valuation(x) < ring.valuation(p):
            return None
        return Fraction(x) / Fraction(p)

    def diagonalize(self):
        t = 0
        limit = min(self.rows, self.cols)
        while t < limit:
            pivot = self._find_pivot(t)
            if pivot is None:
                break
            _, pi, pj = pivot
            self.swap_rows(t, pi)
            self.swap_cols(t, pj)
            while True:
                p = self.M[t][t]
                dirty = False
                for i in range(t + 1, self.rows):
                    x = self.M[i][t]
                    if x == 0:
                        continue
                    q = self._quotient(x, p)
                    if q is None:
                        dirty = True
                        continue
                    self.add_row(i, t, -q)
                    if self.M[i][t] != 0:
                        dirty = True
                for j in range(t + 1, self.cols):
                    x = self.M[t][j]
                    if x == 0:
                        continue
                    q = self._quotient(x, p)
                    if q is None:
                        dirty = True
                        continue
                    self.add_col(j, t, -q)
                    if self.M[t][j] != 0:
                        dirty = True
                if not dirty:
                    break
                piv = self._find_pivot(t)
                self.swap_rows(t, piv[1])
                self.swap_cols(t, piv[2])
            t += 1
        self._normalize_diagonal(t)
        return t

    def _normalize_diagonal(self, t):
        ring = self.ring
        # positive / p-power / unit pivots
        for i in range(t):
            d = self.M[i][i]
            if ring.kind == "Z":
                if d < 0:
                    self.scale_row(i, -1)
            elif ring.kind == "Q":
                if d != 1:
                    self.scale_row(i, Fraction(1) / d)
            else:
                v = ring.valuation(d)
                target = Fraction(ring.prime) ** v
                if d != target:
                    self.scale_row(i, target / d)
        if ring.kind == "Q":
            return
        # enforce the divisibility chain d_i | d_{i+1}
        changed = True
        while changed:
            changed = False
            for i in range(t - 1):
                a, b = self.M[i][i], self.M[i + 1][i + 1]
                if not ring.divides(a, b):
                    changed = True
                    self.add_row(i, i + 1, 1)
                    # re-clear the 2x2 block at (i, i+1)
                    self._reduce_pair(i, i + 1)
        for i in range(t):
            if ring.kind == "Z" and self.M[i][i] < 0:
                self.scale_row(i, -1)

    def _reduce_pair(self, a, b):
        """Re-diagonalize the 2x2 block at rows/cols {a, b}."""
        ring = self.ring
        while True:
            entries = [(self.M[i][j], i, j)
                       for i in (a, b) for j in (a, b) if self.M[i][j] != 0]
            if not entries:
                return
            _, pi, pj = min(entries, key=lambda e: _size_key(ring, e[0]))
            self.swap_rows(a, pi)
            self.swap_cols(a, pj)
            p = self.M[a][a]
            done = True
            x = self.M[b][a]
            if x != 0:
                q = self._quotient(x, p)
                if q is None:
                    done = False
                else:
                    self.add_row(b, a, -q)
                    if self.M[b][a] != 0:
                        done = False
            x = self.M[a][b]
            if x != 0:
                q = self._quotient(x, p)
                if q is None:
                    done = False
                else:
                    self.add_col(b, a, -q)
                    if self.M[a][b] != 0:
                        done = False
            if done and self.M[b][a] == 0 and self.M[a][b] == 0:
                for i in (a, b):
                    d = self.M[i][i]
                    if d == 0:
                        continue
                    if ring.kind == "Z" and d < 0:
                        self.scale_row(i, -1)
                    elif ring.kind == "Zploc":
                        target = Fraction(ring.prime) ** ring.valuation(d)
                        if d != target:
                            self.scale_row(i, target / d)
                return

    def result(self):
        ring = self.ring
        D = Matrix(ring, self.rows, self.cols, self.M)
        U = Matrix(ring, self.rows, self.rows, self.U)
        Uinv = Matrix(ring, self.rows, self.rows, self.Uinv)
        V = Matrix(ring, self.cols, self.cols, self.V)
        return D, U, Uinv, V


def _smith_with_transforms(A):
    """(D, U, Uinv, V) with U @ A @ V == D diagonal, divisibility chain."""
    e = _Eliminator(A)
    e.diagonalize()
    return e.result()


def smith_form(A):
    """Smith normal form of an integer matrix: D, U, V with U A V = D.

    D is diagonal with each entry dividing the next, U and V are invertible
    over the integers.  Empty matrices are allowed.
    """
    if A.ring.kind != "Z":
        raise ExactAlgError("smith_form is defined over the Integers")
    D, U, _, V = _smith_with_transforms(A)
    return D, U, V


def smith_diagonal(A):
    """Just the nonzero diagonal of the Smith-type form (any PID ring here)."""
    D, _, _, _ = _smith_with_transforms(A)
    out = []
    for i in range(min(D.rows, D.cols)):
        if D.data[i][i] != 0:
            out.append(D.data[i][i])
    return out


# ---------------------------------------------------------------------------
# Linear solving, kernels, column bases (with Z/m handled by lifting to Z)
# ---------------------------------------------------------------------------

def _lift_to_Z(A):
    return Matrix(ZZ, A.rows, A.cols, [[int(x) for x in row] for row in A.data])


def _reduce_mod(A, ring):
    return Matrix(ring, A.rows, A.cols, A.data)


def solve_matrix(A, B):
    """Solve A @ X = B; returns X or None if some column is unsolvable."""
    if A.ring != B.ring:
        raise ExactAlgError("solve over mismatched rings")
    ring = A.ring
    if A.rows != B.rows:
        raise ExactAlgError("solve shape mismatch")
    if ring.kind == "Zmod":
        m = ring.modulus
        Az = hstack(_lift_to_Z(A), diagonal_matrix(ZZ, [m] * A.rows, A.rows, A.rows)) \
            if A.rows else _lift_to_Z(A)
        X = solve_matrix(Az, _lift_to_Z(B))
        if X is None:
            return None
        top = Matrix(ZZ, A.cols, B.cols, X.data[:A.cols]) if A.cols else \
            Matrix.zeros(ZZ, 0, B.cols)
        return _reduce_mod(top, ring)
    D, U, _, V = _smith_with_transforms(A)
    Ub = U @ B
    Y = Matrix.zeros(ring, A.cols, B.cols)
    r = min(A.rows, A.cols)
    for j in range(B.cols):
        for i in range(A.rows):
            d = D.data[i][i] if i < r else ring.zero()
            rhs = Ub.data[i][j]
            if ring.is_zero(d):
                if not ring.is_zero(rhs):
                    return None
            else:
                if not ring.divides(d, rhs):
                    return None
                if i < A.cols:
                    Y.data[i][j] = ring.exact_div(rhs, d)
    return V @ Y


def kernel_generators(A):
    """Matrix whose columns generate {x : A x = 0}.

    Over Z, Q and Z_(p) the columns are a basis; over Z/m they are a
    generating set obtained by lifting to Z.
    """
    ring = A.ring
    if ring.kind == "Zmod":
        m = ring.modulus
        Az = hstack(_lift_to_Z(A), diagonal_matrix(ZZ, [m] * A.rows, A.rows, A.rows))
        K = kernel_generators(Az)
        top = Matrix(ZZ, A.cols, K.cols, K.data[:A.cols])
        cols = [top.col(j) for j in range(top.cols)]
        keep = [c for c in cols if any(x % m != 0 for x in c)]
        if not keep:
            return Matrix.zeros(ring, A.cols, 0)
        return _reduce_mod(
            Matrix(ZZ, A.cols, len(keep),
                   [[c[i] for c in keep] for i in range(A.cols)]), ring)
    D, _, _, V = _smith_with_transforms(A)
    r = min(A.rows, A.cols)
    free = [j for j in range(A.cols) if j >= r or D.data[j][j] == 0]
    out = Matrix.zeros(ring, A.cols, len(free))
    for k, j in enumerate(free):
        for i in range(A.cols):
            out.data[i][k] = V.data[i][j]
    return out


def column_basis(A):
    """A basis of the column span of A (over Z, Q or Z_(p))."""
    ring = A.ring
    if ring.kind == "Zmod":
        raise ExactAlgError("column_basis is not defined over Z/m")
    D, _, Uinv, _ = _smith_with_transforms(A)
    cols = []
    for i in range(min(A.rows, A.cols)):
        d = D.data[i][i]
        if d != 0:
            cols.append([ring.mul(Uinv.data[k][i], d) for k in range(A.rows)])
    if not cols:
        return Matrix.zeros(ring, A.rows, 0)
    return Matrix(ring, A.rows, len(cols),
                  [[c[i] for c in cols] for i in range(A.rows)])


def matrix_rank(A):
    if A.rows == 0 or A.cols == 0:
        return 0
    if A.ring.kind == "Zmod":
        raise ExactAlgError("rank over Z/m is ambiguous; lift explicitly")
    return len(smith_diagonal(A))


# ---------------------------------------------------------------------------
# Sparse rank / invariant factors (for large incidence-style matrices)
# ---------------------------------------------------------------------------

def sparse_rank_invariants(ncols, nrows, entries):
    """Rank and invariant factors of a sparse integer matrix.

    `entries` is a list of (row, col, value) with integer values.  Used for
    the boundary matrices of simplicial chains, which reduce almost entirely
    by unit pivots.  Returns (rank, sorted nontrivial invariant factors).
    """
    rows = {}
    cols = {}
    for r, c, v in entries:
        if v == 0:
            continue
        rows.setdefault(r, {})
        cols.setdefault(c, {})
        nv = rows[r].get(c, 0) + v
        if nv == 0:
            del rows[r][c]
            del cols[c][r]
        else:
            rows[r][c] = nv
            cols[c][r] = nv
    rank = 0
    diag = []
    while True:
        pivot = None
        best = None
        for r, rdata in rows.items():
            for c, v in rdata.items():
                if abs(v) == 1:
                    score = (len(rdata) - 1) * (len(cols[c]) - 1)
                    if best is None or score < best:
                        best, pivot = score, (r, c)
                        if score == 0:
                            break
            if best == 0:
                break
        if pivot is None:
            break
        r0, c0 = pivot
        v0 = rows[r0][c0]
        # eliminate column c0 from other rows, then row r0 from other cols
        prow = dict(rows[r0])
        for r in list(cols[c0].keys()):
            if r == r0:
                continue
            f = cols[c0][r] * v0        # v0 in {1,-1}: multiplier = v/v0
            rr = rows[r]
            for c, pv in prow.items():
                nv = rr.get(c, 0) - f * pv
                if nv == 0:
                    if c in rr:
                        del rr[c]
                        del cols[c][r]
                else:
                    rr[c] = nv
                    cols[c].setdefault(r, 0)
                    cols[c][r] = nv
        for c in prow:
            cols[c].pop(r0, None)
            if not cols[c]:
                del cols[c]
        del rows[r0]
        for r in list(cols.get(c0, {})):
            rows[r].pop(c0, None)
            if not rows[r]:
                del rows[r]
        cols.pop(c0, None)
        rank += 1
        diag.append(1)
    # dense fallback on whatever is left (tiny in practice)
    if rows:
        live_rows = sorted(rows.keys())
        live_cols = sorted({c for rdata in rows.values() for c in rdata})
        ri = {r: i for i, r in enumerate(live_rows)}
        ci = {c: i for i, c in enumerate(live_cols)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for r, rdata in rows.items():
            for c, v in rdata.items():
                dense[ri[r]][ci[c]] = v
        rest = smith_diagonal(Matrix(ZZ, len(live_rows), len(live_cols), dense))
        rank += len(rest)
        diag.extend(abs(d) for d in rest)
    factors = sorted(d for d in diag if d not in (0, 1))
    return rank, factors


# ---------------------------------------------------------------------------
# Finitely presented modules
# ---------------------------------------------------------------------------

class FPModule:
    """Free module on `ngens` generators modulo the columns of `relations`."""

    __slots__ = ("ring", "ngens", "relations")

    def __init__(self, ring, ngens, relations=None):
        if relations is None:
            relations = Matrix.zeros(ring, ngens, 0)
        if relations.ring != ring or relations.rows != ngens:
            raise ExactAlgError("relations do not match the module")
        self.ring = ring
        self.ngens = ngens
        self.relations = relations

    @classmethod
    def free(cls, ring, n):
        return cls(ring, n)

    @classmethod
    def from_invariants(cls, ring, free_rank, factors):
        n = free_rank + len(factors)
        rel = Matrix.zeros(ring, n, len(factors))
        for i, f in enumerate(factors):
            rel.data[free_rank + i][i] = ring.normalize(f)
        return cls(ring, n, rel)

    def is_free_presentation(self):
        return self.relations.cols == 0

    def invariants(self):
        """(free_rank, invariant factor tuple), canonical up to iso."""
        ring = self.ring
        if self.ngens == 0:
            return 0, ()
        if ring.kind == "Q":
            r = matrix_rank(self.relations) if self.relations.cols else 0
            return self.ngens - r, ()
        if ring.kind == "Zmod":
            m = ring.modulus
            rel = hstack(_lift_to_Z(self.relations),
                         diagonal_matrix(ZZ, [m] * self.ngens, self.ngens, self.ngens))
            diag = smith_diagonal(rel)
            factors = tuple(abs(d) for d in diag if abs(d) != 1)
            return 0, factors
        diag = smith_diagonal(self.relations) if self.relations.cols else []
        if ring.kind == "Zploc":
            factors = tuple(d for d in diag if d != 1)
        else:
            factors = tuple(abs(d) for d in diag if abs(d) != 1)
        return self.ngens - len(diag), factors

    def is_zero_module(self):
        free, factors = self.invariants()
        return free == 0 and not factors

    def rank(self):
        return self.invariants()[0]

    def describe(self):
        free, factors = self.invariants()
        ring = self.ring.describe()
        parts = []
        if free:
            parts.append(ring if free == 1 else f"{ring}^{free}")
        parts += [f"{ring}/({f})" for f in factors]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FPModule<{self.describe()}>"


def modules_isomorphic(M, N):
    """Invariant-factor isomorphism test; rejects mismatched rings."""
    if M.ring != N.ring:
        raise ExactAlgError("modules over different rings")
    return M.invariants() == N.invariants()


def direct_sum_modules(ring, mods):
    """Direct sum with generator offsets."""
    offsets = []
    pos = 0
    for m in mods:
        offsets.append(pos)
        pos += m.ngens
    rel = block_diag(ring, [m.relations for m in mods]) if mods else \
        Matrix.zeros(ring, 0, 0)
    return FPModule(ring, pos, rel), offsets


# ---------------------------------------------------------------------------
# Module maps
# ---------------------------------------------------------------------------

def _span_solve(target, vectors):
    """Solve relations(target) * X = vectors, lifting over Z/m."""
    ring = target.ring
    rel = target.relations
    if ring.kind == "Zmod":
        m = ring.modulus
        relz = hstack(_lift_to_Z(rel),
                      diagonal_matrix(ZZ, [m] * target.ngens,
                                      target.ngens, target.ngens))
        return solve_matrix(relz, _lift_to_Z(vectors))
    return solve_matrix(rel, vectors)


class ModuleMap:
    """Map of presented modules given by a matrix on generators."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source, target, matrix, validate=True):
        if source.ring != target.ring or matrix.ring != source.ring:
            raise ExactAlgError("module map over mismatched rings")
        if matrix.rows != target.ngens or matrix.cols != source.ngens:
            raise ExactAlgError("module map matrix has wrong shape")
        self.source = source
        self.target = target
        self.matrix = matrix
        if validate and source.relations.cols:
            img = matrix @ source.relations
            if _span_solve(target, img) is None:
                raise ExactAlgError("map does not respect source relations")

    @classmethod
    def identity(cls, module):
        return cls(module, module, Matrix.identity(module.ring, module.ngens),
                   validate=False)

    @classmethod
    def zero(cls, source, target):
        return cls(source, target,
                   Matrix.zeros(source.ring, target.ngens, source.ngens),
                   validate=False)

    def __matmul__(self, other):
        """(f @ g)(x) = f(g(x))"""
        if other.target is not self.source and other.target.ngens != self.source.ngens:
            raise ExactAlgError("composition mismatch")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix,
                         validate=False)

    def __add__(self, other):
        return ModuleMap(self.source, self.target, self.matrix + other.matrix,
                         validate=False)

    def __sub__(self, other):
        return ModuleMap(self.source, self.target, self.matrix - other.matrix,
                         validate=False)

    def __neg__(self):
        return ModuleMap(self.source, self.target, -self.matrix, validate=False)

    def scaled(self, c):
        return ModuleMap(self.source, self.target, self.matrix.scaled(c),
                         validate=False)

    def is_zero_map(self):
        """True if every column lies in the target's relation span."""
        if self.matrix.cols == 0 or self.matrix.is_zero():
            return True
        return _span_solve(self.target, self.matrix) is not None

    def equal_mod_relations(self, other):
        return (self - other).is_zero_map()

    def is_surjective(self):
        mod, _ = cokernel(self)
        return mod.is_zero_module()

    def is_injective(self):
        ker, _ = kernel(self)
        return ker.is_zero_module()

    def is_isomorphism(self):
        return self.is_surjective() and self.is_injective()

    def __repr__(self):
        return f"ModuleMap({self.source!r} -> {self.target!r})"


def cokernel(f):
    """target/(im f + relations) with its projection."""
    ring = f.target.ring
    rel = hstack(f.matrix, f.target.relations) if f.matrix.cols else f.target.relations
    mod = FPModule(ring, f.target.ngens, rel)
    proj = ModuleMap(f.target, mod, Matrix.identity(ring, f.target.ngens),
                     validate=False)
    return mod, proj


def kernel(f):
    """Kernel of a map of presented modules, with its inclusion.

    Works over Z, Q, Z_(p) directly; over Z/m by lifting the whole problem
    to Z (which is faithful for presentation purposes).
    """
    ring = f.source.ring
    if ring.kind == "Zmod":
        return _kernel_zmod(f)
    # lattice K = {x : f(x) in span(target relations)}
    trel = f.target.relations
    stacked = hstack(f.matrix, -trel) if trel.cols else f.matrix
    K = kernel_generators(stacked)
    xpart = Matrix(ring, f.source.ngens, K.cols,
                   K.data[:f.source.ngens]) if K.cols else \
        Matrix.zeros(ring, f.source.ngens, 0)
    basis = column_basis(xpart) if xpart.cols else xpart
    srel = f.source.relations
    if basis.cols == 0:
        mod = FPModule(ring, 0)
        return mod, ModuleMap(mod, f.source, Matrix.zeros(ring, f.source.ngens, 0),
                              validate=False)
    if srel.cols:
        expr = solve_matrix(basis, srel)
        if expr is None:
            raise ExactAlgError("source relations escape the kernel lattice")
    else:
        expr = Matrix.zeros(ring, basis.cols, 0)
    mod = FPModule(ring, basis.cols, expr)
    incl = ModuleMap(mod, f.source, basis, validate=False)
    return mod, incl


def _kernel_zmod(f):
    ring = f.source.ring
    m = ring.modulus
    g = f.source.ngens
    trel = hstack(_lift_to_Z(f.target.relations),
                  diagonal_matrix(ZZ, [m] * f.target.ngens,
                                  f.target.ngens, f.target.ngens))
    stacked = hstack(_lift_to_Z(f.matrix), -trel)
    K = kernel_generators(stacked)
    xpart = Matrix(ZZ, g, K.cols, K.data[:g]) if K.cols else Matrix.zeros(ZZ, g, 0)
    basis = column_basis(xpart) if xpart.cols else xpart
    if basis.cols == 0:
        mod = FPModule(ring, 0)
        return mod, ModuleMap(mod, f.source, Matrix.zeros(ring, g, 0),
                              validate=False)
    srel = hstack(_lift_to_Z(f.source.relations),
                  diagonal_matrix(ZZ, [m] * g, g, g))
    expr = solve_matrix(basis, srel)
    if expr is None:
        raise ExactAlgError("source relations escape the kernel lattice")
    mod = FPModule(ring, basis.cols, _reduce_mod(expr, ring))
    incl = ModuleMap(mod, f.source, _reduce_mod(basis, ring), validate=False)
    return mod, incl


def lift_through(f, vectors):
    """Solve f(x) = v mod target relations, column by column; None if stuck."""
    ring = f.source.ring
    if ring.kind == "Zmod":
        m = ring.modulus
        aug = hstack(_lift_to_Z(f.matrix),
                     _lift_to_Z(f.target.relations),
                     diagonal_matrix(ZZ, [m] * f.target.ngens,
                                     f.target.ngens, f.target.ngens))
        X = solve_matrix(aug, _lift_to_Z(vectors))
        if X is None:
            return None
        return _reduce_mod(Matrix(ZZ, f.source.ngens, vectors.cols,
                                  X.data[:f.source.ngens]), ring)
    aug = hstack(f.matrix, f.target.relations) if f.target.relations.cols \
        else f.matrix
    X = solve_matrix(aug, vectors)
    if X is None:
        return None
    if f.source.ngens == 0:
        return Matrix.zeros(ring, 0, vectors.cols)
    return Matrix(ring, f.source.ngens, vectors.cols, X.data[:f.source.ngens])


def image_module(f):
    """The image of f as a submodule of the target (presented on f's columns)."""
    ring = f.target.ring
    gens = f.matrix
    ker_rel = kernel(ModuleMap(FPModule(ring, gens.cols), f.target, gens,
                               validate=False))[0]
    return FPModule(ring, gens.cols, ker_rel.relations), gens


# ---------------------------------------------------------------------------
# Chain complexes
# ---------------------------------------------------------------------------

class ChainComplex:
    """Bounded chain complex; modules outside [lo, hi] are zero.

    `d[n]` is the differential C_n -> C_{n-1}.  Construction rejects
    complexes with d . d != 0 (mod relations).
    """

    def __init__(self, ring, lo, hi, modules, differentials, validate=True):
        if lo > hi:
            raise ExactAlgError("empty degree window")
        self.ring = ring
        self.lo = lo
        self.hi = hi
        self.modules = dict(modules)
        self.d = dict(differentials)
        for n in range(lo, hi + 1):
            if n not in self.modules:
                self.modules[n] = FPModule(ring, 0)
        for n in range(lo + 1, hi + 1):
            if n not in self.d:
                self.d[n] = ModuleMap.zero(self.modules[n], self.modules[n - 1])
        if validate:
            self.validate()

    def validate(self):
        for n in range(self.lo + 1, self.hi + 1):
            dn = self.d[n]
            if dn.source.ngens != self.modules[n].ngens or \
                    dn.target.ngens != self.modules[n - 1].ngens:
                raise ExactAlgError(f"differential at degree {n} has wrong shape")
            if n + 1 <= self.hi:
                comp = dn @ self.d[n + 1]
                if not comp.is_zero_map():
                    raise ExactAlgError(f"d.d != 0 at degree {n + 1}")

    def module(self, n):
        return self.modules.get(n, FPModule(self.ring, 0))

    def differential(self, n):
        if self.lo + 1 <= n <= self.hi:
            return self.d[n]
        src = self.module(n)
        tgt = self.module(n - 1)
        return ModuleMap.zero(src, tgt)

    def homology(self, n):
        """ker d_n / im d_{n+1} as a canonical FPModule."""
        Cn = self.module(n)
        if Cn.ngens == 0:
            return FPModule(self.ring, 0)
        dn = self.differential(n)
        dn1 = self.differential(n + 1)
        free_complex = (Cn.is_free_presentation()
                        and dn.target.is_free_presentation()
                        and dn1.source.is_free_presentation()
                        and self.ring.kind in ("Z", "Q", "Zploc"))
        if free_complex:
            rk_dn = matrix_rank(dn.matrix)
            rk_dn1 = matrix_rank(dn1.matrix)
            free = Cn.ngens - rk_dn - rk_dn1
            if self.ring.kind == "Q":
                factors = []
            else:
                diag = smith_diagonal(dn1.matrix)
                factors = [abs(d) for d in diag if abs(d) != 1] \
                    if self.ring.kind == "Z" else [d for d in diag if d != 1]
            return FPModule.from_invariants(self.ring, free, factors)
        K, incl = kernel(dn)
        lifted = lift_through(incl, dn1.matrix) if dn1.matrix.cols else \
            Matrix.zeros(self.ring, K.ngens, 0)
        if lifted is None:
            raise ExactAlgError("image does not land in the kernel (d.d != 0?)")
        rel = hstack(K.relations, lifted) if K.relations.cols or lifted.cols \
            else K.relations
        free, factors = FPModule(self.ring, K.ngens, rel).invariants()
        return FPModule.from_invariants(self.ring, free, list(factors))

    def shifted(self, k):
        """C[k]_n = C_{n-k}, differentials twisted by (-1)^k."""
        sign = 1 if k % 2 == 0 else -1
        mods = {n + k: m for n, m in self.modules.items()}
        diffs = {}
        for n, f in self.d.items():
            mat = f.matrix if sign == 1 else -f.matrix
            diffs[n + k] = ModuleMap(f.source, f.target, mat, validate=False)
        return ChainComplex(self.ring, self.lo + k, self.hi + k, mods, diffs,
                            validate=False)


def homology(complex_, n):
    return complex_.homology(n)


class ChainMap:
    """Degreewise map of chain complexes commuting with differentials."""

    def __init__(self, source, target, mats, validate=True):
        self.source = source
        self.target = target
        self.mats = dict(mats)
        if validate:
            self.validate()

    def matrix(self, n):
        if n in self.mats:
            return self.mats[n]
        return Matrix.zeros(self.source.ring,
                            self.target.module(n).ngens,
                            self.source.module(n).ngens)

    def validate(self):
        lo = max(self.source.lo, self.target.lo)
        hi = min(self.source.hi, self.target.hi)
        for n in range(lo + 1, hi + 1):
            lhs = self.target.differential(n).matrix @ self.matrix(n)
            rhs = self.matrix(n - 1) @ self.source.differential(n).matrix
            diff = ModuleMap(self.source.module(n), self.target.module(n - 1),
                             lhs - rhs, validate=False)
            if not diff.is_zero_map():
                raise ExactAlgError(f"not a chain map at degree {n}")


def mapping_cone(cm):
    """cone(f)_k = A_{k-1} + B_k with d(a, b) = (-d a, f a + d b)."""
    A, B = cm.source, cm.target
    ring = A.ring
    lo = min(A.lo + 1, B.lo)
    hi = max(A.hi + 1, B.hi)
    mods = {}
    for k in range(lo, hi + 1):
        mods[k], _ = direct_sum_modules(ring, [A.module(k - 1), B.module(k)])
    diffs = {}
    for k in range(lo + 1, hi + 1):
        a_rk = A.module(k - 1).ngens
        b_rk = B.module(k).ngens
        a_rk1 = A.module(k - 2).ngens
        b_rk1 = B.module(k - 1).ngens
        mat = Matrix.zeros(ring, a_rk1 + b_rk1, a_rk + b_rk)
        dA = A.differential(k - 1).matrix
        dB = B.differential(k).matrix
        f = cm.matrix(k - 1)
        for i in range(a_rk1):
            for j in range(a_rk):
                mat.data[i][j] = ring.neg(dA.data[i][j])
        for i in range(b_rk1):
            for j in range(a_rk):
                mat.data[a_rk1 + i][j] = f.data[i][j]
            for j in range(b_rk):
                mat.data[a_rk1 + i][a_rk + j] = dB.data[i][j]
        diffs[k] = ModuleMap(mods[k], mods[k - 1], mat, validate=False)
    return ChainComplex(ring, lo, hi, mods, diffs, validate=False)
