"""Exact dense linear algebra over finite fields and over polynomial entries.

Mat holds entries of a PrimeField or ExtField; PolyMat holds MPoly entries
in the chart variables t_1..t_r.  Generic ranks are computed by fraction-free
(Bareiss) elimination over the polynomial ring, after peeling off rows and
columns with a single nonzero entry and splitting the nonzero pattern into
independent bipartite components.  For matrices of univariate polynomials,
row-Hermite and Smith reductions give the gcd of all maximal minors exactly.
"""

from __future__ import annotations

import itertools

import numpy as np

from .fields import PrimeField, _u_divmod, _u_mul, _u_trim
from .mpoly import MPoly, grlex_key, poly_gcd


class DimensionError(ValueError):
    pass


_NP_THRESHOLD = 2000  # entries; above this, prime-field elimination uses numpy


class Mat:
    """Rectangular matrix with entries in a fixed field, row-major."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise DimensionError("ragged rows")

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    def copy(self):
        return Mat(self.field, self.rows)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field == other.field
                and self.rows == other.rows)

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols} over {self.field!r})"

    def entry(self, i, j):
        return self.rows[i][j]

    def is_zero(self):
        f = self.field
        return all(f.is_zero(x) for r in self.rows for x in r)

    def add(self, other):
        f = self.field
        return Mat(f, [[f.add(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.rows, other.rows)])

    def sub(self, other):
        f = self.field
        return Mat(f, [[f.sub(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.rows, other.rows)])

    def smul(self, c):
        f = self.field
        return Mat(f, [[f.mul(c, a) for a in r] for r in self.rows])

    def neg(self):
        f = self.field
        return Mat(f, [[f.neg(a) for a in r] for r in self.rows])

    def matmul(self, other):
        if self.ncols != other.nrows:
            raise DimensionError("inner dimensions differ")
        f = self.field
        if isinstance(f, PrimeField) and self.nrows * other.ncols >= 1024:
            a = np.array(self.rows, dtype=np.int64)
            b = np.array(other.rows, dtype=np.int64)
            return Mat(f, ((a @ b) % f.p).tolist())
        bt = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in bt:
                acc = f.zero
                for x, y in zip(r, c):
                    if not f.is_zero(x) and not f.is_zero(y):
                        acc = f.add(acc, f.mul(x, y))
                row.append(acc)
            out.append(row)
        return Mat(f, out)

    def __matmul__(self, other):
        return self.matmul(other)

    def transpose(self):
        return Mat(self.field, list(map(list, zip(*self.rows)))) if self.rows \
            else Mat(self.field, [])

    def apply(self, vec):
        f = self.field
        out = []
        for r in self.rows:
            acc = f.zero
            for x, y in zip(r, vec):
                if not f.is_zero(x) and not f.is_zero(y):
                    acc = f.add(acc, f.mul(x, y))
            out.append(acc)
        return out

    def power(self, k):
        out = Mat.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                out = out.matmul(base)
            base = base.matmul(base)
            k >>= 1
        return out

    # -- elimination ---------------------------------------------------------

    def rref(self):
        """(reduced rows, pivot columns); reduced rows exclude zero rows."""
        f = self.field
        if isinstance(f, PrimeField) and self.nrows * self.ncols >= _NP_THRESHOLD:
            return _rref_prime_np(self.rows, f.p)
        rows = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            piv = next((i for i in range(r, len(rows)) if not f.is_zero(rows[i][c])), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = f.inv(rows[r][c])
            rows[r] = [f.mul(inv, x) for x in rows[r]]
            for i in range(len(rows)):
                if i != r and not f.is_zero(rows[i][c]):
                    m = rows[i][c]
                    rows[i] = [f.sub(x, f.mul(m, y)) for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == len(rows):
                break
        return rows[:r], pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel(self):
        """Canonical Subspace of vectors v with self @ v = 0."""
        reduced, pivots = self.rref()
        f = self.field
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for c in free:
            v = [f.zero] * self.ncols
            v[c] = f.one
            for r, pc in enumerate(pivots):
                v[pc] = f.neg(reduced[r][c])
            basis.append(v)
        return Subspace.from_vectors(f, self.ncols, basis)

    def image(self):
        """Column space as a canonical Subspace of the target."""
        cols = list(map(list, zip(*self.rows))) if self.rows else []
        return Subspace.from_vectors(self.field, self.nrows, cols)

    def det(self):
        f = self.field
        if self.nrows != self.ncols:
            raise DimensionError("determinant of non-square matrix")
        rows = [list(r) for r in self.rows]
        n = self.nrows
        acc = f.one
        for c in range(n):
            piv = next((i for i in range(c, n) if not f.is_zero(rows[i][c])), None)
            if piv is None:
                return f.zero
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                acc = f.neg(acc)
            acc = f.mul(acc, rows[c][c])
            inv = f.inv(rows[c][c])
            for i in range(c + 1, n):
                if not f.is_zero(rows[i][c]):
                    m = f.mul(rows[i][c], inv)
                    rows[i] = [f.sub(x, f.mul(m, y)) for x, y in zip(rows[i], rows[c])]
        return acc

    def inverse(self):
        f = self.field
        n = self.nrows
        aug = Mat(f, [r + ei for r, ei in
                      zip(self.rows, Mat.identity(f, n).rows)])
        reduced, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise DimensionError("matrix is singular")
        return Mat(f, [r[n:] for r in reduced[:n]])

    def solve(self, rhs):
        """One solution of self @ x = rhs, or None."""
        f = self.field
        aug = Mat(f, [list(r) + [b] for r, b in zip(self.rows, rhs)])
        reduced, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [f.zero] * self.ncols
        for r, c in enumerate(pivots):
            x[c] = reduced[r][self.ncols]
        return x


def _rref_prime_np(rows, p):
    a = np.array(rows, dtype=np.int64) % p
    nr, nc = a.shape
    pivots = []
    r = 0
    for c in range(nc):
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        sel = np.nonzero(a[:, c])[0]
        sel = sel[sel != r]
        if sel.size:
            a[sel] = (a[sel] - np.outer(a[sel, c], a[r])) % p
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return a[:r].tolist(), pivots


class Subspace:
    """Subspace of field^ambient in canonical form: RREF basis rows.

    Equality of subspaces is literal equality of the canonical bases.
    """

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient, basis, pivots):
        self.field = field
        self.ambient = ambient
        self.basis = tuple(tuple(v) for v in basis)
        self.pivots = tuple(pivots)

    @classmethod
    def from_vectors(cls, field, ambient, vectors):
        vectors = [list(v) for v in vectors]
        if not vectors:
            return cls(field, ambient, [], [])
        reduced, pivots = Mat(field, vectors).rref()
        return cls(field, ambient, reduced, pivots)

    @classmethod
    def full(cls, field, ambient):
        return cls.from_vectors(field, ambient, Mat.identity(field, ambient).rows)

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, vec):
        f = self.field
        v = list(vec)
        for row, c in zip(self.basis, self.pivots):
            if not f.is_zero(v[c]):
                m = v[c]
                v = [f.sub(x, f.mul(m, y)) for x, y in zip(v, row)]
        return all(f.is_zero(x) for x in v)

    def contains_subspace(self, other):
        return all(self.contains(v) for v in other.basis)

    def sum(self, other):
        return Subspace.from_vectors(self.field, self.ambient,
                                     list(self.basis) + list(other.basis))

    def intersect(self, other):
        """Intersection via the kernel of the stacked coordinate map."""
        f = self.field
        if not self.basis or not other.basis:
            return Subspace.from_vectors(f, self.ambient, [])
        cols = [list(u) for u in self.basis] + [[f.neg(x) for x in v] for v in other.basis]
        ker = Mat(f, list(map(list, zip(*cols)))).kernel()
        vecs = []
        for coeffs in ker.basis:
            v = [f.zero] * self.ambient
            for a, u in zip(coeffs[: self.dim], self.basis):
                if not f.is_zero(a):
                    v = [f.add(x, f.mul(a, y)) for x, y in zip(v, u)]
            vecs.append(v)
        return Subspace.from_vectors(f, self.ambient, vecs)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient == other.ambient and self.basis == other.basis)

    def __hash__(self):
        return hash((self.field, self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient})"


def rref_rank_kernel_image(m: Mat):
    """(rank, kernel, image) of a matrix in one call."""
    return m.rank(), m.kernel(), m.image()


def pairing_gram(a: Subspace, b: Subspace) -> Mat:
    """Gram matrix (f_i(w_j)) of a basis of functionals against a basis.

    Rows of `a` are dual coordinates; rows of `b` are vectors.  Both
    subspaces must share ambient dimension and subspace dimension.
    """
    if a.ambient != b.ambient:
        raise DimensionError("ambient dimensions differ")
    if a.dim != b.dim:
        raise DimensionError("subspace dimensions differ")
    f = a.field
    rows = []
    for u in a.basis:
        row = []
        for v in b.basis:
            acc = f.zero
            for x, y in zip(u, v):
                acc = f.add(acc, f.mul(x, y))
            row.append(acc)
        rows.append(row)
    return Mat(f, rows)


# -- polynomial matrices -------------------------------------------------------


class PolyMat:
    """Matrix of MPoly entries in r chart variables over F_p."""

    __slots__ = ("p", "nvars", "nrows", "ncols", "rows")

    def __init__(self, p, nvars, rows):
        self.p = p
        self.nvars = nvars
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0

    @classmethod
    def zeros(cls, p, nvars, nrows, ncols):
        z = MPoly.zero(p, nvars)
        return cls(p, nvars, [[z] * ncols for _ in range(nrows)])

    def entry(self, i, j):
        return self.rows[i][j]

    def is_zero(self):
        return all(e.is_zero for r in self.rows for e in r)

    def matmul(self, other):
        if self.ncols != other.nrows:
            raise DimensionError("inner dimensions differ")
        z = MPoly.zero(self.p, self.nvars)
        bt = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in bt:
                acc = z
                for x, y in zip(r, c):
                    if not x.is_zero and not y.is_zero:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return PolyMat(self.p, self.nvars, out)

    def submatrix(self, rows, cols):
        return PolyMat(self.p, self.nvars,
                       [[self.rows[i][j] for j in cols] for i in rows])

    def specialize(self, point, field=None) -> Mat:
        """Entrywise evaluation at a point of F_p^r or an extension."""
        if len(point) != self.nvars:
            raise DimensionError("point length differs from variable count")
        if field is None:
            field = PrimeField(self.p)
        return Mat(field, [[e.eval(point, field) for e in r] for r in self.rows])

    def transpose(self):
        return PolyMat(self.p, self.nvars, list(map(list, zip(*self.rows)))) \
            if self.rows else PolyMat(self.p, self.nvars, [])

    def map(self, fn):
        return PolyMat(self.p, self.nvars, [[fn(e) for e in r] for r in self.rows])

    def all_homogeneous(self):
        return all(e.is_zero or e.homogeneous_degree() != "inhomogeneous"
                   for r in self.rows for e in r)

    def __repr__(self):
        return f"PolyMat({self.nrows}x{self.ncols}, {self.nvars} vars mod {self.p})"


def theta(frame) -> PolyMat:
    """Generic operator sum_i t_i X_i of a frame."""
    p, r, n = frame.p, frame.r, frame.n
    rows = [[MPoly.zero(p, r) for _ in range(n)] for _ in range(n)]
    for i, X in enumerate(frame.generators):
        for a in range(n):
            for b in range(n):
                c = X.rows[a][b]
                if c:
                    exp = tuple(1 if k == i else 0 for k in range(r))
                    rows[a][b] = rows[a][b] + MPoly.term(c, exp, p)
    return PolyMat(p, r, rows)


def theta_power(frame, j: int) -> PolyMat:
    """j-th power of the generic operator, 1 <= j <= p-1."""
    if not 1 <= j <= frame.p - 1:
        raise ValueError(f"power {j} outside 1..{frame.p - 1}")
    return frame.theta_power(j)


# -- fraction-free elimination --------------------------------------------------


def _pivot_weight(e: MPoly):
    return (len(e.terms), e.total_degree() or 0)


def bareiss_det(grid: list[list[MPoly]], p: int, nvars: int) -> MPoly:
    """Exact determinant of a square MPoly matrix by Bareiss elimination."""
    n = len(grid)
    if n == 0:
        return MPoly.constant(1, p, nvars)
    M = [list(r) for r in grid]
    sign = 1
    prev = MPoly.constant(1, p, nvars)
    for k in range(n - 1):
        piv = None
        best = None
        for i in range(k, n):
            for j in range(k, n):
                e = M[i][j]
                if not e.is_zero:
                    w = _pivot_weight(e)
                    if best is None or w < best:
                        best, piv = w, (i, j)
        if piv is None:
            return MPoly.zero(p, nvars)
        pi, pj = piv
        if pi != k:
            M[k], M[pi] = M[pi], M[k]
            sign = -sign
        if pj != k:
            for row in M:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * M[i][j] - M[i][k] * M[k][j]
                M[i][j] = num.divexact(prev)
            M[i][k] = MPoly.zero(p, nvars)
        prev = pivot
    out = M[n - 1][n - 1]
    return out if sign == 1 else -out


def minor(m, rowset, colset):
    """Determinant of the selected square submatrix (0-based index sets)."""
    rows = sorted(rowset)
    cols = sorted(colset)
    if len(rows) != len(cols):
        raise DimensionError("row and column sets differ in size")
    if isinstance(m, Mat):
        if rows and (rows[-1] >= m.nrows or cols[-1] >= m.ncols):
            raise IndexError("minor index out of range")
        return Mat(m.field, [[m.rows[i][j] for j in cols] for i in rows]).det()
    if rows and (rows[-1] >= m.nrows or cols[-1] >= m.ncols):
        raise IndexError("minor index out of range")
    return bareiss_det([[m.rows[i][j] for j in cols] for i in rows], m.p, m.nvars)


def pluecker_vector(m: PolyMat, d: int, chart) -> list[MPoly]:
    """All d x d minors with columns `chart`, rows in lexicographic order.

    Row sets are enumerated as sorted tuples in lexicographic order, the
    fixed convention for every Pluecker-style tuple in this package.
    """
    cols = sorted(chart)
    if d != len(cols):
        raise DimensionError("chart size must equal d")
    if d > m.ncols:
        raise DimensionError("d exceeds column count")
    return [minor(m, I, cols) for I in itertools.combinations(range(m.nrows), d)]


def split_components(pm: PolyMat):
    """Split the nonzero pattern into independent bipartite components.

    Returns a list of (rows, cols) pairs, sorted, covering every nonzero
    entry.  Rows and columns in different components never meet, so ranks
    add and maximal minors factor along the components.
    """
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for i in range(pm.nrows):
        parent[("r", i)] = ("r", i)
    for j in range(pm.ncols):
        parent[("c", j)] = ("c", j)
    for i, row in enumerate(pm.rows):
        for j, e in enumerate(row):
            if not e.is_zero:
                union(("r", i), ("c", j))
    groups = {}
    for i, row in enumerate(pm.rows):
        for j, e in enumerate(row):
            if not e.is_zero:
                g = groups.setdefault(find(("r", i)), (set(), set()))
                g[0].add(i)
                g[1].add(j)
    out = [(sorted(r), sorted(c)) for r, c in groups.values()]
    out.sort()
    return out


def _dehomog_entry(e: MPoly) -> MPoly:
    """Drop the first variable of a homogeneous entry (set it to 1)."""
    return MPoly(e.p, e.nvars - 1, {exp[1:]: c for exp, c in e.terms.items()})


def single_term_multigrading(pm: PolyMat):
    """Degree vectors (rows, cols) with entry exponents d(row) - d(col).

    Succeeds only when every nonzero entry is a single term and the
    exponents are consistent with such a bigrading (true for monomial-basis
    frames, where it makes every minor a single monomial).  Returns None
    otherwise.
    """
    zero = (0,) * pm.nvars
    exps = {}
    for i, row in enumerate(pm.rows):
        for j, e in enumerate(row):
            if e.is_zero:
                continue
            if len(e.terms) != 1:
                return None
            exps[(i, j)] = next(iter(e.terms))
    drow: dict = {}
    dcol: dict = {}
    adj: dict = {}
    for (i, j), a in exps.items():
        adj.setdefault(("r", i), []).append((("c", j), a))
        adj.setdefault(("c", j), []).append((("r", i), a))
    for start in list(adj):
        if start[1] in (drow if start[0] == "r" else dcol):
            continue
        stack = [start]
        (drow if start[0] == "r" else dcol)[start[1]] = zero
        while stack:
            node = stack.pop()
            dn = drow[node[1]] if node[0] == "r" else dcol[node[1]]
            for other, a in adj[node]:
                # exponent a = d(row) - d(col)
                if node[0] == "r":
                    want = tuple(x - y for x, y in zip(dn, a))
                else:
                    want = tuple(x + y for x, y in zip(dn, a))
                store = drow if other[0] == "r" else dcol
                if other[1] in store:
                    if store[other[1]] != want:
                        return None
                else:
                    store[other[1]] = want
                    stack.append(other)
    rows = [drow.get(i, zero) for i in range(pm.nrows)]
    cols = [dcol.get(j, zero) for j in range(pm.ncols)]
    coeffs = [[next(iter(e.terms.values())) if not e.is_zero else 0
               for e in row] for row in pm.rows]
    return rows, cols, coeffs


class _GreedyBasis:
    """Streaming independence oracle over F_p for matroid greedy."""

    def __init__(self, p):
        self.p = p
        self.pivots = []  # (col, reduced row)

    def try_add(self, vec) -> bool:
        p = self.p
        v = list(vec)
        for c, row in self.pivots:
            if v[c]:
                m = v[c]
                v = [(x - m * y) % p for x, y in zip(v, row)]
        for c, x in enumerate(v):
            if x:
                inv = pow(x, -1, p)
                self.pivots.append((c, [(inv * y) % p for y in v]))
                return True
        return False


def _peel_and_rank(pm: PolyMat) -> int:
    rows = [list(r) for r in pm.rows]
    live_r = set(range(pm.nrows))
    live_c = set(range(pm.ncols))
    rank = 0
    # peel rows/columns with a single nonzero entry
    changed = True
    while changed:
        changed = False
        for i in list(live_r):
            nz = [j for j in live_c if not rows[i][j].is_zero]
            if len(nz) == 1:
                live_r.discard(i)
                live_c.discard(nz[0])
                rank += 1
                changed = True
        for j in list(live_c):
            nz = [i for i in live_r if not rows[i][j].is_zero]
            if len(nz) == 1:
                live_c.discard(j)
                live_r.discard(nz[0])
                rank += 1
                changed = True
    sub = PolyMat(pm.p, pm.nvars,
                  [[rows[i][j] for j in sorted(live_c)] for i in sorted(live_r)])
    if sub.nrows and sub.ncols and not sub.is_zero():
        rank += _bareiss_rank(sub)
    return rank


def _bareiss_rank(pm: PolyMat) -> int:
    p, nvars = pm.p, pm.nvars
    M = [list(r) for r in pm.rows]
    nr, nc = pm.nrows, pm.ncols
    prev = MPoly.constant(1, p, nvars)
    rank = 0
    k = 0
    while k < min(nr, nc):
        piv = None
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                e = M[i][j]
                if not e.is_zero:
                    w = _pivot_weight(e)
                    if best is None or w < best:
                        best, piv = w, (i, j)
        if piv is None:
            break
        pi, pj = piv
        if pi != k:
            M[k], M[pi] = M[pi], M[k]
        if pj != k:
            for row in M:
                row[k], row[pj] = row[pj], row[k]
        pivot = M[k][k]
        for i in range(k + 1, nr):
            for j in range(k + 1, nc):
                num = pivot * M[i][j] - M[i][k] * M[k][j]
                M[i][j] = num.divexact(prev)
            M[i][k] = MPoly.zero(p, nvars)
        prev = pivot
        rank += 1
        k += 1
    return rank


def generic_rank_of(pm: PolyMat) -> int:
    """Rank over the rational function field F_p(t_1..t_r).

    Equals the maximal rank of any specialization over the algebraic
    closure.  Homogeneous matrices are dehomogenized first (a nonzero
    homogeneous minor stays nonzero), then the nonzero pattern is split
    into components and each piece is eliminated fraction-free.
    """
    if pm.is_zero():
        return 0
    if pm.nvars >= 2 and pm.all_homogeneous():
        pm = PolyMat(pm.p, pm.nvars - 1,
                     [[_dehomog_entry(e) for e in row] for row in pm.rows])
    total = 0
    for rows, cols in split_components(pm):
        total += _peel_and_rank(pm.submatrix(rows, cols))
    return total


def max_specialized_rank(pm: PolyMat, field, npoints: int, rng) -> int:
    """Max rank of specializations at sampled nonzero points."""
    best = 0
    for _ in range(npoints):
        while True:
            pt = [field.random(rng) for _ in range(pm.nvars)]
            if any(not field.is_zero(x) for x in pt):
                break
        best = max(best, pm.specialize(pt, field).rank())
    return best


# -- univariate matrix reductions (gcds of maximal minors) ----------------------


def _u_gcd_list(a, b, p):
    while b:
        _, r = _u_divmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _u_xgcd(a, b, p):
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _u_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _u_sub(s0, _u_mul(q, s1, p), p)
        t0, t1 = t1, _u_sub(t0, _u_mul(q, t1, p), p)
    return r0, s0, t0


def _u_sub(a, b, p):
    out = [( (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) ) % p
           for i in range(max(len(a), len(b)))]
    return _u_trim(out)


def hermite_minor_gcd(cols_matrix: list[list[list[int]]], p: int, rank: int) -> list[int]:
    """gcd of all maximal minors of an n x d univariate matrix of rank d.

    Unimodular row operations leave the gcd of the d x d minors invariant;
    the row-Hermite staircase has a single nonzero maximal minor, the
    product of its pivots.
    """
    M = [[list(e) for e in row] for row in cols_matrix]
    nr = len(M)
    nc = len(M[0]) if M else 0
    if rank != nc:
        raise DimensionError("matrix must have full column rank")
    r = 0
    diag = []
    for c in range(nc):
        nz = [i for i in range(r, nr) if M[i][c]]
        if not nz:
            raise DimensionError("column collapse: rank deficient")
        while len(nz) > 1:
            nz.sort(key=lambda i: len(M[i][c]))
            i, j = nz[0], nz[1]
            a, b = M[i][c], M[j][c]
            g, x, y = _u_xgcd(a, b, p)
            qa = _u_divmod(a, g, p)[0]
            qb = _u_divmod(b, g, p)[0]
            new_i = [_u_trim([(u + v) % p for u, v in itertools.zip_longest(
                _u_mul(x, M[i][k], p), _u_mul(y, M[j][k], p), fillvalue=0)])
                for k in range(nc)]
            new_j = [_u_sub(_u_mul(qb, M[i][k], p), _u_mul(qa, M[j][k], p), p)
                     for k in range(nc)]
            M[i], M[j] = new_i, new_j
            nz = [i for i in range(r, nr) if M[i][c]]
        i = nz[0]
        M[r], M[i] = M[i], M[r]
        diag.append(M[r][c])
        r += 1
    out = [1]
    for dd in diag:
        out = _u_mul(out, dd, p)
    if out:
        inv = pow(out[-1], -1, p)
        out = [(c * inv) % p for c in out]
    return out


def smith_diagonal(matrix: list[list[list[int]]], p: int) -> list[list[int]]:
    """Smith normal form diagonal over F_p[u], divisibility-ordered, monic."""
    M = [[list(e) for e in row] for row in matrix]
    nr = len(M)
    nc = len(M[0]) if M else 0
    diag = []
    top = 0
    while top < min(nr, nc):
        # move a nonzero entry of minimal degree to (top, top)
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                if M[i][j] and (best is None or len(M[i][j]) < len(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        M[top], M[bi] = M[bi], M[top]
        for row in M:
            row[top], row[bj] = row[bj], row[top]
        dirty = True
        while dirty:
            dirty = False
            for i in range(top + 1, nr):
                if M[i][top]:
                    a, b = M[top][top], M[i][top]
                    g, x, y = _u_xgcd(a, b, p)
                    qa, qb = _u_divmod(a, g, p)[0], _u_divmod(b, g, p)[0]
                    new_t = [_u_trim([(u + v) % p for u, v in itertools.zip_longest(
                        _u_mul(x, M[top][k], p), _u_mul(y, M[i][k], p), fillvalue=0)])
                        for k in range(nc)]
                    new_i = [_u_sub(_u_mul(qb, M[top][k], p), _u_mul(qa, M[i][k], p), p)
                             for k in range(nc)]
                    M[top], M[i] = new_t, new_i
                    dirty = True
            for j in range(top + 1, nc):
                if M[top][j]:
                    a, b = M[top][top], M[top][j]
                    g, x, y = _u_xgcd(a, b, p)
                    qa, qb = _u_divmod(a, g, p)[0], _u_divmod(b, g, p)[0]
                    for i in range(top, nr):
                        u = M[i][top]
                        v = M[i][j]
                        nu = _u_trim([(s + t) % p for s, t in itertools.zip_longest(
                            _u_mul(x, u, p), _u_mul(y, v, p), fillvalue=0)])
                        nv = _u_sub(_u_mul(qb, u, p), _u_mul(qa, v, p), p)
                        M[i][top], M[i][j] = nu, nv
                    dirty = True
        diag.append(M[top][top])
        top += 1
    # enforce the divisibility chain d1 | d2 | ...
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = _u_gcd_list(diag[i], diag[j], p)
            lcm = _u_divmod(_u_mul(diag[i], diag[j], p), g, p)[0]
            diag[i], diag[j] = g, lcm
    out = []
    for d in diag:
        if d:
            inv = pow(d[-1], -1, p)
            d = [(c * inv) % p for c in d]
        out.append(d)
    return out


def _u_valuation(f: list[int]) -> int:
    v = 0
    while v < len(f) and f[v] == 0:
        v += 1
    return v


def _entry_u(e: MPoly, var_kept: int) -> list[int]:
    """Dehomogenize a homogeneous binary-form entry, keeping one variable."""
    if e.is_zero:
        return []
    deg = max(exp[var_kept] for exp in e.terms)
    out = [0] * (deg + 1)
    for exp, c in e.terms.items():
        out[exp[var_kept]] = c
    return out


def chart_minor_gcd_degree_r2(pm: PolyMat, chart, d: int) -> int:
    """Total degree of gcd_I det(pm_(I, chart)) for homogeneous binary forms.

    The gcd of the chart minors is s^a * W with W coprime to s; W is seen by
    the dehomogenization at s = 1 (row-Hermite determinantal divisor) and a
    by the valuation of the determinantal divisor at t = 1.
    """
    cols = sorted(chart)
    sub_u = [[_entry_u(pm.rows[i][j], 1) for j in cols] for i in range(pm.nrows)]
    g1 = hermite_minor_gcd(sub_u, pm.p, d)
    sub_s = [[_entry_u(pm.rows[i][j], 0) for j in cols] for i in range(pm.nrows)]
    g2 = hermite_minor_gcd(sub_s, pm.p, d)
    return (len(g1) - 1) + _u_valuation(g2)


def full_minor_gcd_degree_r2(pm: PolyMat, d: int) -> int:
    """Total degree of the gcd of all d x d minors of a binary-form matrix.

    Computed as the d-th determinantal divisor via Smith reduction over
    F_p[u], once per dehomogenization to pick up pure powers of either
    variable.
    """
    sub_u = [[_entry_u(e, 1) for e in row] for row in pm.rows]
    diag1 = smith_diagonal(sub_u, pm.p)
    if len(diag1) < d:
        raise DimensionError("rank smaller than requested minor size")
    dd1 = [1]
    for f in diag1[:d]:
        dd1 = _u_mul(dd1, f, pm.p)
    sub_s = [[_entry_u(e, 0) for e in row] for row in pm.rows]
    diag2 = smith_diagonal(sub_s, pm.p)
    dd2 = [1]
    for f in diag2[:d]:
        dd2 = _u_mul(dd2, f, pm.p)
    return (len(dd1) - 1) + _u_valuation(dd2)
