"""Rank, degree and Jordan-type invariants of a frame.

The generic j-rank is the rank of theta^j over the rational function field.
Constancy of the pointwise ranks is certified through the projective
emptiness of the rank-drop locus: for two generators through the gcd of the
maximal minors (a binary form has a projective zero over the closure iff it
has positive degree), otherwise through Groebner certificates on the minor
ideals of the independent components of theta^j.

The j-degree is j*rk^j minus the degree of the gcd of one chart's minor
tuple; a second chart is always compared and a mismatch is a hard error.
For large components the gcd is taken over minor subsets harvested from
fraction-free elimination passes and certified exact by the degree identity
of the complementary row-side tuple, which is valid precisely for certified
constant j-rank (the row and column tuples then factor the minors).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import PrimeField, ExtField
from .groebner import (BudgetExceededError, DEFAULT_PAIR_BUDGET, Ideal,
                       EmptinessCertificate, find_projective_zero,
                       projective_points, projective_zero_empty)
from .linalg import (Mat, PolyMat, Subspace, _GreedyBasis, bareiss_det,
                     chart_minor_gcd_degree_r2, full_minor_gcd_degree_r2,
                     generic_rank_of, minor, pluecker_vector,
                     single_term_multigrading, split_components)
from .modrep import (ModuleRep, PPoint, Submodule, dual_module,
                     pullback_ppoint, radical_series, submodule_module,
                     submodule_span)
from .mpoly import MPoly, poly_gcd
from .projmaps import DefiningSystem, proportional, reduce_defining_system

ENUM_MINOR_CAP = 4000     # enumerate all chart minors below this count
ISO_ENUM_CAP = 200_000    # exhaustive search bound for intertwiner spaces
MAX_GCD_PASSES = 6


class ConsistencyError(RuntimeError):
    """Two routes that must agree did not; indicates an implementation bug."""


class ParityError(RuntimeError):
    """A self-dual module violated the evenness constraints."""


class UnsupportedInputError(ValueError):
    pass


class DegeneracyError(ValueError):
    pass


# -- pointwise and generic ranks -------------------------------------------------


def rank_at_point(m: ModuleRep, j: int, point, field=None) -> int:
    """Rank of (sum_i point_i X_i)^j at a nonzero point."""
    if field is None:
        field = m.field
    if all(field.is_zero(field.element(x) if isinstance(x, int) else x)
           for x in point):
        raise DegeneracyError("rank at the zero point")
    if not 1 <= j <= m.p - 1:
        raise ValueError(f"j = {j} outside 1..{m.p - 1}")
    op = m.point_operator([field.element(x) if isinstance(x, int) else x
                           for x in point], field)
    return op.power(j).rank()


def generic_jrank(m: ModuleRep, j: int) -> int:
    """Rank of theta^j over F_p(t_1..t_r); the maximal pointwise rank."""
    if not 1 <= j <= m.p - 1:
        raise ValueError(f"j = {j} outside 1..{m.p - 1}")
    key = ("jrank", j)
    if key not in m._cache:
        m._cache[key] = generic_rank_of(m.theta_power(j))
    return m._cache[key]


# -- constancy certificates ------------------------------------------------------


@dataclass
class Constancy:
    status: str                    # "constant" | "nonconstant" | "undetermined"
    route: str = ""
    witness: tuple | None = None
    witness_field: object = None
    reason: str = ""

    @property
    def is_constant(self):
        return self.status == "constant"


def _scan_for_drop(m: ModuleRep, j: int, d: int, ext_bound: int, cap: int = 3000):
    """First point over F_p, F_p^2, .. where the rank drops below d."""
    for e in range(1, ext_bound + 1):
        fld = PrimeField(m.p) if e == 1 else ExtField(m.p, e)
        count = 0
        for pt in projective_points(fld, m.r):
            count += 1
            if count > cap:
                break
            if rank_at_point(m, j, pt, fld) < d:
                return pt, fld
    return None, None


def _elimination_minors(sub: PolyMat, d: int, rng=None) -> list[MPoly]:
    """Exact d x d minors sharing d-1 pivot rows, from one Bareiss pass.

    Optionally premixes the rows by a random invertible constant matrix;
    the ideal generated by all maximal minors, and their gcd, are invariant
    under that."""
    p, nv = sub.p, sub.nvars
    rows = [list(r) for r in sub.rows]
    if rng is not None:
        fld = PrimeField(p)
        n = len(rows)
        while True:
            R = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
            if Mat(fld, R).rank() == n:
                break
        mixed = []
        for i in range(n):
            acc = [MPoly.zero(p, nv)] * sub.ncols
            for k in range(n):
                c = R[i][k]
                if c:
                    acc = [a + b.scale(c) for a, b in zip(acc, rows[k])]
            mixed.append(acc)
        rows = mixed
    nr, nc = len(rows), sub.ncols
    prev = MPoly.constant(1, p, nv)
    for k in range(d - 1):
        piv = None
        best = None
        for i in range(k, nr):
            e = rows[i][k]
            if not e.is_zero:
                w = (len(e.terms), e.total_degree())
                if best is None or w < best:
                    best, piv = w, i
        if piv is None:
            return []  # rank-deficient pass; caller escalates
        rows[k], rows[piv] = rows[piv], rows[k]
        pivot = rows[k][k]
        for i in range(k + 1, nr):
            new_row = [MPoly.zero(p, nv)] * (k + 1)
            for jj in range(k + 1, nc):
                num = pivot * rows[i][jj] - rows[i][k] * rows[k][jj]
                new_row.append(num.divexact(prev))
            rows[i] = new_row
        prev = pivot
    return [rows[i][d - 1] for i in range(d - 1, nr) if not rows[i][d - 1].is_zero]


def _random_minors(sub: PolyMat, d: int, count: int, rng) -> list[MPoly]:
    """Random d x d minors of the raw matrix; raw index sets keep the
    entries sparse, so each determinant is cheap."""
    nr, nc = sub.nrows, sub.ncols
    out = []
    seen = set()
    for _ in range(count * 4):
        if len(out) >= count:
            break
        I = tuple(sorted(rng.sample(range(nr), d)))
        J = tuple(sorted(rng.sample(range(nc), d)))
        if (I, J) in seen:
            continue
        seen.add((I, J))
        g = minor(sub, I, J)
        if not g.is_zero:
            out.append(g)
    return out


def _component_minor_ideal(sub: PolyMat, d: int, seed: int, passes: int):
    """Generators for (a subset of) the d x d minor ideal of a component."""
    nr, nc = sub.nrows, sub.ncols
    count = _binom(nr, d) * _binom(nc, d)
    if count <= ENUM_MINOR_CAP:
        gens = []
        for I in itertools.combinations(range(nr), d):
            for J in itertools.combinations(range(nc), d):
                g = minor(sub, I, J)
                if not g.is_zero:
                    gens.append(g)
        return gens, True
    rng = random.Random((seed, nr, nc, d).__hash__())
    gens = _random_minors(sub, d, 12 + 12 * passes, rng)
    gens += _elimination_minors(sub, d)
    return [g for g in gens if not g.is_zero], False


def _minor_nonvanishing_at(sub: PolyMat, d: int, point, fld) -> MPoly | None:
    """A d x d minor of sub that does not vanish at the given point, found
    by pivoting in the specialized matrix.  None if the rank drops there."""
    A = sub.specialize(point, fld)
    _, piv_cols = A.rref()
    if len(piv_cols) < d:
        return None
    J = piv_cols[:d]
    cols = Mat(fld, [[A.rows[i][j] for j in J] for i in range(A.nrows)])
    _, piv_rows = cols.transpose().rref()
    I = piv_rows[:d]
    g = minor(sub, I, J)
    if fld.is_zero(g.eval(point, fld)):
        raise ConsistencyError("pivot minor vanishes at its own point")
    return g


def _binom(n, k):
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def constant_jrank_certify(m: ModuleRep, j: int,
                           budget: int = DEFAULT_PAIR_BUDGET,
                           ext_bound: int = 3) -> Constancy:
    """Decide whether the pointwise rank of theta^j is d at every nonzero
    point of the closure, d the generic rank."""
    key = ("constancy", j, budget, ext_bound)
    if key not in m._cache:
        m._cache[key] = _certify_uncached(m, j, budget, ext_bound)
    return m._cache[key]


def _certify_uncached(m: ModuleRep, j: int, budget: int,
                      ext_bound: int) -> Constancy:
    d = generic_jrank(m, j)
    if d == 0:
        return Constancy("constant", route="rank-zero")
    pt, fld = _scan_for_drop(m, j, d, ext_bound=1)
    if pt is not None:
        return Constancy("nonconstant", route="point-scan",
                         witness=pt, witness_field=fld)
    if m.r == 1:
        return Constancy("constant", route="single-point")
    pm = m.theta_power(j)
    if m.r == 2:
        gdeg = full_minor_gcd_degree_r2(pm, d)
        if gdeg == 0:
            return Constancy("constant", route="binary-gcd")
        pt, fld = _scan_for_drop(m, j, d, ext_bound)
        return Constancy("nonconstant", route="binary-gcd",
                         witness=pt, witness_field=fld,
                         reason=f"minor gcd has degree {gdeg}")
    # r >= 3: per-component minor ideals, refined until decisive
    comps = split_components(pm)
    routes = set()
    for rows, cols in comps:
        sub = pm.submatrix(rows, cols)
        dc = generic_rank_of(sub)
        if _binom(sub.nrows, dc) * _binom(sub.ncols, dc) > ENUM_MINOR_CAP:
            graded = single_term_multigrading(sub)
            if graded is not None:
                out = _multigraded_constancy(m, j, d, sub, dc, graded)
                if out is not None:
                    return out
                routes.add("multigraded")
                continue
        routes.add("groebner")
        gens, complete = _component_minor_ideal(sub, dc, seed=0, passes=0)
        extra = []
        verdict = None
        for attempt in range(2 * MAX_GCD_PASSES):
            if not gens + extra:
                break
            try:
                cert = projective_zero_empty(Ideal(gens + extra), budget,
                                             ext_bound)
            except BudgetExceededError as exc:
                return Constancy("undetermined", route="groebner",
                                 reason=str(exc))
            if cert.empty:
                verdict = "empty"
                break
            if cert.witness is not None:
                fld = _field_of(cert.witness, m.p)
                if rank_at_point(m, j, cert.witness, fld) < d:
                    return Constancy("nonconstant", route="groebner",
                                     witness=cert.witness, witness_field=fld)
                # spurious zero of the subset: cut it away with a minor
                # that provably survives at this very point
                refined = _minor_nonvanishing_at(sub, dc, cert.witness, fld)
                if refined is not None:
                    extra.append(refined)
                    continue
            if complete:
                # the component's true drop locus is certified nonempty,
                # but only witnessed beyond the searched field sizes
                pt, fld = _scan_for_drop(m, j, d, ext_bound)
                return Constancy("nonconstant", route="groebner",
                                 witness=pt, witness_field=fld,
                                 reason="component minor ideal has zeros")
            gens, complete = _component_minor_ideal(
                sub, dc, seed=attempt + 1, passes=attempt + 1)
        if verdict != "empty":
            return Constancy("undetermined", route="groebner",
                             reason="minor subsets kept spurious zeros")
    return Constancy("constant", route="+".join(sorted(routes)) or "groebner")


def _multigraded_constancy(m, j, d, sub, dc, graded):
    """Constancy of one single-term bigraded component.

    Scaling rows and columns by powers of the coordinates shows the rank at
    any point with nonzero support T equals the rank of the coefficient
    matrix restricted to entries whose exponent is supported in T; so the
    component has constant rank iff that rank is full for every nonempty T.
    Returns a nonconstant Constancy, or None when the component is fine.
    """
    drow, dcol, coeffs = graded
    fld = m.field
    r = m.r
    for bits in itertools.product((0, 1), repeat=r):
        if not any(bits):
            continue
        T = [k for k, b in enumerate(bits) if b]
        rows = []
        for i in range(sub.nrows):
            row = []
            for jj in range(sub.ncols):
                exp = tuple(a - b for a, b in zip(drow[i], dcol[jj]))
                keep = coeffs[i][jj] and all(
                    e == 0 for k, e in enumerate(exp) if k not in T)
                row.append(coeffs[i][jj] if keep else 0)
            rows.append(row)
        if Mat(fld, rows).rank() < dc:
            witness = tuple(1 if k in T else 0 for k in range(r))
            if rank_at_point(m, j, witness, fld) >= d:
                raise ConsistencyError("support-restricted rank disagrees "
                                       "with the pointwise rank")
            return Constancy("nonconstant", route="multigraded",
                             witness=witness, witness_field=fld)
    return None


def _field_of(point, p):
    if all(isinstance(x, int) for x in point):
        return PrimeField(p)
    return ExtField(p, len(next(x for x in point if not isinstance(x, int))))


def rank_profile(m: ModuleRep, certify: bool = True,
                 budget: int = DEFAULT_PAIR_BUDGET, ext_bound: int = 3):
    """(ranks, constancy) for j = 1..p-1; rk^0 = dim and rk^p = 0 implied."""
    ranks = {}
    constancy = {}
    for j in range(1, m.p):
        ranks[j] = generic_jrank(m, j) if (j == 1 or ranks[j - 1] > 0) else 0
        if certify:
            constancy[j] = constant_jrank_certify(m, j, budget, ext_bound)
    return ranks, constancy


# -- Jordan types ---------------------------------------------------------------


@dataclass(frozen=True)
class JordanType:
    mults: tuple  # multiplicities a_1 .. a_p of block sizes 1..p

    @classmethod
    def from_rank_sequence(cls, ranks):
        """ranks = [r_0, .., r_p] with r_0 = dim and r_p = 0."""
        p = len(ranks) - 1
        ranks = list(ranks) + [0]
        mults = tuple(ranks[i - 1] - 2 * ranks[i] + ranks[i + 1]
                      for i in range(1, p + 1))
        jt = cls(mults)
        if any(a < 0 for a in mults) or jt.dim != ranks[0]:
            raise ConsistencyError(f"rank sequence {ranks} is not monotone-convex")
        return jt

    @property
    def dim(self):
        return sum((i + 1) * a for i, a in enumerate(self.mults))

    def __str__(self):
        return ":".join(str(a) for a in self.mults)

    def pretty(self):
        bits = [f"{a}[{i + 1}]" for i, a in enumerate(self.mults) if a]
        return " + ".join(bits) if bits else "0"


def _rank_sequence(op: Mat, p: int):
    ranks = [op.nrows]
    power = None
    for k in range(1, p + 1):
        power = op if k == 1 else power.matmul(op)
        ranks.append(power.rank())
    if ranks[-1] != 0:
        raise ValueError("operator is not p-nilpotent")
    return ranks


def jordan_type_at(m: ModuleRep, at, field=None) -> JordanType:
    """Jordan type of the operator at a point or at a p-point."""
    if isinstance(at, PPoint):
        op = pullback_ppoint(m, at)
    else:
        if field is None:
            field = m.field
        pt = [field.element(x) if isinstance(x, int) else x for x in at]
        if all(field.is_zero(x) for x in pt):
            raise DegeneracyError("Jordan type at the zero point")
        op = m.point_operator(pt, field)
    return JordanType.from_rank_sequence(_rank_sequence(op, m.p))


def generic_jordan_type(m: ModuleRep) -> JordanType:
    ranks, _ = rank_profile(m, certify=False)
    seq = [m.n] + [ranks[j] for j in range(1, m.p)] + [0]
    return JordanType.from_rank_sequence(seq)


# -- degrees ---------------------------------------------------------------------


@dataclass
class DegreeResult:
    value: int | None
    route: str = ""
    generic_chart: bool = False
    reason: str = ""

    def __int__(self):
        if self.value is None:
            raise ValueError("degree is undetermined")
        return self.value


class DegreeUndetermined(RuntimeError):
    pass


def _greedy_chart(sub: PolyMat, d: int):
    """Lexicographically least column set of size d with full generic rank."""
    chosen = []
    for c in range(sub.ncols):
        trial = chosen + [c]
        if generic_rank_of(sub.submatrix(range(sub.nrows), trial)) == len(trial):
            chosen = trial
            if len(chosen) == d:
                return chosen
    raise ConsistencyError("no valid chart found at the generic rank")


def _enum_chart_gcd(sub: PolyMat, d: int, chart) -> MPoly:
    tup = pluecker_vector(sub, d, chart)
    live = [g for g in tup if not g.is_zero]
    return poly_gcd(live)


def _second_chart(sub: PolyMat, d: int, first, limit: int = 150):
    for J in itertools.islice(itertools.combinations(range(sub.ncols), d),
                              limit):
        J = list(J)
        if J == list(first):
            continue
        if generic_rank_of(sub.submatrix(range(sub.nrows), J)) == d:
            return J
    return None


def _multigraded_chart_gcd_degree(sub: PolyMat, d: int, chart, graded) -> int:
    """Chart-minor gcd degree when every minor is a single monomial.

    The minor over rows I is t^(D(I) - E(J)) times an F_p determinant, so
    the gcd exponent of each variable is the minimum of a linear weight
    over the bases of the chart's coefficient row-matroid; the greedy
    algorithm computes that minimum exactly.
    """
    drow, dcol, coeffs = graded
    p = sub.p
    ej = [sum(dcol[j][k] for j in chart) for k in range(sub.nvars)]
    total = 0
    for k in range(sub.nvars):
        order = sorted(range(sub.nrows), key=lambda i: (drow[i][k], i))
        greedy = _GreedyBasis(p)
        weight = 0
        got = 0
        for i in order:
            if greedy.try_add([coeffs[i][j] for j in chart]):
                weight += drow[i][k]
                got += 1
                if got == d:
                    break
        if got < d:
            raise ConsistencyError("chart lost rank in the coefficient matroid")
        e_k = weight - ej[k]
        if e_k < 0:
            raise ConsistencyError("negative gcd exponent in graded route")
        total += e_k
    return total


def _subset_gcd_degree(sub: PolyMat, d: int, j: int, seed: int) -> int:
    """Chart-minor gcd degree for a big component of certified constant rank.

    Harvests minors from elimination passes for the column-side tuple and
    the row-side tuple; since the minors of a constant-rank matrix factor
    into a row part and a column part with coprime tuples, the two subset
    gcds are exact as soon as their degrees add up to j*d.
    """
    chart_rows = _greedy_chart(sub.transpose(), d)
    base = minor(sub, chart_rows, range(d)) if sub.ncols == d else None
    if base is None or base.is_zero:
        base = None
    rng = random.Random(seed)
    col_minors = [] if base is None else [base]
    row_minors = [] if base is None else [base]
    subT = sub.transpose()
    for attempt in range(MAX_GCD_PASSES + 1):
        col_minors += _elimination_minors(sub, d, rng if attempt else None)
        row_minors += _elimination_minors(subT, d, rng if attempt else None)
        col_live = [g for g in col_minors if not g.is_zero]
        row_live = [g for g in row_minors if not g.is_zero]
        if not col_live or not row_live:
            continue
        hc = poly_gcd(col_live)
        hr = poly_gcd(row_live)
        dc = hc.total_degree()
        dr = hr.total_degree()
        if dc + dr == j * d:
            return dc
    raise DegreeUndetermined("minor-subset gcds did not certify")


SMALL_ENUM = 200


def _component_gcd_degree(sub: PolyMat, d: int, j: int,
                          constant_ok: bool, seed: int):
    """(gcd degree, route) of the chart tuple of one component."""
    chart = _greedy_chart(sub, d)
    chartmat = sub.submatrix(range(sub.nrows), chart)
    count = _binom(sub.nrows, d)
    graded = None if count <= SMALL_ENUM else single_term_multigrading(sub)
    if graded is not None:
        deg = _multigraded_chart_gcd_degree(sub, d, chart, graded)
        second = _second_chart(sub, d, chart)
        if second is not None:
            deg2 = _multigraded_chart_gcd_degree(sub, d, second, graded)
            if j * d - deg2 != j * d - deg:
                raise ConsistencyError("graded chart degrees disagree")
        return deg, "multigraded"
    if count <= ENUM_MINOR_CAP:
        h = _enum_chart_gcd(sub, d, chart)
        deg = h.total_degree()
        second = _second_chart(sub, d, chart)
        if second is not None:
            h2 = _enum_chart_gcd(sub, d, second)
            t1 = [g.divexact(h) if not g.is_zero else g
                  for g in pluecker_vector(sub, d, chart)]
            t2 = [g.divexact(h2) if not g.is_zero else g
                  for g in pluecker_vector(sub, d, second)]
            if not proportional(DefiningSystem(t1), DefiningSystem(t2)):
                raise ConsistencyError("chart tuples are not proportional")
        return deg, "enumerated"
    if sub.nvars == 2:
        deg = chart_minor_gcd_degree_r2(sub, chart, d)
        second = _second_chart(sub, d, chart)
        if second is not None:
            deg2 = chart_minor_gcd_degree_r2(sub, second, d)
            if deg2 != deg:
                raise ConsistencyError("chart gcd degrees differ across charts")
        return deg, "hermite"
    if not constant_ok:
        raise DegreeUndetermined(
            "large component without a constancy certificate")
    return _subset_gcd_degree(chartmat, d, j, seed), "minor-subsets"


def jdegree(m: ModuleRep, j: int, budget: int = DEFAULT_PAIR_BUDGET,
            ext_bound: int = 3, constancy: Constancy | None = None) -> DegreeResult:
    """Degree j*d minus the total gcd degree of a chart's minor tuple."""
    if not 1 <= j <= m.p - 1:
        raise ValueError(f"j = {j} outside 1..{m.p - 1}")
    key = ("jdegree", j, budget, ext_bound)
    if key not in m._cache:
        m._cache[key] = _jdegree_uncached(m, j, budget, ext_bound, constancy)
    return m._cache[key]


def _jdegree_uncached(m: ModuleRep, j: int, budget: int, ext_bound: int,
                      constancy: Constancy | None) -> DegreeResult:
    d = generic_jrank(m, j)
    if d == 0:
        return DegreeResult(0, route="rank-zero")
    if constancy is None:
        constancy = constant_jrank_certify(m, j, budget, ext_bound)
    pm = m.theta_power(j)
    total = 0
    routes = set()
    for idx, (rows, cols) in enumerate(split_components(pm)):
        sub = pm.submatrix(rows, cols)
        dc = generic_rank_of(sub)
        try:
            deg, route = _component_gcd_degree(
                sub, dc, j, constancy.is_constant, seed=idx)
        except DegreeUndetermined as exc:
            return DegreeResult(None, route="minor-subsets", reason=str(exc))
        total += deg
        routes.add(route)
    return DegreeResult(j * d - total, route="+".join(sorted(routes)),
                        generic_chart=not constancy.is_constant)


def image_system(m: ModuleRep, j: int):
    """(chart, reduced tuple, divisor) of the image morphism, small frames.

    The tuple is indexed by all row sets in lexicographic order, so its
    coordinates match the module basis wedge order.
    """
    d = generic_jrank(m, j)
    if d == 0:
        raise UnsupportedInputError("rank zero: the image morphism is a point")
    pm = m.theta_power(j)
    if _binom(m.n, d) > ENUM_MINOR_CAP:
        raise UnsupportedInputError("tuple too large to materialize")
    chart = _greedy_chart(pm, d)
    tup = pluecker_vector(pm, d, chart)
    system = DefiningSystem(tup)
    reduced, divisor = reduce_defining_system(system)
    return chart, reduced, divisor


# -- equal images / equal kernels ------------------------------------------------


def _column_coefficient_span(m: ModuleRep, j: int) -> Subspace:
    """F_p-span of all coefficient vectors of columns of theta^j.

    Every specialization's image lies in this span, and for constant j-rank
    it equals the common image iff its dimension is the generic rank.
    """
    pm = m.theta_power(j)
    f = m.field
    vecs = []
    for col in range(pm.ncols):
        exps = set()
        for row in range(pm.nrows):
            exps.update(pm.rows[row][col].terms)
        for e in sorted(exps):
            vecs.append([pm.rows[row][col].terms.get(e, 0)
                         for row in range(pm.nrows)])
    return Subspace.from_vectors(f, m.n, vecs)


def eip_test(m: ModuleRep, j: int | None = None,
             budget: int = DEFAULT_PAIR_BUDGET, ext_bound: int = 3):
    """Equal-images flags per level and overall (True/False/None)."""
    levels = {}
    for jj in range(1, m.p):
        cert = constant_jrank_certify(m, jj, budget, ext_bound)
        if cert.status == "undetermined":
            levels[jj] = None
            continue
        if cert.status == "nonconstant":
            levels[jj] = False
            continue
        d = generic_jrank(m, jj)
        levels[jj] = _column_coefficient_span(m, jj).dim == d
    overall = (None if any(v is None for v in levels.values())
               else all(levels.values()))
    _eip_cross_check(m, levels, overall)
    if j is not None:
        return levels[j]
    return levels, overall


def _eip_cross_check(m: ModuleRep, levels, overall):
    """Images at sampled independent points must match the flags."""
    if m.r < 2 or overall is None:
        return
    fld = m.field
    pts = list(itertools.islice(projective_points(fld, m.r), 8))
    images = [m.point_operator(pt, fld).power(1).image() for pt in pts]
    all_equal = all(im == images[0] for im in images)
    if levels.get(1) is True and not all_equal:
        raise ConsistencyError("equal-images flag set but images differ")
    if overall is True and not all_equal:
        raise ConsistencyError("equal-images flag set but images differ")


def ekp_test(m: ModuleRep, j: int | None = None,
             budget: int = DEFAULT_PAIR_BUDGET, ext_bound: int = 3):
    """Equal-kernels flags: the dual frame's equal-images flags.

    Cross-checked against the degree characterization deg^j = j*rk^j on
    certified constant-rank levels.
    """
    dual = dual_module(m)
    levels, overall = eip_test(dual, None, budget, ext_bound)
    for jj, flag in levels.items():
        if flag is None:
            continue
        cert = constant_jrank_certify(m, jj, budget, ext_bound)
        if not cert.is_constant:
            continue
        deg = jdegree(m, jj, budget, ext_bound, constancy=cert)
        if deg.value is None:
            continue
        expected = deg.value == jj * generic_jrank(m, jj)
        if expected != flag:
            raise ConsistencyError(
                f"equal-kernels flag at level {jj} disagrees with the "
                f"degree characterization")
    if j is not None:
        return levels[j]
    return levels, overall


# -- generic kernel ---------------------------------------------------------------


def _kernel_vectors(m: ModuleRep, fld) -> list[list[int]]:
    """F_p-components of kernels of point operators over fld."""
    out = []
    for pt in projective_points(fld, m.r):
        ker = m.point_operator(pt, fld).kernel()
        for v in ker.basis:
            if isinstance(fld, PrimeField):
                out.append(list(v))
            else:
                for comp in range(fld.e):
                    vec = [x[comp] for x in v]
                    if any(vec):
                        out.append(vec)
    return out


def _is_eip_module(sub: ModuleRep, budget, ext_bound) -> bool | None:
    _, overall = eip_test(sub, None, budget, ext_bound)
    return overall


def generic_kernel(m: ModuleRep, budget: int = DEFAULT_PAIR_BUDGET,
                   ext_bound: int = 3):
    """Greedy largest equal-images submodule, seeded by pointwise kernels.

    Returns (Submodule, tag) where tag is "verified" when the codimension
    matches the first degree, else "unverified-greedy".
    """
    if m.r != 2 or not m.commuting:
        raise UnsupportedInputError("generic kernel needs a commuting "
                                    "two-generator frame")
    if m.n > 12:
        raise UnsupportedInputError("generic kernel capped at dimension 12")
    cert = constant_jrank_certify(m, 1, budget, ext_bound)
    if not cert.is_constant:
        raise UnsupportedInputError("generic kernel needs constant rank")
    f = m.field
    vecs = []
    prev_dim = -1
    space = Subspace.from_vectors(f, m.n, [])
    for e in range(1, ext_bound + 1):
        fld = PrimeField(m.p) if e == 1 else ExtField(m.p, e)
        vecs.extend(_kernel_vectors(m, fld))
        space = Subspace.from_vectors(f, m.n, vecs)
        if space.dim == prev_dim:
            break
        prev_dim = space.dim
    K = submodule_span(m, space.basis)
    if not _submodule_is_eip(m, K, budget, ext_bound):
        K = submodule_span(m, [])
    improved = True
    while improved:
        improved = False
        for v in _coset_candidates(m, K):
            K2 = submodule_span(m, list(K.space.basis) + [v])
            if K2.dim == K.dim:
                continue
            if _submodule_is_eip(m, K2, budget, ext_bound):
                K = K2
                improved = True
                break
    tag = "unverified-greedy"
    deg = jdegree(m, 1, budget, ext_bound, constancy=cert)
    if deg.value is not None and m.n - K.dim == deg.value:
        tag = "verified"
    return K, tag


def _submodule_is_eip(m: ModuleRep, K: Submodule, budget, ext_bound) -> bool:
    if K.dim == 0:
        return True
    sub = submodule_module(m, K)
    flag = _is_eip_module(sub, budget, ext_bound)
    return flag is True


def _coset_candidates(m: ModuleRep, K: Submodule):
    """Nonzero coset representatives of M/K in a deterministic order."""
    f = m.field
    pivots = set(K.space.pivots)
    free = [c for c in range(m.n) if c not in pivots]
    for coeffs in itertools.product(range(m.p), repeat=len(free)):
        if not any(coeffs):
            continue
        v = [0] * m.n
        for c, x in zip(free, coeffs):
            v[c] = x
        yield v


# -- hom spaces, isomorphism, self-duality ----------------------------------------


def hom_space(a: ModuleRep, b: ModuleRep) -> list[Mat]:
    """Basis of the intertwiners P with P X_i^(a) = X_i^(b) P."""
    if a.p != b.p or a.r != b.r:
        raise ValueError("frames must share p and r")
    if a.n * b.n > 4096:
        raise UnsupportedInputError("intertwiner system too large")
    p = a.p
    blocks = []
    I_a = np.eye(a.n, dtype=np.int64)
    I_b = np.eye(b.n, dtype=np.int64)
    for Xa, Xb in zip(a.generators, b.generators):
        A = np.array(Xa.rows, dtype=np.int64)
        B = np.array(Xb.rows, dtype=np.int64)
        blocks.append((np.kron(I_a, B) - np.kron(A.T, I_b)) % p)
    system = Mat(PrimeField(p), np.vstack(blocks).tolist())
    basis = []
    for v in system.kernel().basis:
        rows = [list(v[c * b.n:(c + 1) * b.n]) for c in range(a.n)]
        # columns of P were stacked; transpose back
        P = Mat(PrimeField(p), [list(col) for col in zip(*rows)])
        basis.append(P)
    return basis


def modules_isomorphic(a: ModuleRep, b: ModuleRep, rng=None,
                       enum_cap: int = ISO_ENUM_CAP) -> str:
    """"yes" / "no" / "undetermined"; exact when the hom space is small.

    An invertible intertwiner over an extension descends to one over F_p
    for modules over a finite-dimensional algebra, so a random search over
    extensions can only strengthen the exhaustive base-field answer.
    """
    if a.p != b.p or a.r != b.r or a.n != b.n:
        return "no"
    H = hom_space(a, b)
    if not H:
        return "no"
    p = a.p
    fld = PrimeField(p)
    if rng is None:
        rng = random.Random(20_240_000 + a.n)
    for _ in range(200):
        coeffs = [rng.randrange(p) for _ in H]
        P = Mat.zeros(fld, a.n, a.n)
        for c, h in zip(coeffs, H):
            if c:
                P = P.add(h.smul(c))
        if P.rank() == a.n:
            return "yes"
    for e in (2, 3):
        ext = ExtField(p, e)
        lifted = [Mat(ext, [[ext.embed(x) for x in row] for row in h.rows])
                  for h in H]
        for _ in range(100):
            P = Mat.zeros(ext, a.n, a.n)
            for h in lifted:
                c = ext.random(rng)
                if not ext.is_zero(c):
                    P = P.add(h.smul(c))
            if P.rank() == a.n:
                return "yes"
    if p ** len(H) <= enum_cap:
        for coeffs in itertools.product(range(p), repeat=len(H)):
            if not any(coeffs):
                continue
            P = Mat.zeros(fld, a.n, a.n)
            for c, h in zip(coeffs, H):
                if c:
                    P = P.add(h.smul(c))
            if P.rank() == a.n:
                return "yes"
        return "no"
    return "undetermined"


def _verify_invariant_form(m: ModuleRep, G: Mat) -> bool:
    """Check that G is invertible with X_i^T G = -G X_i for every i."""
    if G.rank() != m.n:
        return False
    for X in m.generators:
        left = X.transpose().matmul(G)
        right = G.matmul(X).smul(m.p - 1)
        if left != right:
            return False
    return True


def self_dual_test(m: ModuleRep, degrees=None) -> str:
    """"yes" / "no" / "undetermined" for M isomorphic to its dual.

    Degrees are isomorphism invariants, so a determined mismatch between a
    level's degree and the dual's degree decides "no" without a search.
    """
    form = m.known.get("invariant_form")
    if form is not None and _verify_invariant_form(m, form):
        return "yes"
    if degrees is not None:
        for j, deg in degrees.items():
            if deg.value is None:
                continue
            dual_deg = jdegree(dual_module(m), j)
            if dual_deg.value is not None and dual_deg.value != deg.value:
                return "no"
    if m.n > 32:
        return "undetermined"
    return modules_isomorphic(m, dual_module(m))


# -- aggregate report --------------------------------------------------------------


@dataclass
class InvariantReport:
    name: str
    p: int
    r: int
    dim: int
    ranks: dict
    constancy: dict
    degrees: dict
    jordan: JordanType
    constant_jordan_type: bool | None
    eip: dict
    eip_overall: bool | None
    ekp: dict
    ekp_overall: bool | None
    self_dual: str
    kernel_dim: int | None = None
    kernel_tag: str = ""
    notes: list = dc_field(default_factory=list)

    def has_undetermined(self) -> bool:
        if any(c.status == "undetermined" for c in self.constancy.values()):
            return True
        if any(d.value is None for d in self.degrees.values()):
            return True
        if self.eip_overall is None or self.ekp_overall is None:
            return True
        if self.constant_jordan_type is None:
            return True
        return self.self_dual == "undetermined"


def _parity_check(report: InvariantReport):
    """Evenness constraints for self-dual modules; violations are fatal."""
    if report.self_dual != "yes" or report.r < 2:
        return
    for j, rk in report.ranks.items():
        if j % 2 == 1 and report.constancy[j].is_constant and rk % 2 != 0:
            raise ParityError(
                f"self-dual module has odd constant rank {rk} at level {j}")
    if report.constant_jordan_type:
        for i, a in enumerate(report.jordan.mults, start=1):
            if i % 2 == 0 and a % 2 != 0:
                raise ParityError(
                    f"self-dual constant Jordan type has odd multiplicity "
                    f"{a} of blocks of even size {i}")


def invariant_report(m: ModuleRep, name: str | None = None,
                     budget: int = DEFAULT_PAIR_BUDGET,
                     ext_bound: int = 3) -> InvariantReport:
    """Compute every determinable invariant; undetermined fields are marked,
    never guessed."""
    ranks, constancy = rank_profile(m, True, budget, ext_bound)
    degrees = {j: jdegree(m, j, budget, ext_bound, constancy=constancy[j])
               for j in range(1, m.p)}
    jordan = generic_jordan_type(m)
    statuses = [constancy[j].status for j in range(1, m.p)]
    if "undetermined" in statuses:
        constant_jt = None
    else:
        constant_jt = all(s == "constant" for s in statuses)
    eip, eip_overall = eip_test(m, None, budget, ext_bound)
    ekp, ekp_overall = ekp_test(m, None, budget, ext_bound)
    self_dual = self_dual_test(m, degrees=degrees)
    kernel_dim = None
    kernel_tag = ""
    if (m.r == 2 and m.commuting and m.n <= 12
            and constancy[1].is_constant):
        K, kernel_tag = generic_kernel(m, budget, ext_bound)
        kernel_dim = K.dim
    report = InvariantReport(
        name=name or m.name, p=m.p, r=m.r, dim=m.n,
        ranks=ranks, constancy=constancy, degrees=degrees,
        jordan=jordan, constant_jordan_type=constant_jt,
        eip=eip, eip_overall=eip_overall,
        ekp=ekp, ekp_overall=ekp_overall,
        self_dual=self_dual,
        kernel_dim=kernel_dim, kernel_tag=kernel_tag)
    _parity_check(report)
    return report
