"""Buchberger's algorithm over F_p and projective emptiness certificates.

The monomial order is graded reverse lexicographic throughout.  Pair
selection follows the normal (degree) strategy with the coprime
leading-term criterion; exceeding the configured S-pair budget raises
BudgetExceededError so that no constancy claim is ever made without a
finished certificate.

Emptiness of a projective zero locus is decided exactly: for binary forms
the locus is nonempty iff the gcd of the generators has positive degree;
for three or more variables the locus splits into the affine chart
(last variable = 1, empty iff the reduced Groebner basis is {1}) and the
hyperplane at infinity (last variable = 0, handled recursively).  Both
routes decide the same predicate as radical membership of every variable,
which is also available for cross-checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .fields import PrimeField, ExtField
from .mpoly import MPoly, grevlex_key, poly_gcd

DEFAULT_PAIR_BUDGET = 200_000


class BudgetExceededError(RuntimeError):
    """The S-pair budget was exhausted before the basis was finished."""


class Ideal:
    """A generating set of nonzero polynomials in a fixed ring."""

    __slots__ = ("generators", "order")

    def __init__(self, generators, order: str = "grevlex"):
        gens = [g for g in generators]
        if not gens:
            raise ValueError("ideal needs at least one generator")
        if any(g.is_zero for g in gens):
            raise ValueError("zero generator")
        p, nv = gens[0].p, gens[0].nvars
        if any(g.p != p or g.nvars != nv for g in gens):
            raise ValueError("generators from different rings")
        if order != "grevlex":
            raise ValueError("only grevlex is supported")
        self.generators = gens
        self.order = order

    @property
    def p(self):
        return self.generators[0].p

    @property
    def nvars(self):
        return self.generators[0].nvars

    def __repr__(self):
        return f"Ideal({len(self.generators)} gens, {self.nvars} vars mod {self.p})"


class GroebnerBasis:
    __slots__ = ("polys", "order")

    def __init__(self, polys, order: str = "grevlex"):
        self.polys = list(polys)
        self.order = order

    @property
    def is_unit_ideal(self):
        return any(g.terms.keys() == {(0,) * g.nvars} for g in self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __repr__(self):
        return f"GroebnerBasis({len(self.polys)} elements)"


def _divides(e1, e2):
    return all(a <= b for a, b in zip(e1, e2))


def _lcm(e1, e2):
    return tuple(max(a, b) for a, b in zip(e1, e2))


def normal_form(f: MPoly, basis, key=grevlex_key) -> MPoly:
    """Remainder of f under division by the basis; no term of the result
    is divisible by any basis leading term."""
    polys = list(basis)
    if not polys:
        return f
    p = f.p
    leads = [(g.leading(key), g) for g in polys]
    work = dict(f.terms)
    rem: dict = {}
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        hit = None
        for (ge, gc), g in leads:
            if _divides(ge, e):
                hit = (ge, gc, g)
                break
        if hit is None:
            rem[e] = c
            continue
        ge, gc, g = hit
        shift = tuple(a - b for a, b in zip(e, ge))
        factor = (c * pow(gc, -1, p)) % p
        for e2, c2 in g.terms.items():
            et = tuple(a + b for a, b in zip(shift, e2))
            if et == e:
                continue
            s = (work.get(et, rem.get(et, 0)) - factor * c2) % p
            # the term may already sit in rem if it is below every LT
            if et in rem:
                if s:
                    rem[et] = s
                else:
                    rem.pop(et)
            else:
                if s:
                    work[et] = s
                else:
                    work.pop(et, None)
    return MPoly(p, f.nvars, rem)


def _s_poly(f: MPoly, g: MPoly, key=grevlex_key) -> MPoly:
    p = f.p
    (fe, fc) = f.leading(key)
    (ge, gc) = g.leading(key)
    l = _lcm(fe, ge)
    mf = MPoly.term(pow(fc, -1, p), tuple(a - b for a, b in zip(l, fe)), p)
    mg = MPoly.term(pow(gc, -1, p), tuple(a - b for a, b in zip(l, ge)), p)
    return mf * f - mg * g


def _interreduce(polys, key=grevlex_key):
    polys = [g.monic(key) for g in polys if not g.is_zero]
    # minimalize: drop any element whose LT is divisible by another LT
    keep = []
    leads = [g.leading(key)[0] for g in polys]
    for i, g in enumerate(polys):
        if any(j != i and _divides(leads[j], leads[i]) and
               (leads[j] != leads[i] or j < i) for j in range(len(polys))):
            continue
        keep.append(g)
    # tail-reduce each against the others
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        h = normal_form(g, others, key)
        if not h.is_zero:
            out.append(h.monic(key))
    out.sort(key=lambda g: key(g.leading(key)[0]))
    return out


def buchberger(ideal: Ideal, budget: int = DEFAULT_PAIR_BUDGET) -> GroebnerBasis:
    """Reduced Groebner basis for grevlex; raises BudgetExceededError."""
    key = grevlex_key
    G = [g.monic(key) for g in ideal.generators]
    # dedupe
    seen = set()
    gens = []
    for g in G:
        sig = frozenset(g.terms.items())
        if sig not in seen:
            seen.add(sig)
            gens.append(g)
    G = gens
    leads = [g.leading(key)[0] for g in G]
    pairs = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))}
    processed = 0
    while pairs:
        # normal strategy: smallest lcm degree first, grevlex as tiebreak
        best = min(pairs, key=lambda ij: grevlex_key(_lcm(leads[ij[0]], leads[ij[1]])))
        pairs.remove(best)
        processed += 1
        if processed > budget:
            raise BudgetExceededError(
                f"S-pair budget {budget} exhausted with {len(pairs)} pairs left")
        i, j = best
        li, lj = leads[i], leads[j]
        if _lcm(li, lj) == tuple(a + b for a, b in zip(li, lj)):
            continue  # coprime leading terms reduce to zero
        s = _s_poly(G[i], G[j], key)
        h = normal_form(s, G, key)
        if h.is_zero:
            continue
        h = h.monic(key)
        G.append(h)
        leads.append(h.leading(key)[0])
        k = len(G) - 1
        pairs.update((m, k) for m in range(k))
    reduced = _interreduce(G, key)
    basis = GroebnerBasis(reduced)
    # sanity: every input generator must reduce to zero against the basis
    for g in ideal.generators:
        if not normal_form(g, reduced, key).is_zero:
            raise RuntimeError("generator fails to reduce to zero; basis is broken")
    return basis


def in_ideal(f: MPoly, basis: GroebnerBasis) -> bool:
    return normal_form(f, basis.polys).is_zero


def _lift_vars(f: MPoly) -> MPoly:
    return MPoly(f.p, f.nvars + 1, {e + (0,): c for e, c in f.terms.items()})


def radical_membership(f: MPoly, ideal: Ideal,
                       budget: int = DEFAULT_PAIR_BUDGET) -> bool:
    """True iff f vanishes on the zero locus of the ideal over the closure.

    Decided by the Rabinowitsch trick: f is in the radical iff
    1 lies in the ideal extended by 1 - z*f in one extra variable.
    """
    if f.is_zero:
        raise ValueError("radical membership of the zero polynomial")
    nv = ideal.nvars
    gens = [_lift_vars(g) for g in ideal.generators]
    zf = MPoly(f.p, nv + 1, {e + (1,): c for e, c in f.terms.items()})
    gens.append(MPoly.constant(1, f.p, nv + 1) - zf)
    basis = buchberger(Ideal(gens), budget)
    return basis.is_unit_ideal


# -- projective emptiness -----------------------------------------------------


@dataclass
class EmptinessCertificate:
    empty: bool
    route: str
    witness: tuple | None = None
    detail: str = ""

    def __bool__(self):
        return self.empty


def projective_points(fld, r: int):
    """Points of P^(r-1) over a finite field, one representative each.

    Representatives are normalized so the first nonzero coordinate is 1 and
    enumerated in lexicographic order of the coordinate tuples.
    """
    elems = list(fld.elements())
    for k in range(r - 1, -1, -1):
        for suffix in itertools.product(elems, repeat=r - 1 - k):
            yield (fld.zero,) * k + (fld.one,) + suffix


def find_projective_zero(gens, p: int, ext_bound: int = 3, cap: int = 300_000):
    """First projective point over F_p, F_p^2, .. where all gens vanish."""
    r = gens[0].nvars
    for e in range(1, ext_bound + 1):
        fld = PrimeField(p) if e == 1 else ExtField(p, e)
        count = 0
        for pt in projective_points(fld, r):
            count += 1
            if count > cap:
                break
            if all(fld.is_zero(g.eval(pt, fld)) for g in gens):
                return pt, fld
    return None, None


def _at_last_one(f: MPoly) -> MPoly:
    """Substitute 1 for the last variable (affine chart)."""
    terms: dict = {}
    for e, c in f.terms.items():
        e2 = e[:-1]
        s = (terms.get(e2, 0) + c) % f.p
        if s:
            terms[e2] = s
        else:
            terms.pop(e2, None)
    return MPoly(f.p, f.nvars - 1, terms)


def _at_last_zero(f: MPoly) -> MPoly:
    """Substitute 0 for the last variable (hyperplane at infinity)."""
    terms = {e[:-1]: c for e, c in f.terms.items() if e[-1] == 0}
    return MPoly(f.p, f.nvars - 1, terms)


def projective_zero_empty(ideal: Ideal, budget: int = DEFAULT_PAIR_BUDGET,
                          ext_bound: int = 3) -> EmptinessCertificate:
    """Decide whether the common projective zero locus over the algebraic
    closure is empty.  All generators must be homogeneous."""
    gens = ideal.generators
    for g in gens:
        if g.homogeneous_degree() == "inhomogeneous":
            raise ValueError("projective emptiness needs homogeneous generators")
    r = ideal.nvars
    if r == 1:
        # P^0 is a single point; a nonzero form c*t^d does not vanish there
        return EmptinessCertificate(True, "single-variable")
    if r == 2:
        g = poly_gcd(gens)
        deg = g.total_degree()
        if deg == 0:
            return EmptinessCertificate(True, "binary-gcd", detail="gcd is constant")
        pt, fld = find_projective_zero([g], ideal.p, ext_bound)
        return EmptinessCertificate(
            False, "binary-gcd", witness=pt,
            detail=f"gcd has degree {deg}")
    # r >= 3: affine chart plus hyperplane at infinity
    empty, route = _empty_stratified(gens, budget)
    if empty:
        return EmptinessCertificate(True, route)
    pt, fld = find_projective_zero(gens, ideal.p, ext_bound)
    return EmptinessCertificate(False, route, witness=pt)


def _empty_stratified(gens, budget) -> tuple[bool, str]:
    r = gens[0].nvars
    if r == 1:
        return bool([g for g in gens if not g.is_zero]), "single-variable"
    if r == 2:
        live = [g for g in gens if not g.is_zero]
        if not live:
            return False, "binary-gcd"
        return poly_gcd(live).total_degree() == 0, "binary-gcd"
    # the hyperplane at infinity is the cheap stratum; rule it out first
    boundary = [g for g in (_at_last_zero(g) for g in gens) if not g.is_zero]
    if not boundary:
        return False, "stratified-groebner"
    sub_empty, _ = _empty_stratified(boundary, budget)
    if not sub_empty:
        return False, "stratified-groebner"
    affine = [g for g in (_at_last_one(g) for g in gens) if not g.is_zero]
    if not affine:
        return False, "stratified-groebner"
    if r == 3 and _system_weight(affine) > 400:
        verdict = _affine_empty_by_resultants(affine)
        if verdict is True:
            return True, "stratified-resultant"
    basis = buchberger(Ideal(affine), budget)
    return basis.is_unit_ideal, "stratified-groebner"


def _system_weight(gens) -> int:
    return sum(len(g.terms) for g in gens)


def _resultant_b(f: MPoly, g: MPoly) -> MPoly:
    """Resultant of two bivariate polynomials eliminating the second
    variable, as a univariate polynomial in the first."""
    from .linalg import bareiss_det  # local import to avoid a cycle
    p = f.p

    def tower(h):
        deg = max(e[1] for e in h.terms)
        coeffs = [MPoly.zero(p, 1) for _ in range(deg + 1)]
        for e, c in h.terms.items():
            coeffs[e[1]] = coeffs[e[1]] + MPoly.term(c, (e[0],), p)
        return coeffs

    cf, cg = tower(f), tower(g)
    m, n = len(cf) - 1, len(cg) - 1
    if m == 0 or n == 0:
        raise ValueError("resultant needs positive degrees")
    size = m + n
    zero = MPoly.zero(p, 1)
    rows = []
    for i in range(n):
        rows.append([zero] * i + cf[::-1] + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + cg[::-1] + [zero] * (size - n - 1 - i))
    return bareiss_det(rows, p, 1)


def _affine_empty_by_resultants(gens) -> bool | None:
    """Sound emptiness certificate for a bivariate affine system over the
    closure: a common zero makes every pairwise resultant vanish, so the
    family of resultants having gcd 1 certifies emptiness.  Returns None
    when inconclusive."""

    def attempt(polys):
        univ = [g for g in polys if all(e[1] == 0 for e in g.terms)]
        biv = [g for g in polys if any(e[1] > 0 for e in g.terms)]
        family = [MPoly(g.p, 1, {(e[0],): c for e, c in g.terms.items()})
                  for g in univ]
        biv.sort(key=lambda g: len(g.terms))
        base = biv[0] if biv else None
        for other in biv[1:6]:
            try:
                res = _resultant_b(base, other)
            except ValueError:
                continue
            family.append(res)
        live = [h for h in family if not h.is_zero]
        if len(live) < 2:
            return None
        return poly_gcd(live).total_degree() == 0 or None

    direct = attempt(gens)
    if direct:
        return True
    swapped = [MPoly(g.p, 2, {(e[1], e[0]): c for e, c in g.terms.items()})
               for g in gens]
    return attempt(swapped)


def projective_zero_empty_radical(ideal: Ideal,
                                  budget: int = DEFAULT_PAIR_BUDGET) -> bool:
    """Projective Nullstellensatz route: empty iff every variable is in the
    radical.  Kept as an independent cross-check of the stratified route."""
    p, r = ideal.p, ideal.nvars
    return all(
        radical_membership(MPoly.variable(i, p, r), ideal, budget)
        for i in range(r))
