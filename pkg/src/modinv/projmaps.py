"""Homogeneous defining systems of morphisms to projective space.

A morphism is represented only through a defining system: a tuple of
homogeneous polynomials of one common degree, not all zero.  Reduction
divides out the gcd of the entries; the degree of the morphism is the
degree of the reduced system, and composition substitutes one system into
another.  Tuples are normalized so that the first nonzero entry is monic,
which makes reduced systems unique on the nose rather than up to a scalar.
"""

from __future__ import annotations

from .fields import PrimeField
from .linalg import DimensionError, Mat
from .mpoly import MPoly, poly_gcd


class UndefinedSystemError(ValueError):
    """A defining system with every entry zero."""


class DegeneracyError(ValueError):
    """Projectively dependent points where independent ones are required."""


class DefiningSystem:
    """Tuple (f_0, .., f_m) of homogeneous polynomials of one degree."""

    __slots__ = ("polys", "p", "nvars", "degree", "reduced")

    def __init__(self, polys, reduced: bool = False):
        polys = tuple(polys)
        if not polys:
            raise UndefinedSystemError("empty tuple")
        p, nv = polys[0].p, polys[0].nvars
        degs = set()
        for f in polys:
            if f.p != p or f.nvars != nv:
                raise DimensionError("entries from different rings")
            d = f.homogeneous_degree()
            if d == "inhomogeneous":
                raise ValueError("entries must be homogeneous")
            if d != "zero":
                degs.add(d)
        if not degs:
            raise UndefinedSystemError("all entries are zero")
        if len(degs) > 1:
            raise ValueError(f"mixed degrees {sorted(degs)}")
        self.polys = polys
        self.p = p
        self.nvars = nv
        self.degree = degs.pop()
        self.reduced = reduced

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __eq__(self, other):
        return isinstance(other, DefiningSystem) and self.polys == other.polys

    def __repr__(self):
        return (f"DefiningSystem({len(self.polys)} entries, degree "
                f"{self.degree}, {self.nvars} vars mod {self.p})")

    def normalized(self) -> "DefiningSystem":
        """Scale the tuple so its first nonzero entry is monic."""
        for f in self.polys:
            if not f.is_zero:
                _, c = f.leading()
                inv = pow(c, -1, self.p)
                if inv == 1:
                    return self
                return DefiningSystem([g.scale(inv) for g in self.polys],
                                      reduced=self.reduced)
        raise UndefinedSystemError("all entries are zero")

    def evaluate(self, point, field=None):
        return tuple(f.eval(point, field) for f in self.polys)

    def projective_value(self, point, field=None):
        """Value as a normalized projective tuple; None on the base locus."""
        if field is None:
            field = PrimeField(self.p)
        vals = list(self.evaluate(point, field))
        lead = next((v for v in vals if not field.is_zero(v)), None)
        if lead is None:
            return None
        inv = field.inv(lead)
        return tuple(field.mul(inv, v) for v in vals)


def reduce_defining_system(system: DefiningSystem):
    """Divide out the gcd h of the entries; returns (reduced system, h).

    The reduced tuple is normalized (first nonzero entry monic) and h is
    scaled so that entrywise system = h * reduced still holds exactly.
    """
    nonzero = [f for f in system.polys if not f.is_zero]
    h = poly_gcd(nonzero)
    if h.total_degree() == 0:
        out = system.normalized()
        out.reduced = True
        # keep system == h * out exact under the normalization
        lead = next(f for f in system.polys if not f.is_zero)
        return out, MPoly.constant(lead.leading()[1], system.p, system.nvars)
    quots = [f.divexact(h) if not f.is_zero else f for f in system.polys]
    out = DefiningSystem(quots, reduced=True).normalized()
    out.reduced = True
    lead_q = next(f for f in out.polys if not f.is_zero)
    lead_orig = next(f for f in system.polys if not f.is_zero)
    # system_i = h' * out_i with h' = h * (leading coefficient ratio)
    scale = (lead_orig.leading()[1] * pow(lead_q.leading()[1] *
             h.leading()[1], -1, system.p)) % system.p
    return out, h.scale(scale)


def degree_of_morphism(system: DefiningSystem) -> int:
    """Common degree of the reduced defining system."""
    if system.reduced:
        return system.degree
    reduced, _ = reduce_defining_system(system)
    return reduced.degree


def compose_systems(outer: DefiningSystem, inner: DefiningSystem) -> DefiningSystem:
    """Entrywise substitution outer(inner_0, .., inner_m).

    On all of projective space the degree of the composite is the product
    of the degrees; with base points the composite can collapse, which
    surfaces as UndefinedSystemError.
    """
    if len(inner) != outer.nvars:
        raise DimensionError(
            f"outer has {outer.nvars} variables, inner has {len(inner)} entries")
    polys = [f.subs(list(inner.polys)) for f in outer.polys]
    if all(f.is_zero for f in polys):
        raise UndefinedSystemError("composition collapsed to zero")
    return DefiningSystem(polys)


def line_restrict(system: DefiningSystem, a, b) -> DefiningSystem:
    """Restrict to the line through two independent points of P^(r-1).

    Substitutes t_i = a_i*u + b_i*v, yielding a system in two variables of
    the same degree (reduction may lower it further).
    """
    p, r = system.p, system.nvars
    if len(a) != r or len(b) != r:
        raise DimensionError("points must have one coordinate per variable")
    fld = PrimeField(p)
    if Mat(fld, [list(a), list(b)]).rank() != 2:
        raise DegeneracyError("points are projectively dependent")
    lines = []
    for ai, bi in zip(a, b):
        terms = {}
        if ai % p:
            terms[(1, 0)] = ai % p
        if bi % p:
            terms[(0, 1)] = bi % p
        lines.append(MPoly(p, 2, terms))
    inner = [f.subs(lines) for f in system.polys]
    if all(f.is_zero for f in inner):
        raise UndefinedSystemError("restriction collapsed to zero")
    return DefiningSystem(inner)


def veronese(d: int, p: int, nvars: int = 2) -> DefiningSystem:
    """Degree-d Veronese system: all monomials of degree d, lex order."""
    exps = _monomials(d, nvars)
    return DefiningSystem([MPoly.term(1, e, p) for e in exps], reduced=True)


def _monomials(d: int, nvars: int):
    if nvars == 1:
        return [(d,)]
    out = []
    for k in range(d, -1, -1):
        for rest in _monomials(d - k, nvars - 1):
            out.append((k,) + rest)
    return out


def proportional(s1: DefiningSystem, s2: DefiningSystem) -> bool:
    """Equality of tuples up to one scalar (after normalization)."""
    if len(s1) != len(s2):
        return False
    return s1.normalized().polys == s2.normalized().polys
