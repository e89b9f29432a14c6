"""Multivariate polynomials over F_p with exact division and gcd.

An MPoly is a map from exponent vectors (tuples of length nvars) to nonzero
coefficients in [1, p).  The gcd of homogeneous binary forms is computed by
stripping the pure power of the first variable, dehomogenizing to one
variable and rehomogenizing the univariate gcd; everything else goes through
a recursive primitive-part subresultant PRS on the last variable.  All gcds
are returned monic with respect to the graded-lexicographic leading term.
"""

from __future__ import annotations

import itertools

from .fields import PrimeField, _u_divmod


class ExactDivisionError(ArithmeticError):
    """Division that was required to be exact is not."""


class GcdUndefinedError(ValueError):
    """gcd of an all-zero family."""


def grlex_key(exp):
    return (sum(exp), exp)


def grevlex_key(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


class MPoly:
    __slots__ = ("p", "nvars", "terms")

    def __init__(self, p: int, nvars: int, terms: dict | None = None):
        self.p = p
        self.nvars = nvars
        self.terms = {e: c % p for e, c in (terms or {}).items() if c % p}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p, nvars):
        return cls(p, nvars)

    @classmethod
    def constant(cls, c, p, nvars):
        return cls(p, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i, p, nvars):
        e = tuple(1 if k == i else 0 for k in range(nvars))
        return cls(p, nvars, {e: 1})

    @classmethod
    def term(cls, c, exp, p):
        return cls(p, len(exp), {tuple(exp): c})

    # -- ring operations ---------------------------------------------------

    def _check(self, other):
        if self.p != other.p or self.nvars != other.nvars:
            raise ValueError("polynomials from different rings")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        p = self.p
        for e, c in other.terms.items():
            s = (terms.get(e, 0) + c) % p
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        out = MPoly.__new__(MPoly)
        out.p, out.nvars, out.terms = p, self.nvars, terms
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        out = MPoly.__new__(MPoly)
        out.p, out.nvars = self.p, self.nvars
        out.terms = {e: self.p - c for e, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        p = self.p
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        terms: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = (terms.get(e, 0) + ca * cb) % p
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        out = MPoly.__new__(MPoly)
        out.p, out.nvars, out.terms = p, self.nvars, terms
        return out

    __rmul__ = __mul__

    def scale(self, c: int):
        c %= self.p
        out = MPoly.__new__(MPoly)
        out.p, out.nvars = self.p, self.nvars
        out.terms = {} if c == 0 else {e: (a * c) % self.p for e, a in self.terms.items()}
        return out

    def __pow__(self, k: int):
        result = MPoly.constant(1, self.p, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return (isinstance(other, MPoly) and self.p == other.p
                and self.nvars == other.nvars and self.terms == other.terms)

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self):
        return not self.terms

    def __hash__(self):
        return hash((self.p, self.nvars, frozenset(self.terms.items())))

    # -- inspection --------------------------------------------------------

    def total_degree(self):
        """Max total degree of a term; None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def homogeneous_degree(self):
        """Common degree d if homogeneous, "zero" for 0, else "inhomogeneous"."""
        if not self.terms:
            return "zero"
        degs = {sum(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else "inhomogeneous"

    @property
    def is_homogeneous(self):
        return self.homogeneous_degree() != "inhomogeneous"

    def leading(self, key=grlex_key):
        """(exponent, coefficient) of the leading term under `key`."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, key=grlex_key):
        if not self.terms:
            return self
        _, c = self.leading(key)
        return self.scale(pow(c, -1, self.p))

    def coeff(self, exp):
        return self.terms.get(tuple(exp), 0)

    # -- evaluation and substitution ----------------------------------------

    def eval(self, point, field=None):
        """Evaluate at a point; entries live in `field` (default F_p)."""
        if len(point) != self.nvars:
            raise ValueError("point length does not match variable count")
        if field is None:
            field = PrimeField(self.p)
        acc = field.zero
        for e, c in self.terms.items():
            v = field.element(c)
            for x, k in zip(point, e):
                if k:
                    v = field.mul(v, field.pow(x, k))
            acc = field.add(acc, v)
        return acc

    def subs(self, polys: list["MPoly"]) -> "MPoly":
        """Ring homomorphism sending variable i to polys[i]."""
        if len(polys) != self.nvars:
            raise ValueError("substitution needs one polynomial per variable")
        if not polys:
            raise ValueError("cannot substitute in a ring with no variables")
        p, nv = polys[0].p, polys[0].nvars
        powers: list[list[MPoly]] = [[MPoly.constant(1, p, nv)] for _ in polys]
        acc = MPoly.zero(p, nv)
        for e, c in sorted(self.terms.items()):
            t = MPoly.constant(c, p, nv)
            for i, k in enumerate(e):
                while len(powers[i]) <= k:
                    powers[i].append(powers[i][-1] * polys[i])
                if k:
                    t = t * powers[i][k]
            acc = acc + t
        return acc

    # -- exact division ------------------------------------------------------

    def divexact(self, g: "MPoly") -> "MPoly":
        """Quotient f/g when g divides f exactly; ExactDivisionError otherwise."""
        self._check(g)
        if not g.terms:
            raise ExactDivisionError("division by zero polynomial")
        if not self.terms:
            return MPoly.zero(self.p, self.nvars)
        p = self.p
        ge, gc = g.leading()
        gc_inv = pow(gc, -1, p)
        rem = dict(self.terms)
        q: dict = {}
        while rem:
            fe = max(rem, key=grlex_key)
            de = tuple(a - b for a, b in zip(fe, ge))
            if any(d < 0 for d in de):
                raise ExactDivisionError("not an exact division")
            c = (rem[fe] * gc_inv) % p
            q[de] = c
            for e2, c2 in g.terms.items():
                e = tuple(a + b for a, b in zip(de, e2))
                s = (rem.get(e, 0) - c * c2) % p
                if s:
                    rem[e] = s
                else:
                    rem.pop(e, None)
        return MPoly(p, self.nvars, q)

    def divides(self, f: "MPoly") -> bool:
        try:
            f.divexact(self)
            return True
        except ExactDivisionError:
            return False

    # -- pretty printing -----------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self._var_names()
        bits = []
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{names[i]}^{k}" if k > 1 else names[i]
                for i, k in enumerate(e) if k
            )
            if not mono:
                bits.append(str(c))
            elif c == 1:
                bits.append(mono)
            else:
                bits.append(f"{c}*{mono}")
        return " + ".join(bits)

    def _var_names(self):
        if self.nvars <= 3:
            return ["s", "t", "w"][: self.nvars] if self.nvars == 2 else \
                [f"t{i+1}" for i in range(self.nvars)]
        return [f"t{i+1}" for i in range(self.nvars)]


def variables(p: int, nvars: int) -> list[MPoly]:
    return [MPoly.variable(i, p, nvars) for i in range(nvars)]


def homogeneity_check(f: MPoly):
    return f.homogeneous_degree()


def poly_divexact(f: MPoly, g: MPoly) -> MPoly:
    return f.divexact(g)


# -- gcd ---------------------------------------------------------------------

def _u_from(f: MPoly, var: int) -> list[int]:
    """Dense univariate coefficient list of a 1-variable-supported poly."""
    out = [0] * ((max(e[var] for e in f.terms) + 1) if f.terms else 0)
    for e, c in f.terms.items():
        out[e[var]] = c
    return out


def _u_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        _, r = _u_divmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _strip_var(f: MPoly, var: int) -> tuple[MPoly, int]:
    """Divide out the largest power of variable `var`; return (quotient, power)."""
    v = min(e[var] for e in f.terms)
    if v == 0:
        return f, 0
    terms = {}
    for e, c in f.terms.items():
        e2 = list(e)
        e2[var] -= v
        terms[tuple(e2)] = c
    return MPoly(f.p, f.nvars, terms), v


def _binary_homogeneous_gcd(f: MPoly, g: MPoly) -> MPoly:
    """gcd of two nonzero homogeneous binary forms via dehomogenization.

    A binary form splits into linear factors over the algebraic closure;
    factors of the first variable s show up as the pure s-power content,
    everything else survives setting s = 1 with its degree intact.
    """
    p = f.p
    f1, vf = _strip_var(f, 0)
    g1, vg = _strip_var(g, 0)
    fu = [0] * (max(e[1] for e in f1.terms) + 1)
    for e, c in f1.terms.items():
        fu[e[1]] = c
    gu = [0] * (max(e[1] for e in g1.terms) + 1)
    for e, c in g1.terms.items():
        gu[e[1]] = c
    h = _u_gcd(fu, gu, p)
    d = len(h) - 1
    terms = {}
    v = min(vf, vg)
    for k, c in enumerate(h):
        if c:
            terms[(d - k + v, k)] = c
    return MPoly(p, 2, terms)


def _tower(f: MPoly) -> list[MPoly]:
    """f as a dense list in the last variable with (nvars-1)-variate coeffs."""
    n = f.nvars
    deg = max(e[-1] for e in f.terms)
    coeffs = [MPoly.zero(f.p, n - 1) for _ in range(deg + 1)]
    for e, c in f.terms.items():
        coeffs[e[-1]] = coeffs[e[-1]] + MPoly.term(c, e[:-1], f.p)
    return coeffs

def _untower(coeffs: list[MPoly], p: int) -> MPoly:
    terms = {}
    for k, q in enumerate(coeffs):
        for e, c in q.terms.items():
            terms[e + (k,)] = c
    nv = coeffs[0].nvars + 1 if coeffs else 1
    return MPoly(p, nv, terms)

def _tower_trim(fs: list[MPoly]) -> list[MPoly]:
    while fs and fs[-1].is_zero:
        fs.pop()
    return fs

def _tower_scale(fs, q):
    return [c * q for c in fs]

def _tower_prem(f: list[MPoly], g: list[MPoly], p: int) -> list[MPoly]:
    """Pseudo-remainder of f by g in (F_p[t_1..t_{r-1}])[t_r]."""
    f = list(f)
    dg = len(g) - 1
    lg = g[-1]
    while len(f) - 1 >= dg and f:
        df = len(f) - 1
        lead = f[-1]
        f = _tower_scale(f, lg)
        for j in range(len(g)):
            f[df - dg + j] = f[df - dg + j] - lead * g[j]
        _tower_trim(f)
    return f


def _gcd2(f: MPoly, g: MPoly) -> MPoly:
    """gcd of two polynomials, not normalized."""
    if f.is_zero:
        return g
    if g.is_zero:
        return f
    p, n = f.p, f.nvars
    if n == 0:
        return MPoly.constant(1, p, 0)
    if n == 1:
        h = _u_gcd(_u_from(f, 0), _u_from(g, 0), p)
        return MPoly(p, 1, {(k,): c for k, c in enumerate(h) if c})
    if n == 2 and f.is_homogeneous and g.is_homogeneous:
        return _binary_homogeneous_gcd(f, g)
    # primitive-part subresultant PRS on the last variable
    fs, vf = _strip_var(f, n - 1)
    gs, vg = _strip_var(g, n - 1)
    a, b = _tower(fs), _tower(gs)
    ca = poly_gcd([c for c in a if not c.is_zero])
    cb = poly_gcd([c for c in b if not c.is_zero])
    a = [c.divexact(ca) for c in a]
    b = [c.divexact(cb) for c in b]
    if len(a) < len(b):
        a, b = b, a
    while True:
        r = _tower_prem(a, b, p)
        if not r:
            h = b
            break
        if len(r) == 1:
            h = [MPoly.constant(1, p, n - 1)]
            break
        cr = poly_gcd([c for c in r if not c.is_zero])
        a, b = b, [c.divexact(cr) for c in r]
    content = _gcd2(ca, cb)
    out = _untower(h, p) * _lift(content)
    if min(vf, vg):
        out = out * MPoly.term(1, (0,) * (n - 1) + (min(vf, vg),), p)
    return out


def _lift(f: MPoly) -> MPoly:
    """Reinterpret an (n)-variate poly as (n+1)-variate, new last variable."""
    return MPoly(f.p, f.nvars + 1, {e + (0,): c for e, c in f.terms.items()})


def poly_gcd(polys) -> MPoly:
    """gcd of a family, monic under the graded-lexicographic leading term."""
    polys = [f for f in polys if not f.is_zero]
    if not polys:
        raise GcdUndefinedError("gcd of all-zero family")
    polys = sorted(polys, key=lambda f: len(f.terms))
    g = polys[0]
    one = (0,) * g.nvars
    for f in polys[1:]:
        g = _gcd2(g, f)
        if g.terms.keys() == {one}:
            break
    return g.monic()
