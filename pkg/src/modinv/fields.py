"""Prime fields F_p and small extension fields F_(p^e).

Elements of F_p are plain ints in [0, p); elements of F_(p^e) are tuples of
ints of length e, the coefficients of 1, x, ..., x^(e-1) modulo a fixed
irreducible polynomial.  A field object carries the arithmetic; the values
themselves stay lightweight so they can be used as matrix entries and dict
keys without wrapping.
"""

from __future__ import annotations

import itertools

PRIME_CAP = 31
EXT_DEGREE_CAP = 6


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class PrimeField:
    """F_p with elements represented as ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        if not 2 <= p <= PRIME_CAP:
            raise ValueError(f"prime {p} outside supported range [2, {PRIME_CAP}]")
        self.p = p

    @property
    def char(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return self.p

    zero = 0
    one = 1

    def element(self, x: int) -> int:
        return x % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.p}")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        return pow(a % self.p, k, self.p)

    def is_zero(self, a: int) -> bool:
        return a % self.p == 0

    def elements(self):
        return range(self.p)

    def random(self, rng) -> int:
        return rng.randrange(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"GF({self.p})"


def _u_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f

def _u_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _u_trim(out)

def _u_divmod(f, g, p):
    f = list(f)
    dg = len(g) - 1
    lg_inv = pow(g[-1], -1, p)
    q = [0] * max(0, len(f) - dg)
    while len(f) - 1 >= dg and f:
        k = len(f) - 1 - dg
        c = (f[-1] * lg_inv) % p
        q[k] = c
        for j, b in enumerate(g):
            f[k + j] = (f[k + j] - c * b) % p
        _u_trim(f)
    return q, f

def _u_powmod(f, k, m, p):
    """f^k mod m over F_p, dense coefficient lists."""
    result = [1]
    base = _u_divmod(f, m, p)[1]
    while k:
        if k & 1:
            result = _u_divmod(_u_mul(result, base, p), m, p)[1]
        base = _u_divmod(_u_mul(base, base, p), m, p)[1]
        k >>= 1
    return result


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin test for a monic univariate f over F_p."""
    e = len(f) - 1
    x = [0, 1]
    if _u_powmod(x, p ** e, f, p) != x:
        return False
    q = 2
    ee = e
    primes = set()
    while ee > 1:
        while ee % q == 0:
            primes.add(q)
            ee //= q
        q += 1
    for q in primes:
        if _u_powmod(x, p ** (e // q), f, p) == x:
            return False
    return True


class ExtField:
    """F_(p^e) = F_p[x]/(m), elements are coefficient tuples of length e.

    The modulus m is the lexicographically first monic irreducible of degree
    e, so field construction is deterministic and reproducible.
    """

    __slots__ = ("p", "e", "modulus", "_red")

    def __init__(self, p: int, e: int):
        if not is_prime(p) or p > PRIME_CAP:
            raise ValueError(f"bad characteristic {p}")
        if not 2 <= e <= EXT_DEGREE_CAP:
            raise ValueError(f"extension degree {e} outside [2, {EXT_DEGREE_CAP}]")
        self.p = p
        self.e = e
        self.modulus = self._find_irreducible(p, e)
        # _red[i] = x^(e+i) reduced mod the modulus, used to fold products.
        red = []
        cur = [(-c) % p for c in self.modulus[:e]]
        red.append(tuple(cur))
        for _ in range(e - 2):
            cur = [0] + cur
            if len(cur) > e:
                top = cur.pop()
                cur = [(c + top * r) % p for c, r in zip(cur, red[0])]
            red.append(tuple(cur))
        self._red = red

    @staticmethod
    def _find_irreducible(p: int, e: int) -> tuple[int, ...]:
        for lower in itertools.product(range(p), repeat=e):
            f = list(lower) + [1]
            if f[0] == 0:
                continue
            if _is_irreducible(f, p):
                return tuple(f)
        raise RuntimeError("no irreducible polynomial found")  # unreachable

    @property
    def char(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return self.p ** self.e

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.e

    @property
    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.e - 1)

    def embed(self, a: int) -> tuple[int, ...]:
        return (a % self.p,) + (0,) * (self.e - 1)

    def element(self, coeffs) -> tuple[int, ...]:
        if isinstance(coeffs, int):
            return self.embed(coeffs)
        c = tuple(x % self.p for x in coeffs)
        if len(c) != self.e:
            raise ValueError("coefficient vector has wrong length")
        return c

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        p, e = self.p, self.e
        conv = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    conv[i + j] = (conv[i + j] + x * y) % p
        out = conv[:e]
        for i in range(e - 1):
            c = conv[e + i]
            if c:
                red = self._red[i]
                out = [(o + c * r) % p for o, r in zip(out, red)]
        return tuple(out)

    def inv(self, a):
        if all(x == 0 for x in a):
            raise ZeroDivisionError(f"inverse of 0 in F_{self.p}^{self.e}")
        # extended Euclid on dense lists
        p = self.p
        r0, r1 = list(self.modulus), _u_trim(list(a))
        s0, s1 = [], [1]
        while r1:
            q, r = _u_divmod(r0, r1, p)
            r0, r1 = r1, r
            s2 = [(x - y) % p for x, y in
                  itertools.zip_longest(s0, _u_mul(q, s1, p), fillvalue=0)]
            s0, s1 = s1, _u_trim(s2)
        c_inv = pow(r0[-1], -1, p)  # r0 is the (constant) gcd, make it 1
        s0 = [(c_inv * x) % p for x in s0]
        s0 = s0[: self.e] + [0] * (self.e - len(s0))
        return tuple(s0)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        result = self.one
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def is_zero(self, a) -> bool:
        return all(x == 0 for x in a)

    def elements(self):
        for c in itertools.product(range(self.p), repeat=self.e):
            yield c

    def random(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.e))

    def __eq__(self, other):
        return (isinstance(other, ExtField) and other.p == self.p
                and other.e == self.e)

    def __hash__(self):
        return hash(("ExtField", self.p, self.e))

    def __repr__(self):
        return f"GF({self.p}^{self.e})"


def GF(p: int, e: int = 1):
    """Field constructor: GF(p) is a PrimeField, GF(p, e) an ExtField."""
    return PrimeField(p) if e == 1 else ExtField(p, e)
