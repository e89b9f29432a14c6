import itertools
import random

import pytest

from modinv.mpoly import (ExactDivisionError, GcdUndefinedError, MPoly,
                          homogeneity_check, poly_divexact, poly_gcd,
                          variables)


def P(p, nvars, terms):
    return MPoly(p, nvars, terms)


def rand_poly(rng, p, nvars, terms=4, deg=3):
    out = {}
    for _ in range(terms):
        e = tuple(rng.randrange(deg + 1) for _ in range(nvars))
        out[e] = rng.randrange(1, p)
    return MPoly(p, nvars, out)


def test_product_of_sum_and_difference():
    s, t = variables(5, 2)
    assert (s + t) * (s - t) == P(5, 2, {(2, 0): 1, (0, 2): 4})


def test_eval():
    f = P(3, 2, {(2, 1): 1})      # s^2 t
    assert f.eval((2, 1)) == 1    # 4 mod 3


def test_add_identity():
    rng = random.Random(0)
    f = rand_poly(rng, 5, 2)
    assert f + MPoly.zero(5, 2) == f


def test_divexact_monomials():
    s, t = variables(5, 2)
    assert (s * s * t).divexact(s * t) == s


def test_divexact_zero_numerator():
    s, t = variables(5, 2)
    assert MPoly.zero(5, 2).divexact(s) == MPoly.zero(5, 2)


def test_divexact_perfect_square():
    s, t = variables(5, 2)
    f = s * s + 2 * (s * t) + t * t
    assert f.divexact(s + t) == s + t


def test_divexact_failure():
    s, t = variables(5, 2)
    with pytest.raises(ExactDivisionError):
        (s * s + t).divexact(s + t)


def test_divexact_by_zero():
    s, t = variables(5, 2)
    with pytest.raises(ExactDivisionError):
        s.divexact(MPoly.zero(5, 2))


@pytest.mark.parametrize("p,nvars", [(2, 1), (3, 2), (5, 2), (3, 3)])
def test_divexact_of_products_randomized(p, nvars):
    rng = random.Random(p * 100 + nvars)
    for _ in range(250):
        f = rand_poly(rng, p, nvars)
        g = rand_poly(rng, p, nvars, terms=3, deg=2)
        if g.is_zero:
            continue
        assert (f * g).divexact(g) == f


def test_gcd_monomials():
    s, t = variables(3, 2)
    assert poly_gcd([s * s * t, s * t * t]) == s * t


def test_gcd_reduced_tuple_is_one():
    # the entries a^2, 2ab, b^2 of a reduced quadric tuple
    a, b = variables(3, 2)
    g = poly_gcd([a * a, 2 * (a * b), b * b])
    assert g == MPoly.constant(1, 3, 2)


def linear_form(p, root):
    # s + root*t, a monic linear binary form with prescribed ratio
    return P(p, 2, {(1, 0): 1, (0, 1): root}) if root is not None \
        else P(p, 2, {(0, 1): 1})


def test_gcd_of_common_factor_products():
    """gcd(f*g, f*h) = f for coprime g, h built from disjoint linear factors."""
    rng = random.Random(7)
    for p in (5, 7):
        roots = list(range(p)) + [None]
        for _ in range(40):
            rng.shuffle(roots)
            f_roots, g_roots, h_roots = roots[:2], roots[2:4], roots[4:6]
            f = linear_form(p, f_roots[0]) * linear_form(p, f_roots[1])
            g = linear_form(p, g_roots[0]) * linear_form(p, g_roots[1])
            h = linear_form(p, h_roots[0]) * linear_form(p, h_roots[1])
            got = poly_gcd([f * g, f * h])
            assert got == f.monic()


def test_gcd_stability_under_common_factor():
    rng = random.Random(8)
    s, t = variables(5, 2)
    for _ in range(30):
        f = rand_homog(rng, 5, 2, deg=2)
        g = rand_homog(rng, 5, 2, deg=3)
        h = rand_homog(rng, 5, 2, deg=2)
        if f.is_zero or g.is_zero or h.is_zero:
            continue
        lhs = poly_gcd([h * f, h * g])
        rhs = (h * poly_gcd([f, g])).monic()
        assert lhs == rhs


def rand_homog(rng, p, nvars, deg):
    exps = [e for e in itertools.product(range(deg + 1), repeat=nvars)
            if sum(e) == deg]
    return MPoly(p, nvars, {e: rng.randrange(p) for e in exps})


def test_gcd_of_homogeneous_is_homogeneous():
    rng = random.Random(9)
    for nvars in (2, 3):
        for _ in range(25):
            f = rand_homog(rng, 3, nvars, 3)
            g = rand_homog(rng, 3, nvars, 2)
            if f.is_zero or g.is_zero:
                continue
            d = homogeneity_check(poly_gcd([f, g]))
            assert isinstance(d, int)


def test_gcd_permutation_invariance():
    rng = random.Random(10)
    for _ in range(25):
        f = rand_poly(rng, 5, 3, terms=4, deg=2)
        g = rand_poly(rng, 5, 3, terms=4, deg=2)
        h = rand_poly(rng, 5, 3, terms=2, deg=1)
        if h.is_zero:
            continue
        a, b = f * h, g * h
        perm = [2, 0, 1]
        ap = MPoly(5, 3, {tuple(e[perm[i]] for i in range(3)): c
                          for e, c in a.terms.items()})
        bp = MPoly(5, 3, {tuple(e[perm[i]] for i in range(3)): c
                          for e, c in b.terms.items()})
        g1 = poly_gcd([a, b])
        g2 = poly_gcd([ap, bp])
        g1p = MPoly(5, 3, {tuple(e[perm[i]] for i in range(3)): c
                           for e, c in g1.terms.items()})
        assert g1p.monic() == g2


def test_gcd_all_zero_raises():
    with pytest.raises(GcdUndefinedError):
        poly_gcd([MPoly.zero(3, 2)])


def test_gcd_three_variables_with_content():
    t1, t2, t3 = variables(5, 3)
    f = (t1 + t2) * (t2 + t3) * t3
    g = (t1 + t2) * t3 * t3
    assert poly_gcd([f, g]) == ((t1 + t2) * t3).monic()


def test_homogeneity_check():
    s, t = variables(3, 2)
    assert homogeneity_check(s * s + s * t) == 2
    assert homogeneity_check(s * s + t) == "inhomogeneous"
    assert homogeneity_check(MPoly.zero(3, 2)) == "zero"


def test_subs_composition():
    s, t = variables(5, 2)
    f = s * s + t
    u, v = variables(5, 2)
    g = f.subs([u + v, u * v])
    x, y = 2, 3
    assert g.eval((x, y)) == f.eval(((x + y) % 5, (x * y) % 5))


def test_divexact_respects_homogeneous_degrees():
    rng = random.Random(11)
    for _ in range(20):
        f = rand_homog(rng, 3, 2, 3)
        g = rand_homog(rng, 3, 2, 2)
        if f.is_zero or g.is_zero:
            continue
        q = (f * g).divexact(g)
        assert q == f
        assert homogeneity_check(q) == 3
