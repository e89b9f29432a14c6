import itertools
import random

import pytest

from modinv.fields import ExtField, PrimeField
from modinv.groebner import (BudgetExceededError, GroebnerBasis, Ideal,
                             buchberger, find_projective_zero, in_ideal,
                             normal_form, projective_points,
                             projective_zero_empty,
                             projective_zero_empty_radical,
                             radical_membership)
from modinv.mpoly import MPoly, variables


def test_basis_of_two_variables():
    x, y = variables(5, 2)
    basis = buchberger(Ideal([x, y]))
    assert sorted(str(g) for g in basis) == ["s", "t"]


def test_basis_of_single_power():
    x, y = variables(5, 2)
    basis = buchberger(Ideal([x * x]))
    assert [str(g) for g in basis.polys] == ["s^2"]


def test_basis_with_reduction():
    x, y = variables(5, 2)
    basis = buchberger(Ideal([x * x - y, y]))
    assert sorted(str(g) for g in basis.polys) == ["s^2", "t"]


def test_normal_form_membership():
    x, y = variables(5, 2)
    assert normal_form(x * x, [x]).is_zero
    assert normal_form(y, [x]) == y


def test_normal_form_substitution():
    x, y = variables(5, 2)
    # reducing x^2*y by y - x^2 substitutes y = x^2
    nf = normal_form(x * x * y, [y - x * x])
    assert nf == x ** 4


def test_normal_form_no_divisible_terms():
    x, y = variables(5, 2)
    basis = buchberger(Ideal([x * x - y]))
    f = normal_form(x ** 3 + x * y + y, basis.polys)
    leads = [g.leading()[0] for g in basis.polys]
    for e in f.terms:
        for le in leads:
            assert not all(a <= b for a, b in zip(le, e))


def test_basis_autoreduced():
    rng = random.Random(0)
    for _ in range(10):
        gens = []
        for _ in range(3):
            terms = {tuple(rng.randrange(3) for _ in range(2)):
                     rng.randrange(1, 5) for _ in range(3)}
            g = MPoly(5, 2, terms)
            if not g.is_zero:
                gens.append(g)
        if not gens:
            continue
        basis = buchberger(Ideal(gens))
        leads = [g.leading()[0] for g in basis.polys]
        for i, a in enumerate(leads):
            for j, b in enumerate(leads):
                if i != j:
                    assert not all(x <= y for x, y in zip(a, b))
        for g in gens:
            assert in_ideal(g, basis)


def test_radical_membership_examples():
    x, y = variables(3, 2)
    assert radical_membership(x, Ideal([x * x]))
    assert not radical_membership(x, Ideal([y]))


def test_radical_membership_three_vars():
    t1, t2, t3 = variables(3, 3)
    ideal = Ideal([t1 * t2, t1 * t3, t2 * t3])
    # (1:0:0) lies on the zero locus but t1 does not vanish there
    assert all(g.eval((1, 0, 0)) == 0 for g in ideal.generators)
    assert not radical_membership(t1, ideal)
    assert radical_membership(t1 * t2, ideal)


def test_projective_empty_pure_powers():
    s, t = variables(3, 2)
    cert = projective_zero_empty(Ideal([s * s, t * t]))
    assert cert.empty
    assert cert.route == "binary-gcd"


def test_projective_nonempty_single_form():
    s, t = variables(3, 2)
    cert = projective_zero_empty(Ideal([s]))
    assert not cert.empty
    assert cert.witness == (0, 1)


def test_projective_nonempty_irreducible_form():
    t1, t2 = variables(5, 2)
    cert = projective_zero_empty(Ideal([t1 * t1 + t2 * t2]))
    assert not cert.empty
    assert cert.witness == (1, 2)


def test_projective_single_variable_ring():
    t = MPoly.variable(0, 3, 1)
    cert = projective_zero_empty(Ideal([t ** 4]))
    assert cert.empty


def test_projective_three_vars_coordinate_axes():
    t1, t2, t3 = variables(3, 3)
    cert = projective_zero_empty(Ideal([t1 * t2, t1 * t3, t2 * t3]))
    assert not cert.empty
    assert cert.witness == (0, 0, 1)
    cert2 = projective_zero_empty(Ideal([t1, t2, t3]))
    assert cert2.empty


def test_projective_requires_homogeneous():
    s, t = variables(3, 2)
    with pytest.raises(ValueError):
        projective_zero_empty(Ideal([s + s * t]))


def rand_homog(rng, p, nvars, deg):
    exps = [e for e in itertools.product(range(deg + 1), repeat=nvars)
            if sum(e) == deg]
    return MPoly(p, nvars, {e: rng.randrange(p) for e in exps})


def test_emptiness_agrees_with_point_search():
    """Certificates never contradict exhaustive search over small fields."""
    rng = random.Random(1)
    for trial in range(40):
        p = rng.choice([2, 3, 5])
        r = rng.choice([2, 3])
        gens = []
        for _ in range(rng.randrange(1, 4)):
            g = rand_homog(rng, p, r, rng.randrange(1, 3))
            if not g.is_zero:
                gens.append(g)
        if not gens:
            continue
        cert = projective_zero_empty(Ideal(gens), ext_bound=2)
        pt, fld = find_projective_zero(gens, p, ext_bound=2)
        if cert.empty:
            assert pt is None
        if pt is not None:
            assert not cert.empty


def test_gcd_route_agrees_with_radical_route():
    rng = random.Random(2)
    done = 0
    while done < 50:
        p = rng.choice([3, 5])
        gens = [g for g in (rand_homog(rng, p, 2, rng.randrange(1, 4))
                            for _ in range(rng.randrange(1, 4)))
                if not g.is_zero]
        if not gens:
            continue
        done += 1
        cert = projective_zero_empty(Ideal(gens))
        assert cert.empty == projective_zero_empty_radical(Ideal(gens))


def test_stratified_route_agrees_with_radical_route():
    rng = random.Random(3)
    done = 0
    while done < 15:
        gens = [g for g in (rand_homog(rng, 3, 3, rng.randrange(1, 3))
                            for _ in range(rng.randrange(2, 4)))
                if not g.is_zero]
        if not gens:
            continue
        done += 1
        cert = projective_zero_empty(Ideal(gens))
        assert cert.empty == projective_zero_empty_radical(Ideal(gens))


def test_budget_exceeded_reported():
    x, y = variables(5, 2)
    gens = [x ** 3 - y ** 2 + x, y ** 3 + x * y + 1, x * x * y - x - 2]
    with pytest.raises(BudgetExceededError):
        buchberger(Ideal(gens), budget=1)


def test_projective_points_order_and_count():
    f = PrimeField(3)
    pts = list(projective_points(f, 2))
    assert pts[0] == (0, 1)
    assert pts[1] == (1, 0)
    assert len(pts) == 4
    assert len(set(pts)) == 4
    f9 = ExtField(3, 2)
    assert len(list(projective_points(f9, 2))) == 10


def test_empty_ideal_rejected():
    with pytest.raises(ValueError):
        Ideal([])
    with pytest.raises(ValueError):
        Ideal([MPoly.zero(3, 2)])
