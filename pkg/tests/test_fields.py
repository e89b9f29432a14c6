import random

import pytest

from modinv.fields import GF, ExtField, PrimeField, is_prime


def test_modular_reduction():
    F = GF(3)
    assert F.add(2, 2) == 1


def test_inverse():
    F = GF(5)
    assert F.inv(2) == 3


def test_neg_zero():
    F = GF(7)
    assert F.neg(0) == 0


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GF(5).inv(0)


def test_bad_modulus_rejected():
    with pytest.raises(ValueError):
        PrimeField(6)
    with pytest.raises(ValueError):
        PrimeField(37)  # above the configured cap


def test_field_laws_sampled():
    rng = random.Random(1)
    for p in (2, 3, 5, 31):
        F = GF(p)
        for _ in range(200):
            a, b, c = (F.random(rng) for _ in range(3))
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            if a:
                assert F.mul(a, F.inv(a)) == 1


def test_ext_field_modulus_irreducible():
    F = ExtField(3, 2)
    # no roots in F_3 means irreducible for degree 2
    m = F.modulus
    for x in range(3):
        assert sum(c * x ** i for i, c in enumerate(m)) % 3 != 0


def test_ext_field_laws_sampled():
    rng = random.Random(2)
    for (p, e) in ((2, 3), (3, 2), (5, 3)):
        F = ExtField(p, e)
        assert F.order == p ** e
        for _ in range(100):
            a, b, c = (F.random(rng) for _ in range(3))
            assert F.mul(a, b) == F.mul(b, a)
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            if not F.is_zero(a):
                assert F.mul(a, F.inv(a)) == F.one


def test_ext_field_frobenius_order():
    F = ExtField(3, 3)
    rng = random.Random(3)
    for _ in range(20):
        a = F.random(rng)
        assert F.pow(a, F.order) == a   # x^(p^e) = x


def test_embed_is_a_homomorphism():
    F = ExtField(5, 2)
    for a in range(5):
        for b in range(5):
            assert F.add(F.embed(a), F.embed(b)) == F.embed((a + b) % 5)
            assert F.mul(F.embed(a), F.embed(b)) == F.embed((a * b) % 5)


def test_element_count():
    F = ExtField(2, 4)
    assert len(list(F.elements())) == 16


def test_is_prime():
    assert [n for n in range(2, 32) if is_prime(n)] == \
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
