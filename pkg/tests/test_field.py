"""Prime field arithmetic checks."""

import random

import pytest

from f5gb.field import DEFAULT_PRIME, FieldError, PrimeField, is_prime, xgcd


def test_default_prime():
    assert DEFAULT_PRIME == 32003
    assert is_prime(DEFAULT_PRIME)


def test_frozen_values():
    F = PrimeField(32003)
    assert F.inv(2) == 16002
    assert F.sub(5, 7) == 32001
    assert F.mul(2, 16002) == 1
    assert F.neg(1) == 32002


def test_inverse_of_zero():
    F = PrimeField(7)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F.div(3, 0)


def test_validation():
    with pytest.raises(FieldError):
        PrimeField(6)
    with pytest.raises(FieldError):
        PrimeField(1)
    with pytest.raises(FieldError):
        PrimeField(-7)
    with pytest.raises(FieldError):
        PrimeField(2**31 + 11)
    with pytest.raises(FieldError):
        PrimeField(True)
    # boundary: small primes are fine
    PrimeField(2)
    PrimeField(3)


def test_xgcd():
    rng = random.Random(12)
    for _ in range(200):
        a = rng.randrange(1, 10**6)
        b = rng.randrange(1, 10**6)
        g, s, t = xgcd(a, b)
        assert s * a + t * b == g
        assert a % g == 0 and b % g == 0


def test_field_axioms_random():
    rng = random.Random(99)
    for p in (2, 3, 7, 7583, 32003):
        F = PrimeField(p)
        for _ in range(100):
            a = rng.randrange(p)
            b = rng.randrange(p)
            c = rng.randrange(p)
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            assert F.add(a, F.neg(a)) == 0
            assert F.sub(a, b) == F.add(a, F.neg(b))
            if a:
                assert F.mul(a, F.inv(a)) == 1
                assert F.div(b, a) == F.mul(b, F.inv(a))


def test_element_normalizes():
    F = PrimeField(7)
    assert F.element(-1) == 6
    assert F.element(15) == 1
    assert F.element(0) == 0
