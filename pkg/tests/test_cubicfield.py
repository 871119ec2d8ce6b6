import math
import random

import pytest

from hasse_sieve import arith
from hasse_sieve.cubicfield import (
    FieldError,
    PureCubicField,
    aacm_scan,
    audit_unit,
    class_number,
    fundamental_unit,
    multiply,
    norm,
    splitting_type,
    unit_group_order,
    unit_order_mod,
)
from conftest import load_table
from oracles import brute_unit, cubic_norm


def test_field_rejects_bad_P():
    with pytest.raises(FieldError):
        PureCubicField(10)  # 1 mod 9
    with pytest.raises(FieldError):
        PureCubicField(12)  # not squarefree
    assert PureCubicField(14).discriminant == -27 * 14**2


@pytest.mark.parametrize("P, coords, value", [(5, (1, 0, 0), 1), (14, (-11, 5, 0), 419), (158, (-59, 11, 0), 4919)])
def test_norm_examples(P, coords, value):
    assert norm(PureCubicField(P).element(*coords)) == value


def test_multiply_examples():
    F2 = PureCubicField(2)
    e = F2.element(1, 1, 1)
    assert multiply(e, F2.one).coords == (1, 1, 1)
    assert multiply(e, e).coords == (5, 4, 3)
    F14 = PureCubicField(14)
    assert multiply(F14.pi, F14.element(0, 0, 1)).coords == (14, 0, 0)
    with pytest.raises(FieldError):
        multiply(e, F14.one)


@pytest.mark.parametrize("P", [2, 6, 14, 158])
def test_norm_multiplicative(P):
    F = PureCubicField(P)
    rng = random.Random(P)
    for _ in range(10_000):
        x = F.element(*(rng.randint(-50, 50) for _ in range(3)))
        y = F.element(*(rng.randint(-50, 50) for _ in range(3)))
        assert norm(x * y) == norm(x) * norm(y)
        assert norm(x) == cubic_norm(*x.coords, P)


def test_ring_axioms_on_random_triples():
    F = PureCubicField(14)
    rng = random.Random(0)
    for _ in range(500):
        x, y, z = (F.element(*(rng.randint(-30, 30) for _ in range(3))) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x


@pytest.mark.parametrize("P, expected", [(2, (1, 1, 1)), (14, (29, 12, 5))])
def test_fundamental_unit_examples(P, expected):
    assert fundamental_unit(PureCubicField(P)).element.coords == expected


def test_fundamental_unit_P6_divisibility():
    eps = fundamental_unit(PureCubicField(6))
    assert eps.beta % 3 == 0 and eps.gamma % 3 == 0
    assert eps.element.coords == brute_unit(6, 40)


@pytest.mark.parametrize("P, coords, h", load_table())
def test_regression_table(P, coords, h):
    F = PureCubicField(P)
    eps = fundamental_unit(F)
    assert eps.element.coords == coords
    assert abs(eps.element.norm()) == 1
    assert audit_unit(F, eps) == []
    assert class_number(F, eps) == h


def test_class_number_examples():
    assert class_number(PureCubicField(2)) == 1
    assert class_number(PureCubicField(14)) % 2 == 1
    assert class_number(PureCubicField(158)) % 2 == 1


@pytest.mark.parametrize("q, kind", [(5, "one-one-two"), (7, "ramified"), (3, "ramified")])
def test_splitting_examples(q, kind):
    assert splitting_type(PureCubicField(14), q).kind == kind


def test_splitting_degrees_sum_to_three():
    for P in (2, 6, 14, 158):
        F = PureCubicField(P)
        for q in arith.primes_up_to(400):
            st = splitting_type(F, q)
            assert sum(e * f for e, f in zip(st.ramification, st.residue_degrees)) == 3
            if st.kind != "ramified":
                roots = sum(1 for x in range(q) if (x**3 - P) % q == 0)
                assert roots == {"split-three": 3, "one-one-two": 1, "inert": 0}[st.kind]


@pytest.mark.parametrize("modulus, order", [(2, 4), (4, 8), (8, 16)])
def test_unit_order_mod_two_powers(modulus, order):
    F = PureCubicField(2)
    assert unit_order_mod(F.element(1, 1, 1), modulus) == order


def test_unit_order_properties():
    F = PureCubicField(14)
    eps = fundamental_unit(F).element
    assert unit_order_mod(F.one, 35) == 1
    for m in (5, 9, 11, 25, 35, 121):
        k = unit_order_mod(eps, m)
        assert unit_group_order(F, m) % k == 0
        assert eps.pow_mod(k, m).coords == (1, 0, 0)


def test_unit_group_order_brute_force():
    F = PureCubicField(2)
    for m in (2, 3, 4, 5):
        # x is invertible mod m iff its norm is
        count = sum(
            1
            for a in range(m)
            for b in range(m)
            for c in range(m)
            if math.gcd(cubic_norm(a, b, c, 2), m) == 1
        )
        assert unit_group_order(F, m) == count


def test_aacm_examples():
    assert aacm_scan(5, "p").verdict == "holds"
    assert aacm_scan(7, "2p").verdict == "holds"
    assert aacm_scan(2, "p").verdict == "special"
    assert aacm_scan(17, "p").verdict == "inapplicable"  # 17 = -1 mod 9
