import random

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hasse_sieve.forms import (
    PlaneCurve,
    bprod,
    discriminant,
    norm_quadratic,
    resultant,
    ternary_from_binary,
)

X, Y = sympy.symbols("X Y")


def _poly(f):
    d = len(f) - 1
    return sum(c * X ** (d - i) * Y**i for i, c in enumerate(f))


binary = st.lists(st.integers(-9, 9), min_size=2, max_size=6).filter(lambda f: f[0] != 0)


def _companion_resultant(f, g):
    """lc(f)^deg(g) * det g(C) with C the companion matrix of f / lc(f)."""
    m, n = len(f) - 1, len(g) - 1
    lead = sympy.Rational(f[0])
    C = sympy.zeros(m, m)
    for i in range(1, m):
        C[i, i - 1] = 1
    for i in range(m):
        C[i, m - 1] = -sympy.Rational(f[m - i]) / lead
    gC = sympy.zeros(m, m)
    power = sympy.eye(m)
    for i in range(n, -1, -1):
        gC += g[i] * power
        power = power * C
    return lead**n * gC.det()


@settings(max_examples=150, deadline=None)
@given(binary, st.lists(st.integers(-9, 9), min_size=2, max_size=6))
def test_resultant_matches_companion_oracle(f, g):
    assert resultant(tuple(f), tuple(g)) == _companion_resultant(f, g)


def test_resultant_hand_values():
    # Res(X + Y, X^3 + 2Y^3) = g(-1, 1) = 1 and Res(X + Y, X^3) = -1
    assert resultant((1, 1), (1, 0, 0, 2)) == 1
    assert resultant((1, 1), (1, 0, 0, 0)) == -1


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=3, max_size=6).filter(lambda f: f[0] != 0))
def test_discriminant_matches_sympy(f):
    want = sympy.discriminant(_poly(f).subs(Y, 1), X)
    assert discriminant(tuple(f)) == want


def test_known_discriminants():
    assert discriminant((1, 0, 0, 196)) == -27 * 196**2
    assert discriminant(norm_quadratic(5, 1)) == -3 * 25


def test_curve_expansion_even(cert_even):
    curve = cert_even.curve()
    assert curve.coefficient(8, 0, 0) == 365
    assert curve.coefficient(0, 0, 8) == -(419**3)
    assert curve.genus == 21
    assert curve.reexpansion_ok()
    x, y, z = sympy.symbols("x y z")
    F = (x**3 + 196 * y**3) * (365 * x**3 + 419 * 169 * y**3) * (x**2 + x * y + y**2) - 419**3 * z**8
    poly = sympy.Poly(sympy.expand(F), x, y, z)
    assert dict(poly.terms()) == curve.coefficients


def test_curve_expansion_deg4(cert_deg4):
    curve = cert_deg4.curve()
    assert curve.coefficient(8, 0, 0) == 25 * 73441
    assert curve.coefficient(0, 0, 8) == -(4919**2)
    assert curve.reexpansion_ok()


def test_reexpansion_detects_tampering():
    rng = random.Random(1)
    for _ in range(30):
        fs = ((1, 0, 0, rng.randint(1, 50)), norm_quadratic(rng.randint(1, 9), rng.randint(-9, 9)))
        c = PlaneCurve(fs, 7, 5)
        assert c.reexpansion_ok()
        bad = dict(c.coefficients)
        key = next(iter(bad))
        bad[key] += 1
        c.__dict__["coefficients"] = bad  # overwrite the cached expansion
        assert not c.reexpansion_ok()


def test_ternary_and_genus():
    g = bprod([(3, 0, 0, 4)])
    assert ternary_from_binary(g, 5, 3) == {(3, 0, 0): 3, (0, 3, 0): 4, (0, 0, 3): -5}
    for n in range(5, 13):
        fs = tuple((1, 1) for _ in range(n))
        assert PlaneCurve(fs, 1, n).genus == (n - 1) * (n - 2) // 2
