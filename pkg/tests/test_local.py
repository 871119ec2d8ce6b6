import random

import pytest

from hasse_sieve.forms import PlaneCurve, diagonal_cubic
from hasse_sieve.local import (
    INSOLUBLE,
    SOLUBLE,
    UNDECIDED,
    bad_primes,
    check_local_at,
    check_local_everywhere,
    check_real,
    tree_search,
    weil_threshold,
    witness_ok,
)
from oracles import primitive_solution_mod

SELMER = PlaneCurve(((3, 0, 0, 4),), 5, 3)


def _monomials(d):
    return [(i, j, d - i - j) for i in range(d + 1) for j in range(d + 1 - i)]


def random_forms(count, seed=20261019):
    """Small ternary forms (degree <= 4, |coefficients| <= 20) with a prime q <= 13.

    Half are diagonal with coefficients divisible by powers of q, which is where
    insoluble cases live.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        q = rng.choice([2, 3, 5, 7, 11, 13])
        d = rng.randint(1, 4)
        if rng.random() < 0.5:
            co = {}
            for k in ((d, 0, 0), (0, d, 0), (0, 0, d)):
                e = rng.randint(0, 2)
                while q**e > 20:
                    e -= 1
                co[k] = rng.choice([-1, 1]) * q**e * rng.randint(1, 20 // q**e)
        else:
            ms = _monomials(d)
            co = {m: rng.randint(-20, 20) for m in rng.sample(ms, rng.randint(1, len(ms)))}
            co = {k: v for k, v in co.items() if v}
        if co:
            out.append((co, q))
    return out


FORMS = random_forms(240)


def test_engine_matches_brute_force():
    disagreements = []
    verdicts = set()
    for co, q in FORMS:
        r = tree_search(co, q)
        verdicts.add(r.verdict)
        if r.verdict == SOLUBLE:
            ok = witness_ok(co, q, r.witness, r.precision) and primitive_solution_mod(co, q, 6)
        elif r.verdict == INSOLUBLE:
            ok = not primitive_solution_mod(co, q, max(6, r.level))
        else:
            ok = False
        if not ok:
            disagreements.append((co, q, r.verdict))
    assert disagreements == []
    assert verdicts == {SOLUBLE, INSOLUBLE}


def test_sum_of_three_squares_at_two():
    r = tree_search({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1}, 2)
    assert r.verdict == INSOLUBLE and r.level == 2
    assert not primitive_solution_mod({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1}, 2, 2)
    assert tree_search({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1}, 3).verdict == SOLUBLE


def test_budget_gives_undecided():
    r = tree_search({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1}, 2, node_budget=1)
    assert r.verdict == UNDECIDED
    r = tree_search({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1}, 2, t_max=1)
    assert r.verdict == UNDECIDED


def test_selmer():
    for q in (2, 3, 5, 7):
        r = check_local_at(SELMER, q)
        assert r.verdict == SOLUBLE
        assert witness_ok(SELMER, q, r.witness, r.precision)
    s = check_local_everywhere(SELMER)
    assert s.all_soluble and s.threshold == 4
    assert check_real(SELMER).verdict == SOLUBLE


def test_golden_even_at_three(cert_even):
    curve = cert_even.curve()
    r = check_local_at(curve, 3)
    assert r.verdict == SOLUBLE and witness_ok(curve, 3, r.witness, r.precision)
    # the lift starts from [1 : 0 : 1]
    assert curve(1, 0, 1) % 3 == 0


def test_golden_curves_everywhere(cert_even, cert_deg4):
    for cert in (cert_even, cert_deg4):
        curve = cert.curve()
        s = check_local_everywhere(curve)
        assert s.all_soluble and not s.undecided
        assert s.threshold == 1764
        for r in s.reports:
            if r.method in ("hensel-lift", "exhaustive-count"):
                assert witness_ok(curve, r.place, r.witness, r.precision)
    assert bad_primes(cert_even.curve()) == [2, 3, 5, 7, 13, 31, 41, 73, 197, 419]


def test_real_place():
    c = SELMER
    r = check_real(c)
    x, y, z = r.witness
    assert abs(c.G(x, y) - c.L * z**3) < 1e-9 * max(1, abs(c.G(x, y)))
    # X^2 + Y^2 = -Z^2 has no real point; X^2 - 2Y^2 = -Z^2 has one
    assert check_real(PlaneCurve(((1, 0, 1),), -1, 2)).verdict == INSOLUBLE
    assert check_real(PlaneCurve(((1, 0, -2),), -1, 2)).verdict == SOLUBLE
    with pytest.raises(ValueError):
        check_real(PlaneCurve(((1, 0, 0, 1),), 0, 3))


def test_good_prime_scan_agrees_with_tree():
    curve = PlaneCurve((diagonal_cubic(1, 2),), 7, 3)
    bad = set(bad_primes(curve))
    for q in (5, 11, 13, 17):
        assert q not in bad
        assert check_local_at(curve, q).verdict == tree_search(curve, q).verdict == SOLUBLE


def test_rejects_non_prime():
    with pytest.raises(ValueError):
        check_local_at(SELMER, 9)


@pytest.mark.parametrize("n", range(5, 13))
def test_threshold_formula(n):
    g = (n - 1) * (n - 2) // 2
    assert weil_threshold(n) == 4 * g * g
    curve = PlaneCurve(((1,) + (0,) * (n - 1) + (1,),), 3, n)
    assert curve.genus == g
    assert weil_threshold(8) == 1764
