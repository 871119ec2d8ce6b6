import dataclasses

import pytest

from hasse_sieve import arith
from hasse_sieve.certificate import FAILED, VERIFIED, audit, inverse_sum
from hasse_sieve.construct import (
    ConstructionError,
    compute_iota,
    construct,
    construct_deg4,
    construct_even,
    construct_odd,
    solve_b0_c0,
)
from hasse_sieve.primegen import BudgetExhausted


@pytest.mark.parametrize("unit, p, iota", [((0, 1, 0), 5, 1), ((0, 5, 2), 5, 2), ((109, 60, 33), 3, 1)])
def test_compute_iota(unit, p, iota):
    assert compute_iota(unit, p) == iota


def test_solve_reference_examples():
    assert tuple(solve_b0_c0(14, 2, 419, 2, "even", "c0_square")) == (365, 169, 1, 6)
    assert tuple(solve_b0_c0(158, 1, 4919, 2, "deg4", "b0_square")) == (73441, 2359, -1, 5)


def _oracle_min_solution(Pi, l, Q, residue, k_max, bound):
    """Smallest |b0| (then k, then + before -) by direct scan of b0."""
    for b0 in sorted(range(-bound, bound + 1), key=abs):
        if b0 == 0 or (b0 - residue) % (3 * Q):
            continue
        for k in range(k_max + 1):
            for sign in (1, -1):
                num = Pi * b0 - sign * 3**k
                if num % l:
                    continue
                c0 = num // l
                if c0 and arith.math.gcd(l, c0) == 1 and arith.math.gcd(Q, b0 * c0) == 1:
                    return b0, c0, sign, k
    return None


def test_solve_unconstrained_matches_scan():
    got = tuple(solve_b0_c0(14, 2, 419, 2, "even"))
    want = _oracle_min_solution(196, 419, 2, -1, 6, 2000)
    assert got == want == (-139, -65, -1, 2)
    b0, c0, sign, k = got
    assert 196 * b0 - 419 * c0 == sign * 3**k and (b0 + 1) % 6 == 0


def test_solve_forces_k_zero_off_the_special_classes():
    # P = 42 = 6 mod 9, so only +-1 is allowed
    s = solve_b0_c0(42, 2, 419, 2, "even")
    assert s.k == 0 and 42**2 * s.b0 - 419 * s.c0 == s.sign


def test_solve_budget():
    with pytest.raises(BudgetExhausted):
        solve_b0_c0(14, 2, 419, 2, "even", "c0_square", budget=3)


def test_golden_even(cert_even):
    c = cert_even
    assert (c.P, c.iota, c.m, c.L) == (14, 2, 3, 419**3)
    assert c.primes == (197,) and c.pairs == ((1, 1),)
    assert c.l == 419 and c.norm_rep == (-11, 5, 0)
    assert (c.b0, c.c0, c.sign, c.k) == (365, 169, 1, 6)
    assert 196 * 365 - 419 * 169 == 729
    assert all(e.status == VERIFIED for e in c.ledger)


def test_golden_deg4(cert_deg4):
    c = cert_deg4
    assert (c.P, c.iota, c.m, c.L) == (158, 1, 2, 4919**2)
    assert c.primes == (19751,) and c.pairs == ((5, 1),)
    assert c.l == 4919 and c.norm_rep == (-59, 11, 0)
    assert (c.b0, c.c0, c.sign, c.k) == (73441, 2359, -1, 5)
    assert 158 * 73441 - 4919 * 2359 == -243
    assert c.unit[1] % 2 == 0 and c.unit[2] % 2 == 0
    assert all(e.status == VERIFIED for e in c.ledger)


def test_other_m_values():
    for m in (5, 7):
        c = construct_even(7, 8, m)
        assert c.L == 419**m and (c.b0, c.c0) == (365, 169)


@pytest.mark.parametrize("kwargs, hyp", [
    (dict(u=7, n=8, m=2), "m"),
    (dict(u=7, n=7, m=3), "n"),
    (dict(u=5, n=8, m=3), "u"),
    (dict(u=9, n=8, m=3), "u"),
])
def test_even_rejections(kwargs, hyp):
    with pytest.raises(ConstructionError) as exc:
        construct_even(**kwargs)
    assert exc.value.hypothesis == hyp


def test_deg4_rejections():
    with pytest.raises(ConstructionError) as exc:
        construct_deg4(79, 10)
    assert exc.value.hypothesis == "n"
    # gamma = 5 for P = 14 is odd
    with pytest.raises(ConstructionError) as exc:
        construct_deg4(7, 8)
    assert "gamma" in exc.value.hypothesis


def test_odd_examples():
    c = construct_odd(3, 9)
    assert (c.P, c.iota) == (6, 1)
    assert c.J == 3 and c.L == c.l ** 2
    assert all(inverse_sum(c.pairs, q) != 0 for q in (3,))
    c5 = construct_odd(5, 5)
    # beta != 0 mod 5: L = l^m with the even m picked by the non-residue condition
    assert c5.branch == "nonresidue" and c5.iota == compute_iota(c5.unit, 5)
    assert c5.m % 2 == 0 and 2 <= c5.m <= 4 and c5.L == c5.l**c5.m
    assert [e.key for e in c5.assumed] == ["fermat.nonresidue_lemma"]
    with pytest.raises(ConstructionError):
        construct_odd(5, 7)


def test_pair_counts_and_sums():
    c = construct_even(7, 10, 3)
    assert c.J == 2 and len(set(c.primes)) == 2
    assert inverse_sum(c.pairs, 3) != 0
    d = construct_deg4(79, 12)
    assert d.J == 3 and inverse_sum(d.pairs, 3) != 0


def test_determinism(cert_even):
    assert construct("even", u=7, n=8, m=3) == cert_even


def test_tampered_certificate_fails_audit(cert_even):
    bad = dataclasses.replace(cert_even, c0=170, ledger=())
    failed = {e.key for e in audit(bad) if e.status == FAILED}
    assert "recipe.3" in failed
