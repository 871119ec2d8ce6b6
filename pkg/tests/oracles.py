"""Independent reference computations used only by the tests."""

from __future__ import annotations

import math
from itertools import product

import numpy as np


def primes_below(n: int) -> np.ndarray:
    sieve = np.ones(n, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.nonzero(sieve)[0]


def _powmod(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    result = np.ones_like(base)
    base = base % mod
    exp = exp.copy()
    while np.any(exp > 0):
        odd = (exp & 1) == 1
        result = np.where(odd, result * base % mod, result)
        base = base * base % mod
        exp >>= 1
    return result


def analytic_class_number(P: int, unit_log: float, limit: int = 2_000_000) -> float:
    """h from the residue of the Dedekind zeta function of Q(P^(1/3)),
    estimated by an Euler product over primes below ``limit``.

    Assumes P squarefree and P != +-1 mod 9, so |d| = 27 P^2.
    """
    ps = primes_below(limit).astype(np.int64)
    ps = ps[(3 * P) % ps != 0]
    f = 1.0 / ps
    ratio = np.empty(len(ps))
    two = ps % 3 == 2
    ratio[two] = 1.0 / (1.0 - f[two] ** 2)
    one = ~two
    cube = _powmod(np.full(one.sum(), P, dtype=np.int64), (ps[one] - 1) // 3, ps[one]) == 1
    r1 = np.where(cube, (1.0 - f[one]) ** -2, (1.0 - f[one]) / (1.0 - f[one] ** 3))
    ratio[one] = r1
    kappa = float(np.exp(np.sum(np.log(ratio))))
    return kappa * math.sqrt(27) * P / (2 * math.pi * unit_log)


def egcd_inverse(a: int, m: int) -> int:
    """Modular inverse by the extended Euclidean algorithm."""
    r0, r1, s0, s1 = m, a % m, 0, 1
    while r1:
        qt = r0 // r1
        r0, r1 = r1, r0 - qt * r1
        s0, s1 = s1, s0 - qt * s1
    if r0 != 1:
        raise ValueError("not invertible")
    return s0 % m


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def primitive_solution_mod(coeffs: dict, q: int, t: int) -> bool:
    """Is there a primitive triple mod q^t on the ternary form?  Plain DFS over digits."""

    def F(x, y, z):
        return sum(c * x**i * y**j * z**k for (i, j, k), c in coeffs.items())

    def dfs(pt, level):
        mod = q**level
        if F(*pt) % mod:
            return False
        if level == t:
            return True
        step = q**level
        for d in product(range(q), repeat=3):
            child = tuple(v + e * step for v, e in zip(pt, d))
            if dfs(child, level + 1):
                return True
        return False

    for start in product(range(q), repeat=3):
        if all(v == 0 for v in start):
            continue
        if dfs(start, 1):
            return True
    return False


def singular_points_mod(coeffs: dict, q: int) -> list[tuple[int, int, int]]:
    """Points of P^2(F_q) where F and all partials vanish."""

    def ev(F, x, y, z):
        return sum(c * x**i * y**j * z**k for (i, j, k), c in F.items()) % q

    def d(F, v):
        out = {}
        for e, c in F.items():
            if e[v]:
                ne = list(e)
                ne[v] -= 1
                out[tuple(ne)] = out.get(tuple(ne), 0) + c * e[v]
        return out

    parts = [d(coeffs, v) for v in range(3)]
    pts = [(1, y, z) for y in range(q) for z in range(q)] + [(0, 1, z) for z in range(q)] + [(0, 0, 1)]
    return [p for p in pts if ev(coeffs, *p) == 0 and all(ev(g, *p) == 0 for g in parts)]


def cubic_norm(a: int, b: int, c: int, P: int) -> int:
    return a**3 + P * b**3 + P * P * c**3 - 3 * P * a * b * c


def brute_unit(P: int, c_max: int) -> tuple[int, int, int] | None:
    """Smallest unit a + b t + c t^2 > 1 (t^3 = P) with -1 <= c <= c_max.

    A unit e > 1 has conjugates of absolute value e^(-1/2) < 1, so its
    coordinates satisfy |a - e/3|, |b t - e/3|, |c t^2 - e/3| < 1: each of
    a, b t is within 2 of c t^2.
    """
    from mpmath import mp, mpf, cbrt

    mp.dps = 60
    t = cbrt(mpf(P))
    best, best_val = None, None
    for c in range(-1, c_max + 1):
        centre = c * t * t
        if best_val is not None and centre - 2 > best_val / 3 + 1:
            break
        for a in range(int(centre) - 3, int(centre) + 4):
            for b in range(int(centre / t) - 3, int(centre / t) + 4):
                if abs(cubic_norm(a, b, c, P)) != 1:
                    continue
                val = a + b * t + c * t * t
                if val > 1 + mpf(10) ** -40 and (best_val is None or val < best_val):
                    best, best_val = (a, b, c), val
    return best


def unit_is_fundamental(P: int, unit: tuple[int, int, int]) -> bool:
    """Is the unit e > 1 fundamental?  Root-extraction check.

    Artin's inequality |d| < 4 e0^3 + 24 bounds the fundamental unit e0 from
    below, hence bounds k in e = e0^k.  For each prime k in range, e^(1/k)
    would be a unit whose coordinates lie within 1 of (r/3, r/3t, r/3t^2).
    """
    from mpmath import mp, mpf, cbrt, log

    a, b, c = unit
    if abs(cubic_norm(a, b, c, P)) != 1:
        return False
    mp.dps = 80
    t = cbrt(mpf(P))
    e = a + b * t + c * t * t
    if e <= 1:
        return False
    d = 27 * P * P
    e_min = cbrt(mpf(d - 24) / 4)
    k_max = int(log(e) / log(e_min)) + 1
    for k in range(2, k_max + 1):
        if any(k % s == 0 for s in range(2, k)):
            continue
        r = e ** (mpf(1) / k)
        for x in range(int(r / 3) - 1, int(r / 3) + 2):
            for y in range(int(r / (3 * t)) - 1, int(r / (3 * t)) + 2):
                for z in range(int(r / (3 * t * t)) - 1, int(r / (3 * t * t)) + 2):
                    if abs(cubic_norm(x, y, z, P)) == 1 and abs(x + y * t + z * t * t - r) < mpf(10) ** -30:
                        return False
    return True
