"""Exact integer and modular arithmetic shared by the rest of the package.

Everything here works on Python ints; no floating point is involved.
"""

from __future__ import annotations

import math
import random
from functools import lru_cache

# Deterministic Miller-Rabin below this bound with the witness set below
# (Jaeschke / Sorenson-Webster; valid far beyond 3e18).
DETERMINISTIC_LIMIT = 3 * 10**18
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
PROBABILISTIC_ROUNDS = 128
DEFAULT_SEED = 20240601

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class NotInvertibleError(ArithmeticError):
    """Raised when a modular inverse does not exist."""


class InfiniteValuationError(ArithmeticError):
    """Raised when asking for the valuation of zero."""


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas(n: int) -> bool:
    # Selfridge parameters: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    if math.isqrt(n) ** 2 == n:
        return False
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def halve(v):
        return (v + n if v & 1 else v) // 2 % n

    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = halve(P * U + V), halve(D * U + P * V)
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def primality_regime(n: int) -> str:
    """Name of the primality regime ``is_prime`` uses for ``n``."""
    return "deterministic" if n < DETERMINISTIC_LIMIT else "probabilistic"


def is_prime(n: int, seed: int = DEFAULT_SEED) -> bool:
    """Miller-Rabin primality test.

    Deterministic below ``DETERMINISTIC_LIMIT``.  Above it, 128 random bases
    drawn from ``random.Random(seed)`` plus a strong Lucas test; the error
    probability is below 2**-128 and the verdict is reproducible for a fixed
    seed.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < DETERMINISTIC_LIMIT:
        return all(_mr_round(n, d, s, a) for a in _MR_WITNESSES)
    rng = random.Random(seed)
    for _ in range(PROBABILISTIC_ROUNDS):
        if not _mr_round(n, d, s, rng.randrange(2, n - 1)):
            return False
    return _strong_lucas(n)


def valuation(n: int, l: int) -> int:
    """Largest ``e`` with ``l**e`` dividing ``n``."""
    if n == 0:
        raise InfiniteValuationError("valuation of 0 is infinite")
    n = abs(n)
    e = 0
    while n % l == 0:
        n //= l
        e += 1
    return e


def _pollard_rho(n: int, seed: int = 1) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(seed)
    while True:
        c = rng.randrange(1, n)
        y, m, g, r, q = rng.randrange(1, n), 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


TRIAL_DIVISION_BOUND = 10**7


@lru_cache(maxsize=4096)
def _factor_cached(n: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # Trial division by 6k +- 1 up to a modest bound; Pollard rho does the rest.
    f = 53
    limit = min(TRIAL_DIVISION_BOUND, 10**5)
    while n > 1 and f * f <= n and f <= limit:
        for g in (f, f + 2):
            while n % g == 0:
                out[g] = out.get(g, 0) + 1
                n //= g
        f += 6
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_rho(m)
        stack += [d, m // d]
    return tuple(sorted(out.items()))


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` as ``{prime: exponent}``."""
    if n == 0:
        raise ValueError("cannot factor 0")
    return dict(_factor_cached(abs(n)))


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def radical(L: int) -> int:
    """Product of the distinct primes dividing ``L``."""
    if L == 0:
        raise ValueError("radical of 0 is undefined")
    return math.prod(prime_divisors(L))


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorize(n).values())


def mod_inverse(a: int, m: int) -> int:
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if math.gcd(a, m) != 1:
        raise NotInvertibleError(f"{a} is not invertible modulo {m}")
    return pow(a, -1, m)


def cube_class(a: int, q: int) -> str:
    """Classify ``a mod q`` as ``"zero"``, ``"cube"`` or ``"non-cube"``."""
    a %= q
    if a == 0:
        return "zero"
    if q % 3 != 1:
        return "cube"
    return "cube" if pow(a, (q - 1) // 3, q) == 1 else "non-cube"


def nth_power_class(a: int, n: int, q: int) -> bool:
    """True iff ``a`` is an ``n``-th power in the multiplicative group mod ``q``."""
    a %= q
    if a == 0:
        raise ValueError("a must be a unit modulo q")
    if q == 2:
        return True
    d = math.gcd(n, q - 1)
    return pow(a, (q - 1) // d, q) == 1


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def nth_root_mod(a: int, n: int, q: int) -> int | None:
    """Some ``z`` with ``z**n == a (mod q)`` for prime ``q``, or None."""
    a %= q
    if a == 0:
        return 0
    if not nth_power_class(a, n, q):
        return None
    d = math.gcd(n, q - 1)
    if d == 1:
        return pow(a, pow(n, -1, q - 1), q)
    if q < 200_000:
        for z in range(1, q):
            if pow(z, n, q) == a:
                return z
    from sympy.ntheory.residue_ntheory import nthroot_mod

    return int(nthroot_mod(a, n, q))


def iroot(x: int, n: int) -> tuple[int, bool]:
    """Integer ``n``-th root of ``x >= 0``: ``(floor(x**(1/n)), exact?)``."""
    if x < 0:
        raise ValueError("negative radicand")
    if x < 2:
        return x, True
    r = 1 << ((x.bit_length() + n - 1) // n)
    while True:
        s = ((n - 1) * r + x // r ** (n - 1)) // n
        if s >= r:
            break
        r = s
    while r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r, r**n == x


def signed_iroot(x: int, n: int) -> int | None:
    """Exact integer ``n``-th root of ``x`` (odd ``n`` allows ``x < 0``), else None."""
    if x < 0:
        if n % 2 == 0:
            return None
        r, ok = iroot(-x, n)
        return -r if ok else None
    r, ok = iroot(x, n)
    return r if ok else None


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


def multiplicative_order(a: int, m: int, group_order: int) -> int:
    """Order of ``a`` in a group of known order, via its factorization."""
    order = group_order
    for p, e in factorize(group_order).items():
        for _ in range(e):
            if pow(a, order // p, m) == 1:
                order //= p
            else:
                break
    return order
