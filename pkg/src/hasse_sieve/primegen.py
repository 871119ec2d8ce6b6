"""Primes represented by affinely shifted binary cubic forms.

A family is ``q = f0(rho*B + g1, rho*C + g2) / g0`` for a binary cubic form
``f0``.  Instead of a sieve we enumerate the shifted pairs ``(b, c)`` in
square shells ``max(|b|, |c|) = r`` and test each positive value for
primality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from . import arith

DEFAULT_BUDGET = 100_000


class BudgetExhausted(RuntimeError):
    def __init__(self, message: str, radius: int):
        super().__init__(message)
        self.radius = radius


@dataclass(frozen=True)
class FormFamily:
    """``f0(s, t) = k3 s^3 + k2 s^2 t + k1 s t^2 + k0 t^3`` evaluated at shifted inputs."""

    name: str
    coeffs: tuple[int, int, int, int]
    rho: int
    shift: tuple[int, int]
    content: int = 1
    # congruences the derived pair (b, c) is known to satisfy, as (modulus, b_res, c_res)
    congruence: tuple[int, int, int] | None = None
    forces_two_mod_three: bool = True

    @classmethod
    def diagonal(cls, name: str, b_coef: int, c_coef: int, rho: int, shift: tuple[int, int],
                 forces_two_mod_three: bool = True, normalize: bool = True) -> "FormFamily":
        """``b_coef * b^3 + c_coef * c^3`` with ``b = rho*B + shift[0]``, ``c = rho*C + shift[1]``.

        With ``normalize`` the polynomial content is divided out first.
        """
        fam = cls(name, (b_coef, 0, 0, c_coef), rho, shift,
                  forces_two_mod_three=forces_two_mod_three)
        g0 = fam.substituted_content() if normalize else 1
        return cls(name, fam.coeffs, rho, shift, g0,
                   (rho, shift[0] % rho, shift[1] % rho), forces_two_mod_three)

    def f0(self, s: int, t: int) -> int:
        k3, k2, k1, k0 = self.coeffs
        return k3 * s**3 + k2 * s * s * t + k1 * s * t * t + k0 * t**3

    def derived(self, B: int, C: int) -> tuple[int, int]:
        return self.rho * B + self.shift[0], self.rho * C + self.shift[1]

    def inputs(self, b: int, c: int) -> tuple[int, int]:
        return (b - self.shift[0]) // self.rho, (c - self.shift[1]) // self.rho

    def __call__(self, B: int, C: int) -> int:
        return self.f0(*self.derived(B, C)) // self.content

    def value_at_pair(self, b: int, c: int) -> int:
        return self.f0(b, c) // self.content

    def substituted_content(self) -> int:
        """gcd of the coefficients of ``f0(rho*x + g1, rho*y + g2)`` as a polynomial."""
        r, (g1, g2) = self.rho, self.shift
        poly: dict[tuple[int, int], int] = {}
        for e, k in zip(range(3, -1, -1), self.coeffs):
            # k * (r x + g1)^e * (r y + g2)^(3 - e)
            for i in range(e + 1):
                cx = math.comb(e, i) * r**i * g1 ** (e - i)
                for j in range(3 - e + 1):
                    cy = math.comb(3 - e, j) * r**j * g2 ** (3 - e - j)
                    poly[(i, j)] = poly.get((i, j), 0) + k * cx * cy
        g = 0
        for v in poly.values():
            g = math.gcd(g, v)
        return g or 1

    def describe(self) -> str:
        k3, k2, k1, k0 = self.coeffs
        (g1, g2), r = self.shift, self.rho

        def lin(v, g):
            return f"{r}{v}{'+' if g >= 0 else '-'}{abs(g)}" if g else f"{r}{v}"

        parts = []
        if k3:
            parts.append(f"{k3}*({lin('X', g1)})^3")
        if k0:
            parts.append(f"{k0}*({lin('Y', g2)})^3")
        return " + ".join(parts)


@dataclass(frozen=True)
class GeneratedPrime:
    q: int
    family: FormFamily = field(compare=False, repr=False)
    inputs: tuple[int, int]
    pair: tuple[int, int]


def content_check(family: FormFamily, sample_radius: int) -> bool:
    """True iff the values over the box |B|, |C| <= radius have gcd 1."""
    g = 0
    rng = range(-sample_radius, sample_radius + 1)
    for B in rng:
        for C in rng:
            g = math.gcd(g, family(B, C))
            if g == 1:
                return True
    return False


def _axis_values(rho: int, residue: int, r: int) -> list[int]:
    return [v for v in {r, -r} if (v - residue) % rho == 0]


def _shell_pairs(family: FormFamily, r: int) -> list[tuple[int, int]]:
    rho, (g1, g2) = family.rho, family.shift
    bs_edge = _axis_values(rho, g1, r)
    cs_edge = _axis_values(rho, g2, r)
    pairs = set()
    if bs_edge:
        cs = [c for c in range(-r, r + 1) if (c - g2) % rho == 0]
        pairs.update((b, c) for b in bs_edge for c in cs)
    if cs_edge:
        bs = [b for b in range(-r, r + 1) if (b - g1) % rho == 0]
        pairs.update((b, c) for b in bs for c in cs_edge)
    return sorted(pairs)


def iter_family_primes(family: FormFamily, budget: int = DEFAULT_BUDGET) -> Iterator[GeneratedPrime]:
    """All positive prime values, shell by shell in the shifted pair, ascending within a shell."""
    max_r = family.rho * budget + max(abs(s) for s in family.shift)
    for r in range(0, max_r + 1):
        found = []
        for b, c in _shell_pairs(family, r):
            q = family.value_at_pair(b, c)
            if q > 1 and arith.is_prime(q):
                found.append(GeneratedPrime(q, family, family.inputs(b, c), (b, c)))
        found.sort(key=lambda g: (g.q, g.pair))
        yield from found
    raise BudgetExhausted(f"family {family.name} exhausted shells up to {max_r}", max_r)


def generate(
    family: FormFamily,
    count: int,
    coprime_to: int = 1,
    exclude: Iterable[int] = (),
    budget: int = DEFAULT_BUDGET,
    accept: Callable[[GeneratedPrime], bool] | None = None,
) -> list[GeneratedPrime]:
    """The first ``count`` distinct primes of ``family`` coprime to ``coprime_to``.

    Raises ``BudgetExhausted`` (carrying the scanned radius) if the shells up
    to the budget do not contain enough primes.
    """
    exclude = set(exclude)
    out: list[GeneratedPrime] = []
    seen: set[int] = set()
    if count <= 0:
        return out
    if budget <= 0:
        raise BudgetExhausted("prime generation budget is zero", 0)
    for g in iter_family_primes(family, budget):
        if g.q in seen or g.q in exclude or math.gcd(g.q, coprime_to) != 1:
            continue
        if accept is not None and not accept(g):
            continue
        seen.add(g.q)
        out.append(g)
        if len(out) == count:
            return out
    raise AssertionError("unreachable")


def merged_primes(families: list[FormFamily], budget: int = DEFAULT_BUDGET) -> Iterator[GeneratedPrime]:
    """Primes from several families, merged shell by shell (ascending q within a shell)."""
    iters = []
    for fam in families:
        max_r = fam.rho * budget + max(abs(s) for s in fam.shift)
        iters.append((fam, max_r))
    overall = max(m for _, m in iters)
    for r in range(0, overall + 1):
        found = []
        for fam, max_r in iters:
            if r > max_r:
                continue
            for b, c in _shell_pairs(fam, r):
                q = fam.value_at_pair(b, c)
                if q > 1 and arith.is_prime(q):
                    found.append(GeneratedPrime(q, fam, fam.inputs(b, c), (b, c)))
        found.sort(key=lambda g: (g.q, g.pair, g.family.name))
        yield from found
    raise BudgetExhausted("merged families exhausted their shells", overall)


# --- the families used by the constructions ---------------------------------------


def even_families(P: int, u: int) -> list[FormFamily]:
    """Pair families for the even-degree construction (P = 2u, binary form P^2 b^3 + c^3)."""
    P2 = P * P
    if u % 3:
        return [
            FormFamily.diagonal("f", P2, 1, 3, (1, 1)),
            FormFamily.diagonal("g", P2, 1, 3, (-1, 0)),
        ]
    # 3 | P forces q = c^3 mod 3, so c must be -1 mod 3 for q = 2 mod 3
    return [
        FormFamily.diagonal("f", P2, 1, 3, (1, -1)),
        FormFamily.diagonal("g", P2, 1, 3, (-1, -1)),
    ]


def deg4_families(P: int, u: int) -> list[FormFamily]:
    """Pair families for the degree-divisible-by-4 variant (binary form P b^3 + c^3)."""
    if u % 3 == 0:
        return [
            FormFamily.diagonal("f", P, 1, 3, (1, -1)),
            FormFamily.diagonal("g", P, 1, 3, (-1, -1)),
        ]
    s = -1 if u % 3 == 1 else 1
    return [
        FormFamily.diagonal("f", P, 1, 3, (s, 1)),
        FormFamily.diagonal("g", P, 1, 3, (-s, 0)),
    ]


def odd_families(P: int, p: int, iota: int) -> list[FormFamily]:
    """Pair families for odd degrees (binary form P^iota b^3 + c^3)."""
    Pi = P**iota
    if p == 3:
        return [
            FormFamily.diagonal("f", Pi, 1, P, (1, -1)),
            FormFamily.diagonal("g", Pi, 1, P, (-1, -1)),
        ]
    if iota == 2:
        return [
            FormFamily.diagonal("f", Pi, 1, 3 * P, (1, 1)),
            FormFamily.diagonal("g", Pi, 1, 3 * P, (-1, 3)),
        ]
    s = 1 if P % 3 == 1 else -1
    return [
        FormFamily.diagonal("f", Pi, 1, 3 * P, (s, 1)),
        FormFamily.diagonal("g", Pi, 1, 3 * P, (-s, 3)),
    ]


def norm_family_even(P: int, u: int) -> FormFamily:
    """Primes l = a^3 + P b^3 = N(a + b pi) with b odd, l = 2 mod 3."""
    if u % 3 and not any(q % 3 == 2 for q in arith.prime_divisors(u)):
        return FormFamily.diagonal("h", 1, P, 6, (1, -1))
    return FormFamily.diagonal("h", 1, P, 6, (-1, 3))


def norm_family_odd(P: int, p: int) -> FormFamily:
    """Primes l = a^3 + P b^3 with b prime to p (used with m = p - 1)."""
    if p == 3:
        return FormFamily.diagonal("h", 1, P, 3, (-1, 1))
    return FormFamily.diagonal("h", 1, P, 3 * p, (-1, 3))


def norm_family_pi_squared(P: int, p: int) -> FormFamily:
    """Primes l = a^3 + P^2 c^3 = N(a + c pi^2): norm representations with b = 0."""
    if p == 3:
        return FormFamily.diagonal("h", 1, P * P, 6, (-1, 1))
    return FormFamily.diagonal("h", 1, P * P, 3 * P, (1, 1))
