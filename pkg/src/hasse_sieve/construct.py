"""Build counterexample certificates for the even, odd and degree-4k variants.

Every choice is deterministic: pairs ``(b_j, c_j)`` come from the merged
prime families in shell order, ``l`` from its norm family, and
``(b0, c0, sign, k)`` from an ordered search.  By default the even and
degree-4k constructions also ask for a rational point on the hyperelliptic
quotient: ``c0`` a square for the even variant, ``b0`` a square for the
degree-4k variant.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import arith, primegen
from .certificate import (
    FAILED,
    Certificate,
    audit,
    expected_pair_count,
    nonresidue_quantity,
    inverse_sum,
    ledger_failures,
    q_of,
)
from .cubicfield import (
    FieldError,
    FundamentalUnit,
    PureCubicField,
    UndecidedError,
    class_number,
    fundamental_unit,
)
from .primegen import BudgetExhausted, FormFamily, GeneratedPrime

log = logging.getLogger(__name__)

K_MAX = 6
DEFAULT_SOLVE_BUDGET = 200_000
FAMILY_REP_RADIUS = 3_000


class ConstructionError(ValueError):
    """A hypothesis of the requested construction fails."""

    def __init__(self, message: str, hypothesis: str = ""):
        super().__init__(message)
        self.hypothesis = hypothesis


class B0C0(NamedTuple):
    b0: int
    c0: int
    sign: int
    k: int


def compute_iota(unit: FundamentalUnit | tuple[int, int, int], p: int) -> int:
    """2 if beta = 0 and gamma != 0 mod p, else 1."""
    _, beta, gamma = unit if isinstance(unit, tuple) else unit.element.coords
    return 2 if beta % p == 0 and gamma % p != 0 else 1


# --- the (b0, c0, +-3^k) step -------------------------------------------------------


def _k_range(P: int, k_max: int) -> range:
    # outside P = +-2, +-4 mod 9 the equation must hold with k = 0
    return range(0, k_max + 1) if P % 9 in (2, 4, 5, 7) else range(0, 1)


def _b0_ok(b0: int, c0: int, l: int, Q: int, residue: int) -> bool:
    return (
        b0 != 0
        and c0 != 0
        and (b0 - residue) % (3 * Q) == 0
        and math.gcd(l, c0) == 1
        and math.gcd(Q, b0 * c0) == 1
    )


def solve_b0_c0(
    P: int,
    iota: int,
    l: int,
    Q: int,
    variant: str,
    constraint: str | None = None,
    k_max: int = K_MAX,
    budget: int = DEFAULT_SOLVE_BUDGET,
) -> B0C0:
    """Smallest ``(b0, c0, sign, k)`` (by ``|b0|``, then ``k``) with
    ``P^iota b0 - l c0 = sign * 3^k``.

    ``b0`` is ``-1`` (even) or ``+1`` (deg4) mod ``3Q``.  ``constraint`` may be
    ``"c0_square"`` or ``"b0_square"``.  Raises ``BudgetExhausted`` when no
    solution has ``|b0|`` (or its square root) within ``budget``.
    """
    if variant not in ("even", "deg4"):
        raise ValueError("variant must be 'even' or 'deg4'")
    if math.gcd(l, 3 * P) != 1:
        raise ValueError("l must be prime to 3P")
    residue = -1 if variant == "even" else 1
    Pi = P**iota
    ks = _k_range(P, k_max)
    signs = (1, -1)

    if constraint is None:
        M = 3 * Q * l
        best = None
        for k in ks:
            for sign in signs:
                # b0 = sign 3^k / P^iota mod l and b0 = residue mod 3Q
                r_l = sign * 3**k * arith.mod_inverse(Pi, l) % l
                r = _crt(r_l, l, residue % (3 * Q), 3 * Q)
                for b0 in _by_abs(r, M, budget):
                    c0 = (Pi * b0 - sign * 3**k) // l
                    if _b0_ok(b0, c0, l, Q, residue):
                        cand = (abs(b0), k, -sign, B0C0(b0, c0, sign, k))
                        if best is None or cand[:3] < best[:3]:
                            best = cand
                        break
        if best is None:
            raise BudgetExhausted("no (b0, c0) within budget", budget)
        return best[3]

    if constraint == "c0_square":
        best = None
        slack = 3 ** max(ks)
        for t in range(1, budget + 1):
            c0 = t * t
            if best is not None and (l * c0 - slack) // Pi > best[0]:
                break
            for k in ks:
                for sign in signs:
                    num = l * c0 + sign * 3**k
                    if num % Pi:
                        continue
                    b0 = num // Pi
                    if _b0_ok(b0, c0, l, Q, residue):
                        cand = (abs(b0), k, -sign, B0C0(b0, c0, sign, k))
                        if best is None or cand[:3] < best[:3]:
                            best = cand
        if best is None:
            raise BudgetExhausted("no square c0 within budget", budget)
        return best[3]

    if constraint == "b0_square":
        for s in range(1, budget + 1):
            b0 = s * s
            if (b0 - residue) % (3 * Q):
                continue
            for k in ks:
                for sign in signs:
                    num = Pi * b0 - sign * 3**k
                    if num % l:
                        continue
                    c0 = num // l
                    if _b0_ok(b0, c0, l, Q, residue):
                        return B0C0(b0, c0, sign, k)
        raise BudgetExhausted("no square b0 within budget", budget)

    raise ValueError(f"unknown constraint {constraint!r}")


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    from sympy.ntheory.modular import crt

    return int(crt([m1, m2], [r1, r2])[0])


def _by_abs(r: int, M: int, budget: int) -> Iterable[int]:
    """Integers = r mod M in order of increasing absolute value."""
    r %= M
    lo, hi = r - M, r
    for _ in range(budget):
        if abs(hi) <= abs(lo):
            yield hi
            hi += M
        else:
            yield lo
            lo -= M


# --- choosing pairs and l -----------------------------------------------------------


def select_pairs(
    families: list[FormFamily],
    J: int,
    P: int,
    moduli: list[int],
    budget: int = primegen.DEFAULT_BUDGET,
) -> list[GeneratedPrime]:
    """First ``J - 1`` primes in merged shell order, then the first later one that
    makes ``sum b_j^{-1} c_j`` nonzero modulo every entry of ``moduli``."""
    if J == 0:
        return []
    if budget <= 0:
        raise BudgetExhausted("prime generation budget is zero", 0)
    chosen: list[GeneratedPrime] = []
    seen: set[int] = set()
    for g in primegen.merged_primes(families, budget):
        if g.q in seen or math.gcd(g.q, P) != 1:
            continue
        b, c = g.pair
        if any(b % q == 0 for q in moduli):
            continue
        if len(chosen) < J - 1:
            chosen.append(g)
            seen.add(g.q)
            continue
        pairs = [x.pair for x in chosen] + [(b, c)]
        if all(inverse_sum(pairs, q) != 0 for q in moduli):
            chosen.append(g)
            return chosen
    raise AssertionError("unreachable")


def family_representation(l: int, family: FormFamily, radius: int = FAMILY_REP_RADIUS) -> tuple[int, int] | None:
    """A pair ``(a, b)`` of the family's shifted shape with ``k3 a^3 + k0 b^3 = l``,
    searched over ``|b| <= radius``; None if there is none there."""
    k3, _, _, k0 = family.coeffs
    rho, (ga, gb) = family.rho, family.shift
    first = -radius + ((gb + radius) % rho)
    bs = np.arange(first, radius + 1, rho, dtype=np.float64)
    # floats only shortlist b whose cube root is near an integer; the check is exact
    roots = np.cbrt((l - k0 * bs**3) / k3)
    near = np.nonzero(np.abs(roots - np.rint(roots)) < 1e-3)[0]
    for i in near.tolist():
        b = int(bs[i])
        a = int(np.rint(roots[i]))
        for aa in (a - 1, a, a + 1):
            if k3 * aa**3 + k0 * b**3 == l and (aa - ga) % rho == 0:
                return aa, b
    return None


# --- field data and hypotheses --------------------------------------------------------


@dataclass(frozen=True)
class FieldData:
    field: PureCubicField
    unit: FundamentalUnit
    h: int | None
    assumptions: tuple[str, ...]


def _field_data(P: int, p: int, allow_assumed_class_number: int | None = None) -> FieldData:
    F = PureCubicField(P, p)
    unit = fundamental_unit(F)
    try:
        h = class_number(F, unit)
        assumptions: tuple[str, ...] = ()
    except UndecidedError as exc:
        if allow_assumed_class_number is None:
            raise ConstructionError(f"class number of Q({P}^(1/3)) is undecided: {exc}", "class_number") from exc
        h = allow_assumed_class_number
        assumptions = ("class_number",)
    return FieldData(F, unit, h, assumptions)


def _finish(cert: Certificate) -> Certificate:
    ledger = audit(cert)
    cert = cert.with_ledger(ledger)
    fails = [e for e in ledger if e.status == FAILED]
    if fails:
        raise ConstructionError("certificate rejected: " + "; ".join(ledger_failures(fails)),
                                fails[0].key)
    return cert


def _check_u(u: int):
    if u < 1 or u % 2 == 0 or not arith.is_squarefree(u):
        raise ConstructionError(f"u = {u} must be an odd squarefree positive integer", "u")
    if u % 9 in (4, 5):
        raise ConstructionError(f"u = {u} is +-4 mod 9, so P = 2u is +-1 mod 9", "u")


def construct_even(
    u: int,
    n: int,
    m: int = 3,
    *,
    quotient_point: bool = True,
    l: int | None = None,
    budget: int = primegen.DEFAULT_BUDGET,
    allow_assumed_class_number: int | None = None,
) -> Certificate:
    """Certificate for ``(X^3 + P^2 Y^3)(b0 X^3 + l c0 Y^3) prod(...) = l^m Z^n``, ``P = 2u``."""
    if n < 8 or n % 2:
        raise ConstructionError(f"n = {n} must be even and at least 8", "n")
    if m < 3 or m % 2 == 0 or m >= n:
        raise ConstructionError(f"m = {m} must be odd with 3 <= m < n", "m")
    _check_u(u)
    P = 2 * u
    fd = _field_data(P, 2, allow_assumed_class_number)
    alpha, beta, gamma = fd.unit.element.coords
    if beta % 2:
        raise ConstructionError(f"beta = {beta} of the fundamental unit is odd", "beta_even")
    if fd.h % 2 == 0:
        raise ConstructionError(f"class number {fd.h} is even", "class_number_odd")
    J = expected_pair_count("even", n)
    gens = select_pairs(primegen.even_families(P, u), J, P, [3], budget)
    pairs = [g.pair for g in gens]
    Q = q_of(P)
    fam = primegen.norm_family_even(P, u)
    forbid = P * math.prod(b * c for b, c in pairs) * 3

    def l_ok(g: GeneratedPrime) -> bool:
        return math.gcd(g.q, forbid) == 1 and g.q not in {x.q for x in gens}

    constraint = "c0_square" if quotient_point else None
    if l is not None:
        rep = family_representation(l, fam)
        if rep is None:
            raise ConstructionError(f"l = {l} has no representation in the family {fam.describe()}", "l")
        chosen_l, (a, b) = l, rep
        sol = solve_b0_c0(P, 2, chosen_l, Q, "even", constraint)
    else:
        sol = None
        for g in primegen.iter_family_primes(fam, budget):
            if not l_ok(g):
                continue
            try:
                sol = solve_b0_c0(P, 2, g.q, Q, "even", constraint)
            except BudgetExhausted:
                continue
            chosen_l, (a, b) = g.q, g.pair
            break
    cert = Certificate(
        variant="even", n=n, P=P, p=2, u=u, iota=2, nu=1, l=chosen_l, m=m, L=chosen_l**m,
        pairs=tuple(pairs), primes=tuple(g.q for g in gens), norm_rep=(a, b, 0),
        unit=(alpha, beta, gamma), class_number=fd.h, Q=Q, branch="linear-rep",
        b0=sol.b0, c0=sol.c0, sign=sol.sign, k=sol.k, assumptions=fd.assumptions,
    )
    return _finish(cert)


def construct_deg4(
    u: int,
    n: int,
    *,
    quotient_point: bool = True,
    l: int | None = None,
    budget: int = primegen.DEFAULT_BUDGET,
    k_max: int = K_MAX,
    allow_assumed_class_number: int | None = None,
) -> Certificate:
    """Certificate for ``(X^3 + P Y^3)(b0 X^3 + l c0 Y^3) prod(...) = l^2 Z^n`` with 4 | n."""
    if n < 8 or n % 4:
        raise ConstructionError(f"n = {n} must be a multiple of 4 and at least 8", "n")
    _check_u(u)
    P = 2 * u
    fd = _field_data(P, 2, allow_assumed_class_number)
    alpha, beta, gamma = fd.unit.element.coords
    if beta % 2 or gamma % 2:
        raise ConstructionError(f"beta = {beta}, gamma = {gamma} are not both even", "beta_gamma_even")
    if fd.h % 2 == 0:
        raise ConstructionError(f"class number {fd.h} is even", "class_number_odd")
    J = expected_pair_count("deg4", n)
    gens = select_pairs(primegen.deg4_families(P, u), J, P, [3], budget)
    pairs = [g.pair for g in gens]
    Q = q_of(P)
    fam = primegen.norm_family_even(P, u)
    forbid = 3 * P * math.prod(b * c for b, c in pairs)
    m = 2

    if l is not None:
        rep = family_representation(l, fam)
        if rep is None:
            raise ConstructionError(f"l = {l} has no representation in the family {fam.describe()}", "l")
        sol = solve_b0_c0(P, 1, l, Q, "deg4", "b0_square" if quotient_point else None, k_max)
        chosen_l, (a, b) = l, rep
    elif quotient_point:
        chosen_l, (a, b), sol = _deg4_square_search(P, Q, fam, forbid, {g.q for g in gens}, k_max, budget)
    else:
        sol = None
        for g in primegen.iter_family_primes(fam, budget):
            if math.gcd(g.q, forbid) != 1:
                continue
            sol = solve_b0_c0(P, 1, g.q, Q, "deg4", None, k_max)
            chosen_l, (a, b) = g.q, g.pair
            break
    cert = Certificate(
        variant="deg4", n=n, P=P, p=2, u=u, iota=1, nu=2, l=chosen_l, m=m, L=chosen_l**m,
        pairs=tuple(pairs), primes=tuple(g.q for g in gens), norm_rep=(a, b, 0),
        unit=(alpha, beta, gamma), class_number=fd.h, Q=Q, branch="square-rep",
        b0=sol.b0, c0=sol.c0, sign=sol.sign, k=sol.k, assumptions=fd.assumptions,
    )
    return _finish(cert)


def _deg4_square_search(P, Q, fam, forbid, exclude, k_max, budget):
    """Smallest square ``b0 = s^2`` such that ``P b0 - sign 3^k`` has a prime factor
    ``l`` from the norm family; ties by ``k``, then sign (+ first), then ``l``."""
    ks = _k_range(P, k_max)
    for s in range(1, budget + 1):
        b0 = s * s
        if (b0 - 1) % (3 * Q):
            continue
        for k in ks:
            for sign in (1, -1):
                N = P * b0 - sign * 3**k
                if N == 0:
                    continue
                for l in arith.prime_divisors(N):
                    if l % 3 != 2 or l == 2 or math.gcd(l, forbid) != 1 or l in exclude:
                        continue
                    c0 = N // l
                    if not _b0_ok(b0, c0, l, Q, 1):
                        continue
                    rep = family_representation(l, fam)
                    if rep is not None:
                        return l, rep, B0C0(b0, c0, sign, k)
    raise BudgetExhausted("no square b0 with a family prime l within budget", budget)


def choose_P(p: int) -> int:
    """``2p`` when it is admissible, else ``p``."""
    for P in (2 * p, p):
        if P % 9 not in (1, 8) and arith.is_squarefree(P):
            return P
    raise ConstructionError(f"neither 2p nor p is admissible for p = {p}", "P")


def construct_odd(
    p: int,
    n: int,
    *,
    P: int | None = None,
    budget: int = primegen.DEFAULT_BUDGET,
    allow_assumed_class_number: int | None = None,
) -> Certificate:
    """Certificate for ``(X^3 + P^iota Y^3) prod(...) = L Z^n`` with odd ``n`` divisible by ``p``."""
    if p < 3 or not arith.is_prime(p):
        raise ConstructionError(f"p = {p} must be an odd prime", "p")
    if n < 5 or n % 2 == 0 or n % p:
        raise ConstructionError(f"n = {n} must be odd, at least 5 and divisible by p = {p}", "n")
    J = expected_pair_count("odd", n)
    if P is None:
        P = choose_P(p)
        # with P even and J even the sum of J odd terms b_j^-1 c_j is even,
        # so the condition at 2 can never hold
        if P % 2 == 0 and J % 2 == 0 and p % 9 not in (1, 8):
            P = p
    elif P not in (p, 2 * p):
        raise ConstructionError(f"P = {P} must be p or 2p", "P")
    if P % 2 == 0 and J % 2 == 0:
        raise ConstructionError(
            f"P = {P} is even and n = {n} needs an even number {J} of pairs: "
            "the pair sum is always even", "parity")
    try:
        fd = _field_data(P, p, allow_assumed_class_number)
    except FieldError as exc:
        raise ConstructionError(str(exc), "P") from exc
    alpha, beta, gamma = fd.unit.element.coords
    iota = compute_iota(fd.unit, p)
    if math.gcd(fd.h, p) != 1:
        raise ConstructionError(f"class number {fd.h} is divisible by p = {p}", "class_number_prime_to_p")
    if beta % p == 0:
        branch = "linear-rep" if iota == 2 else "square-rep"
    else:
        branch = "nonresidue"
    moduli = sorted({3, p} | {q for q in arith.prime_divisors(P) if q % 3 == 2})
    gens = select_pairs(primegen.odd_families(P, p, iota), J, P, moduli, budget)
    pairs = [g.pair for g in gens]
    forbid = 2 * 3 * P * math.prod(b * c for b, c in pairs)

    if branch == "linear-rep":
        fam = primegen.norm_family_odd(P, p)
    else:
        fam = primegen.norm_family_pi_squared(P, p)

    chosen = None
    for g in primegen.iter_family_primes(fam, budget):
        if math.gcd(g.q, forbid) != 1 or g.q % 3 != 2 or g.q in {x.q for x in gens}:
            continue
        a, second = g.pair
        if branch == "linear-rep":
            rep, m = (a, second, 0), p - 1
            if math.gcd(m * second, p) != 1:
                continue
        elif branch == "square-rep":
            rep, m = (a, 0, second), p - 1
            if math.gcd(m * a * second, p) != 1:
                continue
        else:
            rep = (a, 0, second)
            m = next((mm for mm in range(2, p, 2)
                      if (qv := nonresidue_quantity((alpha, beta, gamma), a, second, mm, p)) is not None
                      and arith.legendre(qv, p) == -1), None)
            if m is None:
                continue
        chosen = (g.q, rep, m)
        break
    l, rep, m = chosen
    nu = 1
    cert = Certificate(
        variant="odd", n=n, P=P, p=p, u=P // p, iota=iota, nu=nu, l=l, m=m, L=l**m,
        pairs=tuple(pairs), primes=tuple(g.q for g in gens), norm_rep=rep,
        unit=(alpha, beta, gamma), class_number=fd.h, Q=q_of(P), branch=branch,
        assumptions=fd.assumptions,
    )
    return _finish(cert)


def construct(variant: str, **kwargs) -> Certificate:
    if variant == "even":
        return construct_even(**kwargs)
    if variant == "deg4":
        return construct_deg4(**kwargs)
    if variant == "odd":
        return construct_odd(**kwargs)
    raise ValueError(f"unknown variant {variant!r}")
