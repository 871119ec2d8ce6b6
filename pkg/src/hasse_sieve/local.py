"""Solubility of ternary forms over the reals and over Q_q.

At a prime q the search runs over the three affine charts of P^2(Z_q)::

    A: (1, y, z)        y, z free
    B: (x, 1, z)        x = 0 mod q, z free
    C: (x, y, 1)        x, y = 0 mod q

A residue class mod q^t whose representative satisfies F = 0 mod q^t lifts
to a q-adic point as soon as some partial derivative in a free variable has
valuation w with 2w < t.  Classes that stop satisfying F = 0 are dropped.
The search either finds a liftable class, exhausts the tree (insoluble), or
hits its depth or node budget (undecided).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from . import arith
from .forms import (
    BinaryForm,
    PlaneCurve,
    Ternary,
    bderiv_x,
    bderiv_y,
    beval,
    discriminant,
    resultant,
    tdegree,
    tderiv,
    teval,
)

SOLUBLE, INSOLUBLE, UNDECIDED = "soluble", "insoluble", "undecided"
DEFAULT_EXTRA_DEPTH = 12
DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class LocalReport:
    """Verdict at one place.

    ``witness`` is an integer triple valid modulo ``q^precision`` for a
    p-adic place, or ``(x, y, z)`` with a float ``z`` for the real place.
    ``level`` is the exhausted tree depth for an insoluble verdict.
    """

    place: str | int
    verdict: str
    method: str
    witness: tuple | None = None
    precision: int | None = None
    level: int | None = None
    detail: str = ""


# --- form wrappers -------------------------------------------------------------------


class TernaryForm:
    """Generic ternary form given by a coefficient map."""

    def __init__(self, coeffs: Ternary):
        self.coeffs = {k: v for k, v in coeffs.items() if v}
        self.degree = tdegree(self.coeffs)
        self._grad = [tderiv(self.coeffs, i) for i in range(3)]

    def value(self, x: int, y: int, z: int) -> int:
        return teval(self.coeffs, x, y, z)

    def gradient(self, x: int, y: int, z: int) -> tuple[int, int, int]:
        return tuple(teval(g, x, y, z) for g in self._grad)

    def points_mod(self, q: int):
        """All points of P^2(F_q) on the reduction, first nonzero coordinate 1."""
        for y in range(q):
            for z in range(q):
                if self.value(1, y, z) % q == 0:
                    yield (1, y, z)
        for z in range(q):
            if self.value(0, 1, z) % q == 0:
                yield (0, 1, z)
        if self.value(0, 0, 1) % q == 0:
            yield (0, 0, 1)


class CurveForm:
    """``G(X, Y) - L Z^n`` with fast evaluation and F_q point enumeration."""

    def __init__(self, curve: PlaneCurve):
        self.curve = curve
        self.G = curve.binary_part
        self.Gx = bderiv_x(self.G)
        self.Gy = bderiv_y(self.G)
        self.L = curve.L
        self.n = curve.n
        self.degree = curve.n

    @cached_property
    def coeffs(self) -> Ternary:
        return self.curve.coefficients

    def value(self, x: int, y: int, z: int) -> int:
        return beval(self.G, x, y) - self.L * z**self.n

    def gradient(self, x: int, y: int, z: int) -> tuple[int, int, int]:
        n = self.n
        return (
            beval(self.Gx, x, y) if n > 1 else self.G[0],
            beval(self.Gy, x, y) if n > 1 else self.G[-1],
            -n * self.L * z ** (n - 1),
        )

    def g_mod(self, q: int) -> np.ndarray:
        """``G(x, 1) mod q`` for x = 0..q-1 followed by ``G(1, 0) mod q``."""
        xs = np.arange(q, dtype=np.int64)
        acc = np.zeros(q, dtype=np.int64)
        for a in self.G:
            acc = (acc * xs + (a % q)) % q
        return np.append(acc, self.G[0] % q)

    def points_mod(self, q: int):
        """F_q points of the reduction, lazily; table-driven for moderate ``q``."""
        Lq = self.L % q
        if q <= TABLE_LIMIT:
            vals = self.g_mod(q).tolist()
        else:
            vals = (beval(self.G, x, 1) % q if x < q else self.G[0] % q for x in range(q + 1))
        if Lq == 0:
            # F = G(x, y) mod q: every z over each root of G, z = 0 first
            for i, g in enumerate(vals):
                if g == 0:
                    x, y = (i, 1) if i < q else (1, 0)
                    for z in range(q):
                        yield _normalize((x, y, z), q)
            yield (0, 0, 1)
            return
        inv = pow(Lq, -1, q)
        nth = _nth_power_roots(self.n, q) if q <= TABLE_LIMIT else None
        for i, g in enumerate(vals):
            x, y = (i, 1) if i < q else (1, 0)
            r = g * inv % q
            if nth is not None:
                zs = nth.get(r, ())
            else:
                zs = _all_roots(r, self.n, q)
            for z in zs:
                yield _normalize((x, y, z), q)


TABLE_LIMIT = 200_000


def _all_roots(a: int, n: int, q: int) -> list[int]:
    z0 = arith.nth_root_mod(a, n, q)
    if z0 is None:
        return []
    if z0 == 0:
        return [0]
    d = math.gcd(n, q - 1)
    # the d-th roots of unity times one root
    g = 2
    while d > 1:
        zeta = pow(g, (q - 1) // d, q)
        if arith.multiplicative_order(zeta, q, q - 1) == d:
            break
        g += 1
    else:
        return [z0]
    return sorted({z0 * pow(zeta, k, q) % q for k in range(d)})


def _normalize(pt: tuple[int, int, int], q: int) -> tuple[int, int, int]:
    for c in pt:
        if c % q:
            inv = pow(c, -1, q)
            return tuple(v * inv % q for v in pt)
    raise ValueError("zero point")


_NTH_CACHE: dict[tuple[int, int], dict[int, list[int]]] = {}


def _nth_power_roots(n: int, q: int) -> dict[int, list[int]]:
    """Map residue -> all z mod q with z^n = residue (q moderate)."""
    key = (n, q)
    if key not in _NTH_CACHE:
        table: dict[int, list[int]] = {}
        zs = np.arange(q, dtype=np.int64)
        pw = np.ones(q, dtype=np.int64)
        for _ in range(n):
            pw = pw * zs % q
        for z, r in enumerate(pw.tolist()):
            table.setdefault(r, []).append(z)
        _NTH_CACHE[key] = table
    return _NTH_CACHE[key]


def as_form(obj) -> TernaryForm | CurveForm:
    if isinstance(obj, (TernaryForm, CurveForm)):
        return obj
    if isinstance(obj, PlaneCurve):
        return CurveForm(obj)
    if isinstance(obj, dict):
        return TernaryForm(obj)
    raise TypeError(f"cannot treat {type(obj).__name__} as a ternary form")


# --- q-adic tree search -------------------------------------------------------------


# chart -> (indices of free coordinates, indices restricted to q Z_q, fixed coordinate)
_CHARTS = {
    "A": ((1, 2), (), 0),
    "B": ((0, 2), (0,), 1),
    "C": ((0, 1), (0, 1), 2),
}


def _chart_of(pt: tuple[int, int, int], q: int) -> str:
    return "A" if pt[0] % q else ("B" if pt[1] % q else "C")


def _liftable(form, pt, t: int, q: int, free: Sequence[int]) -> bool:
    grad = form.gradient(*pt)
    for i in free:
        g = grad[i]
        if g == 0:
            continue
        if 2 * arith.valuation(g, q) < t:
            return True
    return False


@dataclass
class _Search:
    form: object
    q: int
    t_max: int
    node_budget: int
    nodes: int = 0
    hit_budget: bool = False
    deepest: int = 0

    def run(self, level_one):
        q = self.q
        # pass 1: a smooth F_q point lifts immediately
        singular = []
        for pt in level_one:
            free = _CHARTS[_chart_of(pt, q)][0]
            if _liftable(self.form, pt, 1, q, free) or self.form.value(*pt) == 0:
                return SOLUBLE, pt, 1
            singular.append(pt)
            if len(singular) > self.node_budget:
                self.hit_budget = True
                return UNDECIDED, None, 1
        level_one = singular
        # pass 2: descend below the singular ones
        for pt in level_one:
            res = self._descend(pt, 1)
            if res is not None:
                return SOLUBLE, res[0], res[1]
        if self.hit_budget:
            return UNDECIDED, None, self.deepest
        return INSOLUBLE, None, self.deepest

    def _descend(self, pt, t):
        """Children of the class ``pt mod q^t`` (which satisfies F = 0 mod q^t)."""
        q = self.q
        chart = _CHARTS[_chart_of(pt, q)]
        free = chart[0]
        if t >= self.t_max:
            self.hit_budget = True
            return None
        qt = q**t
        qt1 = qt * q
        self.deepest = max(self.deepest, t + 1)
        for digits in product(range(q), repeat=len(free)):
            self.nodes += 1
            if self.nodes > self.node_budget:
                self.hit_budget = True
                return None
            child = list(pt)
            for i, d in zip(free, digits):
                child[i] += d * qt
            child = tuple(child)
            if self.form.value(*child) % qt1:
                continue
            if _liftable(self.form, child, t + 1, q, free) or self.form.value(*child) == 0:
                return child, t + 1
            res = self._descend(child, t + 1)
            if res is not None:
                return res
        return None


def default_t_max(form, q: int, extra: int = DEFAULT_EXTRA_DEPTH) -> int:
    if isinstance(form, CurveForm):
        base = form.n * form.L * _disc_of_curve(form.curve)
        return 2 * (arith.valuation(base, q) if base else 0) + extra
    return extra + 2


def _disc_of_curve(curve: PlaneCurve) -> int:
    """Discriminant of G as a product of factor discriminants and squared resultants."""
    d = 1
    fs = curve.factors
    for i, f in enumerate(fs):
        d *= discriminant(f)
        for g in fs[i + 1:]:
            d *= resultant(f, g) ** 2
    return d


def tree_search(form, q: int, t_max: int | None = None, node_budget: int = DEFAULT_NODE_BUDGET) -> LocalReport:
    """Decide solubility at ``q`` by lifting residue classes (any ternary form)."""
    form = as_form(form)
    if t_max is None:
        t_max = default_t_max(form, q)
    level_one = form.points_mod(q)
    s = _Search(form, q, t_max, node_budget)
    verdict, wit, t = s.run(level_one)
    if verdict == SOLUBLE:
        if form.value(*wit) == 0:
            # a singular integer zero, e.g. on a non-reduced form
            return LocalReport(q, SOLUBLE, "exact-zero", wit, t, detail="integer zero of the form")
        return LocalReport(q, SOLUBLE, "hensel-lift", wit, t, detail=f"lifts from precision q^{t}")
    if verdict == INSOLUBLE:
        return LocalReport(q, INSOLUBLE, "tree-refutation", level=max(t, 1),
                           detail=f"every class dies by level {max(t, 1)}")
    return LocalReport(q, UNDECIDED, "tree-refutation", level=t,
                       detail=f"budget reached (t_max = {t_max}, nodes = {s.nodes})")


def witness_ok(form, q: int, witness: tuple[int, int, int], precision: int) -> bool:
    """Re-check a q-adic witness: F = 0 mod q^precision and a liftable gradient."""
    form = as_form(form)
    if all(c % q == 0 for c in witness):
        return False
    if form.value(*witness) == 0:
        return True
    if form.value(*witness) % q**precision:
        return False
    free = _CHARTS[_chart_of(witness, q)][0]
    return _liftable(form, witness, precision, q, free)


# --- curves of the shape G(X, Y) = L Z^n ---------------------------------------------


def bad_primes(curve: PlaneCurve) -> list[int]:
    """Primes dividing n, L, the factor discriminants, the pairwise resultants,
    or the extreme coefficients of G."""
    nums = [curve.n, curve.L, curve.binary_part[0], curve.binary_part[-1]]
    fs = curve.factors
    for i, f in enumerate(fs):
        nums.append(discriminant(f))
        nums.extend(f)
        for g in fs[i + 1:]:
            nums.append(resultant(f, g))
    out: set[int] = set()
    for v in nums:
        if v:
            out.update(arith.prime_divisors(v))
    return sorted(out)


def weil_threshold(n: int) -> int:
    g = (n - 1) * (n - 2) // 2
    return 4 * g * g


def check_good_prime(curve: PlaneCurve, q: int) -> LocalReport:
    """Scan P^1(F_q) for a point of the (smooth) reduction; any such point lifts."""
    form = CurveForm(curve)
    vals = form.g_mod(q)
    Lq = curve.L % q
    inv = pow(Lq, -1, q)
    nth = _nth_power_roots(curve.n, q)
    for i, g in enumerate(vals.tolist()):
        x, y = (i, 1) if i < q else (1, 0)
        zs = nth.get(g * inv % q)
        if zs:
            return LocalReport(q, SOLUBLE, "exhaustive-count", (x, y, zs[0]), 1,
                               detail="smooth F_q point")
    return LocalReport(q, INSOLUBLE, "exhaustive-count", level=1, detail="no F_q point on a smooth reduction")


def check_local_at(curve, q: int, t_max: int | None = None,
                   node_budget: int = DEFAULT_NODE_BUDGET) -> LocalReport:
    """Solubility over Q_q: a point scan at good primes, the lifting tree at bad ones."""
    if not arith.is_prime(q):
        raise ValueError(f"{q} is not prime")
    if isinstance(curve, PlaneCurve):
        if curve.L == 0:
            raise ValueError("L = 0 does not define a certificate curve")
        if q not in bad_primes(curve):
            return check_good_prime(curve, q)
    return tree_search(curve, q, t_max, node_budget)


def real_roots_exist(f: BinaryForm) -> bool:
    """Does the binary form vanish at some real point of P^1?"""
    import sympy

    if f[0] == 0:
        return True  # [1 : 0]
    x = sympy.symbols("x")
    d = len(f) - 1
    poly = sympy.Poly(sum(c * x ** (d - i) for i, c in enumerate(f)), x)
    return poly.count_roots() > 0


def check_real(curve: PlaneCurve) -> LocalReport:
    """Real solubility with a rational witness ``(x, y)`` and real ``z``."""
    if curve.L == 0:
        raise ValueError("L = 0 does not define a certificate curve")
    n, L = curve.n, curve.L
    if n % 2 == 1:
        z = _real_root(Fraction(curve.G(1, 0) or curve.G(0, 1), L), n)
        pt = (1, 0) if curve.G(1, 0) else (0, 1)
        return LocalReport("real", SOLUBLE, "odd-degree-sign", (pt[0], pt[1], z),
                           detail="odd degree: every real ratio is an n-th power")
    for x, y in _small_pairs(40):
        g = curve.G(x, y)
        if g != 0 and (g > 0) == (L > 0):
            z = _real_root(Fraction(g, L), n)
            return LocalReport("real", SOLUBLE, "odd-degree-sign", (x, y, z),
                               detail=f"sign G({x},{y}) = sign L")
    for f in curve.factors:
        if real_roots_exist(f):
            return LocalReport("real", SOLUBLE, "odd-degree-sign", None,
                               detail="G has a real root, giving a point with Z = 0")
    return LocalReport("real", INSOLUBLE, "odd-degree-sign",
                       detail="G has no real root and its sign differs from L")


def _small_pairs(r: int):
    yield (1, 0)
    yield (0, 1)
    for s in range(1, r + 1):
        for x in range(-s, s + 1):
            for y in (-s, s):
                if math.gcd(x, y) == 1:
                    yield (x, y)
                    yield (y, x)


def _real_root(v: Fraction, n: int) -> float:
    f = float(v)
    return math.copysign(abs(f) ** (1.0 / n), f)


@dataclass(frozen=True)
class LocalSummary:
    reports: tuple[LocalReport, ...]
    threshold: int
    bad: tuple[int, ...]

    @property
    def all_soluble(self) -> bool:
        return all(r.verdict == SOLUBLE for r in self.reports)

    @property
    def undecided(self) -> list[LocalReport]:
        return [r for r in self.reports if r.verdict == UNDECIDED]


def check_local_everywhere(curve: PlaneCurve, t_max_extra: int = DEFAULT_EXTRA_DEPTH,
                           node_budget: int = DEFAULT_NODE_BUDGET) -> LocalSummary:
    """Reports for the real place, every bad prime, every good prime up to 4g^2,
    and one Weil-bound report covering the remaining good primes."""
    reports = [check_real(curve)]
    bad = bad_primes(curve)
    form = CurveForm(curve)
    for q in bad:
        reports.append(tree_search(form, q, default_t_max(form, q, t_max_extra), node_budget))
    T = weil_threshold(curve.n)
    bad_set = set(bad)
    for q in arith.primes_up_to(T):
        if q not in bad_set:
            reports.append(check_good_prime(curve, q))
    g = curve.genus
    reports.append(LocalReport(f">{T}", SOLUBLE, "weil-bound",
                               detail=f"genus {g}: q + 1 - 2g sqrt(q) > 0 for good q > {T}"))
    return LocalSummary(tuple(reports), T, tuple(bad))
