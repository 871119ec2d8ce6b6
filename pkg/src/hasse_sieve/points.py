"""Bounded searches for rational points.

``search_points`` looks for primitive integer solutions of ``G(X, Y) = L Z^n``
with ``max(|X|, |Y|, |Z|) <= H``.  Pairs ``(X, Y)`` are filtered row by row
through residue tables: for a small prime ``s`` the pair survives only if
``G(X, Y) mod s`` lies in ``{L z^n mod s}``.  Survivors get an exact integer
root test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import arith
from .forms import PlaneCurve, bmul

SIEVE_PRIME_LIMIT = 200
MAX_DENSITY = 0.8


@dataclass(frozen=True)
class PointSearchReport:
    height: int
    points: tuple[tuple, ...]
    pairs_tested: int
    survivors: int
    sieve_primes: tuple[int, ...]

    @property
    def empty(self) -> bool:
        return not self.points


def _g_table(G, s: int) -> np.ndarray:
    """``G(x, y) mod s`` for all residues, as an s x s array."""
    xs = np.arange(s, dtype=np.int64)
    X = xs[:, None]
    Y = xs[None, :]
    d = len(G) - 1
    acc = np.zeros((s, s), dtype=np.int64)
    xp = [np.ones_like(X)]
    yp = [np.ones_like(Y)]
    for _ in range(d):
        xp.append(xp[-1] * X % s)
        yp.append(yp[-1] * Y % s)
    for i, a in enumerate(G):
        if a % s:
            acc = (acc + (a % s) * (xp[d - i] * yp[i] % s)) % s
    return acc


def _tables(G, L: int, n: int, square_mode: bool):
    """Boolean tables T_s[x mod s, y mod s] and their densities, sparsest first."""
    out = []
    for s in arith.primes_up_to(SIEVE_PRIME_LIMIT):
        zs = np.arange(s, dtype=np.int64)
        if square_mode:
            # G * L must be a square
            allowed = np.zeros(s, dtype=bool)
            allowed[zs * zs % s] = True
            vals = _g_table(G, s) * (L % s) % s
        else:
            pw = np.ones(s, dtype=np.int64)
            for _ in range(n):
                pw = pw * zs % s
            allowed = np.zeros(s, dtype=bool)
            allowed[(L % s) * pw % s] = True
            vals = _g_table(G, s)
        T = allowed[vals]
        dens = T.mean()
        if dens <= MAX_DENSITY:
            out.append((dens, s, T))
    out.sort(key=lambda t: (t[0], t[1]))
    return [(s, T) for _, s, T in out]


def _survivors(G, L: int, n: int, H: int, square_mode: bool):
    """Yield normalized pairs (X, Y), max(|X|,|Y|) <= H, passing every table."""
    tables = _tables(G, L, n, square_mode)
    ys = np.arange(-H, H + 1, dtype=np.int64)
    tested = 0
    kept = []
    for X in range(0, H + 1):
        cand = ys if X else ys[ys > 0]
        tested += len(cand)
        for s, T in tables:
            if not len(cand):
                break
            cand = cand[T[X % s, cand % s]]
        for Y in cand.tolist():
            if math.gcd(X, Y) == 1:
                kept.append((X, Y))
    return kept, tested, tuple(s for s, _ in tables)


def search_points(curve: PlaneCurve, H: int) -> PointSearchReport:
    """Primitive points with max(|X|, |Y|, |Z|) <= H, first nonzero coordinate positive.

    Points with ``X = Y = 0`` would need ``L Z^n = 0``, so they never occur
    when ``L != 0``.  Every point is re-verified exactly before it is reported.
    """
    if H < 0:
        raise ValueError("height bound must be nonnegative")
    G, L, n = curve.binary_part, curve.L, curve.n
    if L == 0:
        raise ValueError("L = 0 does not define a certificate curve")
    pairs, tested, primes = _survivors(G, L, n, H, square_mode=False)
    bound = L * H**n
    points = []
    for X, Y in pairs:
        g = curve.G(X, Y)
        if g == 0:
            points.append((X, Y, 0))
            continue
        if g % L or abs(g) > abs(bound):
            continue
        r = g // L
        zs: list[int] = []
        if n % 2:
            z = arith.signed_iroot(r, n)
            if z is not None:
                zs.append(z)
        elif r > 0:
            z, exact = arith.iroot(r, n)
            if exact:
                zs.extend([z, -z])
        for z in zs:
            if abs(z) <= H and math.gcd(math.gcd(X, Y), z) == 1 and curve(X, Y, z) == 0:
                points.append((X, Y, z))
    return PointSearchReport(H, tuple(sorted(set(points))), tested, len(pairs), primes)


@dataclass(frozen=True)
class QuotientCurve:
    """``G(X, Y) = L W^2`` with ``W = Z^(n/2)``; points carry a rational ``W``."""

    binary_part: tuple[int, ...]
    L: int
    n: int

    def describe(self) -> str:
        from .forms import bform_str

        return f"{bform_str(self.binary_part)} = {self.L}*W^2"


class NotApplicableError(ValueError):
    """The requested operation does not apply to this curve."""


def quotient_curve(curve: PlaneCurve) -> QuotientCurve:
    if curve.n % 2:
        raise NotApplicableError(f"no quotient W = Z^(n/2) for odd degree n = {curve.n}")
    return QuotientCurve(curve.binary_part, curve.L, curve.n)


def quotient_points(curve: PlaneCurve, H: int = 50) -> tuple[QuotientCurve, PointSearchReport]:
    """Rational points ``[X : Y : W]`` on the quotient with coprime ``|X|, |Y| <= H``.

    ``W = sqrt(G(X, Y) L) / L`` whenever ``G L`` is a perfect square.
    """
    Q = quotient_curve(curve)
    G, L = curve.binary_part, curve.L
    pairs, tested, primes = _survivors(G, L, 2, H, square_mode=True)
    points = []
    for X, Y in pairs:
        gl = curve.G(X, Y) * L
        if gl < 0:
            continue
        r, exact = arith.iroot(gl, 2)
        if exact:
            points.append((X, Y, Fraction(r, L)))
    return Q, PointSearchReport(H, tuple(points), tested, len(pairs), primes)


def on_quotient(curve: PlaneCurve, point: tuple) -> bool:
    X, Y, W = point
    return curve.G(X, Y) == curve.L * Fraction(W) ** 2
