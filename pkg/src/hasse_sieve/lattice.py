"""Small-dimensional lattice helpers: LLL, ellipsoid enumeration, HNF.

Lattice vectors are arbitrary exact objects; the caller supplies their real
embeddings.  Reduction and enumeration run in floating point, and every
result is re-checked exactly by the caller, so floats here only steer the
search and never decide an answer.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

Vector = Sequence[float]


def _dot(u: Vector, v: Vector) -> float:
    return sum(a * b for a, b in zip(u, v))


def _gram_schmidt(vs: list[list[float]]):
    k = len(vs)
    mu = [[0.0] * k for _ in range(k)]
    bstar: list[list[float]] = []
    B: list[float] = []
    for i in range(k):
        w = list(vs[i])
        for j in range(i):
            mu[i][j] = _dot(vs[i], bstar[j]) / B[j] if B[j] else 0.0
            w = [a - mu[i][j] * b for a, b in zip(w, bstar[j])]
        bstar.append(w)
        B.append(_dot(w, w))
    return mu, B


def lll(
    basis: list,
    embed: Callable[[object], list[float]],
    combine: Callable[[object, int, object], object],
    delta: float = 0.99,
) -> list:
    """LLL-reduce ``basis``.

    ``embed(v)`` gives the real coordinates of an exact vector and
    ``combine(u, k, v)`` returns ``u - k*v`` exactly.
    """
    basis = list(basis)
    vecs = [embed(b) for b in basis]
    n = len(basis)
    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 10_000:
            break
        mu, B = _gram_schmidt(vecs)
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                basis[k] = combine(basis[k], q, basis[j])
                vecs[k] = embed(basis[k])
                mu, B = _gram_schmidt(vecs)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            vecs[k], vecs[k - 1] = vecs[k - 1], vecs[k]
            k = max(k - 1, 1)
    return basis


def enumerate_ellipsoid(vecs: list[list[float]], radius_sq: float) -> list[tuple[int, ...]]:
    """All nonzero integer coefficient tuples ``x`` with ``|sum x_i v_i|^2 <= radius_sq``.

    Only one of ``x`` and ``-x`` is returned.  Fincke-Pohst over the
    Gram-Schmidt data of ``vecs`` (which should already be reduced).
    """
    n = len(vecs)
    mu, B = _gram_schmidt([list(v) for v in vecs])
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def rec(i: int, remaining: float):
        c = -sum(mu[j][i] * x[j] for j in range(i + 1, n))
        if B[i] <= 0:
            return
        r = math.sqrt(max(remaining, 0.0) / B[i])
        lo, hi = math.ceil(c - r - 1e-9), math.floor(c + r + 1e-9)
        for xi in range(lo, hi + 1):
            x[i] = xi
            rem = remaining - (xi - c) ** 2 * B[i]
            if rem < -1e-9 * radius_sq - 1e-12:
                continue
            if i == 0:
                out.append(tuple(x))
            else:
                rec(i - 1, rem)
        x[i] = 0

    rec(n - 1, radius_sq)
    seen = set()
    res = []
    for t in out:
        if not any(t):
            continue
        neg = tuple(-a for a in t)
        if neg in seen:
            continue
        seen.add(t)
        res.append(t)
    return res


def hnf(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Row-style Hermite normal form of a full-rank integer row lattice.

    Returns ``ncols`` rows forming an upper-triangular basis with positive
    diagonal and reduced entries above it.
    """
    A = [list(r) for r in rows if any(r)]
    result: list[list[int]] = []
    for col in range(ncols):
        # Euclid on column `col` among remaining rows.
        while True:
            nz = [r for r in A if r[col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for j in range(ncols):
                    r[j] -= q * piv[j]
            A = [r for r in A if any(r)]
        nz = [r for r in A if r[col] != 0]
        if not nz:
            raise ValueError("lattice is not of full rank")
        piv = nz[0]
        if piv[col] < 0:
            piv[:] = [-a for a in piv]
        A = [r for r in A if r is not piv]
        result.append(piv)
    # Reduce entries above the diagonal.
    for i in range(ncols):
        for k in range(i):
            q = result[k][i] // result[i][i]
            if q:
                result[k] = [a - q * b for a, b in zip(result[k], result[i])]
    return result
