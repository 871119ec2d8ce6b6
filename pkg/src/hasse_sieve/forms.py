"""Binary and ternary integer forms.

A binary form of degree d is a tuple ``(a_0, ..., a_d)`` meaning
``sum a_i X^(d-i) Y^i``.  A ternary form is a dict mapping exponent triples
``(i, j, k)`` to nonzero integer coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

BinaryForm = tuple[int, ...]


def bmul(f: Sequence[int], g: Sequence[int]) -> BinaryForm:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return tuple(out)


def bprod(forms: Iterable[Sequence[int]]) -> BinaryForm:
    out: BinaryForm = (1,)
    for f in forms:
        out = bmul(out, f)
    return out


def beval(f: Sequence[int], x: int, y: int) -> int:
    """Evaluate a binary form at ``(x, y)``."""
    d = len(f) - 1
    total = 0
    xp, yp = [1] * (d + 1), [1] * (d + 1)
    for i in range(1, d + 1):
        xp[i] = xp[i - 1] * x
        yp[i] = yp[i - 1] * y
    for i, a in enumerate(f):
        if a:
            total += a * xp[d - i] * yp[i]
    return total


def bderiv_x(f: Sequence[int]) -> BinaryForm:
    d = len(f) - 1
    return tuple((d - i) * a for i, a in enumerate(f[:-1])) if d else (0,)


def bderiv_y(f: Sequence[int]) -> BinaryForm:
    d = len(f) - 1
    return tuple(i * a for i, a in enumerate(f) if i >= 1) if d else (0,)


def _det(M: list[list[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Sylvester resultant of two binary forms (as forms of their formal degrees)."""
    m, n = len(f) - 1, len(g) - 1
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (size - n - 1 - i))
    return _det(rows)


def discriminant(f: Sequence[int]) -> int:
    """Discriminant of a binary form; zero iff it has a repeated linear factor over C."""
    d = len(f) - 1
    if d <= 1:
        return 1 if any(f) else 0
    # Res(f_X, f_Y) = d^(d-2) * disc(f) up to sign; only vanishing matters to callers
    # that compare with zero, but return the true discriminant for reporting.
    r = resultant(bderiv_x(f), bderiv_y(f))
    q, rem = divmod(r, d ** (d - 2))
    if rem:
        raise ArithmeticError("unexpected non-divisibility in discriminant")
    return (-1) ** (d * (d - 1) // 2) * q


def bform_str(f: Sequence[int]) -> str:
    d = len(f) - 1
    parts = []
    for i, a in enumerate(f):
        if not a:
            continue
        mono = "".join(
            s for s in (_pow("X", d - i), _pow("Y", i)) if s
        )
        parts.append(f"{a}*{mono}" if mono else str(a))
    return " + ".join(parts) if parts else "0"


def _pow(v: str, e: int) -> str:
    return "" if e == 0 else v if e == 1 else f"{v}^{e}"


# --- ternary forms ------------------------------------------------------------------


Ternary = dict[tuple[int, int, int], int]


def ternary_from_binary(g: Sequence[int], L: int, n: int) -> Ternary:
    """``G(X, Y) - L Z^n`` as a ternary coefficient map."""
    d = len(g) - 1
    if d != n:
        raise ValueError("binary part must have degree n")
    out: Ternary = {}
    for i, a in enumerate(g):
        if a:
            out[(d - i, i, 0)] = a
    if L:
        out[(0, 0, n)] = out.get((0, 0, n), 0) - L
    return {k: v for k, v in out.items() if v}


def teval(F: Ternary, x: int, y: int, z: int) -> int:
    return sum(c * x**i * y**j * z**k for (i, j, k), c in F.items())


def tderiv(F: Ternary, var: int) -> Ternary:
    out: Ternary = {}
    for e, c in F.items():
        if e[var]:
            ne = list(e)
            ne[var] -= 1
            out[tuple(ne)] = out.get(tuple(ne), 0) + c * e[var]
    return out


def tdegree(F: Ternary) -> int:
    degs = {sum(e) for e in F}
    if len(degs) != 1:
        raise ValueError("form is not homogeneous")
    return degs.pop()


@dataclass(frozen=True)
class PlaneCurve:
    """The curve ``G(X, Y) = L Z^n`` with ``G`` recorded as a product of factors."""

    factors: tuple[BinaryForm, ...]
    L: int
    n: int
    label: str = field(default="", compare=False)

    def __post_init__(self):
        d = sum(len(f) - 1 for f in self.factors)
        if d != self.n:
            raise ValueError(f"factor degrees sum to {d}, expected n = {self.n}")

    @cached_property
    def binary_part(self) -> BinaryForm:
        return bprod(self.factors)

    @cached_property
    def coefficients(self) -> Ternary:
        return ternary_from_binary(self.binary_part, self.L, self.n)

    @property
    def degree(self) -> int:
        return self.n

    @property
    def genus(self) -> int:
        return (self.n - 1) * (self.n - 2) // 2

    def G(self, x: int, y: int) -> int:
        return beval(self.binary_part, x, y)

    def __call__(self, x: int, y: int, z: int) -> int:
        return self.G(x, y) - self.L * z**self.n

    def coefficient(self, i: int, j: int, k: int) -> int:
        return self.coefficients.get((i, j, k), 0)

    def reexpansion_ok(self) -> bool:
        """The dense coefficients agree with the recorded factorization.

        ``G(x, 1)`` has degree at most ``n`` in ``x``, so agreement at
        ``x = 0..n`` (plus the shape of the support) pins down every coefficient.
        """
        F = self.coefficients
        if any(e[2] not in (0, self.n) for e in F):
            return False
        if any(e[2] == self.n and e != (0, 0, self.n) for e in F):
            return False
        if F.get((0, 0, self.n), 0) != -self.L:
            return False
        for x in range(self.n + 1):
            direct = 1
            for f in self.factors:
                direct *= beval(f, x, 1)
            if teval(F, x, 1, 0) != direct:
                return False
        return True

    def describe(self) -> str:
        fs = " * ".join(f"({bform_str(f)})" for f in self.factors)
        return f"{fs} = {self.L}*Z^{self.n}"


def diagonal_cubic(a: int, b: int) -> BinaryForm:
    """``a X^3 + b Y^3``."""
    return (a, 0, 0, b)


def norm_quadratic(b: int, c: int) -> BinaryForm:
    """``b^2 X^2 + b c X Y + c^2 Y^2``."""
    return (b * b, b * c, c * c)
