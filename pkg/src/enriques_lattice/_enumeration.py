"""Exact lattice reduction and Fincke-Pohst enumeration on definite forms.

The forms handled here are small (rank <= 10) positive definite integer Gram
matrices; all bounds are exact rationals.
"""
from __future__ import annotations

from fractions import Fraction
from math import floor
from typing import Iterator, Sequence

from . import _intlinalg as ila


def _gso(g: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[Fraction]]:
    k = len(g)
    mu = [[Fraction(0)] * k for _ in range(k)]
    b = [Fraction(0)] * k
    for i in range(k):
        for j in range(i):
            s = Fraction(g[i][j])
            for t in range(j):
                s -= mu[j][t] * mu[i][t] * b[t]
            mu[i][j] = s / b[j]
        s = Fraction(g[i][i])
        for t in range(i):
            s -= mu[i][t] ** 2 * b[t]
        b[i] = s
        if b[i] <= 0:
            raise ValueError("form is not positive definite")
    return mu, b


def lll_gram(q: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """LLL-reduce a positive definite Gram matrix.

    Returns the unimodular transform ``t`` (rows) so that ``t q t^T`` is the
    Gram matrix of a reduced basis.
    """
    k = len(q)
    t = ila.identity(k)
    if k <= 1:
        return t
    g = [list(map(int, r)) for r in q]

    def regram():
        return ila.matmul(ila.matmul(t, q), ila.transpose(t))

    i = 1
    while i < k:
        mu, b = _gso(g)
        for j in range(i - 1, -1, -1):
            r = round(mu[i][j])
            if r:
                t[i] = [x - r * y for x, y in zip(t[i], t[j])]
                for m in range(j + 1):
                    mu[i][m] -= r * (mu[j][m] if m < j else 1)
        g = regram()
        mu, b = _gso(g)
        if b[i] >= (delta - mu[i][i - 1] ** 2) * b[i - 1]:
            i += 1
        else:
            t[i], t[i - 1] = t[i - 1], t[i]
            g = regram()
            i = max(i - 1, 1)
    return t


def ldl(q: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """``q(y) = sum_i d_i (y_i + sum_{j>i} u_ij y_j)^2`` for positive definite q."""
    k = len(q)
    u = [[Fraction(0)] * k for _ in range(k)]
    d = [Fraction(0)] * k
    for i in range(k):
        s = Fraction(q[i][i])
        for m in range(i):
            s -= u[m][i] ** 2 * d[m]
        if s <= 0:
            raise ValueError("form is not positive definite")
        d[i] = s
        for j in range(i + 1, k):
            s = Fraction(q[i][j])
            for m in range(i):
                s -= u[m][i] * u[m][j] * d[m]
            u[i][j] = s / d[i]
    return u, d


def _window(center: Fraction, bound: Fraction) -> Iterator[int]:
    """Integers z with (z - center)^2 <= bound, in increasing order."""
    z = floor(center)
    lo = z
    while (lo - 1 - center) ** 2 <= bound:
        lo -= 1
    while (lo - center) ** 2 > bound and lo <= z + 1:
        lo += 1
    x = lo
    while (x - center) ** 2 <= bound:
        yield x
        x += 1


def close_vectors(q: Sequence[Sequence[int]], center: Sequence[Fraction], radius: Fraction,
                  exact: bool = True) -> list[tuple[int, ...]]:
    """All integer z with (z - center)^T q (z - center) == radius (or <= if not exact).

    Depth-first search over the triangular decomposition of ``q``; every
    comparison is exact.
    """
    k = len(q)
    radius = Fraction(radius)
    if radius < 0:
        return []
    if k == 0:
        return [()] if radius == 0 or not exact else []
    u, d = ldl(q)
    c = [Fraction(x) for x in center]
    out: list[tuple[int, ...]] = []
    z = [0] * k
    y = [Fraction(0)] * k

    def rec(i: int, rem: Fraction) -> None:
        s = sum((u[i][j] * y[j] for j in range(i + 1, k)), Fraction(0))
        ctr = c[i] - s
        for zi in _window(ctr, rem / d[i]):
            part = d[i] * (zi - ctr) ** 2
            z[i] = zi
            y[i] = zi - c[i]
            left = rem - part
            if i == 0:
                if not exact or left == 0:
                    out.append(tuple(z))
            else:
                rec(i - 1, left)

    rec(k - 1, radius)
    return out
