"""Lattices given by integer Gram matrices, and divisor classes living in them.

A :class:`GramLattice` is a free abelian group with a distinguished basis and an
integral symmetric bilinear form.  A :class:`DivClass` is a vector of exact
rational coordinates over that basis.  Classes do not carry a reference to
their lattice; every operation takes the lattice explicitly, so several
lattices (a curve span, its saturation, a standard model) can coexist.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from . import _intlinalg as ila

__all__ = [
    "DivClass",
    "GramLattice",
    "LatticeProfile",
    "pair",
    "lattice_profile",
    "signature",
    "determinant",
    "divide_in_lattice",
    "is_primitive",
    "hyperbolic_plane",
    "e8_negative",
    "e10_standard",
]


@dataclass(frozen=True)
class DivClass:
    """Exact rational coordinate vector over a lattice basis."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in coords))

    @classmethod
    def zero(cls, n: int) -> DivClass:
        return cls([0] * n)

    @classmethod
    def unit(cls, n: int, i: int) -> DivClass:
        return cls([1 if j == i else 0 for j in range(n)])

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other: DivClass) -> None:
        if len(other.coords) != len(self.coords):
            raise ValueError(f"dimension mismatch: {len(self.coords)} vs {len(other.coords)}")

    def __add__(self, other: DivClass) -> DivClass:
        self._check(other)
        return DivClass(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: DivClass) -> DivClass:
        self._check(other)
        return DivClass(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> DivClass:
        return DivClass(-a for a in self.coords)

    def __mul__(self, scalar) -> DivClass:
        s = Fraction(scalar)
        return DivClass(s * a for a in self.coords)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> DivClass:
        s = Fraction(scalar)
        return DivClass(a / s for a in self.coords)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coords)

    def as_ints(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise ValueError(f"class is not integral: {self}")
        return tuple(int(a) for a in self.coords)

    def __repr__(self) -> str:
        return "DivClass([" + ", ".join(str(a) for a in self.coords) + "])"


def _sum(classes: Iterable[DivClass], n: int) -> DivClass:
    total = DivClass.zero(n)
    for c in classes:
        total = total + c
    return total


@dataclass(frozen=True)
class GramLattice:
    """Integer symmetric bilinear form on Z^n with named basis vectors."""

    basis_names: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...] = field(repr=False)

    def __init__(self, basis_names: Sequence[str], gram: Sequence[Sequence[int]]):
        names = tuple(basis_names)
        rows = tuple(tuple(int(x) for x in row) for row in gram)
        if len(rows) != len(names) or any(len(r) != len(names) for r in rows):
            raise ValueError("gram dimensions must equal the number of basis names")
        if any(rows[i][j] != rows[j][i] for i in range(len(rows)) for j in range(i)):
            raise ValueError("gram matrix is not symmetric")
        if len(set(names)) != len(names):
            raise ValueError("duplicate basis names")
        object.__setattr__(self, "basis_names", names)
        object.__setattr__(self, "gram", rows)

    @property
    def rank(self) -> int:
        return len(self.basis_names)

    def basis_vector(self, i: int | str) -> DivClass:
        if isinstance(i, str):
            i = self.basis_names.index(i)
        return DivClass.unit(self.rank, i)

    def functional(self, x: DivClass) -> list[Fraction]:
        """Row vector ``x^T G``: pairing of ``x`` with each basis vector."""
        _check_len(self, x)
        return [sum(xi * g for xi, g in zip(x.coords, col)) for col in self.gram]

    def sum(self, classes: Iterable[DivClass]) -> DivClass:
        return _sum(classes, self.rank)


def _check_len(lat: GramLattice, x: DivClass) -> None:
    if len(x) != lat.rank:
        raise ValueError(f"dimension mismatch: class has {len(x)} coordinates, lattice rank is {lat.rank}")


def pair(lat: GramLattice, x: DivClass, y: DivClass) -> Fraction:
    """Intersection number ``x^T G y``."""
    _check_len(lat, x)
    _check_len(lat, y)
    total = Fraction(0)
    for i, xi in enumerate(x.coords):
        if xi:
            row = lat.gram[i]
            total += xi * sum(g * yj for g, yj in zip(row, y.coords) if g)
    return total


class LatticeProfile(NamedTuple):
    rank: int
    determinant: int
    signature: tuple[int, int, int]
    is_even: bool


def determinant(lat: GramLattice) -> int:
    return ila.bareiss_det(lat.gram)


def signature(gram: Sequence[Sequence]) -> tuple[int, int, int]:
    """(n_plus, n_zero, n_minus) by exact congruence diagonalisation."""
    a = ila.to_fraction_matrix(gram)
    active = list(range(len(a)))
    pos = zero = neg = 0
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            hit = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if hit is None:
                zero += len(active)
                break
            i, j = hit
            # e_i <- e_i + e_j makes the (i, i) entry 2 a_ij != 0
            for k in range(len(a)):
                a[i][k] += a[j][k]
            for k in range(len(a)):
                a[k][i] += a[k][j]
            continue
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        col = [a[k][piv] for k in range(len(a))]
        for j in active:
            if col[j]:
                f = col[j] / d
                for k in active:
                    a[j][k] -= f * col[k]
    return pos, zero, neg


def lattice_profile(lat: GramLattice) -> LatticeProfile:
    return LatticeProfile(
        rank=lat.rank,
        determinant=determinant(lat),
        signature=signature(lat.gram),
        is_even=all(lat.gram[i][i] % 2 == 0 for i in range(lat.rank)),
    )


def divide_in_lattice(lat: GramLattice, x: DivClass, n: int) -> DivClass | None:
    """``x / n`` if it is an integral class of ``lat``, else None."""
    _check_len(lat, x)
    if n == 0:
        raise ZeroDivisionError("cannot divide a class by 0")
    if not x.is_integral():
        raise ValueError("divide_in_lattice expects an integral class")
    q = x / n
    return q if q.is_integral() else None


def is_primitive(lat: GramLattice, x: DivClass) -> bool:
    _check_len(lat, x)
    if not x.is_integral():
        raise ValueError("is_primitive expects an integral class")
    if x.is_zero():
        raise ValueError("the zero class is neither primitive nor imprimitive")
    g = 0
    for c in x.as_ints():
        g = gcd(g, c)
    return g == 1


# -- standard models ---------------------------------------------------------

def hyperbolic_plane(names: Sequence[str] = ("e", "f")) -> GramLattice:
    return GramLattice(names, [[0, 1], [1, 0]])


# E8 Dynkin diagram, Bourbaki labelling: 1-3-4-5-6-7-8 with 2 attached to 4.
E8_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


def e8_negative(prefix: str = "a") -> GramLattice:
    """E8(-1) on simple roots: diagonal -2, +1 between adjacent roots."""
    g = [[-2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in E8_EDGES:
        g[i - 1][j - 1] = g[j - 1][i - 1] = 1
    return GramLattice([f"{prefix}{k}" for k in range(1, 9)], g)


def e10_standard() -> GramLattice:
    """U + E8(-1), basis (e, f, a1, ..., a8)."""
    e8 = e8_negative()
    g = [[0] * 10 for _ in range(10)]
    g[0][1] = g[1][0] = 1
    for i in range(8):
        for j in range(8):
            g[i + 2][j + 2] = e8.gram[i][j]
    return GramLattice(("e", "f") + e8.basis_names, g)
