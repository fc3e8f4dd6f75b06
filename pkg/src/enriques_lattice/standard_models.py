"""Explicit isotropic configurations inside the standard model U + E8(-1)."""
from __future__ import annotations

from .exact_lattice import DivClass, GramLattice, e10_standard, pair

__all__ = ["highest_root", "isotropic_ten_sequence", "isotropic_basis", "synthetic_special_triple"]

# Coefficients of the highest root of E8 on the Bourbaki simple roots.
_THETA = (2, 3, 4, 6, 5, 4, 3, 2)


def _vec(e: int = 0, f: int = 0, roots=(0,) * 8) -> DivClass:
    return DivClass((e, f) + tuple(roots))


def highest_root() -> DivClass:
    return _vec(roots=_THETA)


def _simple(i: int) -> DivClass:
    return _vec(roots=tuple(int(k == i - 1) for k in range(8)))


def isotropic_ten_sequence(lat: GramLattice | None = None) -> tuple[DivClass, ...]:
    """Ten isotropic classes with pairwise products 1 (no curves, trivial tails).

    ``f1 = e``, ``f2 = f`` and ``f_{k+2} = e + f + p_k`` where ``p_k`` is the
    sum of the first ``k`` roots of the chain ``a1, a3, ..., a8, -theta`` in
    the extended E8 diagram; each ``p_k`` is a root, and consecutive chain
    roots meet once.
    """
    lat = lat or e10_standard()
    chain = [_simple(i) for i in (1, 3, 4, 5, 6, 7, 8)] + [-highest_root()]
    out = [_vec(e=1), _vec(f=1)]
    p = DivClass.zero(10)
    for b in chain:
        p = p + b
        out.append(_vec(1, 1) + p)
    for i, x in enumerate(out):
        for j, y in enumerate(out):
            if pair(lat, x, y) != (0 if i == j else 1):
                raise AssertionError("isotropic ten-sequence construction is inconsistent")
    return tuple(out)


def isotropic_basis() -> tuple[DivClass, ...]:
    """A Z-basis ``e, f, e+f+a1, ..., e+f+a8`` of isotropic classes with pairwise products >= 0."""
    return (_vec(e=1), _vec(f=1)) + tuple(_vec(1, 1) + _simple(i) for i in range(1, 9))


def synthetic_special_triple() -> tuple[DivClass, DivClass, DivClass, DivClass]:
    """``(F1, F2, F3, R)`` from the ten-sequence with ``R = F2 + F3 - F1`` a root."""
    seq = isotropic_ten_sequence()
    f1, f2, f3 = seq[0], seq[1], seq[2]
    return f1, f2, f3, f2 + f3 - f1
