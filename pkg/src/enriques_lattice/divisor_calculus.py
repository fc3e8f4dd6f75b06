"""Nefness, Weyl reduction, the Phi invariant, negative definiteness, effectivity.

Every routine here is exact.  "Nef" and "effective" are always relative to
the curves of a configuration (and, for effectivity, an explicit list of
generators); for the bundled surfaces the configuration lists every
(-2)-curve, which is what makes those notions meaningful.

Phi and isotropic vectors
-------------------------
For a big and nef class ``H`` the invariant ``Phi(H)`` is the least degree
``H.F`` of a half-fiber ``F``.  On an Enriques surface every primitive
isotropic class ``F`` with ``H.F > 0`` is effective, and the reducibility
lemma moves it by reflections in (-2)-curves to a nef isotropic class (a
multiple of a half-fiber) without increasing its ``H``-degree.  Hence
``Phi(H)`` equals the least ``t >= 1`` for which the lattice contains a
primitive ``F`` with ``F^2 = 0`` and ``H.F = t``; :func:`phi` computes that
lattice minimum.  Because ``Phi(H)^2 <= H^2`` the search stops at
``t = isqrt(H^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, ceil, gcd, isqrt
from typing import Iterator, Sequence, Union

from . import _intlinalg as ila
from ._enumeration import close_vectors, lll_gram
from .curve_config import AmbientModel
from .exact_lattice import DivClass, GramLattice, pair, signature

__all__ = [
    "ReductionError",
    "ModelIntegrityError",
    "ReductionTrace",
    "IsotropicSlice",
    "PhiResult",
    "is_nef_against",
    "negative_curves",
    "weyl_reduce",
    "reference_ample",
    "enumerate_isotropic_slice",
    "phi",
    "negative_definite_witness",
    "is_negative_definite_divisor",
    "iter_cone_solutions",
    "cone_membership",
]

LatticeLike = Union[AmbientModel, GramLattice]


class ReductionError(RuntimeError):
    """Weyl reduction failed to make progress (bad input or incomplete curve list)."""


class ModelIntegrityError(RuntimeError):
    """The lattice model contradicts a structural fact (e.g. no isotropic class found)."""


def _lattice(obj: LatticeLike) -> GramLattice:
    return obj.lattice if isinstance(obj, AmbientModel) else obj


def _curves(obj: LatticeLike) -> list[tuple[str, DivClass]]:
    return obj.curve_classes() if isinstance(obj, AmbientModel) else []


def _dot(func: Sequence[Fraction], x: DivClass) -> Fraction:
    return sum((a * b for a, b in zip(func, x.coords) if a and b), Fraction(0))


def negative_curves(d: DivClass, model: LatticeLike) -> list[tuple[str, Fraction]]:
    lat = _lattice(model)
    return [(nm, pair(lat, d, r)) for nm, r in _curves(model) if pair(lat, d, r) < 0]


def is_nef_against(d: DivClass, model: LatticeLike) -> bool:
    """True iff ``d`` pairs non-negatively with every curve of the configuration."""
    lat = _lattice(model)
    return all(pair(lat, d, r) >= 0 for _, r in _curves(model))


# -- Weyl reduction -------------------------------------------------------------

@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[tuple[str, Fraction], ...]
    multiplicities: dict[str, int]
    result: DivClass


def weyl_reduce(d: DivClass, model: AmbientModel, reference: DivClass | None = None,
                max_steps: int = 1_000_000) -> ReductionTrace:
    """Reflect ``d`` in curves it meets negatively until it is nef.

    At each step the curve with the most negative pairing is used (ties go to
    the first declared curve), and ``d`` becomes ``d + (d.R) R``.  With a
    reference class ``A`` pairing positively with all curves, ``d.A`` must
    strictly drop at each step and stay non-negative; otherwise
    :class:`ReductionError` is raised.
    """
    lat = model.lattice
    if not d.is_integral():
        raise ValueError("weyl_reduce expects an integral class")
    if pair(lat, d, d) < 0:
        raise ValueError("weyl_reduce needs a class of non-negative square")
    ref = reference if reference is not None else model.reference
    curves = model.curve_classes()
    funcs = [lat.functional(r) for _, r in curves]
    mult = {nm: 0 for nm, _ in curves}
    steps: list[tuple[str, Fraction]] = []
    cur = d
    last = pair(lat, cur, ref) if ref is not None else None
    if last is not None and not d.is_zero() and last <= 0:
        raise ValueError("class must pair positively with the reference class")
    while True:
        best = None
        for k, f in enumerate(funcs):
            v = _dot(f, cur)
            if v < 0 and (best is None or v < best[0]):
                best = (v, k)
        if best is None:
            break
        v, k = best
        nm, r = curves[k]
        cur = cur + v * r
        mult[nm] += int(-v)
        steps.append((nm, v))
        if ref is not None:
            now = pair(lat, cur, ref)
            if now >= last or now < 0:
                raise ReductionError(f"reference degree did not decrease at step {len(steps)} ({last} -> {now})")
            last = now
        if len(steps) > max_steps:
            raise ReductionError("step limit exceeded")
    return ReductionTrace(tuple(steps), mult, cur)


def reference_ample(model: AmbientModel, polarization: DivClass | None = None) -> DivClass:
    """An integral class pairing positively with every curve and of positive square.

    With a nef, big ``polarization`` H the class is ``k H - sum x_j R_j`` where
    the ``R_j`` are the curves orthogonal to ``H`` and ``x`` solves
    ``(-Gram) x = 1`` on them.  Without one, the linear system
    ``A.R = 1`` for all curves is solved directly.
    """
    lat = model.lattice
    curves = model.curve_classes()
    if polarization is None:
        rows = [lat.functional(r) for _, r in curves]
        a = ila.solve(rows, [1] * len(rows))
        if a is None:
            raise ValueError("A.R = 1 has no solution; pass a nef polarization")
        cand = DivClass(a)
        if pair(lat, cand, cand) <= 0:
            raise ValueError("solution of A.R = 1 is not of positive square; pass a nef polarization")
        return cand * ila.common_denominator(cand.coords)
    h = polarization
    hr = [pair(lat, h, r) for _, r in curves]
    if any(v < 0 for v in hr) or pair(lat, h, h) <= 0:
        raise ValueError("polarization must be nef and big")
    zero = [r for (_, r), v in zip(curves, hr) if v == 0]
    a0 = DivClass.zero(lat.rank)
    if zero:
        gz = [[pair(lat, x, y) for y in zero] for x in zero]
        if signature(gz) != (0, 0, len(zero)):
            raise ValueError("curves orthogonal to the polarization are not negative definite")
        x = ila.solve([[-v for v in row] for row in gz], [1] * len(zero))
        for xj, r in zip(x, zero):
            a0 = a0 - xj * r
    k = 1
    while True:
        cand = k * h + a0
        if all(pair(lat, cand, r) > 0 for _, r in curves) and pair(lat, cand, cand) > 0 \
                and pair(lat, cand, h) > 0:
            return cand * ila.common_denominator(cand.coords)
        k *= 2


# -- isotropic slices and Phi -------------------------------------------------

@dataclass(frozen=True)
class IsotropicSlice:
    degree: int
    classes: tuple[DivClass, ...]


def enumerate_isotropic_slice(h: DivClass, t: int, model: LatticeLike) -> IsotropicSlice:
    """All primitive integral F with F^2 = 0 and H.F = t, sorted by coordinates.

    The affine set {F : H.F = t} is ``F0 + K z`` with ``K`` a basis of the
    orthogonal complement of ``H`` (negative definite since ``H^2 > 0``).
    Completing the square turns ``F^2 = 0`` into ``(z - c)^T Q (z - c) = r``
    with ``Q = -K G K^T``; that is enumerated exactly after LLL on ``Q``.
    """
    lat = _lattice(model)
    if t <= 0:
        raise ValueError("degree t must be positive")
    h2 = pair(lat, h, h)
    if h2 <= 0:
        raise ValueError("H must have positive square")
    func = [int(x) for x in lat.functional(h)]
    g = ila.content(func)
    if t % g:
        return IsotropicSlice(t, ())
    _, u, _ = ila.hermite_rows([[x] for x in func])
    x0, kern = u[0], [list(r) for r in u[1:]]
    gram = lat.gram
    f0 = [(t // g) * x for x in x0]

    kg = ila.matmul(kern, gram)
    q = [[-v for v in row] for row in ila.matmul(kg, ila.transpose(kern))]
    tr = lll_gram(q)
    kern = ila.matmul(tr, kern)
    kg = ila.matmul(kern, gram)
    q = [[-v for v in row] for row in ila.matmul(kg, ila.transpose(kern))]

    b = ila.matvec(kg, f0)
    f0sq = sum(x * y for x, y in zip(f0, ila.matvec(gram, f0)))
    c = ila.matvec(ila.inverse(q), b)
    r = f0sq + sum(x * y for x, y in zip(b, c))

    found = set()
    for z in close_vectors(q, c, r):
        f = list(f0)
        for zk, row in zip(z, kern):
            if zk:
                f = [a + zk * w for a, w in zip(f, row)]
        gg = 0
        for a in f:
            gg = gcd(gg, a)
        if gg == 1:
            found.add(tuple(f))
    classes = tuple(DivClass(f) for f in sorted(found))
    for cl in classes:
        if pair(lat, cl, cl) != 0 or pair(lat, h, cl) != t:
            raise ModelIntegrityError("enumeration produced a class violating the slice equations")
    return IsotropicSlice(t, classes)


@dataclass(frozen=True)
class PhiResult:
    value: int
    witness: DivClass
    slice_sizes: dict[int, int] = field(default_factory=dict)


def phi(h: DivClass, model: LatticeLike, check_nef: bool = True) -> PhiResult:
    """Minimal H-degree of a primitive isotropic class (= Phi(H) on an Enriques surface)."""
    lat = _lattice(model)
    if not h.is_integral():
        raise ValueError("phi expects an integral class")
    h2 = pair(lat, h, h)
    if h2 <= 0:
        raise ValueError("phi needs H^2 > 0")
    if check_nef and not is_nef_against(h, model):
        raise ValueError("phi needs a nef class")
    bound = isqrt(int(h2))
    slices = {t: enumerate_isotropic_slice(h, t, lat) for t in range(1, bound + 1)}
    sizes = {t: len(s.classes) for t, s in slices.items()}
    nonempty = [t for t in slices if slices[t].classes]
    if not nonempty:
        raise ModelIntegrityError(f"no primitive isotropic class of degree <= {bound}")
    first = next(t for t in range(1, bound + 1) if slices[t].classes)
    value = min(nonempty)
    if first != value:
        raise ModelIntegrityError("slice minimum is inconsistent")
    return PhiResult(value, slices[value].classes[0], sizes)


# -- negative definite divisors ---------------------------------------------------

def _best_1d(a: int, b: int, c: int) -> int:
    """max of a x^2 + b x over integers 0 <= x <= c."""
    cands = {0, c}
    if a < 0:
        v = Fraction(-b, 2 * a)
        for x in (floor(v), ceil(v)):
            cands.add(min(max(x, 0), c))
    return max(a * x * x + b * x for x in cands)


def negative_definite_witness(coeffs: Sequence[int], gram: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """A sub-divisor 0 != a <= c with a^T G a >= 0, or None if c is negative definite.

    If the Gram matrix of the support is negative definite this returns None
    at once.  Otherwise a branch-and-bound over the box ``0 <= a <= c`` runs,
    pruning a node when a separable upper bound on the quadratic form over
    the remaining box is negative.
    """
    c = [int(x) for x in coeffs]
    if any(x < 0 for x in coeffs) or any(Fraction(x).denominator != 1 for x in coeffs):
        raise ValueError("coefficients must be non-negative integers")
    supp = [i for i, x in enumerate(c) if x > 0]
    if not supp:
        return None
    g = [[int(gram[i][j]) for j in supp] for i in supp]
    cap = [c[i] for i in supp]
    k = len(supp)
    if signature(g) == (0, 0, k):
        return None

    a = [0] * k
    lin = [0] * k  # sum over fixed i of g[l][i] * a[i]
    hit: list[tuple[int, ...]] = []

    def upper(j: int, qfix: int) -> int:
        tot = qfix
        for l in range(j, k):
            cross = sum(max(g[l][m], 0) * cap[m] for m in range(j, k) if m != l)
            tot += _best_1d(g[l][l], 2 * lin[l] + cross, cap[l])
        return tot

    def rec(j: int, qfix: int, nonzero: bool) -> bool:
        if j == k:
            if nonzero and qfix >= 0:
                hit.append(tuple(a))
                return True
            return False
        if nonzero and upper(j, qfix) < 0:
            return False
        for x in range(cap[j] + 1):
            a[j] = x
            q2 = qfix + g[j][j] * x * x + 2 * x * lin[j]
            if x:
                for l in range(j + 1, k):
                    lin[l] += g[l][j] * x
            found = rec(j + 1, q2, nonzero or x > 0)
            if x:
                for l in range(j + 1, k):
                    lin[l] -= g[l][j] * x
            if found:
                return True
        a[j] = 0
        return False

    if not rec(0, 0, False):
        return None
    full = [0] * len(c)
    for i, x in zip(supp, hit[0]):
        full[i] = x
    return tuple(full)


def is_negative_definite_divisor(coeffs: Sequence[int], model: AmbientModel | Sequence[Sequence[int]]) -> bool:
    """Every nonzero effective sub-divisor of ``sum c_i R_i`` has negative square.

    This is stronger than asking for the Gram matrix of the support to be
    negative definite only in one direction: a divisor can pass while its
    support spans a hyperbolic lattice.
    """
    if isinstance(model, AmbientModel):
        from .curve_config import curve_gram

        gram = curve_gram(model.config).gram
    else:
        gram = model
    return negative_definite_witness(coeffs, gram) is None


# -- effectivity over declared generators -----------------------------------------

def iter_cone_solutions(d: DivClass, generators: Sequence[DivClass], model: LatticeLike,
                        reference: DivClass | None = None) -> Iterator[tuple[int, ...]]:
    """All non-negative integer vectors ``a`` with ``sum a_k G_k = d``.

    Independent generators give a unique rational solution.  Otherwise the
    free coordinates of the solution space are searched depth-first under
    the budget ``A.d = sum a_k A.G_k`` for a reference class ``A`` that
    pairs positively with every generator.
    """
    lat = _lattice(model)
    m = len(generators)
    n = lat.rank
    if len(d) != n or any(len(gk) != n for gk in generators):
        raise ValueError("dimension mismatch")
    if m == 0:
        if d.is_zero():
            yield ()
        return
    aug = [[gk[i] for gk in generators] + [d[i]] for i in range(n)]
    red, piv = ila.rref(aug)
    if m in piv:
        return
    rows = {p: red[i] for i, p in enumerate(piv)}
    free = [k for k in range(m) if k not in rows]

    def finish(assign: dict[int, int]) -> tuple[int, ...] | None:
        sol = [0] * m
        for k, v in assign.items():
            sol[k] = v
        for p, row in rows.items():
            val = row[-1] - sum(row[f] * assign[f] for f in free)
            if val < 0 or val.denominator != 1:
                return None
            sol[p] = int(val)
        return tuple(sol)

    if not free:
        s = finish({})
        if s is not None:
            yield s
        return

    ref = reference if reference is not None else getattr(model, "reference", None)
    if ref is None:
        raise ValueError("dependent generators need a reference class to bound the search")
    w = [pair(lat, ref, gk) for gk in generators]
    if any(x <= 0 for x in w):
        raise ValueError("reference class must pair positively with every generator")
    budget = pair(lat, ref, d)
    if budget < 0:
        return
    assign: dict[int, int] = {}

    def rec(i: int, rem: Fraction):
        if i == len(free):
            s = finish(assign)
            if s is not None:
                yield s
            return
        k = free[i]
        for x in range(int(rem // w[k]) + 1):
            assign[k] = x
            yield from rec(i + 1, rem - x * w[k])
        del assign[k]

    yield from rec(0, budget)


def cone_membership(d: DivClass, generators: Sequence[DivClass], model: LatticeLike,
                    reference: DivClass | None = None) -> tuple[int, ...] | None:
    """First non-negative integer combination of ``generators`` equal to ``d``, or None."""
    return next(iter_cone_solutions(d, generators, model, reference), None)
