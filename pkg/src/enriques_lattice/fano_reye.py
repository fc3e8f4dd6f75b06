"""10-sequences, Fano polarizations, tails and the Reye effectivity test.

Conventions
-----------
All classes are numerical.  A half-fiber and its partner (twice either is
the same fiber) have the same numerical class, so the two are never
distinguished here.  "Effective" always means a non-negative integer
combination of an explicit, named generator set (by default the curves of
the configuration); every result that depends on it records the generator
names it used.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .curve_config import AmbientModel, SequenceDecl
from .divisor_calculus import (
    LatticeLike,
    ModelIntegrityError,
    _curves,
    _lattice,
    cone_membership,
    is_nef_against,
    negative_definite_witness,
    phi,
)
from .exact_lattice import DivClass, divide_in_lattice, is_primitive, pair

__all__ = [
    "InvalidSequenceError",
    "NotFanoError",
    "HypothesisError",
    "IsotropicSequence",
    "SequenceValidation",
    "FanoReport",
    "PatternResult",
    "ReyeResult",
    "HatResult",
    "TripleResult",
    "sequence_from_decl",
    "validate_sequence",
    "fano_report",
    "fano_from_sequence",
    "reconstruct_tails",
    "check_E_membership",
    "pattern_square",
    "pattern_check",
    "reye_criterion",
    "hat_transform",
    "special_triple_check",
]


class InvalidSequenceError(ValueError):
    def __init__(self, violations: Sequence[str]):
        self.violations = tuple(violations)
        super().__init__("invalid 10-sequence: " + "; ".join(self.violations))


class NotFanoError(ValueError):
    """The class is not a Fano polarization (square, nefness or Phi fails)."""


class HypothesisError(ValueError):
    """The input violates the hypothesis of the construction being applied."""


@dataclass(frozen=True)
class IsotropicSequence:
    """Ten classes ``E_k = F + R_1 + ... + R_j`` with their decomposition.

    ``decomposition[k]`` is ``(half-fiber name, tail prefix curve names)``;
    ``half_fibers`` maps each half-fiber name to its class.
    """

    entries: tuple[DivClass, ...]
    decomposition: tuple[tuple[str, tuple[str, ...]], ...]
    half_fibers: Mapping[str, DivClass]

    @property
    def degeneracy(self) -> int:
        return len({f for f, _ in self.decomposition})

    def full_tails(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, tuple[str, ...]] = {}
        for f, tail in self.decomposition:
            if len(tail) >= len(out.get(f, ())):
                out[f] = tuple(tail)
        return out

    def entry_sum(self) -> DivClass:
        total = DivClass.zero(len(self.entries[0]))
        for e in self.entries:
            total = total + e
        return total


def _curve_table(model: LatticeLike) -> dict[str, DivClass]:
    return dict(_curves(model))


def sequence_from_decl(model: AmbientModel, decl: SequenceDecl) -> IsotropicSequence:
    """Resolve a declared sequence (names only) into classes of ``model``."""
    entries, hfs = [], {}
    for f, tail in decl.entries:
        if f not in hfs:
            hfs[f] = model.class_of(f)
        e = hfs[f]
        for r in tail:
            e = e + model.curve(r)
        entries.append(e)
    return IsotropicSequence(tuple(entries), tuple((f, tuple(t)) for f, t in decl.entries), hfs)


@dataclass(frozen=True)
class SequenceValidation:
    valid: bool
    degeneracy: int
    violations: tuple[str, ...]
    sum_square: Fraction


def validate_sequence(seq: IsotropicSequence, model: LatticeLike) -> SequenceValidation:
    """Check every defining condition of a c-degenerate 10-sequence; list all failures."""
    lat = _lattice(model)
    curves = _curve_table(model)
    if len(seq.entries) != len(seq.decomposition):
        raise ValueError("entries and decomposition differ in length")
    for f, tail in seq.decomposition:
        if f not in seq.half_fibers:
            raise ValueError(f"decomposition names unknown half-fiber {f!r}")
        for r in tail:
            if r not in curves:
                raise ValueError(f"decomposition names unknown curve {r!r}")
    v: list[str] = []
    if len(seq.entries) != 10:
        v.append(f"expected 10 entries, got {len(seq.entries)}")
    for k, e in enumerate(seq.entries):
        if not e.is_integral():
            v.append(f"entry {k} is not integral")

    # entries vs decomposition
    for k, (e, (f, tail)) in enumerate(zip(seq.entries, seq.decomposition)):
        expect = seq.half_fibers[f]
        for r in tail:
            expect = expect + curves[r]
        if expect != e:
            v.append(f"entry {k} differs from {f} + {'+'.join(tail) or '0'}")

    n = len(seq.entries)
    for i in range(n):
        for j in range(i, n):
            want = 0 if i == j else 1
            got = pair(lat, seq.entries[i], seq.entries[j])
            if got != want:
                v.append(f"E{i + 1}.E{j + 1} = {got}, expected {want}")

    names = list(dict.fromkeys(f for f, _ in seq.decomposition))
    for a in names:
        fa = seq.half_fibers[a]
        if not fa.is_integral() or fa.is_zero():
            v.append(f"{a} is not a nonzero integral class")
            continue
        if pair(lat, fa, fa) != 0:
            v.append(f"{a} is not isotropic")
        if not is_primitive(lat, fa):
            v.append(f"{a} is not primitive")
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            got = pair(lat, seq.half_fibers[a], seq.half_fibers[b])
            if got != 1:
                v.append(f"{a}.{b} = {got}, expected 1")

    tails = seq.full_tails()
    for f in names:
        lengths = sorted(len(t) for g, t in seq.decomposition if g == f)
        if lengths != list(range(len(tails[f]) + 1)):
            v.append(f"entries of {f} are not the prefixes 0..{len(tails[f])} of its tail")
        for g, t in seq.decomposition:
            if g == f and tuple(t) != tails[f][: len(t)]:
                v.append(f"{'+'.join(t)} is not a prefix of the tail of {f}")

    flat = [(f, j, r) for f in names for j, r in enumerate(tails[f])]
    if len({r for _, _, r in flat}) != len(flat):
        v.append("a curve appears in two tail positions")
    for f in names:
        ff = seq.half_fibers[f]
        for g, j, r in flat:
            want = 1 if (g == f and j == 0) else 0
            got = pair(lat, ff, curves[r])
            if got != want:
                v.append(f"{f}.{r} = {got}, expected {want}")
    for x in range(len(flat)):
        for y in range(x + 1, len(flat)):
            f, j, r = flat[x]
            g, k, s = flat[y]
            want = 1 if (f == g and abs(j - k) == 1) else 0
            got = pair(lat, curves[r], curves[s])
            if got != want:
                v.append(f"{r}.{s} = {got}, expected {want}")

    total = seq.entry_sum()
    return SequenceValidation(not v, len(names), tuple(v), pair(lat, total, total))


# -- Fano polarizations ------------------------------------------------------------

@dataclass(frozen=True)
class FanoReport:
    H: DivClass
    h_square: Fraction
    phi_value: int
    phi_witness: DivClass
    is_nef: bool
    is_fano: bool
    tails: dict[str, tuple[str, ...]] = field(default_factory=dict)
    tails_consistent: bool | None = None
    orthogonal_curves: tuple[str, ...] = ()
    reye_witness: tuple[int, ...] | None = None


def fano_report(h: DivClass, model: LatticeLike) -> FanoReport:
    """Square, nefness and Phi of ``h``; raises :class:`NotFanoError` if it is not Fano."""
    lat = _lattice(model)
    h2 = pair(lat, h, h)
    if h2 != 10:
        raise NotFanoError(f"H^2 = {h2}, expected 10")
    nef = is_nef_against(h, model)
    if not nef:
        raise NotFanoError("H is not nef against the configuration")
    res = phi(h, model)
    if res.value != 3:
        raise NotFanoError(f"Phi(H) = {res.value}, expected 3")
    zero = tuple(nm for nm, r in _curves(model) if pair(lat, h, r) == 0)
    return FanoReport(h, h2, res.value, res.witness, nef, True, orthogonal_curves=zero)


def reconstruct_tails(h: DivClass, half_fibers: Mapping[str, DivClass],
                      model: LatticeLike) -> dict[str, tuple[str, ...]]:
    """Chains of H-orthogonal curves rooted at each half-fiber.

    The root is the unique H-orthogonal curve meeting F once; the chain then
    follows the unique unused H-orthogonal neighbour.  Branching or a
    missing root raises :class:`ModelIntegrityError`.
    """
    lat = _lattice(model)
    zero = [(nm, r) for nm, r in _curves(model) if pair(lat, h, r) == 0]
    out = {}
    for f, fc in half_fibers.items():
        roots = [(nm, r) for nm, r in zero if pair(lat, fc, r) != 0]
        if not roots:
            out[f] = ()
            continue
        if len(roots) != 1 or pair(lat, fc, roots[0][1]) != 1:
            raise ModelIntegrityError(f"{f}: tail root is not unique")
        chain = [roots[0]]
        used = {roots[0][0]}
        while True:
            nxt = [(nm, r) for nm, r in zero if nm not in used and pair(lat, chain[-1][1], r) == 1]
            if not nxt:
                break
            if len(nxt) > 1:
                raise ModelIntegrityError(f"{f}: tail branches at {chain[-1][0]}")
            chain.append(nxt[0])
            used.add(nxt[0][0])
        out[f] = tuple(nm for nm, _ in chain)
    return out


def fano_from_sequence(seq: IsotropicSequence, model: LatticeLike) -> FanoReport:
    """``H = (sum E_i)/3``, verified Fano, with tails rebuilt from scratch."""
    val = validate_sequence(seq, model)
    if not val.valid:
        raise InvalidSequenceError(val.violations)
    lat = _lattice(model)
    total = seq.entry_sum()
    h = divide_in_lattice(lat, total, 3)
    if h is None:
        raise InvalidSequenceError(["sum of the entries is not divisible by 3"])
    base = fano_report(h, model)
    hfs = {f: seq.half_fibers[f] for f in dict.fromkeys(f for f, _ in seq.decomposition)}
    tails = reconstruct_tails(h, hfs, model)
    declared = seq.full_tails()
    return FanoReport(
        h, base.h_square, base.phi_value, base.phi_witness, base.is_nef, base.is_fano,
        tails=tails,
        tails_consistent=tails == {f: declared[f] for f in hfs},
        orthogonal_curves=base.orthogonal_curves,
    )


def check_E_membership(h: DivClass, e: DivClass, model: LatticeLike) -> bool:
    """An isotropic effective class lies in the 10-sequence of ``h`` iff ``h.e == 3``."""
    lat = _lattice(model)
    if pair(lat, e, e) != 0:
        raise ValueError("E must be isotropic")
    return pair(lat, h, e) == 3


# -- the H.R = 1, 2 pattern --------------------------------------------------------

def pattern_square(v: Sequence[int]) -> Fraction:
    """Square of ``sum v_i (H/3 - E_i)``.

    The classes ``H/3 - E_i`` are dual to the ``E_i`` and pair to
    ``1/9 - delta_ij`` with each other, so the square is
    ``(sum v)^2 / 9 - sum v_i^2``.
    """
    s = sum(v)
    return Fraction(s * s, 9) - sum(x * x for x in v)


@dataclass(frozen=True)
class PatternResult:
    h_degree: int
    pattern: tuple[int, ...]
    expected: tuple[int, ...]
    square_from_pattern: Fraction
    ok: bool


def pattern_check(h: DivClass, r: DivClass, seq: IsotropicSequence, model: LatticeLike) -> PatternResult:
    lat = _lattice(model)
    hr = pair(lat, h, r)
    if hr not in (1, 2):
        raise ValueError(f"pattern check needs H.R in {{1, 2}}, got {hr}")
    v = tuple(int(pair(lat, r, e)) for e in seq.entries)
    srt = tuple(sorted(v, reverse=True))
    ones = 3 if hr == 1 else 6
    expected = (1,) * ones + (0,) * (len(v) - ones)
    sq = pattern_square(v)
    ok = srt == expected and sq == pair(lat, r, r) == -2
    return PatternResult(int(hr), srt, expected, sq, ok)


# -- Reye criterion ------------------------------------------------------------

@dataclass(frozen=True)
class ReyeResult:
    target: DivClass
    generator_names: tuple[str, ...]
    witness: tuple[int, ...] | None
    negative_definite: bool | None

    def named_witness(self) -> dict[str, int] | None:
        if self.witness is None:
            return None
        return dict(zip(self.generator_names, self.witness))


def _generators(model: LatticeLike, generators: Mapping[str, DivClass] | None) -> dict[str, DivClass]:
    return dict(generators) if generators is not None else _curve_table(model)


def reye_criterion(h: DivClass, f: DivClass, tail: Sequence[DivClass], model: LatticeLike,
                   generators: Mapping[str, DivClass] | None = None,
                   reference: DivClass | None = None) -> ReyeResult:
    """Decide whether ``H - 2(F + T)`` is a non-negative combination of the generators.

    ``T`` must be the full tail of ``F``, which is checked through nefness of
    ``H - (F + T)``.  A witness is also checked to be a negative definite
    divisor; failure of that check means the model is inconsistent.
    """
    lat = _lattice(model)
    e = f
    for r in tail:
        e = e + r
    if not is_nef_against(h - e, model):
        raise ValueError("T is not the full tail of F (H - (F + T) is not nef)")
    gens = _generators(model, generators)
    target = h - 2 * e
    ref = reference if reference is not None else getattr(model, "reference", None)
    w = cone_membership(target, list(gens.values()), model, ref)
    negdef = None
    if w is not None:
        gvals = list(gens.values())
        gram = [[int(pair(lat, x, y)) for y in gvals] for x in gvals]
        negdef = negative_definite_witness(w, gram) is None
        if not negdef:
            raise ModelIntegrityError("Reye witness is not a negative definite divisor")
    return ReyeResult(target, tuple(gens), w, negdef)


# -- the hat transform -------------------------------------------------------

@dataclass(frozen=True)
class HatResult:
    h_hat: DivClass
    h_hat_square: Fraction
    h_dot_hat: Fraction
    report: FanoReport
    inherited: tuple[DivClass, ...]
    inherited_degrees: tuple[Fraction, ...]
    generator_names: tuple[str, ...]


def hat_transform(h: DivClass, triple: Sequence[tuple[DivClass, Sequence[DivClass]]],
                  model: LatticeLike, generators: Mapping[str, DivClass] | None = None,
                  reference: DivClass | None = None) -> HatResult:
    """``2H - (F1+T1) - (F2+T2) - (F3+T3)`` and the three classes it inherits.

    ``triple`` holds ``(F_i, T_i)`` pairs.  Requires that ``H - F1 - F2 - F3``
    is not a non-negative combination of the generators; otherwise
    :class:`HypothesisError` is raised and ``H`` itself should be used.
    """
    lat = _lattice(model)
    if len(triple) != 3:
        raise ValueError("need exactly three (F, T) pairs")
    es, fs = [], []
    for f, tail in triple:
        e = f
        for r in tail:
            e = e + r
        if pair(lat, e, e) != 0 or pair(lat, h, e) != 3:
            raise ValueError("each F + T must be isotropic of H-degree 3")
        if not is_nef_against(h - e, model):
            raise ValueError("each T must be the full tail of its F")
        es.append(e)
        fs.append(f)
    for i in range(3):
        for j in range(i + 1, 3):
            if pair(lat, es[i], es[j]) != 1:
                raise ValueError("the three entries must pair to 1 with each other")
    gens = _generators(model, generators)
    ref = reference if reference is not None else getattr(model, "reference", None)
    core = h - fs[0] - fs[1] - fs[2]
    if gens and cone_membership(core, list(gens.values()), model, ref) is not None:
        raise HypothesisError("H - F1 - F2 - F3 is effective over the generators; keep H")
    hh = 2 * h - es[0] - es[1] - es[2]
    sq, hd = pair(lat, hh, hh), pair(lat, h, hh)
    if sq != 10 or hd != 11:
        raise ModelIntegrityError(f"hat class has square {sq} and H-degree {hd}, expected 10 and 11")
    rep = fano_report(hh, model)
    inh = tuple(h - es[j] - es[k] for j, k in ((1, 2), (0, 2), (0, 1)))
    degs = tuple(pair(lat, hh, c) for c in inh)
    for c, d in zip(inh, degs):
        if pair(lat, c, c) != 0 or d != 3:
            raise ModelIntegrityError("inherited class is not isotropic of degree 3")
    return HatResult(hh, sq, hd, rep, inh, degs, tuple(gens))


# -- special triples ---------------------------------------------------------

@dataclass(frozen=True)
class TripleResult:
    target: DivClass
    generator_names: tuple[str, ...]
    witness: tuple[int, ...] | None


def special_triple_check(f1: DivClass, f2: DivClass, f3: DivClass, model: LatticeLike,
                         generators: Mapping[str, DivClass] | None = None,
                         reference: DivClass | None = None) -> TripleResult:
    """Is ``F2 + F3 - F1`` a non-negative combination of the generators?"""
    lat = _lattice(model)
    fs = (f1, f2, f3)
    for i, a in enumerate(fs):
        if not a.is_integral() or a.is_zero() or pair(lat, a, a) != 0 or not is_primitive(lat, a):
            raise ValueError(f"F{i + 1} is not a primitive isotropic class")
        for j in range(i + 1, 3):
            if pair(lat, a, fs[j]) != 1:
                raise ValueError(f"F{i + 1}.F{j + 1} != 1")
    gens = _generators(model, generators)
    ref = reference if reference is not None else getattr(model, "reference", None)
    target = f2 + f3 - f1
    w = cone_membership(target, list(gens.values()), model, ref)
    return TripleResult(target, tuple(gens), w)
