"""Dual graphs of (-2)-curves and the ambient lattice they generate.

A :class:`CurveConfig` is the data read off a picture: named curves, edges
with multiplicities, optional extra rational generators (half- or
third-classes that pair integrally with every curve) and named classes.
:func:`build_ambient` turns it into an :class:`AmbientModel`, a
non-degenerate integral lattice together with the map from curve
coefficients to ambient coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import _intlinalg as ila
from .exact_lattice import DivClass, GramLattice, pair

__all__ = [
    "ConfigError",
    "ClassSpec",
    "SequenceDecl",
    "CurveConfig",
    "AmbientModel",
    "curve_gram",
    "affine_null_vector",
    "build_ambient",
    "class_of",
]


class ConfigError(ValueError):
    """Invalid configuration data."""


@dataclass(frozen=True)
class ClassSpec:
    """A class over the curves: explicit coefficients, or a computed null vector.

    With ``null_support`` set, the class is the primitive non-negative null
    vector of the Gram matrix restricted to those curves (an affine Dynkin
    sub-diagram), divided by ``divide_by``.
    """

    coefficients: tuple[tuple[str, Fraction], ...] = ()
    null_support: tuple[str, ...] = ()
    divide_by: int = 1

    @classmethod
    def explicit(cls, coeffs: Mapping[str, object]) -> ClassSpec:
        return cls(coefficients=tuple((k, Fraction(v)) for k, v in coeffs.items()))

    @classmethod
    def null_vector(cls, support: Sequence[str], divide_by: int = 1) -> ClassSpec:
        return cls(null_support=tuple(support), divide_by=divide_by)


@dataclass(frozen=True)
class SequenceDecl:
    """A 10-sequence by names: each entry is (half-fiber name, tail prefix)."""

    entries: tuple[tuple[str, tuple[str, ...]], ...]


@dataclass(frozen=True)
class CurveConfig:
    name: str
    curves: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...] = ()
    extra_generators: Mapping[str, ClassSpec] = field(default_factory=dict)
    named_classes: Mapping[str, ClassSpec] = field(default_factory=dict)
    sequences: Mapping[str, SequenceDecl] = field(default_factory=dict)
    reference: str | None = None

    def __post_init__(self):
        if not self.curves:
            raise ConfigError("no curves")
        seen = set()
        for c in self.curves:
            if c in seen:
                raise ConfigError(f"duplicate curve name {c!r}")
            seen.add(c)
        pairs = set()
        for k, (a, b, m) in enumerate(self.edges):
            if a == b:
                raise ConfigError(f"edges[{k}]: self-loop on {a!r}")
            for v in (a, b):
                if v not in seen:
                    raise ConfigError(f"edges[{k}]: unknown curve {v!r}")
            if int(m) != m or m < 0:
                raise ConfigError(f"edges[{k}]: multiplicity must be a non-negative integer, got {m!r}")
            key = frozenset((a, b))
            if key in pairs:
                raise ConfigError(f"edges[{k}]: duplicate edge {a}--{b}")
            pairs.add(key)
        names = list(self.curves) + list(self.extra_generators) + list(self.named_classes)
        if len(set(names)) != len(names):
            raise ConfigError("class, generator and curve names must be distinct")
        for where, table in (("extra_generators", self.extra_generators), ("classes", self.named_classes)):
            for nm, spec in table.items():
                for c, _ in spec.coefficients:
                    if c not in seen:
                        raise ConfigError(f"{where}.{nm}: unknown curve {c!r}")
                for c in spec.null_support:
                    if c not in seen:
                        raise ConfigError(f"{where}.{nm}: unknown curve {c!r} in null_vector_of")
                if spec.divide_by <= 0:
                    raise ConfigError(f"{where}.{nm}: divide_by must be positive")

    @property
    def index(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.curves)}

    def multiplicity(self, a: str, b: str) -> int:
        for x, y, m in self.edges:
            if {x, y} == {a, b}:
                return int(m)
        return 0


def curve_gram(cfg: CurveConfig) -> GramLattice:
    """Gram matrix of the curves: -2 on the diagonal, edge multiplicities off it."""
    idx = cfg.index
    n = len(cfg.curves)
    g = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b, m in cfg.edges:
        g[idx[a]][idx[b]] = g[idx[b]][idx[a]] = int(m)
    return GramLattice(cfg.curves, g)


def affine_null_vector(cfg: CurveConfig, support: Sequence[str]) -> tuple[Fraction, ...]:
    """Primitive non-negative null vector of the sub-diagram on ``support``.

    The kernel of an affine Dynkin Gram matrix is one-dimensional with a
    strictly positive generator; anything else is rejected.
    """
    idx = cfg.index
    sub = [[cfg.multiplicity(a, b) if a != b else -2 for b in support] for a in support]
    ker = ila.integer_kernel(sub)
    if len(ker) != 1:
        raise ConfigError(f"sub-diagram {list(support)} has {len(ker)}-dimensional kernel, expected 1")
    v = ker[0]
    if all(x <= 0 for x in v):
        v = [-x for x in v]
    if any(x <= 0 for x in v):
        raise ConfigError(f"sub-diagram {list(support)} is not an affine diagram (kernel not positive)")
    g = ila.content(v)
    out = [Fraction(0)] * len(cfg.curves)
    for name, x in zip(support, v):
        out[idx[name]] = Fraction(x // g)
    return tuple(out)


def _resolve(cfg: CurveConfig, spec: ClassSpec) -> tuple[Fraction, ...]:
    if spec.null_support:
        base = affine_null_vector(cfg, spec.null_support)
    else:
        base = [Fraction(0)] * len(cfg.curves)
    idx = cfg.index
    base = list(base)
    for c, v in spec.coefficients:
        base[idx[c]] += v
    return tuple(x / spec.divide_by for x in base)


@dataclass(frozen=True)
class AmbientModel:
    """Saturated non-degenerate lattice spanned by curves and extra generators.

    ``embed`` is the rational matrix (rank x #curves) taking a coefficient
    vector over the curves to ambient coordinates.
    """

    config: CurveConfig
    lattice: GramLattice
    basis: tuple[tuple[Fraction, ...], ...]
    embed: tuple[tuple[Fraction, ...], ...]
    reference: DivClass | None = None

    def embed_coefficients(self, coeffs: Sequence) -> DivClass:
        if len(coeffs) != len(self.config.curves):
            raise ValueError("coefficient vector length must equal the number of curves")
        return DivClass(sum(e * Fraction(c) for e, c in zip(row, coeffs)) for row in self.embed)

    def curve(self, name: str) -> DivClass:
        i = self.config.index[name]
        return DivClass(row[i] for row in self.embed)

    def curve_classes(self) -> list[tuple[str, DivClass]]:
        return [(c, self.curve(c)) for c in self.config.curves]

    def coefficients_of(self, spec: ClassSpec) -> tuple[Fraction, ...]:
        return _resolve(self.config, spec)

    def curve_coordinates(self, cls: DivClass) -> dict[str, Fraction] | None:
        """Rational coefficients of ``cls`` over the curves, when the curves are independent."""
        a = [list(row) for row in self.embed]
        if ila.rank(a) != len(self.config.curves):
            return None
        x = ila.solve(a, list(cls.coords))
        return None if x is None else dict(zip(self.config.curves, x))

    def class_of(self, name: str) -> DivClass:
        cfg = self.config
        if name in cfg.index:
            return self.curve(name)
        for table in (cfg.extra_generators, cfg.named_classes):
            if name in table:
                return self.embed_coefficients(_resolve(cfg, table[name]))
        raise KeyError(f"unknown class name {name!r}")

    def combination(self, coeffs: Mapping[str, object]) -> DivClass:
        """Ambient class of a combination of declared names."""
        total = DivClass.zero(self.lattice.rank)
        for nm, c in coeffs.items():
            total = total + Fraction(c) * self.class_of(nm)
        return total

    def pair(self, x: DivClass, y: DivClass) -> Fraction:
        return pair(self.lattice, x, y)

    def with_reference(self, reference: DivClass) -> AmbientModel:
        return AmbientModel(self.config, self.lattice, self.basis, self.embed, reference)

    def names(self) -> list[str]:
        cfg = self.config
        return list(cfg.curves) + list(cfg.extra_generators) + list(cfg.named_classes)


def build_ambient(cfg: CurveConfig) -> AmbientModel:
    """Lattice generated by the curves and extra generators, modulo its radical."""
    gl = curve_gram(cfg)
    n = len(cfg.curves)
    gens = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    for nm, spec in cfg.extra_generators.items():
        v = _resolve(cfg, spec)
        for c, w in zip(cfg.curves, ila.matvec(gl.gram, v)):
            if w.denominator != 1:
                raise ConfigError(f"extra generator {nm!r} pairs non-integrally ({w}) with curve {c!r}")
        gens.append(v)
    for (na, a), (nb, b) in _pairs_of(list(cfg.extra_generators), gens[n:]):
        w = sum(x * y for x, y in zip(a, ila.matvec(gl.gram, b)))
        if w.denominator != 1:
            raise ConfigError(f"extra generators {na!r} and {nb!r} pair non-integrally ({w})")

    d = ila.common_denominator([x for g in gens for x in g])
    h, _, r = ila.hermite_rows([[int(x * d) for x in g] for g in gens])
    mbasis = [[Fraction(x, d) for x in row] for row in h[:r]]
    q = ila.matmul(ila.matmul(mbasis, gl.gram), ila.transpose(mbasis))
    if any(x.denominator != 1 for row in q for x in row):
        raise ConfigError("generated lattice is not integral")
    qi = [[int(x) for x in row] for row in q]

    if ila.bareiss_det(qi) != 0:
        amb = mbasis
    else:
        _, u, rq = ila.hermite_rows(qi)
        amb = ila.matmul(u[:rq], mbasis)

    gram = ila.matmul(ila.matmul(amb, gl.gram), ila.transpose(amb))
    gram_int = [[int(x) for x in row] for row in gram]
    if amb == [list(g) for g in gens[: len(amb)]] and len(amb) == n:
        names = list(cfg.curves)
    else:
        names = [f"b{k + 1}" for k in range(len(amb))]
    lat = GramLattice(names, gram_int)
    embed = ila.matmul(ila.inverse(gram), ila.matmul(amb, gl.gram))
    model = AmbientModel(
        config=cfg,
        lattice=lat,
        basis=tuple(tuple(row) for row in amb),
        embed=tuple(tuple(row) for row in embed),
    )
    for k, g in enumerate(gens):
        if not model.embed_coefficients(g).is_integral():
            raise ConfigError(f"generator {k} does not land in the ambient lattice")
    if cfg.reference is not None:
        model = model.with_reference(model.class_of(cfg.reference))
    return model


def _pairs_of(names, vecs):
    items = list(zip(names, vecs))
    for i in range(len(items)):
        for j in range(i, len(items)):
            yield items[i], items[j]


def class_of(cfg: CurveConfig, model: AmbientModel, name: str) -> DivClass:
    if model.config is not cfg and model.config != cfg:
        raise ValueError("model was not built from this configuration")
    return model.class_of(name)
