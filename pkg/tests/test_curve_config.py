import pytest

from enriques_lattice.curve_config import (
    ClassSpec,
    ConfigError,
    CurveConfig,
    affine_null_vector,
    build_ambient,
    class_of,
    curve_gram,
)
from enriques_lattice.exact_lattice import is_primitive, lattice_profile

E10 = (10, -1, (1, 0, 9), True)


def profile(model):
    p = lattice_profile(model.lattice)
    return (p.rank, p.determinant, p.signature, p.is_even)


def test_two_curves_simple_edge():
    cfg = CurveConfig("pair", ("A", "B"), (("A", "B", 1),))
    assert curve_gram(cfg).gram == ((-2, 1), (1, -2))


def test_double_edges_in_bundled_data(models):
    cfg, _ = models["E7_tilde"]
    g = curve_gram(cfg)
    i, j = cfg.index["N3"], cfg.index["R21"]
    assert g.gram[i][j] == 2
    cfg, _ = models["type_VII"]
    g = curve_gram(cfg)
    ks = [cfg.index[f"K{n}"] for n in range(1, 6)]
    assert all(g.gram[a][b] == 2 for a in ks for b in ks if a != b)


@pytest.mark.parametrize("curves, edges, msg", [
    ((), (), "no curves"),
    (("A", "A"), (), "duplicate"),
    (("A",), (("A", "A", 1),), "self-loop"),
    (("A",), (("A", "B", 1),), "unknown curve"),
    (("A", "B"), (("A", "B", -1),), "multiplicity"),
])
def test_invalid_configs(curves, edges, msg):
    with pytest.raises(ConfigError, match=msg):
        CurveConfig("bad", curves, edges)


def test_single_curve_ambient():
    m = build_ambient(CurveConfig("one", ("R",)))
    assert m.lattice.gram == ((-2,),)
    assert profile(m) == (1, -2, (0, 0, 1), True)


@pytest.mark.parametrize("name", ["E8_tilde", "D8_tilde", "E7_tilde", "type_VII"])
def test_bundled_ambients_are_e10_and_preserve_pairings(models, name):
    cfg, m = models[name]
    assert profile(m) == E10
    g = curve_gram(cfg).gram
    cl = m.curve_classes()
    for i, (_, x) in enumerate(cl):
        assert x.is_integral()
        for j, (_, y) in enumerate(cl):
            assert m.pair(x, y) == g[i][j]
    for nm in cfg.extra_generators:
        assert m.class_of(nm).is_integral()


def test_curve_span_ranks(models):
    from enriques_lattice import _intlinalg as ila
    for name in ("E8_tilde", "D8_tilde", "E7_tilde", "type_VII"):
        cfg, _ = models[name]
        assert ila.rank(curve_gram(cfg).gram) == 10


def test_saturation_idempotent(models):
    cfg, m = models["type_VII"]
    again = CurveConfig(cfg.name, cfg.curves, cfg.edges,
                        {**cfg.extra_generators, "again": ClassSpec.explicit({"E1": "1/2", "E2": "1/2", "E9": "1/2",
                                                                              "E10": "1/2", "E12": "1/2"})},
                        cfg.named_classes)
    m2 = build_ambient(again)
    assert profile(m2) == profile(m)
    cfg, m = models["E8_tilde"]
    m3 = build_ambient(CurveConfig(cfg.name, cfg.curves, cfg.edges, {"F1": cfg.named_classes["F1"]}))
    assert m3.lattice == m.lattice


def test_d8_needs_half_fiber_generator(models):
    cfg, _ = models["D8_tilde"]
    bare = build_ambient(CurveConfig(cfg.name, cfg.curves, cfg.edges))
    assert lattice_profile(bare.lattice).determinant == -4


def test_e7_curves_have_a_kernel(models):
    cfg, m = models["E7_tilde"]
    assert m.lattice.rank == 10
    diff = m.class_of("F1") - m.curve("N3") - m.curve("R21")
    assert diff.is_zero()


def test_non_integral_generator_rejected():
    cfg = CurveConfig("bad", ("A", "B"), (("A", "B", 1),),
                      {"h": ClassSpec.explicit({"A": "1/2"})})
    with pytest.raises(ConfigError, match="non-integrally"):
        build_ambient(cfg)


def test_null_vector_checks():
    cfg = CurveConfig("chain", ("A", "B", "C"), (("A", "B", 1), ("B", "C", 1)))
    with pytest.raises(ConfigError):
        affine_null_vector(cfg, ["A", "B"])
    cyc = CurveConfig("cycle", ("A", "B", "C"), (("A", "B", 1), ("B", "C", 1), ("A", "C", 1)))
    assert affine_null_vector(cyc, ["A", "B", "C"]) == (1, 1, 1)


def test_class_of(models):
    cfg, m = models["type_VII"]
    assert m.pair(class_of(cfg, m, "E1"), class_of(cfg, m, "E1")) == -2
    assert class_of(cfg, m, "H1").is_integral()
    f = class_of(cfg, m, "F")
    assert f.is_integral() and is_primitive(m.lattice, f)
    with pytest.raises(KeyError):
        class_of(cfg, m, "nope")
    cfg8, m8 = models["E8_tilde"]
    assert m8.pair(m8.curve("R11"), m8.curve("R11")) == -2


def test_half_fiber_multiplicities_forced(models):
    cfg, m = models["E8_tilde"]
    coeffs = dict(zip(cfg.curves, m.coefficients_of(cfg.named_classes["F1"])))
    assert coeffs == {"R11": 0, "R12": 1, "R13": 2, "R14": 3, "R15": 4, "R16": 5, "R17": 6, "R18": 4,
                      "R19": 2, "N1": 3}


@pytest.mark.parametrize("name", ["E8_tilde", "D8_tilde"])
def test_curve_coordinates_round_trip(models, name):
    cfg, m = models[name]
    for nm in list(cfg.named_classes) + list(cfg.extra_generators):
        x = m.curve_coordinates(m.class_of(nm))
        assert m.embed_coefficients([x[c] for c in cfg.curves]) == m.class_of(nm)


def test_curve_coordinates_dependent_curves(models):
    cfg, m = models["E7_tilde"]
    assert len(cfg.curves) > m.lattice.rank
    assert m.curve_coordinates(m.class_of("F1")) is None
