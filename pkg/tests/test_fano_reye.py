import pytest

from enriques_lattice.divisor_calculus import is_nef_against, negative_definite_witness, reference_ample
from enriques_lattice.curve_config import curve_gram
from enriques_lattice.exact_lattice import e10_standard, pair
from enriques_lattice.fano_reye import (
    HypothesisError,
    InvalidSequenceError,
    IsotropicSequence,
    check_E_membership,
    fano_from_sequence,
    hat_transform,
    pattern_check,
    pattern_square,
    reye_criterion,
    sequence_from_decl,
    special_triple_check,
    validate_sequence,
)
from enriques_lattice.standard_models import isotropic_basis, isotropic_ten_sequence, synthetic_special_triple

SECTION4 = ("E8_tilde", "D8_tilde", "E7_tilde")
E10 = e10_standard()


def seq_of(models, name):
    cfg, m = models[name]
    return cfg, m, sequence_from_decl(m, cfg.sequences["main"])


@pytest.fixture(scope="module")
def reports(models):
    return {n: fano_from_sequence(seq_of(models, n)[2], models[n][1]) for n in SECTION4}


def synthetic_seq():
    s = isotropic_ten_sequence(E10)
    return IsotropicSequence(s, tuple((f"F{i}", ()) for i in range(1, 11)), {f"F{i}": x for i, x in enumerate(s, 1)})


@pytest.mark.parametrize("name, c", [("E8_tilde", 1), ("D8_tilde", 2), ("E7_tilde", 2)])
def test_bundled_sequences_validate(models, name, c):
    _, m, seq = seq_of(models, name)
    v = validate_sequence(seq, m)
    assert v.valid and v.degeneracy == c and v.sum_square == 90


def test_swapped_entries_invalid(models):
    _, m, seq = seq_of(models, "E8_tilde")
    e = list(seq.entries)
    e[2], e[5] = e[5], e[2]
    bad = IsotropicSequence(tuple(e), seq.decomposition, seq.half_fibers)
    v = validate_sequence(bad, m)
    assert not v.valid
    assert any("entry 2" in msg for msg in v.violations)


def test_doubled_entry_rejected(models):
    _, m, seq = seq_of(models, "E8_tilde")
    e = list(seq.entries)
    e[3] = 2 * seq.half_fibers["F1"]
    bad = IsotropicSequence(tuple(e), seq.decomposition, seq.half_fibers)
    with pytest.raises(InvalidSequenceError):
        fano_from_sequence(bad, m)


def test_malformed_decomposition(models):
    _, m, seq = seq_of(models, "E8_tilde")
    with pytest.raises(ValueError):
        validate_sequence(IsotropicSequence(seq.entries[:3], seq.decomposition, seq.half_fibers), m)
    with pytest.raises(ValueError):
        validate_sequence(IsotropicSequence(seq.entries, (("Q", ()),) * 10, seq.half_fibers), m)


def test_fano_reports(reports):
    assert len(reports["E8_tilde"].tails["F1"]) == 9
    assert reports["E7_tilde"].tails == {"F1": ("R11", "R12", "R13", "R14", "R15", "R16", "R17"), "F2": ("R21",)}
    for rep in reports.values():
        assert rep.is_fano and rep.phi_value == 3 and rep.h_square == 10 and rep.tails_consistent


def test_orthogonal_curves_are_tail_curves(reports):
    for rep in reports.values():
        assert sorted(rep.orthogonal_curves) == sorted(r for t in rep.tails.values() for r in t)


def test_pattern_lemma_on_all_curves(models, reports):
    checked = 0
    for name in SECTION4:
        _, m, seq = seq_of(models, name)
        h = reports[name].H
        for nm, r in m.curve_classes():
            if m.pair(h, r) in (1, 2):
                res = pattern_check(h, r, seq, m)
                assert res.ok, (name, nm, res)
                checked += 1
    assert checked >= 3


def test_pattern_square_values():
    assert pattern_square([1, 1, 1] + [0] * 7) == -2
    assert pattern_square([3] + [0] * 9) == -8
    assert pattern_square([2, 1] + [0] * 8) == -4
    assert pattern_square([1] * 6 + [0] * 4) == -2


def test_pattern_rejects_orthogonal_curve(models, reports):
    _, m, seq = seq_of(models, "E8_tilde")
    with pytest.raises(ValueError):
        pattern_check(reports["E8_tilde"].H, m.curve("R11"), seq, m)


def test_nef_iff_full_tail(models, reports):
    for name in SECTION4:
        _, m, seq = seq_of(models, name)
        rep = reports[name]
        for (f, prefix), e in zip(seq.decomposition, seq.entries):
            assert is_nef_against(rep.H - e, m) == (len(prefix) == len(rep.tails[f]))


def test_E_membership(models, reports):
    _, m, seq = seq_of(models, "E8_tilde")
    h = reports["E8_tilde"].H
    assert check_E_membership(h, seq.entries[-1], m)
    with pytest.raises(ValueError):
        check_E_membership(h, m.curve("R11"), m)
    _, m7 = models["type_VII"]
    assert check_E_membership(m7.class_of("H1"), m7.class_of("F"), m7)
    e, f = E10.basis_vector("e"), E10.basis_vector("f")
    assert not check_E_membership(e + 4 * f, e, E10)


def test_reye_witnesses_negative_definite(models, reports):
    for name in SECTION4:
        cfg, m, seq = seq_of(models, name)
        rep = reports[name]
        m2 = m.with_reference(reference_ample(m, rep.H))
        for f, tail in rep.tails.items():
            res = reye_criterion(rep.H, seq.half_fibers[f], [m.curve(r) for r in tail], m2)
            if res.witness is not None:
                assert res.negative_definite
                assert negative_definite_witness(res.witness, curve_gram(cfg).gram) is None
                assert m.lattice.sum(k * m.curve(c) for k, c in zip(res.witness, cfg.curves)) == res.target


def test_reye_requires_full_tail(models, reports):
    _, m, seq = seq_of(models, "E8_tilde")
    with pytest.raises(ValueError, match="full tail"):
        reye_criterion(reports["E8_tilde"].H, seq.half_fibers["F1"], [m.curve("R11")], m)


def test_hat_transform_synthetic():
    seq = synthetic_seq()
    h = fano_from_sequence(seq, E10).H
    s = seq.entries
    res = hat_transform(h, [(s[0], []), (s[1], []), (s[2], [])], E10)
    assert res.h_hat_square == 10 and res.h_dot_hat == 11
    assert res.report.phi_value == 3
    assert res.h_hat == 2 * h - s[0] - s[1] - s[2]
    assert all(d == 3 for d in res.inherited_degrees)


def test_hat_transform_hypothesis_violation():
    seq = synthetic_seq()
    h = fano_from_sequence(seq, E10).H
    s = seq.entries
    core = h - s[0] - s[1] - s[2]
    with pytest.raises(HypothesisError):
        hat_transform(h, [(s[0], []), (s[1], []), (s[2], [])], E10, generators={"core": core})


def test_hat_identity_any_triple():
    seq = synthetic_seq()
    h = fano_from_sequence(seq, E10).H
    s = seq.entries
    for i, j, k in [(0, 1, 2), (3, 5, 9), (2, 4, 7)]:
        res = hat_transform(h, [(s[i], []), (s[j], []), (s[k], [])], E10)
        assert res.h_hat_square == 10 and res.h_dot_hat == 11


def test_special_triple_synthetic():
    f1, f2, f3, r = synthetic_special_triple()
    assert pair(E10, r, r) == -2
    res = special_triple_check(f1, f2, f3, E10, {"R": r})
    assert res.witness == (1,)
    assert special_triple_check(f1, f2, f3, E10, {}).witness is None


def test_special_triple_rejects_degenerate():
    f1, f2, _, _ = synthetic_special_triple()
    with pytest.raises(ValueError):
        special_triple_check(f1, f2, f2, E10, {})


def test_isotropic_basis_is_a_basis():
    from enriques_lattice import _intlinalg as ila
    b = [x.as_ints() for x in isotropic_basis()]
    assert abs(ila.bareiss_det(b)) == 1
    for i, x in enumerate(isotropic_basis()):
        for j, y in enumerate(isotropic_basis()):
            assert pair(E10, x, y) >= 0 and (i != j or pair(E10, x, y) == 0)
