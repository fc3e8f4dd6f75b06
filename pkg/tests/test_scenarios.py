import shutil
from pathlib import Path

import pytest

from enriques_lattice.config_io import bundled_path
from enriques_lattice.scenarios import SCENARIOS, run_all, run_scenario


@pytest.fixture(scope="module")
def aggregate():
    return run_all()


def test_all_scenarios_pass(aggregate):
    assert aggregate.passed and aggregate.exit_status == 0
    assert [r.name for r in aggregate.reports] == list(SCENARIOS)
    for r in aggregate.reports:
        assert r.structural and r.checks, r.name


def test_reports_carry_anchors(aggregate):
    anchored = [c for r in aggregate.reports for c in r.checks if c.anchor != "computed"]
    assert len(anchored) >= 20
    for c in anchored:
        assert c.anchor.split(":")[0] in {"figure", "statement", "definition"}


def test_unlabeled_coefficients_reported(aggregate):
    d8 = next(r for r in aggregate.reports if r.name == "D8_tilde")
    note = next(c for c in d8.checks if c.name == "unlabeled coefficient of N2")
    assert note.passed is None and note.computed == 0


def test_unknown_scenario():
    with pytest.raises(KeyError):
        run_scenario("nope")


def _copy_data(tmp_path: Path) -> Path:
    for n in ("E8_tilde", "D8_tilde", "E7_tilde", "type_VII"):
        shutil.copy(bundled_path(n), tmp_path / f"{n}.toml")
    return tmp_path


def test_deleted_edge_fails_structural_validation(tmp_path):
    d = _copy_data(tmp_path)
    p = d / "type_VII.toml"
    text = p.read_text()
    text = text.replace('  ["E1", "E2", 1],\n', "", 1)
    p.write_text(text)
    rep = run_scenario("typeVII_fano", d)
    assert not rep.passed
    assert rep.checks == ()
    assert any(c.passed is False for c in rep.structural)


def test_corrupted_file_reported_not_raised(tmp_path):
    d = _copy_data(tmp_path)
    (d / "E8_tilde.toml").write_text("curves = [\n")
    agg = run_all(d)
    assert agg.exit_status == 1
    bad = next(r for r in agg.reports if r.name == "E8_tilde")
    assert bad.error and "line" in bad.error
    assert all(r.passed for r in agg.reports if r.name != "E8_tilde")
