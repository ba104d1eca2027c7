import json
from dataclasses import replace

import pytest

from skkcalc import corpus, tables
from skkcalc.tables import OddTableConfig, ParityTableConfig, TableBuilder, _runs_over_k


@pytest.fixture(scope="module")
def builder(bundle):
    return TableBuilder(bundle)


@pytest.mark.parametrize("preset", tables.PRESETS)
def test_matches_golden(builder, preset):
    assert tables.diff_against_golden(builder.build(preset), corpus.data_dir()) == []


@pytest.mark.parametrize("preset", tables.PRESETS)
def test_output_is_byte_stable(bundle, preset):
    a = tables.to_json(TableBuilder(bundle).build(preset))
    b = tables.to_json(TableBuilder(bundle).build(preset))
    assert a == b
    assert a.endswith("\n") and json.loads(a)["preset"] == preset


def test_unknown_preset(builder):
    with pytest.raises(ValueError):
        builder.build("nope")


def test_diff_reports_changes(builder, tmp_path):
    t = builder.build("pin-parity")
    (tmp_path / "golden").mkdir()
    (tmp_path / "golden" / "pin-parity.json").write_text(tables.to_json(t).replace("2Z", "3Z", 1))
    diff = tables.diff_against_golden(t, tmp_path)
    assert any(line.startswith("-") and "3Z" in line for line in diff)


def _row(table, name):
    return next(r for r in table["rows"] if r["structure"] == name)


def test_odd_table_cells(builder):
    t = builder.skk_odd()
    assert _row(t, "o")[tables.ISO] == "2 | (n+1)"
    so = _row(t, "so")
    assert so[tables.ISO] == "4 | (n+1)"
    spin = _row(t, "spin")
    assert spin[tables.ISO] == "8 | (n+1)"
    assert spin[tables.UNKNOWN] == "-"
    or4 = _row(t, "or4")
    assert or4[tables.UNKNOWN] == "32 | (n+1)"
    assert or4[tables.KERV] == "other odd n"
    pin_plus = _row(t, "pin+")
    assert pin_plus[tables.UNKNOWN] == "n ≡ 1 (mod 8)"
    assert "n=1" in pin_plus["note"]


def test_odd_categories_agree_with_engine(builder):
    for name in ("spin", "string", "or3", "bo8"):
        for n in range(1, 64, 2):
            v = builder.engine.verdict(name, n)
            cat = builder.odd_category(name, n)
            assert (cat == tables.UNKNOWN) == (v.split.kind == "unknown")


def test_smaller_range(builder):
    t = builder.skk_odd(OddTableConfig(max_dim=31))
    assert t["range"] == "odd n <= 31"
    assert _row(t, "or4")[tables.UNKNOWN] == "32 | (n+1)"


def test_parity_cells(builder):
    t = builder.pin_parity()
    rows = {r["dim"]: r for r in t["rows"]}
    assert rows["8k+4"]["so"] == "Z(CP^{4k+2})"
    assert rows["8k+2"]["pin+"] == "2Z for k=0,1; ? for k≥2"
    assert rows["odd"]["pin-"] == "0"
    small = builder.pin_parity(ParityTableConfig(max_k=1))
    assert {r["dim"]: r for r in small["rows"]}["8k+2"]["pin+"] == "2Z"


def test_runs_over_k():
    assert _runs_over_k(["a", "a"]) == "a"
    assert _runs_over_k(["a", "b", "b"]) == "a for k=0; b for k≥1"
    assert _runs_over_k(["a", "a", "b", "c"]) == "a for k=0,1; b for k=2; c for k≥3"


def test_physics_blue_cells(builder):
    t = builder.physics()
    assert len(t["rows"]) == 12
    bdi = _row(t, "pin-")
    assert bdi["class"] == "BDI"
    assert bdi["itqft_2"] == {"group": "C* x Z/4", "split": False}
    spin = _row(t, "spin")
    assert [spin[f"itqft_{n}"]["group"] for n in range(1, 6)] == ["Z/2 x Z/2", "C* x Z/2", "Z/2", "C*^2", "Z/2"]


def test_render_text(builder):
    text = tables.render_text(builder.physics())
    assert "[non-split]" in text
    assert text.splitlines()[0].startswith("structure")
    assert "BPin+" in tables.render_text(builder.pin_parity())


def test_tables_use_catalog_data(bundle):
    """Dropping a witness from the catalog changes the regenerated table."""
    weaker = bundle.replace(replace(bundle.get("so"), euler_parity=()))
    t = TableBuilder(weaker).pin_parity()
    assert {r["dim"]: r for r in t["rows"]}["8k+4"]["so"] != "Z(CP^{4k+2})"
