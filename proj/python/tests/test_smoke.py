import json
import pathlib
import shutil

import pytest

import genpatch

ROOT = pathlib.Path(__file__).resolve().parents[2]
LISTINGS = ROOT / "data" / "listings"


@pytest.fixture
def listing():
    return (LISTINGS / "unsafe_dereference.cocci").read_text(), (LISTINGS / "get_age.c").read_text()


def test_reprint_is_identity():
    src = "int f(int a)\n{\n    /* keep */ return a  + 1;\n}\n"
    assert genpatch.reprint(src) == src


def test_listing_match_bindings(listing):
    pattern, source = listing
    sites = genpatch.match(pattern, source)
    assert len(sites) == 1
    b = sites[0]["bindings"]
    assert (b["fn"], b["param"], b["fld"]) == ("get_age", "pers", "age")
    assert genpatch.match_oracle(pattern, source) == sites


def test_listing_apply_then_reapply(listing):
    pattern, source = listing
    r = genpatch.apply(pattern, source, "get_age.c")
    added = [l for l in r["diff"].splitlines() if l.startswith("+") and not l.startswith("+++")]
    assert any("pers == NULL" in l for l in added)
    assert genpatch.match(pattern, r["after"]) == []


def test_pattern_render_is_stable(listing):
    pattern, _ = listing
    once = genpatch.render_pattern(pattern)
    assert genpatch.render_pattern(once) == once


def test_bad_pattern_raises_with_kind():
    with pytest.raises(genpatch.GenpatchError) as info:
        genpatch.render_pattern("not a pattern")
    assert info.value.kind == "syntax"


def test_edit_script_round_trip():
    script = genpatch.edit_script("void f(void) { foo(a); }\n", "void f(void) { foo(a, 0); }\n")
    assert script.startswith("INS")
    assert genpatch.reserialize_script(script) == script


def test_npc():
    assert genpatch.npc(["nonsensical", "in-plausible", "plausible"]) == (2, 1)
    assert genpatch.npc(["nonsensical"]) == (None, None)


def test_toy_pipeline(tmp_path):
    corpus = tmp_path / "corpus"
    shutil.copytree(ROOT / "data" / "toy_corpus", corpus)
    cfg = json.loads((corpus / "config.json").read_text())
    cfg["out"] = str(tmp_path / "out")
    (corpus / "config.json").write_text(json.dumps(cfg))
    mined = genpatch.mine(str(corpus / "config.json"))
    assert mined["hunks"] > 0
    stats = genpatch.cluster(mined["out"])
    assert stats["clusters"] >= 1
    db = str(tmp_path / "db")
    inferred = genpatch.infer(mined["out"], db, 60.0, 1)
    assert inferred["patches"] >= 1
    assert "patterns" in genpatch.stats(mined["out"], db)
