import json

import pytest
from importlib import resources

from tml.errors import ParseError
from tml.fields import FiniteField, Poly
from tml.linalg import Mat
from tml.manifest import (load_manifest, manifest_to_text, parse_manifest,
                          poly_from_text)
from tml.tmodule import carlitz_tensor


def _packaged(name):
    return (resources.files("tml") / "manifests" / name).read_text(
        encoding="utf-8")


def test_packaged_example_builds_tensor_square():
    manifest = parse_manifest(_packaged("prop3.tml"))
    mod = manifest.modules["Cten2"]
    assert mod.phi_t == carlitz_tensor(manifest.tower, 2).phi_t
    assert set(manifest.subgroups) == {"Axis"}
    assert set(manifest.points) == {"origin"}
    assert manifest.polys["tsq"] == Poly(manifest.field, (0, 0, 1))
    assert manifest.point_modules["origin"] == "Cten2"


def test_packaged_root_twist_builds_tower():
    manifest = parse_manifest(_packaged("root_twist.tml"))
    assert manifest.tower.names() == ("U",)
    u = manifest.tower.gen()
    assert u * u == manifest.tower.T()
    assert set(manifest.modules) == {"RootPair"}
    assert set(manifest.subgroups) == {"Squares"}
    pt = manifest.points["Seed"]
    assert manifest.subgroups["Squares"].contains(pt)


def test_printer_is_fixed_point_on_both_examples():
    for name in ("prop3.tml", "root_twist.tml"):
        manifest = parse_manifest(_packaged(name))
        text = manifest_to_text(manifest)
        again = parse_manifest(text)
        assert manifest_to_text(again) == text


def test_printer_round_trip_preserves_content():
    manifest = parse_manifest(_packaged("prop3.tml"))
    again = parse_manifest(manifest_to_text(manifest))
    assert again.modules["Cten2"].phi_t == manifest.modules["Cten2"].phi_t
    assert again.points["origin"] == manifest.points["origin"]
    assert again.polys == manifest.polys


def test_expression_grammar(f2):
    t = Poly.gen(f2)
    one = Poly.one(f2)
    assert poly_from_text(f2, "T^3 + T + 1") == t ** 3 + t + one
    assert poly_from_text(f2, "(T + 1) * (T + 1)") == t * t + one
    assert poly_from_text(f2, "0 - T") == t
    assert poly_from_text(f2, "2") == Poly.zero(f2)


def test_grammar_has_no_unary_minus(f2):
    with pytest.raises(ParseError):
        poly_from_text(f2, "-T")


def test_caret_error_reports_column(f2):
    with pytest.raises(ParseError) as info:
        poly_from_text(f2, "T^")
    assert info.value.col == 2
    with pytest.raises(ParseError):
        poly_from_text(f2, "T^T")


def test_unknown_name_rejected(f2):
    with pytest.raises(ParseError):
        poly_from_text(f2, "T + X")


def test_poly_section_rejects_denominator():
    base = _packaged("prop3.tml")
    parse_manifest(base + "\n[poly ok]\nexpr = T * T + (1)\n")
    with pytest.raises(ParseError) as info:
        parse_manifest(base + "\n[poly bad]\nexpr = 1 / T\n")
    assert "denominator" in str(info.value)
    # division itself is fine when the quotient is a polynomial
    manifest = parse_manifest(base + "\n[poly ok]\nexpr = (T^2 + T) / T\n")
    assert manifest.polys["ok"] == Poly(manifest.field, (1, 1))


def test_duplicate_module_rejected():
    text = _packaged("prop3.tml")
    with pytest.raises(ParseError) as info:
        parse_manifest(text + "\n" + "[module Cten2]\nm = 1\na0 = T\n")
    assert "duplicate" in str(info.value)


def test_wrong_entry_count_rejected():
    text = _packaged("prop3.tml").replace("a1 = 0, 0, 1, 0", "a1 = 0, 0, 1")
    with pytest.raises(ParseError):
        parse_manifest(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse_manifest("[field]\np = 2\n\n[poly bad]\nexpr = T^\n")
    assert info.value.line == 5
    assert "(line 5" in str(info.value)


def test_json_form_is_equivalent():
    doc = {
        "field": {"p": 2},
        "tower": [["U", "0 - T, 0, 1"]],
        "modules": {"RootPair": {
            "m": 2,
            "a0": "T, 0, 0, T",
            "a1": "1, 0, 0, U + T",
            "a2": "0, 0, 0, 1",
        }},
        "subgroups": {"Squares": {"module": "RootPair",
                                  "rows": ["[1], [0, 1]"]}},
        "points": {"Seed": {"module": "RootPair", "coords": "T, U"}},
        "polys": {"t": "T"},
    }
    from_json = parse_manifest(json.dumps(doc))
    from_ini = load_manifest("src/tml/manifests/root_twist.tml")
    assert manifest_to_text(from_json) == manifest_to_text(from_ini)


def test_json_rejects_unknown_keys():
    with pytest.raises(ParseError):
        parse_manifest(json.dumps({"field": {"p": 2}, "extras": {}}))


def test_json_syntax_error_is_parse_error():
    with pytest.raises(ParseError):
        parse_manifest("{not json")
