import json

import pytest

import phimod3


def test_ec_info():
    info = phimod3.ec_info("y^2 = x^3 - x + 1", "f3")
    assert info["trace"] == -3
    assert info["point_count"] == 7
    assert info["supersingular"] is True

    aut = phimod3.ec_info("y^2 = x^3 + x", "f9")
    assert aut["aut_order"] == 12
    assert aut["aut_shape"] == "Z3:Z4"


def test_ec_info_singular():
    with pytest.raises(phimod3.SingularCurve):
        phimod3.ec_info("y^2 = x^3", "f3")


def test_classify_round_trip():
    text = phimod3.canonical_module_text("Dc", 1, -3, alpha="0")
    report = json.loads(phimod3.classify_text(text))
    assert report["classified"] is True
    assert report["label"] == "Dc(1;-3;0)"


def test_classify_parse_error():
    with pytest.raises(phimod3.ParseError):
        phimod3.classify_text("{not json")


def test_k0_roundtrip():
    assert phimod3.k0_roundtrip("1/2-3/2*i") == "1/2-3/2*i"
    assert phimod3.k0_roundtrip("-i") == "-i"


def test_fields():
    labels = phimod3.fields(12)
    assert len(labels) == 10
    assert "K1" in labels and "K10" in labels
    with pytest.raises(Exception):
        phimod3.fields(5)
