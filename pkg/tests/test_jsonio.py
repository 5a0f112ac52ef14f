import json

import numpy as np
import pytest

from quditid import jsonio


def test_format_float_17_digits():
    assert jsonio.format_float(1.0 / 3.0) == "0.33333333333333331"
    assert jsonio.format_float(2.0 / 3.0) == "0.66666666666666663"


def test_format_float_always_looks_like_a_float():
    assert jsonio.format_float(1.0) == "1.0"
    assert jsonio.format_float(-4.0) == "-4.0"
    assert "e" in jsonio.format_float(1e-30).lower()


def test_format_float_round_trips():
    rng = np.random.default_rng(12)
    for x in rng.standard_normal(200):
        assert float(jsonio.format_float(x)) == x


def test_format_float_rejects_non_finite():
    for bad in (float("nan"), float("inf"), -float("inf")):
        with pytest.raises(ValueError):
            jsonio.format_float(bad)


def test_dumps_is_valid_json():
    obj = {
        "d": 3,
        "flag": True,
        "nothing": None,
        "rates": [0.5, np.float64(0.25)],
        "counts": np.array([1, 2, 3]),
        "nested": {"x": 1e-12},
    }
    parsed = json.loads(jsonio.dumps(obj))
    assert parsed["d"] == 3
    assert parsed["flag"] is True
    assert parsed["nothing"] is None
    assert parsed["rates"] == [0.5, 0.25]
    assert parsed["counts"] == [1, 2, 3]
    assert parsed["nested"]["x"] == 1e-12


def test_dumps_rejects_unserializable():
    with pytest.raises(TypeError):
        jsonio.dumps({"x": object()})
    with pytest.raises(TypeError):
        jsonio.dumps({1: "non-string key"})


def test_dumps_empty_containers():
    assert jsonio.dumps({}) == "{}"
    assert jsonio.dumps([]) == "[]"
