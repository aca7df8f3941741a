import json
import math

from exwitness.serialize import dumps, round5


def test_floats_survive_round_trip():
    vals = [math.sqrt(5), 1 / 3, 94.5, 1e-17, -2.5, 0.1 + 0.2]
    text = dumps({"vals": vals})
    back = json.loads(text)
    assert back["vals"] == vals  # 17 significant digits reproduce doubles


def test_types_and_order():
    text = dumps({"b": True, "a": None, "n": 3, "s": "x", "l": [1, 2.0]})
    assert text == '{"b": true, "a": null, "n": 3, "s": "x", "l": [1, 2]}'
    assert dumps({"x": 1.0}) == dumps({"x": 1.0})


def test_round5():
    assert round5(math.sqrt(5)) == "2.2361"
    assert round5(94.5) == "94.5"
