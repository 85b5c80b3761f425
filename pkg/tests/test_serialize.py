import csv
import io
import json
from fractions import Fraction

import jsonschema
import mpmath
import pytest

from schurlab.serialize import atomic_write, csv_text, decimal_string, dumps, load_schema, rational, to_jsonable
from schurlab.young import Partition


@pytest.mark.parametrize("value,text", [
    (Fraction(11, 27), "0.407407407407"),
    (Fraction(1), "1"),
    (Fraction(10), "10"),
    (Fraction(1, 4), "0.25"),
    (Fraction(-3, 7), "-0.428571428571"),
    (Fraction(0), "0"),
    (0.1, "0.1"),
])
def test_decimal_string(value, text):
    assert decimal_string(value) == text


def test_mpf_decimal():
    assert decimal_string(mpmath.sqrt(2)) == "1.41421356237"


def test_rational_format():
    assert rational(Fraction(2, 4)) == {"exact": "1/2", "decimal": "0.5"}
    assert rational(3)["exact"] == "3/1"


def test_to_jsonable():
    doc = to_jsonable({Partition((2, 1)): Fraction(1, 3), "x": (1, 2), "p": Partition((3,))})
    assert doc == {"(2,1)": {"exact": "1/3", "decimal": "0.333333333333"}, "x": [1, 2], "p": "(3)"}
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_dumps_stable():
    a = dumps({"b": 1, "a": Fraction(1, 2)})
    assert a == dumps({"a": Fraction(1, 2), "b": 1})
    assert a.endswith("\n") and json.loads(a)["a"]["exact"] == "1/2"


def test_csv_rfc4180():
    text = csv_text(["partition", "p"], [["(2,1)", "1/2"], ["(3)", "1/2"]])
    assert text.split("\r\n")[0] == "partition,p"
    assert '"(2,1)"' in text
    assert list(csv.reader(io.StringIO(text))) == [["partition", "p"], ["(2,1)", "1/2"], ["(3)", "1/2"]]


def test_atomic_write(tmp_path):
    target = tmp_path / "sub" / "f.txt"
    atomic_write(target, "héllo")
    atomic_write(target, b"bytes")
    assert target.read_bytes() == b"bytes"
    assert [p.name for p in target.parent.iterdir()] == ["f.txt"]


@pytest.mark.parametrize("name", ["dist", "dist_sweep", "hsp", "collision_advantage", "collision_plan",
                                  "collision_montecarlo", "swaptest", "manifest", "error"])
def test_shipped_schemas_are_valid(name):
    jsonschema.Draft202012Validator.check_schema(load_schema(name))
