import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import first_a, first_g
from midconv import tuplefile
from midconv.cxmat import RESIDUE, MatrixTuple
from midconv.tuplefile import TupleFileError

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def same(t1, t2):
    return t1.role == t2.role and t1.p == t2.p and t1.n == t2.n and all(
        np.array_equal(x, y) for x, y in zip(t1, t2))


def test_round_trip_monodromy():
    tf = tuplefile.loads(tuplefile.dumps(first_g()))
    assert same(tf.tuple, first_g()) and tf.points is None


def test_round_trip_with_points(tmp_path):
    path = tmp_path / "a.json"
    tuplefile.write(path, first_a(), (0, 1 + 0.5j))
    tf = tuplefile.read(path)
    assert same(tf.tuple, first_a())
    assert tf.points == (0, 1 + 0.5j)
    assert tf.system().n == 2


def test_emit_is_stable():
    text = tuplefile.dumps(first_a(), (0, 1))
    assert tuplefile.dumps(tuplefile.loads(text).tuple, (0, 1)) == text


@settings(max_examples=50, deadline=None)
@given(st.lists(finite, min_size=8, max_size=8))
def test_exact_float_round_trip(vals):
    m = np.array(vals[:4]).reshape(2, 2) + 1j * np.array(vals[4:]).reshape(2, 2)
    t = MatrixTuple([m], RESIDUE)
    assert same(tuplefile.loads(tuplefile.dumps(t)).tuple, t)


def test_empty_tuple():
    t = MatrixTuple.empty(3)
    back = tuplefile.loads(tuplefile.dumps(t)).tuple
    assert back.is_empty and back.n == 3


def test_document_fields():
    doc = json.loads(tuplefile.dumps(first_g()))
    assert doc["version"] == 1 and doc["role"] == "monodromy"
    assert (doc["p"], doc["n"]) == (3, 2)
    assert doc["matrices"][0][0][0] == [0.0, 1.0]


@pytest.mark.parametrize("edit", [
    lambda d: d.pop("role"),
    lambda d: d.update(version=99),
    lambda d: d.update(role="other"),
    lambda d: d.update(n=3),
    lambda d: d.update(p=2),
    lambda d: d["matrices"][0][0].__setitem__(0, "x"),
    lambda d: d["matrices"][0][0].__setitem__(0, [1.0]),
    lambda d: d.update(points=[[0, 0], [0, 0]]),
    lambda d: d.update(points=[[0, 0]]),
    lambda d: d.update(matrices=[[[[0, 0]] * 3] * 3] * 2),  # singular monodromy
])
def test_malformed(edit):
    doc = tuplefile.to_dict(first_g())
    edit(doc)
    with pytest.raises(TupleFileError):
        tuplefile.from_dict(doc)


def test_bad_json():
    with pytest.raises(TupleFileError):
        tuplefile.loads("{not json")
    with pytest.raises(TupleFileError):
        tuplefile.loads("[]")
    with pytest.raises(TupleFileError):
        tuplefile.loads(tuplefile.dumps(first_g()).replace("0.0", "NaN", 1))


def test_system_needs_points():
    with pytest.raises(TupleFileError):
        tuplefile.loads(tuplefile.dumps(first_a())).system()
