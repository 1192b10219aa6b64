import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from simpvec.doldkan import bnr
from simpvec.fixture_io import (FixtureError, emit_fixture, fixture_from_svs, load_fixture, parse_builtin,
                                parse_complex, parse_fixture, parse_rational)
from simpvec.fixtures import random_truncated
from simpvec.simplicial import Pair, validate_identities

FIXTURE_DIR = __import__("pathlib").Path(__file__).resolve().parents[1] / "fixtures"


@pytest.mark.parametrize("text,name,dims", [
    ("pair 1", "Pair(1)", [1, 2, 3]), ("bnr 2", "B2", [0, 0, 1]), ("Id(3)", "Id(3)", [3, 3, 3]),
    ("B1", "B1", [0, 1, 2]), ("zero", "Zero", [0, 0, 0]), ("tensor(B1, pair 1)", None, [0, 2, 6]),
    ("op(bnr 1)", None, [0, 1, 2])])
def test_builtins(text, name, dims):
    V = parse_fixture(text).build()
    if name:
        assert V.name == name
    assert [V.dim(m) for m in range(3)] == dims


def test_unknown_builtin():
    with pytest.raises(FixtureError, match="unknown"):
        parse_builtin("torus 3")


def test_rationals():
    assert parse_rational("-3/4", "x") == -0.75
    assert parse_rational(5, "x") == 5
    for bad in ("1/x", "1/0", True, 1.5):
        with pytest.raises(FixtureError):
            parse_rational(bad, "x")


def _doc(V, L, ext="groupoid"):
    return json.loads(emit_fixture(fixture_from_svs(V, L, ext)))


def test_wrong_shape_is_named():
    d = _doc(Pair(1), 2)
    d["faces"]["2"][1] = [["1"]]
    with pytest.raises(FixtureError, match=r"level 2 face d_1: dimension mismatch"):
        parse_fixture(json.dumps(d))


def test_bad_entry_is_named():
    d = _doc(Pair(1), 1)
    d["degeneracies"]["0"][0][1][0] = "x"
    with pytest.raises(FixtureError, match=r"level 0 degeneracy s_0 entry \(1,0\)"):
        parse_fixture(json.dumps(d))


def test_identity_violation_is_reported():
    d = _doc(Pair(1), 1)
    d["faces"]["1"][0] = [["1", "1"]]
    with pytest.raises(FixtureError, match="d_0 s_0 at level 1"):
        parse_fixture(json.dumps(d)).build()


def test_version_check():
    with pytest.raises(FixtureError, match="version"):
        parse_fixture(json.dumps({"format": "simpvec-fixture", "version": 9, "generator": "B1"}))


@pytest.mark.parametrize("V,L", [(Pair(1), 1), (bnr(2), 2), (Pair(2), 2)])
def test_round_trip_explicit(V, L):
    f = fixture_from_svs(V, L, "groupoid")
    g = parse_fixture(emit_fixture(f))
    assert g == f
    assert emit_fixture(g) == emit_fixture(f)
    W = g.build()
    assert [W.dim(m) for m in range(L + 3)] == [V.dim(m) for m in range(L + 3)]


@given(st.integers(0, 2**32))
def test_round_trip_random(seed):
    T = random_truncated(random.Random(seed))
    f = fixture_from_svs(T, T.L)
    g = parse_fixture(emit_fixture(f))
    assert g == f
    assert validate_identities(g.build(), T.L + 1) == []


def test_generator_documents_round_trip():
    for text in ["pair 2", "tensor(B1, op(B2))", "zero"]:
        f = parse_fixture(text)
        assert parse_fixture(emit_fixture(f)) == f


def test_dk_generator():
    doc = {"generator": {"kind": "dk", "complex": {"dims": [1, 1], "differentials": {"1": [["1"]]}}}}
    V = parse_fixture(json.dumps(doc)).build()
    assert [V.dim(m) for m in range(3)] == [1, 2, 3]
    with pytest.raises(FixtureError):
        parse_complex({"dims": [1, 1, 1], "differentials": {"1": [["1"]], "2": [["1"]]}}).hi


def test_shipped_fixtures():
    files = sorted(FIXTURE_DIR.glob("*.json"))
    assert files
    for p in files:
        V = load_fixture(p).build()
        assert validate_identities(V, 3) == [], p.name
