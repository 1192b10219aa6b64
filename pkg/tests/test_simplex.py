from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy.combinatorics import Permutation

from simpvec.simplex import (codegen, coface, compose, degen, face, factor_arrow, identity, is_surjection,
                             perm_sign, shuffles, simplex_index, simplices, surjections)


def test_simplex_counts():
    for m in range(4):
        for n in range(4):
            assert len(simplices(m, n)) == comb(m + n + 1, n + 1)
    assert simplices(1, 1) == ((0, 0), (0, 1), (1, 1))
    assert simplex_index(2, 0) == {(0,): 0, (1,): 1, (2,): 2}


def test_face_and_degen_on_tuples():
    assert face((0, 1, 2), 1) == (0, 2)
    assert degen((0, 2), 0) == (0, 0, 2)
    assert coface(1, (0, 1)) == (0, 2)
    assert codegen(0, (0, 1, 2)) == (0, 0, 1)


def test_factor_example():
    f = factor_arrow((0, 0, 2))
    assert f.degens == (0,) and f.faces == (1,)
    assert f.surjection == (0, 0, 1) and f.injection == (0, 2)


def test_factor_rejects_non_monotone():
    with pytest.raises(ValueError):
        factor_arrow((1, 0))


arrows = st.integers(0, 3).flatmap(
    lambda l: st.integers(0, 3).flatmap(lambda n: st.tuples(st.just(l), st.sampled_from(simplices(l, n)))))


@given(arrows)
def test_factorization_recombines(data):
    l, t = data
    f = factor_arrow(t, l)
    assert compose(f.injection, f.surjection) == t
    assert is_surjection(f.surjection, len(f.injection) - 1)
    assert len(f.faces) == l + 1 - len(set(t))
    assert len(f.degens) == len(t) - len(set(t))
    # faces largest first, then degeneracies smallest first, rebuild t from the identity
    u = identity(l)
    for j in reversed(f.faces):
        u = face(u, j)
    assert u == f.injection
    for i in f.degens:
        u = degen(u, i)
    assert u == t


def test_surjections():
    assert surjections(2, 1) == ((0, 0, 1), (0, 1, 1))
    for m in range(5):
        for k in range(m + 1):
            assert len(surjections(m, k)) == comb(m, k)


@given(st.integers(0, 4), st.integers(0, 4))
def test_shuffles(p, q):
    sh = shuffles(p, q)
    assert len(sh) == comb(p + q, p)
    for mu, nu, sign in sh:
        assert sorted(mu + nu) == list(range(p + q))
        assert sign == (1 if Permutation(list(mu + nu)).is_even else -1)


def test_one_one_shuffles():
    assert shuffles(1, 1) == (((0,), (1,), 1), ((1,), (0,), -1))


@given(st.permutations(range(5)))
def test_perm_sign(p):
    assert perm_sign(p) == (1 if Permutation(list(p)).is_even else -1)
