import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from simpvec.doldkan import bnr
from simpvec.fixtures import random_truncated
from simpvec.linalg import ContractError, Mat
from simpvec.maps import copower, tensor_svs
from simpvec.simplex import compose, simplex_index, simplices
from simpvec.simplicial import (Coskeletal, Pair, Truncated, boundary_space, core_projection,
                                degenerate_subspace, horn_space, moore_filler, multiplication,
                                normalized_basis, normalized_projection, opposite, order_up_to, truncate,
                                validate_identities)


def test_fixtures_satisfy_identities(named):
    for V in named.values():
        assert validate_identities(V, 4) == [], V.name


def test_level_dims(named):
    assert [named["Pair(2)"].dim(m) for m in range(4)] == [2, 4, 6, 8]
    assert [named["Id(3)"].dim(m) for m in range(4)] == [3, 3, 3, 3]
    assert [named["B2"].dim(m) for m in range(5)] == [0, 0, 1, 3, 6]
    assert [named["B1"].dim(m) for m in range(5)] == [comb(m, 1) for m in range(5)]


@pytest.mark.parametrize("m", [1, 2])
def test_arrow_action_on_standard_simplex(m):
    # Q[Delta[m]] acts by precomposition, independent of the factorization
    X = copower(bnr(0), m)
    for l in range(3):
        for n in range(3):
            idx_l, idx_n = simplex_index(m, l), simplex_index(m, n)
            for t in simplices(l, n):
                A = X.arrow(t, l)
                for u, col in idx_l.items():
                    out = [0] * len(idx_n)
                    out[idx_n[compose(u, t)]] = 1
                    assert A.col(col) == out


def test_horn_dims(named):
    assert horn_space(named["B1"], 2, 1).dim == 2
    assert horn_space(named["Pair(1)"], 2, 1).dim == 3
    assert boundary_space(named["Pair(1)"], 2).dim == 3


def _check_moore(V, m, k):
    H = horn_space(V, m, k)
    mu = moore_filler(V, m, k)
    for i in H.indices:
        assert V.d(m, i) @ mu @ H.space.basis == H.slot(i) @ H.space.basis
    for j in range(m):
        assert mu @ H.projection @ V.s(m - 1, j) == V.s(m - 1, j)


@pytest.mark.parametrize("name", ["Pair(1)", "Pair(2)", "B1", "B2", "Id(2)"])
def test_moore_filler_on_fixtures(named, name):
    V = named[name]
    for m in range(1, 5):
        for k in range(m + 1):
            _check_moore(V, m, k)


@given(st.integers(0, 2**32))
def test_moore_filler_on_random_truncations(seed):
    V = random_truncated(random.Random(seed))
    for m in range(1, 4):
        for k in range(m + 1):
            _check_moore(V, m, k)


def test_moore_filler_bad_args(named):
    with pytest.raises(ContractError):
        moore_filler(named["B1"], 2, 3)


def test_one_dimensional_core_projections(named):
    for V in (named["Pair(1)"], named["Pair(2)"], named["B1"]):
        I = Mat.identity(V.dim(1))
        assert core_projection(V, 1, 0) == I - V.s(0, 0) @ V.d(1, 1)
        assert core_projection(V, 1, 1) == I - V.s(0, 0) @ V.d(1, 0)


@pytest.mark.parametrize("name", ["Pair(1)", "B1", "B2"])
def test_core_projection_is_projection_onto_horn_kernel(named, name):
    V = named[name]
    for n in range(1, 4):
        for k in range(n + 1):
            g = core_projection(V, n, k)
            assert g @ g == g
            assert (horn_space(V, n, k).projection @ g).is_zero()


def test_multiplication_of_pair_groupoid():
    # on Pair(1) a 1-horn at k=0 is (d_1, d_2) = ((x0,x2), (x0,x1)); the composite is (x1, x2)
    V = Pair(1)
    M = multiplication(V, 1, 0)
    assert M.apply([0, 2, 0, 1]) == [1, 2]


def test_normalized_and_degenerate_split(named):
    for V in named.values():
        for m in range(4):
            N, D = normalized_basis(V, m), degenerate_subspace(V, m)
            assert N.dim + D.dim == V.dim(m)
            P = normalized_projection(V, m)
            assert P @ N.basis == Mat.identity(N.dim)
            if D.dim:
                assert (P @ D.basis).is_zero()


def test_coskeleton():
    assert Coskeletal(Pair(1), 2).dim(3) == 4
    # three free edges over a zero vertex space
    assert Coskeletal(bnr(1), 1).dim(2) == 3
    C = Coskeletal(bnr(1), 2)
    assert [C.dim(m) for m in range(5)] == [0, 1, 2, 3, 4]
    assert validate_identities(C, 4) == []


@pytest.mark.parametrize("name,L", [("Pair(1)", 1), ("B1", 1), ("B2", 2), ("Pair(2)", 1)])
def test_groupoid_extension_recovers_groupoids(named, name, L):
    V = named[name]
    T = truncate(V, L, extension="groupoid")
    assert [T.dim(m) for m in range(5)] == [V.dim(m) for m in range(5)]
    assert validate_identities(T, 4) == []
    assert order_up_to(T, 4).is_n_groupoid(L)


def test_truncated_rejects_bad_data():
    with pytest.raises(ContractError, match="shape"):
        Truncated([1, 2], {1: [Mat(1, 2), Mat(2, 2)]}, {0: [Mat(2, 1)]})
    with pytest.raises(ContractError, match="identities"):
        Truncated([1, 1], {1: [Mat.identity(1), Mat.identity(1)]}, {0: [Mat(1, 1)]})
    with pytest.raises(ContractError):
        Truncated([1], {}, {}, extension="bogus")


def test_order_reports(named):
    r = order_up_to(named["Pair(1)"], 4)
    assert r.normalized_dims == (1, 1, 0, 0, 0)
    assert r.kan and r.is_n_groupoid(1)
    r = order_up_to(named["B2"], 4)
    assert r.order == 2 and r.is_n_groupoid(2) and not r.is_n_groupoid(1)
    assert order_up_to(tensor_svs(named["B1"], named["B1"]), 4).order == 2


def test_opposite(named):
    V = opposite(named["Pair(1)"])
    assert validate_identities(V, 4) == []
    assert V.d(1, 0) == named["Pair(1)"].d(1, 1)


@given(st.integers(0, 2**32))
def test_random_truncations_are_simplicial(seed):
    V = random_truncated(random.Random(seed))
    assert validate_identities(V, 4) == []
    assert max(V.dim(m) for m in range(V.L + 1)) <= 3
