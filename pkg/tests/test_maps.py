import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from simpvec.chains import normalized_complex
from simpvec.doldkan import bnr
from simpvec.linalg import Mat, kernel_basis
from simpvec.maps import (MappingSpace, SimpMap, adjunction_rho, adjunction_tau, copower, element_from_map,
                          evaluation, homotopic_simplicial, identity_simp, map_from_element, mapping_space,
                          multiplicative_check, tensor_svs, validate_simp_map, zero_simp)
from simpvec.simplicial import Constant, Pair, validate_identities

seeds = st.integers(0, 2**32)


def test_tensor_and_copower_dims(named):
    assert tensor_svs(named["B1"], named["B1"]).dim(2) == 4
    W = named["Pair(2)"]
    assert [tensor_svs(Constant(1), W).dim(m) for m in range(4)] == [W.dim(m) for m in range(4)]
    for m in range(3):
        X = copower(Constant(1), m)
        assert [X.dim(l) for l in range(4)] == [comb(m + l + 1, l + 1) for l in range(4)]
        assert validate_identities(X, 3) == []


def test_simp_map_validation(named):
    V = named["Pair(1)"]
    assert validate_simp_map(identity_simp(V), 3) == []
    assert multiplicative_check(identity_simp(V), 1)
    assert validate_simp_map(zero_simp(V, named["B1"]), 3) == []
    bad = SimpMap(V, V, {0: Mat.identity(1), 1: Mat(2, 2, [[1, 0], [0, 0]])})
    assert "d_0 fails at level 1" in validate_simp_map(bad, 1)


def _flat_term(A, B):
    # vec(A F B) = (A (x) B^T) vec(F) for row-major vec
    return A.kron(B.T)


def brute_force_dim(U, W, m, top):
    """Maps ``U (x) Delta[m] -> W`` through level ``top`` solved from every commuting square."""
    X = copower(U, m)
    sizes = [W.dim(l) * X.dim(l) for l in range(top + 1)]
    total = sum(sizes)
    blocks = []

    def row(nrows, parts):
        return Mat.hstack([parts.get(l, Mat(nrows, sizes[l])) for l in range(top + 1)], rows=nrows)
    for l in range(1, top + 1):
        for i in range(l + 1):
            blocks.append(row(W.dim(l - 1) * X.dim(l),
                              {l: _flat_term(W.d(l, i), Mat.identity(X.dim(l))),
                               l - 1: -_flat_term(Mat.identity(W.dim(l - 1)), X.d(l, i))}))
        for j in range(l):
            blocks.append(row(W.dim(l) * X.dim(l - 1),
                              {l: _flat_term(Mat.identity(W.dim(l)), X.s(l - 1, j)),
                               l - 1: -_flat_term(W.s(l - 1, j), Mat.identity(X.dim(l - 1)))}))
    if not blocks:
        return total
    return kernel_basis(Mat.vstack(blocks, cols=total)).dim


@pytest.mark.parametrize("u,w,m", [("Pair(1)", "B1", 0), ("Pair(1)", "B1", 1), ("B2", "B2", 0),
                                   ("B2", "B2", 1), ("Id(2)", "B1", 1), ("B1", "Pair(1)", 1)])
def test_mapping_space_against_brute_force(named, u, w, m):
    U, W = named[u], named[w]
    n = W.groupoid_order
    assert mapping_space(U, W, m).dim == brute_force_dim(U, W, m, n + 2)


def test_mapping_space_examples(named):
    B0 = bnr(0)
    assert mapping_space(named["Pair(1)"], B0, 0).dim == 0
    for m in range(3):
        assert mapping_space(named["Id(2)"], B0, m).dim == 2
    assert mapping_space(named["B2"], named["B2"], 0).dim == 1


@pytest.mark.parametrize("u,w", [("Pair(1)", "B1"), ("B1", "B2"), ("Pair(1)", "Pair(1)")])
def test_mapping_space_is_simplicial_and_bounded(named, u, w):
    H = MappingSpace(named[u], named[w])
    assert validate_identities(H, 3) == []
    N = normalized_complex(H, H.n + 2)
    assert all(N.dim(i) == 0 for i in range(H.n + 1, H.n + 3))


def test_map_element_round_trip(named):
    V = named["Pair(1)"]
    H = MappingSpace(V, V)
    c = element_from_map(H, identity_simp(V))
    f = map_from_element(H, c)
    for m in range(4):
        assert f.at(m) == Mat.identity(V.dim(m))


@given(seeds)
def test_elements_are_simplicial_maps(seed):
    rng = random.Random(seed)
    H = MappingSpace(Pair(1), bnr(1))
    S = H.solution(0)
    f = map_from_element(H, [rng.randint(-3, 3) for _ in range(S.dim)])
    assert validate_simp_map(f, 3) == []


def _random_ambient(rng, H, m):
    S = H.solution(m)
    return S.basis.apply([rng.randint(-3, 3) for _ in range(S.dim)])


@pytest.mark.parametrize("u,v,w,m", [("Pair(1)", "Pair(1)", "B1", 1), ("Id(2)", "Pair(1)", "B1", 1),
                                     ("B1", "B1", "B2", 1)])
def test_simplicial_adjunction_round_trips(named, u, v, w, m):
    rng = random.Random(7)
    U, V, W = named[u], named[v], named[w]
    flat = MappingSpace(tensor_svs(U, V), W)
    for _ in range(3):
        f = _random_ambient(rng, flat, m)
        outer, g = adjunction_rho(flat, V, U, m, f)
        assert outer.solution(m).contains(g)
        assert adjunction_tau(outer, m, g)[1] == f
    outer = MappingSpace(V, MappingSpace(U, W))
    for _ in range(3):
        g = _random_ambient(rng, outer, m)
        flat2, f = adjunction_tau(outer, m, g)
        assert flat2.solution(m).contains(f)
        assert list(adjunction_rho(flat2, V, U, m, f)[1]) == list(g)
    zero = [0] * flat.layout(m).size
    assert not any(adjunction_rho(flat, V, U, m, zero)[1])


def test_tau_of_identity_is_evaluation(named):
    U, W = named["Pair(1)"], named["B1"]
    H = MappingSpace(U, W)
    outer = MappingSpace(H, H)
    g = outer.ambient(0, element_from_map(outer, identity_simp(H)))
    flat, f = adjunction_tau(outer, 0, g)
    ev = evaluation(H)
    for l in range(flat.n + 1):
        T = flat.layout(0).block(f, (l, (0,) * (l + 1)))
        E = ev.at(l)
        ul, hl = U.dim(l), H.dim(l)
        for w in range(W.dim(l)):
            for a in range(ul):
                for h in range(hl):
                    assert T[w, a * hl + h] == E[w, h * ul + a]


def test_homotopic_simplicial(named):
    P, B2 = named["Pair(1)"], named["B2"]
    assert homotopic_simplicial(identity_simp(P), identity_simp(P), 3)
    assert homotopic_simplicial(identity_simp(P), zero_simp(P, P), 3)
    assert not homotopic_simplicial(identity_simp(B2), zero_simp(B2, B2), 3)
