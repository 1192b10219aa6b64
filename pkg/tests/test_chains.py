import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from simpvec.chains import (ChainMap, adjoint_rho, adjoint_rho_left, adjoint_tau, betti, concentrated,
                            dual_shifted, homology, homotopic, identity_map, induces_identity_on_homology,
                            is_iso, is_quasi_iso, make_complex, mapping_complex, moore_complex,
                            normalized_complex, shift, tensor_complex, truncate_nonneg, zero_map)
from simpvec.fixtures import random_complex, random_truncated
from simpvec.linalg import ContractError, Mat

seeds = st.integers(0, 2**32)


def interval():
    return make_complex([1, 1], {1: Mat(1, 1, [[1]])})


def test_make_complex_validates():
    with pytest.raises(ContractError):
        make_complex([1, 1, 1], {1: Mat(1, 1, [[1]]), 2: Mat(1, 1, [[1]])})
    C = make_complex({2: 1, 3: 2})
    assert C.lo == 2 and C.dims == [1, 2]


def test_homology_examples(named):
    assert betti(interval()) == {0: 0, 1: 0}
    assert betti(concentrated(3, 2)) == {3: 2}
    B2 = normalized_complex(named["B2"], 5)
    assert [betti(B2, range(5))[i] for i in range(5)] == [0, 0, 1, 0, 0]
    assert betti(normalized_complex(named["Pair(1)"], 4), range(4)) == {0: 0, 1: 0, 2: 0, 3: 0}
    assert betti(normalized_complex(named["Id(3)"], 3), range(3)) == {0: 3, 1: 0, 2: 0}


@given(seeds)
def test_random_complex_is_a_complex(seed):
    C = random_complex(random.Random(seed), 3, 2)
    assert C.validate() == []


@given(seeds)
def test_moore_and_normalized_homology_agree(seed):
    V = random_truncated(random.Random(seed))
    up = 3
    assert betti(moore_complex(V, up + 1), range(up + 1)) == betti(normalized_complex(V, up + 1), range(up + 1))


@given(seeds)
def test_shift_and_dual(seed):
    C = random_complex(random.Random(seed), 2, 2)
    S = shift(C, 2)
    assert S.validate() == []
    assert all(betti(S, [i])[i] == betti(C, [i + 2])[i + 2] for i in S.degrees())
    D = dual_shifted(C, 3)
    assert D.validate() == []
    assert all(betti(D, [i])[i] == betti(C, [3 - i])[3 - i] for i in D.degrees())
    assert dual_shifted(D, 3) == C


def test_dual_shifted_of_pair(named):
    D = dual_shifted(normalized_complex(named["Pair(1)"], 1), 1)
    assert (D.lo, D.dims) == (0, [1, 1])


@given(seeds)
def test_kunneth(seed):
    rng = random.Random(seed)
    A, B = random_complex(rng, 2, 1), random_complex(rng, 2, 1)
    T = tensor_complex(A, B).complex
    assert T.validate() == []
    ha, hb, ht = betti(A), betti(B), betti(T)
    for m in T.degrees():
        assert ht[m] == sum(ha[p] * hb.get(m - p, 0) for p in A.degrees())


@given(seeds)
def test_hom_complex_homology(seed):
    rng = random.Random(seed)
    A, B = random_complex(rng, 2, 1), random_complex(rng, 2, 1)
    H = mapping_complex(A, B).complex
    assert H.validate() == []
    ha, hb, hh = betti(A), betti(B), betti(H)
    for m in H.degrees():
        assert hh[m] == sum(ha[i] * hb.get(i + m, 0) for i in A.degrees())


def test_truncate_nonneg():
    # degrees -1, 0, 1 with d_0 = 1 and d_1 = 0: degree 0 keeps only its cycles
    C = make_complex([1, 1, 2], {0: Mat(1, 1, [[1]]), 1: Mat(1, 2)}, lo=-1)
    t = truncate_nonneg(C)
    assert t.complex.lo == 0 and t.complex.dims == [0, 2]
    assert t.complex.validate() == []


def test_chain_maps_and_homotopy():
    I = interval()
    assert is_iso(identity_map(I))
    assert homotopic(identity_map(I), zero_map(I, I))
    Q = concentrated(0)
    assert not homotopic(identity_map(Q), zero_map(Q, Q))
    bad = ChainMap(I, I, {0: Mat(1, 1, [[1]]), 1: Mat(1, 1, [[0]])})
    assert bad.validate() == ["chain law fails at degree 1"]


@given(seeds)
def test_quasi_iso_and_homology_identity(seed):
    C = random_complex(random.Random(seed), 2, 2)
    assert is_quasi_iso(identity_map(C), C.degrees())
    assert induces_identity_on_homology(identity_map(C), C.degrees())
    if any(betti(C).values()):
        assert not is_quasi_iso(zero_map(C, C), C.degrees())
        assert not induces_identity_on_homology(zero_map(C, C), C.degrees())


def test_homology_representatives():
    h = homology(concentrated(1, 2))[1]
    assert h.dim == 2 and h.reps.dim == 2


@given(seeds)
def test_tensor_hom_adjunction(seed):
    rng = random.Random(seed)
    A, B, C = random_complex(rng, 1, 1), random_complex(rng, 1, 1), random_complex(rng, 2, 1)
    T = tensor_complex(A, B)
    H = mapping_complex(T.complex, C)
    for deg in H.complex.degrees():
        vec = [rng.randint(-2, 2) for _ in range(H.complex.dim(deg))]
        f = H.unpack(deg, vec)
        outer, _, g = adjoint_rho(T, C, deg, f)
        assert H.pack(deg, adjoint_tau(T, C, deg, g)) == vec
        if deg - 1 in H.complex.degrees():
            df = H.unpack(deg - 1, H.complex.d(deg).apply(vec))
            _, _, g2 = adjoint_rho(T, C, deg - 1, df)
            assert outer.pack(deg - 1, g2) == outer.complex.d(deg).apply(outer.pack(deg, g))
            outerL, _, gl = adjoint_rho_left(T, C, deg, f)
            _, _, gl2 = adjoint_rho_left(T, C, deg - 1, df)
            assert outerL.pack(deg - 1, gl2) == outerL.complex.d(deg).apply(outerL.pack(deg, gl))
