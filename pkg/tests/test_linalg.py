from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from simpvec.linalg import (ContractError, Mat, Subspace, annihilator, fiber_product, image_basis, inverse,
                            kernel_basis, kernel_of_rows, quotient_reps, rref, solve, solve_matrix)


@st.composite
def matrices(draw, max_rows=5, max_cols=5, rows=None, cols=None):
    r = draw(st.integers(0, max_rows)) if rows is None else rows
    c = draw(st.integers(0, max_cols)) if cols is None else cols
    data = draw(st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r))
    return Mat(r, c, data)


def to_sympy(M: Mat) -> sympy.Matrix:
    return sympy.Matrix(M.rows, M.cols, lambda i, j: sympy.Rational(M[i, j].numerator, M[i, j].denominator))


def test_basic_arithmetic():
    A = Mat(2, 2, [[1, 2], [3, 4]])
    B = Mat(2, 2, [[0, 1], [1, 0]])
    assert A @ B == Mat(2, 2, [[2, 1], [4, 3]])
    assert A + B - B == A
    assert (-A).scale(-1) == A
    assert A.T == Mat(2, 2, [[1, 3], [2, 4]])
    assert A.apply([1, 1]) == [3, 7]
    assert Mat.identity(2).kron(B) == Mat.block_diag([B, B])


def test_rationals_are_exact():
    A = Mat(1, 1, [["1/3"]])
    assert (A @ Mat(1, 1, [[3]]))[0, 0] == 1
    assert A.to_strings() == [["1/3"]]


def test_empty_shapes():
    Z = Mat(0, 3)
    assert Z.rank() == 0
    assert kernel_basis(Z).dim == 3
    assert Mat.hstack([], rows=2).shape == (2, 0)
    assert Mat.vstack([], cols=4).shape == (0, 4)
    assert (Mat(2, 0) @ Mat(0, 3)).is_zero()


@given(matrices())
def test_rank_matches_sympy(M):
    assert M.rank() == to_sympy(M).rank()


@given(matrices())
def test_rref_matches_sympy(M):
    R, piv = rref(M)
    S, spiv = to_sympy(M).rref()
    assert tuple(piv) == tuple(spiv)
    assert to_sympy(R) == S


@given(matrices())
def test_kernel_and_image(M):
    K = kernel_basis(M)
    assert (M @ K.basis).is_zero()
    assert K.dim + image_basis(M).dim == M.cols
    assert image_basis(M) == Subspace.column_span(M)


@given(matrices(), st.data())
def test_solve(M, data):
    x0 = data.draw(st.lists(st.integers(-3, 3), min_size=M.cols, max_size=M.cols))
    b = M.apply(x0)
    x, ker = solve(M, b)
    assert M.apply(x) == b
    assert ker == kernel_basis(M)


def test_solve_inconsistent():
    assert solve(Mat(2, 1, [[1], [1]]), [1, 2]) is None


@given(st.integers(1, 4), st.data())
def test_inverse(n, data):
    M = data.draw(matrices(rows=n, cols=n))
    if M.rank() < n:
        with pytest.raises(ContractError):
            inverse(M)
    else:
        assert M @ inverse(M) == Mat.identity(n)


def test_solve_matrix_errors():
    with pytest.raises(ContractError, match="inconsistent"):
        solve_matrix(Mat(2, 1, [[1], [0]]), Mat(2, 1, [[0], [1]]))
    with pytest.raises(ContractError, match="full column rank"):
        solve_matrix(Mat(1, 2, [[1, 1]]), Mat(1, 1, [[1]]))


@given(matrices(rows=4), matrices(rows=4))
def test_subspace_dimension_formula(A, B):
    U, W = Subspace.column_span(A), Subspace.column_span(B)
    S, I = U + W, U.intersect(W)
    assert S.dim + I.dim == U.dim + W.dim
    assert I <= U and I <= W and U <= S and W <= S


@given(matrices(rows=4))
def test_canonical_basis_is_unique(A):
    U = Subspace.column_span(A)
    V = Subspace.span(4, list(reversed(U.basis.columns())))
    assert U == V and U.basis == V.basis


@given(matrices(rows=4))
def test_coords_round_trip(A):
    U = Subspace.column_span(A)
    for v in U.vectors():
        assert U.basis.apply(U.coords(v)) == [Fraction(x) for x in v]


def test_coords_rejects_outsiders():
    U = Subspace.span(2, [[1, 0]])
    with pytest.raises(ContractError):
        U.coords([0, 1])
    assert not U.contains([0, 1])


@given(matrices(rows=4))
def test_annihilator(A):
    U = Subspace.column_span(A)
    Ann = annihilator(U)
    assert Ann.dim == 4 - U.dim
    assert (Ann.basis.T @ U.basis).is_zero()


@given(matrices(rows=3, cols=3))
def test_quotient_reps(M):
    # homology of a two-step complex Q^3 -> Q^3 -> 0
    K = kernel_basis(Mat(0, 3))
    I = image_basis(M)
    R = quotient_reps(K, I)
    assert R.dim == 3 - I.dim
    assert (R + I) == K


@given(matrices(rows=3, cols=2), matrices(rows=3, cols=2))
def test_fiber_product(f, g):
    P = fiber_product(f, g)
    for v in P.vectors():
        assert f.apply(v[:2]) == g.apply(v[2:])
    assert P.dim == 4 - Mat.hstack([f, g], rows=3).rank()


@given(matrices())
def test_kernel_of_sparse_rows(M):
    rows = [{j: v for j, v in enumerate(r) if v} for r in M.raw_rows()]
    assert kernel_of_rows(rows, M.cols) == kernel_basis(M)
