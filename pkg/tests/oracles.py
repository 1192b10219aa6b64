"""Independent constructions shared by the duality tests and the acceptance gate."""
from simpvec.chains import ChainMap, dual_shifted, make_complex, normalized, normalized_complex
from simpvec.duality import degeneracy_annihilator
from simpvec.linalg import Mat, Subspace
from simpvec.simplicial import normalized_basis


def one_dual_normal_iso(V, C):
    """``N(closed) -> N(V)*[-1]``: restriction to ``ker d_0`` and precomposition with ``s_0``."""
    NC = normalized(C, 1)
    K = normalized_basis(V, 1).basis
    O0 = degeneracy_annihilator(V, 1, [0])
    c0 = K.T @ O0.basis @ NC.inclusions[0].basis
    c1 = V.s(0, 0).T @ NC.inclusions[1].basis
    return ChainMap(NC.complex, dual_shifted(normalized_complex(V, 1), 1), {0: c0, 1: c1})


def two_dual_normal_complex(V):
    """``V_0* + K* -> K* + K* -> (ker p^2_2)*`` with ``K = ker d_0`` on level 1."""
    K = normalized_basis(V, 1).basis
    N2 = normalized_basis(V, 2).basis
    k, v0 = K.cols, V.dim(0)
    Ik = Mat.identity(k)
    # (a, b) -> (b, b + d_1^* a), dual maps written on coordinates of K*
    d1a = K.T @ V.d(1, 1).T
    top = Mat.vstack([Mat.hstack([Mat(k, v0), Ik], rows=k), Mat.hstack([d1a, Ik], rows=k)], cols=v0 + k)
    # (x, y) -> d_2^*(y - x) restricted to ker p^2_2, where d_2 lands in K
    d2 = Subspace.column_span(K).coords_of(V.d(2, 2) @ N2) if k else Mat(0, N2.cols)
    low = Mat.hstack([-d2.T, d2.T], rows=N2.cols)
    return make_complex([N2.cols, 2 * k, v0 + k], {1: low, 2: top})
