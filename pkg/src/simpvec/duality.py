"""Shifted duals of VS n-groupoids, pairings and the closed-form low duals.

A functional on ``V_n`` is stored in dual coordinates, so composing with a
linear map ``g`` is multiplication by ``g^T``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .chains import ChainCx, ChainMap, dual_shifted, is_quasi_iso, normalized
from .doldkan import bnr
from .linalg import ContractError, Mat, Subspace, annihilator, kernel_basis, solve
from .maps import MappingSpace, SimpMap, add_term, validate_simp_map
from .simplex import degen, face, identity, shuffles, simplices
from .simplicial import (SVS, Truncated, core_projection, horn_space, multiplication,
                         normalized_basis)


@lru_cache(maxsize=None)
def _bnr(n: int):
    return bnr(n)


# ---------------------------------------------------------------------------
# the n-dual

class NDual(MappingSpace):
    """``V^{n*} = IHom(V, B^n R)``.

    Level ``l`` is the space of tuples ``(f^q)`` of functionals on ``V_n``,
    one per ``q`` in ``Delta[l]_n``, subject to multiplicativity at level
    ``n+1`` and vanishing on degenerate simplices.
    """

    def __init__(self, V: SVS, n: int, k: int = 0):
        super().__init__(V, _bnr(n), n, name=f"{V.name}^{{{n}*}}")
        self.V, self.k = V, k

    def equations(self, m: int) -> list[dict]:
        V, n, k = self.V, self.n, self.k
        lay = self.layout(m)
        rows: list[dict] = []
        if n >= 1:
            for p in simplices(m, n - 1):
                for i in range(n):
                    eq: dict = {}
                    add_term(eq, lay, (n, degen(p, i)), None, V.s(n - 1, i))
                    rows.extend(eq.values())
        H = horn_space(V, n + 1, k)
        Hb = H.space.basis
        Mk = multiplication(V, n, k) @ Hb
        P = {i: H.slot(i) @ Hb for i in H.indices}
        core = kernel_basis(H.projection).basis
        dk_core = V.d(n + 1, k) @ core
        for r in simplices(m, n + 1):
            eq = {}
            add_term(eq, lay, (n, face(r, k)), None, Mk)
            for i in H.indices:
                sign = -1 if (i - k + 1) % 2 else 1
                add_term(eq, lay, (n, face(r, i)), None, P[i], -sign)
            rows.extend(eq.values())
            if core.cols:
                eq = {}
                add_term(eq, lay, (n, face(r, k)), None, dk_core)
                rows.extend(eq.values())
        return rows

    def functional(self, l: int, vec: Sequence, q) -> Mat:
        """The component ``f^q`` as a ``1 x dim V_n`` row."""
        return self.layout(l).block(vec, (self.n, tuple(q)))

    def component_tags(self, l: int) -> list[tuple[tuple[int, ...], str]]:
        """``interior`` for surjective ``q``, ``face`` otherwise."""
        return [(q, "interior" if set(q) == set(range(l + 1)) else "face") for q in simplices(l, self.n)]


def n_dual(V: SVS, n: int) -> NDual:
    return NDual(V, n)


# ---------------------------------------------------------------------------
# simplicial pairings

@dataclass
class SimplicialPairing:
    """A map ``alpha : V (x) W -> B^n R`` given by its level-``n`` bilinear form.

    ``alpha`` is a ``dim V_n x dim W_n`` matrix with ``alpha(v, w) = v^T A w``.
    """

    left: SVS
    right: SVS
    n: int
    alpha: Mat

    def value(self, v: Sequence, w: Sequence) -> int:
        return sum(a * b for a, b in zip(v, self.alpha.apply(list(w))) if a and b)

    def is_multiplicative(self) -> bool:
        """``sum (-1)^i alpha (d_i (x) d_i) = 0`` on level ``n+1``."""
        V, W, n = self.left, self.right, self.n
        acc = Mat(V.dim(n + 1), W.dim(n + 1))
        for i in range(n + 2):
            t = V.d(n + 1, i).T @ self.alpha @ W.d(n + 1, i)
            acc = acc + (t if i % 2 == 0 else -t)
        return acc.is_zero()

    def is_normalized(self) -> bool:
        """``alpha (s_i (x) s_i) = 0`` for ``i < n``."""
        V, W, n = self.left, self.right, self.n
        return all((V.s(n - 1, i).T @ self.alpha @ W.s(n - 1, i)).is_zero() for i in range(n))


def n_dual_pairing(V: SVS, n: int, D: NDual | None = None) -> SimplicialPairing:
    """``<phi, X> = phi^{E_n}(X)`` on ``V^{n*} (x) V``."""
    D = D or n_dual(V, n)
    rows = [D.functional(n, vec, identity(n)).row(0) for vec in D.solution(n).vectors()]
    A = Mat(len(rows), V.dim(n), rows) if rows else Mat(0, V.dim(n))
    return SimplicialPairing(D, V, n, A)


def pairing_from_tensor_dual(V: SVS, W: SVS, n: int, coords: Sequence) -> SimplicialPairing:
    """Read a pairing off a vertex of ``(V (x) W)^{n*}``."""
    from .maps import tensor_svs
    D = n_dual(tensor_svs(V, W), n)
    vec = D.ambient(0, coords)
    row = D.functional(0, vec, (0,) * (n + 1)).row(0)
    wn = W.dim(n)
    A = Mat(V.dim(n), wn, [row[a * wn:(a + 1) * wn] for a in range(V.dim(n))])
    return SimplicialPairing(V, W, n, A)


def induced_maps(alpha: SimplicialPairing, up_to: int, left_dual: NDual | None = None,
                 right_dual: NDual | None = None) -> tuple[SimpMap, SimpMap]:
    """``(alpha^l : W -> V^{n*}, alpha^r : V -> W^{n*})`` through level ``up_to``.

    ``(alpha^l w)^q (v) = alpha(v, q^* w)`` and ``(alpha^r v)^q (w) = alpha(q^* v, w)``.
    """
    V, W, n, A = alpha.left, alpha.right, alpha.n, alpha.alpha
    DV = left_dual or n_dual(V, n)
    DW = right_dual or n_dual(W, n)

    def right_level(k: int) -> Mat:
        lay = DW.layout(k)
        S = DW.solution(k)
        At = A.T
        cols = []
        for b in range(V.dim(k)):
            blocks = {}
            for q in simplices(k, n):
                v = V.arrow(q, k).raw_col(b)
                blocks[(n, q)] = Mat.row_vector(At.apply(list(v)))
            cols.append(S.coords(lay.pack(blocks)))
        return Mat.from_columns(cols, S.dim) if cols else Mat(S.dim, 0)

    al = _left_induced(alpha, up_to, DV)
    ar = SimpMap(V, DW, {k: right_level(k) for k in range(up_to + 1)}, name="alpha^r")
    return al, ar


# ---------------------------------------------------------------------------
# IM pairings of complexes

@dataclass
class IMPairing:
    """``lambda : A (x) B -> Q[-n]``; ``comps[i]`` is ``dim A_i x dim B_{n-i}``."""

    left: ChainCx
    right: ChainCx
    n: int
    comps: dict[int, Mat]

    def comp(self, i: int) -> Mat:
        m = self.comps.get(i)
        return m if m is not None else Mat(self.left.dim(i), self.right.dim(self.n - i))

    def law_holds(self) -> bool:
        """``lambda(d u, w) + (-1)^{i+1} lambda(u, d w) = 0``, ``u`` in degree ``i+1``."""
        A, B, n = self.left, self.right, self.n
        for i in range(A.lo - 1, A.hi + 1):
            if not A.dim(i + 1) or not B.dim(n - i):
                continue
            t1 = A.d(i + 1).T @ self.comp(i)
            t2 = self.comp(i + 1) @ B.d(n - i)
            tot = t1 + (t2 if (i + 1) % 2 == 0 else -t2)
            if not tot.is_zero():
                return False
        return True


def associated_im_pairing(alpha: SimplicialPairing, up_to: int) -> IMPairing:
    """``lambda_alpha = N(alpha) . EZ`` on ``N V (x) N W``."""
    V, W, n, A = alpha.left, alpha.right, alpha.n, alpha.alpha
    NV, NW = normalized(V, up_to), normalized(W, up_to)
    comps = {}
    for i in range(0, n + 1):
        j = n - i
        if i > up_to or j > up_to:
            continue
        acc = Mat(NV.complex.dim(i), NW.complex.dim(j))
        for mu, nu, sign in shuffles(i, j):
            a = _degens(V, i, nu) @ NV.inclusions[i].basis
            b = _degens(W, j, mu) @ NW.inclusions[j].basis
            t = a.T @ A @ b
            acc = acc + (t if sign > 0 else -t)
        comps[i] = acc
    return IMPairing(NV.complex, NW.complex, n, comps)


def _degens(X: SVS, level: int, idx) -> Mat:
    M = Mat.identity(X.dim(level))
    for j in idx:
        M = X.s(level, j) @ M
        level += 1
    return M


def im_induced_maps(lam: IMPairing) -> tuple[ChainMap, ChainMap]:
    """``lambda^l : B -> A*[-n]`` with sign ``(-1)^{(n-j) j}`` and ``lambda^r : A -> B*[-n]``."""
    A, B, n = lam.left, lam.right, lam.n
    DA, DB = dual_shifted(A, n), dual_shifted(B, n)
    left = {}
    for j in B.degrees():
        m = lam.comp(n - j)
        left[j] = m if ((n - j) * j) % 2 == 0 else -m
    right = {i: lam.comp(i).T for i in A.degrees()}
    return ChainMap(B, DA, left), ChainMap(A, DB, right)


def is_hom_nondegenerate(alpha: SimplicialPairing, bound: int) -> bool:
    """``lambda^r_alpha : N V -> (N W)*[-n]`` is a quasi-isomorphism in degrees ``n-bound..bound``."""
    lam = associated_im_pairing(alpha, bound + 1)
    _, right = im_induced_maps(lam)
    return is_quasi_iso(right, range(alpha.n - bound, bound + 1))


def double_dual_check(V: SVS, n: int, bound: int) -> bool:
    """``<,>^l : V -> (V^{n*})^{n*}`` is a weak equivalence through degree ``bound``."""
    from .doldkan import weak_equivalence
    D = n_dual(V, n)
    pairing = n_dual_pairing(V, n, D)
    DD = n_dual(D, n)
    al = _left_induced(pairing, bound + 1, DD)
    return weak_equivalence(al, bound)


def _left_induced(alpha: SimplicialPairing, up_to: int, DV: NDual) -> SimpMap:
    W, n, A = alpha.right, alpha.n, alpha.alpha

    def level(k: int) -> Mat:
        lay = DV.layout(k)
        S = DV.solution(k)
        cols = []
        for b in range(W.dim(k)):
            blocks = {(n, q): Mat.row_vector(A.apply(list(W.arrow(q, k).raw_col(b)))) for q in simplices(k, n)}
            cols.append(S.coords(lay.pack(blocks)))
        return Mat.from_columns(cols, S.dim) if cols else Mat(S.dim, 0)
    return SimpMap(W, DV, {k: level(k) for k in range(up_to + 1)}, name="<,>^l")


# ---------------------------------------------------------------------------
# annihilators and cores

def degeneracy_annihilator(V: SVS, m: int, B: Sequence[int]) -> Subspace:
    """``O_B = Ann(sum_{i in B} s_i V_{m-1})`` inside ``V_m*``."""
    B = tuple(sorted(set(B)))
    if any(i < 0 or i >= m for i in B):
        raise ContractError("degeneracy index out of range")

    def build():
        if not B:
            return Subspace.full(V.dim(m))
        span = Subspace.column_span(Mat.hstack([V.s(m - 1, i) for i in B], rows=V.dim(m)))
        return annihilator(span)
    return V.memo(("O", m, B), build)


def core(V: SVS, n: int, i: int) -> Subspace:
    """``ker d_i`` in ``V_n``."""
    return V.memo(("kerd", n, i), lambda: kernel_basis(V.d(n, i)))


def split_check(V: SVS, n: int, i: int) -> bool:
    """``1 - s_i d_i`` lands in ``ker d_i`` and ``1 - s_i d_{i+1}`` in ``ker d_{i+1}``."""
    I = Mat.identity(V.dim(n))
    a = I - V.s(n - 1, i) @ V.d(n, i)
    b = I - V.s(n - 1, i) @ V.d(n, i + 1)
    return (V.d(n, i) @ a).is_zero() and (V.d(n, i + 1) @ b).is_zero()


# ---------------------------------------------------------------------------
# closed forms in low degree

def one_dual_closed(V: SVS) -> Truncated:
    """``V_1* => O_0`` with ``d_0 xi = xi (1 - s_0 d_1)``, ``d_1 xi = xi (1 - s_0 d_0)``."""
    O0 = degeneracy_annihilator(V, 1, [0])
    I = Mat.identity(V.dim(1))
    S0 = V.s(0, 0)
    d0 = O0.coords_of((I - S0 @ V.d(1, 1)).T)
    d1 = O0.coords_of((I - S0 @ V.d(1, 0)).T)
    return Truncated([O0.dim, V.dim(1)], {1: [d0, d1]}, {0: [O0.basis]},
                     extension="groupoid", name=f"{V.name}^{{1*}}closed")


def one_dual_extraction(V: SVS, closed: Truncated, D: NDual) -> SimpMap:
    """Component extraction ``V^{1*} -> closed form`` on levels 0 and 1."""
    O0 = degeneracy_annihilator(V, 1, [0])
    lev0 = O0.coords_of(_component_matrix(D, 0, (0, 0)))
    lev1 = _component_matrix(D, 1, (0, 1))
    return SimpMap(D, closed, {0: lev0, 1: lev1}, extend=True, name="extract")


def _component_matrix(D: NDual, l: int, q) -> Mat:
    """Columns: the ``f^q`` component (as a vector in ``V_n*``) of each basis simplex."""
    S = D.solution(l)
    cols = [D.functional(l, vec, q).row(0) for vec in S.vectors()]
    return Mat.from_columns(cols, D.V.dim(D.n)) if cols else Mat(D.V.dim(D.n), 0)


@dataclass
class TwoDualData:
    """The pieces of the closed 2-dual, all functionals in ``V_2*`` coordinates."""

    O0: Subspace
    O1: Subspace
    O01: Subspace
    L1: Subspace
    L2: Subspace
    gamma: tuple[Mat, Mat, Mat]


def _two_dual_data(V: SVS) -> TwoDualData:
    n2 = V.dim(2)
    O0 = degeneracy_annihilator(V, 2, [0])
    O1 = degeneracy_annihilator(V, 2, [1])
    O01 = degeneracy_annihilator(V, 2, [0, 1])
    g = tuple(core_projection(V, 2, k) for k in range(3))
    S0T, S1T = V.s(1, 0).T, V.s(1, 1).T
    z1, z2 = Mat(V.dim(1), n2), Mat(n2, n2)
    L1 = kernel_basis(Mat.vstack([
        Mat.hstack([S0T, z1], rows=V.dim(1)),
        Mat.hstack([z1, S1T], rows=V.dim(1)),
        Mat.hstack([g[1].T, -g[1].T], rows=n2)], cols=2 * n2))
    # (phi012, phi112, phi122, phi001)
    Z = z2
    L2 = kernel_basis(Mat.vstack([
        Mat.hstack([z1, S0T, z1, z1], rows=V.dim(1)),
        Mat.hstack([z1, z1, S1T, z1], rows=V.dim(1)),
        Mat.hstack([z1, z1, z1, S0T], rows=V.dim(1)),
        Mat.hstack([g[0].T, -g[1].T, Z, Z], rows=n2),
        Mat.hstack([Z, g[1].T, -g[1].T, Z], rows=n2),
        Mat.hstack([g[2].T, Z, Z, -g[1].T], rows=n2)], cols=4 * n2))
    return TwoDualData(O0, O1, O01, L1, L2, g)


def two_dual_closed(V: SVS) -> Truncated:
    """The 2-truncated closed form of ``V^{2*}``, extended as a VS 2-groupoid."""
    T = _two_dual_data(V)
    n2 = V.dim(2)
    I = Mat.identity(n2)
    Z = Mat(n2, n2)
    g0, g1, g2 = T.gamma
    s0d0 = V.s(1, 0) @ V.d(2, 0)
    s1d2 = V.s(1, 1) @ V.d(2, 2)
    s1d1 = V.s(1, 1) @ V.d(2, 1)
    s1d0 = V.s(1, 1) @ V.d(2, 0)

    def ambient_faces_1():
        return (Mat.hstack([Z, g0.T], rows=n2), Mat.hstack([g2.T, Z], rows=n2))

    a0, a1 = ambient_faces_1()
    d1_0 = T.O01.coords_of(a0 @ T.L1.basis)
    d1_1 = T.O01.coords_of(a1 @ T.L1.basis)
    s0_0 = T.L1.coords_of(Mat.vstack([T.O01.basis, T.O01.basis], cols=T.O01.dim))

    def blk(*row):
        return Mat.hstack(list(row), rows=n2)
    D0 = Mat.vstack([blk(Z, I, Z, Z), blk(Z, Z, I, Z)], cols=4 * n2)
    D1 = Mat.vstack([blk((I - s0d0).T, Z, Z, s1d2.T), blk((I - s1d2).T, Z, s0d0.T, Z)], cols=4 * n2)
    D2 = Mat.vstack([blk(Z, Z, Z, I), blk((I - s1d1).T, s1d0.T, Z, Z)], cols=4 * n2)
    d2 = [T.L1.coords_of(D @ T.L2.basis) for D in (D0, D1, D2)]
    # degeneracies out of level 1, from (eta001, eta011)
    e001 = Mat.hstack([I, Z], rows=n2)
    e011 = Mat.hstack([Z, I], rows=n2)
    S0 = Mat.vstack([e001, e001, e011, a1], cols=2 * n2)
    S1 = Mat.vstack([e011, a0, a0, e001], cols=2 * n2)
    s1 = [T.L2.coords_of(S @ T.L1.basis) for S in (S0, S1)]
    return Truncated([T.O01.dim, T.L1.dim, T.L2.dim], {1: [d1_0, d1_1], 2: d2}, {0: [s0_0], 1: s1},
                     extension="groupoid", name=f"{V.name}^{{2*}}closed")


def two_dual_extraction(V: SVS, closed: Truncated, D: NDual) -> SimpMap:
    """Component extraction ``V^{2*} -> closed form``."""
    T = _two_dual_data(V)
    lev0 = T.O01.coords_of(_component_matrix(D, 0, (0, 0, 0)))
    lev1 = T.L1.coords_of(Mat.vstack([_component_matrix(D, 1, q) for q in ((0, 0, 1), (0, 1, 1))],
                                     cols=D.dim(1)))
    lev2 = T.L2.coords_of(Mat.vstack([_component_matrix(D, 2, q)
                                      for q in ((0, 1, 2), (1, 1, 2), (1, 2, 2), (0, 0, 1))], cols=D.dim(2)))
    return SimpMap(D, closed, {0: lev0, 1: lev1, 2: lev2}, extend=True, name="extract")


def closed_form_iso_check(f: SimpMap, n: int) -> bool:
    """Levelwise bijective through ``n+1`` and simplicial there."""
    for l in range(n + 2):
        M = f.at(l)
        if M.rows != M.cols or M.rank() != M.rows:
            return False
    return not validate_simp_map(f, n + 1)


# ---------------------------------------------------------------------------
# the dual K*(V) and its defect functional

@dataclass
class KStar:
    svs: Truncated
    ker_d0: Subspace
    ker_p22: Subspace


def kstar(V: SVS) -> KStar:
    """``V_2* => (ker d_0^2)* => (ker p^2_2)*`` with the printed faces and degeneracies."""
    n2 = V.dim(2)
    I = Mat.identity(n2)
    K1 = core(V, 2, 0)
    K0 = normalized_basis(V, 2)
    s0, s1 = V.s(1, 0), V.s(1, 1)
    d0, d1, d2 = (V.d(2, i) for i in range(3))
    one = V.s(1, 1) @ V.s(0, 0)
    dd11 = V.d(1, 1) @ d1
    dd00 = V.d(1, 0) @ d0
    # faces V_2* -> (ker d_0^2)*, dual to maps ker d_0^2 -> V_2
    g = [I, I - s0 @ d1, I - s0 @ d1 - s1 @ d2 + one @ dd11]
    f2 = [(G @ K1.basis).T for G in g]
    # faces (ker d_0^2)* -> (ker p_2^2)*, dual to maps ker p_2^2 -> ker d_0^2
    h = [I, I - s1 @ d2]
    f1 = [K1.coords_of(H @ K0.basis).T for H in h]
    # degeneracies (ker p)* -> (ker d0)* and (ker d0)* -> V_2*
    dg0 = [K0.coords_of((I - s1 @ d1) @ K1.basis).T]
    dg1 = [K1.coords_of(I - s0 @ d0).T, K1.coords_of(I - s0 @ d0 - s1 @ d1 + one @ dd00).T]
    T = Truncated([K0.dim, K1.dim, n2], {1: f1, 2: f2}, {0: dg0, 1: dg1}, extension="groupoid",
                  name=f"K*({V.name})")
    return KStar(T, K1, K0)


def kstar_legs(V: SVS, K: KStar | None = None) -> ChainMap:
    """The comparison ``N(K*(V)) -> N(V)*[-2]`` built from ``1^*``, ``s_1^*`` and the identity."""
    K = K or kstar(V)
    NK = normalized(K.svs, 2)
    NV = normalized(V, 2)
    target = dual_shifted(NV.complex, 2)
    one = V.s(1, 1) @ V.s(0, 0)
    c2 = one.T @ NK.inclusions[2].basis
    s1_on_N1 = K.ker_d0.coords_of(V.s(1, 1) @ NV.inclusions[1].basis)
    c1 = s1_on_N1.T @ NK.inclusions[1].basis
    c0 = NK.inclusions[0].basis
    return ChainMap(NK.complex, target, {0: c0, 1: c1, 2: c2})


def kstar_defect_form(V: SVS) -> Mat:
    """``T`` with ``defect(phi, W) = phi(T W)``, ``T = s_0 d - 1 d_1 d_2`` on ``V_2``."""
    d = V.d(2, 0) - V.d(2, 1) + V.d(2, 2)
    one = V.s(1, 1) @ V.s(0, 0)
    return V.s(1, 0) @ d - one @ V.d(1, 1) @ V.d(2, 2)


def kstar_defect(V: SVS, phi: Sequence, W: Sequence) -> int:
    """``phi(s_0 dW - 1 d_1 d_2 W)`` for ``phi`` in ``V_2*`` and ``W`` in ``V_2``."""
    TW = kstar_defect_form(V).apply(list(W))
    return sum(a * b for a, b in zip(phi, TW))


def vertex_functional(V: SVS, theta: Sequence) -> list:
    """``theta d_0 d_0`` in ``V_2*`` for ``theta`` in ``V_0*``."""
    return (V.d(1, 0) @ V.d(2, 0)).T.apply(list(theta))


def pairing_interior(D: NDual, k: int) -> Mat:
    """Interior component of the dual multiplication fixed by the pairing identity.

    Rows index ``V_n*``; columns index the horn basis of ``Lambda^{n+1}_k(D)``.
    Requires ``V`` to be a VS n-groupoid, so that ``m_k`` of ``V`` is onto.
    """
    V, n = D.V, D.n
    HV = horn_space(V, n + 1, k)
    HD = horn_space(D, n + 1, k)
    MV = multiplication(V, n, k) @ HV.space.basis
    # target functional rows for every D-horn basis vector
    cols = []
    for hvec in HD.space.vectors():
        rhs = Mat(1, HV.space.dim)
        for i in HD.indices:
            sign = -1 if (i - k + 1) % 2 else 1
            comp = HD.slot(i).apply(list(hvec))
            amb = D.solution(n).basis.apply(comp)
            f = D.functional(n, amb, identity(n))
            t = f @ HV.slot(i) @ HV.space.basis
            rhs = rhs + (t if sign > 0 else -t)

        sol = solve(MV.T, rhs.row(0))
        if sol is None:
            raise ContractError("pairing identity has no solution")
        x, ker = sol
        if ker.dim:
            raise ContractError("m_k of V is not onto; interior not determined")
        cols.append(x)
    return Mat.from_columns(cols, V.dim(n)) if cols else Mat(V.dim(n), 0)


def moore_interior(D: NDual, k: int) -> Mat:
    """Interior component of the Moore multiplication of ``D`` on the same horn basis."""
    n = D.n
    HD = horn_space(D, n + 1, k)
    M = multiplication(D, n, k) @ HD.space.basis
    return _component_matrix(D, n, identity(n)) @ M
