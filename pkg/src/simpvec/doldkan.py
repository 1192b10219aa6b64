"""The Dold-Kan correspondence and the shuffle maps.

``DK(A)_m`` is the sum over surjections ``sigma : [m] ->> [k]`` of ``A_k``,
ordered by ``k`` and then lexicographically in ``sigma``.
"""
from __future__ import annotations

from .chains import (ChainCx, ChainMap, concentrated, is_quasi_iso, mapping_complex, normalized,
                     tensor_complex, truncate_nonneg)
from .linalg import ContractError, Mat, inverse
from .maps import MappingSpace, SimpMap, evaluation, normalized_map, tensor_svs
from .simplex import degen, face, identity, shuffles, simplices, surjections
from .simplicial import SVS, Level, normalized_projection


def dk_summands(C: ChainCx, m: int) -> list[tuple[tuple[int, ...], int]]:
    if C.lo < 0:
        raise ContractError("Dold-Kan needs a non-negatively graded complex")
    out = []
    for k in range(0, min(m, C.hi) + 1):
        if C.dim(k):
            out.extend((sig, k) for sig in surjections(m, k))
    return out


class DK(SVS):
    """The Dold-Kan simplicial vector space of a non-negative complex."""

    def __init__(self, A: ChainCx, name: str | None = None):
        super().__init__()
        if A.lo < 0:
            raise ContractError("Dold-Kan needs a non-negatively graded complex")
        self.A = A
        self.groupoid_order = max((k for k in A.degrees() if A.dim(k)), default=0)
        self.name = name or f"DK({A.name})"

    def summands(self, m: int):
        return self.memo(("summands", m), lambda: dk_summands(self.A, m))

    def offsets(self, m: int) -> dict:
        def build():
            off, o = {}, 0
            for key in self.summands(m):
                off[key] = o
                o += self.A.dim(key[1])
            return off, o
        return self.memo(("offsets", m), build)

    def _level(self, m: int) -> Level:
        A = self.A
        off, size = self.offsets(m)
        faces, degens = [], []
        if m:
            poff, psize = self.offsets(m - 1)
            for i in range(m + 1):
                ent = {}
                for (sig, k), o in off.items():
                    u = face(sig, i)
                    img = set(u)
                    if len(img) == k + 1:
                        o2 = poff[(u, k)]
                        for t in range(A.dim(k)):
                            ent[(o2 + t, o + t)] = 1
                    elif img == set(range(k)) and (u, k - 1) in poff:
                        o2 = poff[(u, k - 1)]
                        sign = -1 if k % 2 else 1
                        for a, b, v in A.d(k).nonzeros():
                            ent[(o2 + a, o + b)] = sign * v
                faces.append(Mat.from_sparse(psize, size, ent))
            for j in range(m):
                ent = {}
                for (sig, k), o in poff.items():
                    o2 = off[(degen(sig, j), k)]
                    for t in range(A.dim(k)):
                        ent[(o2 + t, o + t)] = 1
                degens.append(Mat.from_sparse(size, psize, ent))
        return Level(size, tuple(faces), tuple(degens))

    def id_summand(self, m: int) -> int:
        """Offset of the ``A_m`` summand indexed by the identity of ``[m]``."""
        return self.offsets(m)[0][(identity(m), m)]


def dk(A: ChainCx) -> DK:
    return DK(A)


def bnr(n: int) -> DK:
    """``B^n R = DK(Q[-n])``."""
    return DK(concentrated(n), name=f"B{n}")


def dk_unit_matrix(X: SVS, NX, C: ChainCx, m: int) -> Mat:
    """``phi_m : DK(N X)_m -> X_m``, ``x_sigma -> X(sigma)(x)``."""
    blocks = [X.arrow(sig, k) @ NX.inclusions[k].basis for sig, k in dk_summands(C, m)]
    return Mat.hstack(blocks, rows=X.dim(m))


def dk_unit_iso(V: SVS, up_to: int) -> SimpMap:
    """The natural map ``DK(N V) -> V`` through level ``up_to``."""
    NV = normalized(V, up_to)
    D = DK(NV.complex)
    return SimpMap(D, V, {m: dk_unit_matrix(V, NV, NV.complex, m) for m in range(up_to + 1)}, name="phi")


def brutal_truncation(C: ChainCx, hi: int) -> ChainCx:
    lo = C.lo
    if hi < lo:
        return ChainCx(lo, [0], {}, C.name)
    return ChainCx(lo, [C.dim(i) for i in range(lo, hi + 1)],
                   {i: d for i, d in C.diffs.items() if i <= hi}, C.name)


def _degen_chain(X: SVS, level: int, idx) -> Mat:
    M = Mat.identity(X.dim(level))
    for j in idx:
        M = X.s(level, j) @ M
        level += 1
    return M


def ez_ambient(V: SVS, W: SVS, NV, NW, p: int, q: int) -> Mat:
    """Shuffle map on ``N_p V (x) N_q W`` with values in ``(V (x) W)_{p+q}``."""
    acc = None
    for mu, nu, sign in shuffles(p, q):
        a = _degen_chain(V, p, nu) @ NV.inclusions[p].basis
        b = _degen_chain(W, q, mu) @ NW.inclusions[q].basis
        t = a.kron(b)
        t = t if sign > 0 else -t
        acc = t if acc is None else acc + t
    return acc


def ez(V: SVS, W: SVS, up_to: int) -> ChainMap:
    """Eilenberg-Zilber ``N V (x) N W -> N(V (x) W)`` through degree ``up_to``."""
    NV, NW = normalized(V, up_to), normalized(W, up_to)
    T = tensor_svs(V, W)
    NT = normalized(T, up_to)
    TC = tensor_complex(NV.complex, NW.complex)
    comps = {}
    for d in range(up_to + 1):
        blocks = []
        for p in sorted(TC.offsets[d]):
            blocks.append(ez_ambient(V, W, NV, NW, p, d - p))
        amb = Mat.hstack(blocks, rows=T.dim(d))
        comps[d] = NT.inclusions[d].coords_of(amb)
    return ChainMap(brutal_truncation(TC.complex, up_to), NT.complex, comps)


def _front(V: SVS, d: int, p: int) -> Mat:
    M = Mat.identity(V.dim(d))
    for j in range(d, p, -1):
        M = V.d(j, j) @ M
    return M


def _back(W: SVS, d: int, q: int) -> Mat:
    M = Mat.identity(W.dim(d))
    for l in range(d, q, -1):
        M = W.d(l, 0) @ M
    return M


def aw_ambient(V: SVS, W: SVS, d: int, p: int) -> Mat:
    """Front/back face map ``(V (x) W)_d -> N_p V (x) N_q W`` followed by the
    projections along degenerate simplices."""
    q = d - p
    a = normalized_projection(V, p) @ _front(V, d, p)
    b = normalized_projection(W, q) @ _back(W, d, q)
    return a.kron(b)


def aw(V: SVS, W: SVS, up_to: int) -> ChainMap:
    """Alexander-Whitney ``N(V (x) W) -> N V (x) N W`` through degree ``up_to``."""
    NV, NW = normalized(V, up_to), normalized(W, up_to)
    T = tensor_svs(V, W)
    NT = normalized(T, up_to)
    TC = tensor_complex(NV.complex, NW.complex)
    comps = {}
    for d in range(up_to + 1):
        blocks = [aw_ambient(V, W, d, p) for p in sorted(TC.offsets[d])]
        comps[d] = Mat.vstack(blocks, cols=T.dim(d)) @ NT.inclusions[d].basis
    return ChainMap(NT.complex, brutal_truncation(TC.complex, up_to), comps)


def weak_equivalence(f: SimpMap, bound: int) -> bool:
    """``N(f)`` is a quasi-isomorphism in degrees ``0..bound``."""
    return is_quasi_iso(normalized_map(f, bound + 1), range(bound + 1))


# ---------------------------------------------------------------------------
# shuffle maps for internal homs

class HomComparison:
    """Shared data for ``EZ^H`` and ``AW^H`` between ``N IHom(V, W)`` and
    ``IHom_{>=0}(N V, N W)``."""

    def __init__(self, V: SVS, W: SVS, up_to: int, H: MappingSpace | None = None):
        self.V, self.W, self.up_to = V, W, up_to
        self.H = H or MappingSpace(V, W)
        self.n = self.H.n
        b = max(self.n, up_to) + 1
        self.NV, self.NW = normalized(V, b), normalized(W, b)
        self.NH = normalized(self.H, up_to)
        self.hom = mapping_complex(self.NV.complex, self.NW.complex)
        self.trunc = truncate_nonneg(self.hom.complex)
        self.T = brutal_truncation(self.trunc.complex, up_to)

    def pack_target(self, p: int, comps: dict[int, Mat]) -> list:
        vec = self.hom.pack(p, comps)
        return self.trunc.cycles0.coords(vec) if p == 0 else vec

    def unpack_target(self, p: int, coords) -> dict[int, Mat]:
        vec = self.trunc.cycles0.basis.apply(list(coords)) if p == 0 else list(coords)
        return self.hom.unpack(p, vec)


def ez_hom(V: SVS, W: SVS, up_to: int, C: HomComparison | None = None) -> ChainMap:
    C = C or HomComparison(V, W, up_to)
    H, NV, NW, NH = C.H, C.NV, C.NW, C.NH
    ev = evaluation(H)
    comps = {}
    for p in range(up_to + 1):
        cols = []
        for phi in NH.inclusions[p].vectors():
            blocks = {}
            for i in C.hom.offsets[p]:
                l = i + p
                rows, ncols = NW.complex.dim(l), NV.complex.dim(i)
                if not rows or not ncols:
                    blocks[i] = Mat(rows, ncols)
                    continue
                acc = Mat(H.dim(l) * V.dim(l), ncols)
                for mu, nu, sign in shuffles(p, i):
                    a = Mat.column(_degen_chain(H, p, nu).apply(list(phi)))
                    b = _degen_chain(V, i, mu) @ NV.inclusions[i].basis
                    t = a.kron(b)
                    acc = acc + (t if sign > 0 else -t)
                blocks[i] = NW.inclusions[l].coords_of(ev.at(l) @ acc)
            cols.append(C.pack_target(p, blocks))
        comps[p] = Mat.from_columns(cols, C.T.dim(p)) if cols else Mat(C.T.dim(p), 0)
    return ChainMap(NH.complex, C.T, comps)


def aw_hom(V: SVS, W: SVS, up_to: int, C: HomComparison | None = None) -> ChainMap:
    C = C or HomComparison(V, W, up_to)
    H, NV, NW, NH, n = C.H, C.NV, C.NW, C.NH, C.n
    U = DK(C.T, name="DK(IHom>=0)")
    UV = tensor_svs(U, V)
    NU = normalized(U, n)
    NUV = normalized(UV, n)
    TC = tensor_complex(NU.complex, NV.complex)
    # e: N U (x) N V -> N W, then g = e . AW
    g = {}
    for d in range(n + 1):
        blocks = []
        for p in sorted(TC.offsets[d]):
            i = d - p
            cols = []
            for hcoord in range(NU.complex.dim(p)):
                e = [0] * NU.complex.dim(p)
                e[hcoord] = 1
                comps = C.unpack_target(p, e)
                f = comps.get(i, Mat(NW.complex.dim(d), NV.complex.dim(i)))
                cols.append(f)
            blocks.append(Mat.hstack(cols, rows=NW.complex.dim(d)) if cols else Mat(NW.complex.dim(d), 0))
        e_d = Mat.hstack(blocks, rows=NW.complex.dim(d))
        aw_d = Mat.vstack([aw_ambient(U, V, d, p) for p in sorted(TC.offsets[d])], cols=UV.dim(d))
        g[d] = e_d @ aw_d @ NUV.inclusions[d].basis
    # F = phi_W DK(g) phi_{U (x) V}^{-1} on levels <= n
    F = {}
    for l in range(n + 1):
        toff, o = {}, 0
        for key in dk_summands(NW.complex, l):
            toff[key] = o
            o += NW.complex.dim(key[1])
        blocks = []
        for key in dk_summands(NUV.complex, l):
            k = key[1]
            gk = g.get(k, Mat(NW.complex.dim(k), NUV.complex.dim(k)))
            M = Mat(o, NUV.complex.dim(k))
            if key in toff:
                ent = {(toff[key] + a, b): v for a, b, v in gk.nonzeros()}
                M = Mat.from_sparse(o, NUV.complex.dim(k), ent)
            blocks.append(M)
        DKg = Mat.hstack(blocks, rows=o)
        phiW = dk_unit_matrix(W, NW, NW.complex, l)
        phiUV = dk_unit_matrix(UV, NUV, NUV.complex, l)
        F[l] = phiW @ DKg @ inverse(phiUV)
    # rho_S(F) on the identity summands of DK(T)
    comps = {}
    for p in range(C.up_to + 1):
        cols = []
        lay = H.layout(p)
        for hcoord in range(C.T.dim(p)):
            u = [0] * U.dim(p)
            u[U.id_summand(p) + hcoord] = 1
            amb = {}
            for i in range(n + 1):
                for t in simplices(p, i):
                    x = U.arrow(t, p).apply(u)
                    amb[(i, t)] = F[i] @ Mat.column(x).kron(Mat.identity(V.dim(i)))
            hvec = H.solution(p).coords(lay.pack(amb))
            cols.append(NH.inclusions[p].coords(hvec))
        comps[p] = Mat.from_columns(cols, NH.complex.dim(p)) if cols else Mat(NH.complex.dim(p), 0)
    return ChainMap(C.T, NH.complex, comps)
