"""Simplicial maps, copowers and internal homs.

``MappingSpace(U, W)`` evaluates ``IHom(U, W)_m = SVec(U (x) Delta[m], W)``
for a VS n-groupoid ``W``.  A level-``m`` simplex is stored by its
components ``f^u_l : U_l -> W_l`` for ``l <= n`` and ``u`` in
``Delta[m]_l``; higher components follow from the Moore fillers of ``W``.
"""
from __future__ import annotations

from typing import Callable, Sequence

from .chains import ChainMap, homotopic, normalized
from .linalg import ContractError, Mat, Subspace, kernel_of_rows
from .simplex import Arrow, codegen, coface, degen, face, identity, simplices
from .simplicial import SVS, Level, Tensor, moore_filler, multiplication


# ---------------------------------------------------------------------------
# simplicial maps

class SimpMap:
    """A simplicial map given level by level.

    Components come from an explicit table, optionally extended above the
    table through the Moore fillers of the target (valid when the target is
    a VS n-groupoid and the table already reaches level ``n``).
    """

    def __init__(self, source: SVS, target: SVS, levels: dict[int, Mat] | None = None,
                 compute: Callable[[int], Mat] | None = None, extend: bool = False, name: str = "f"):
        self.source, self.target = source, target
        self._levels = dict(levels or {})
        self._compute = compute
        self._extend = extend
        self.name = name

    def at(self, m: int) -> Mat:
        f = self._levels.get(m)
        if f is not None:
            return f
        if self._compute is not None:
            f = self._compute(m)
        elif self._extend and self._levels and m > max(self._levels):
            f = extend_by_fillers(self, m)
        else:
            raise ContractError(f"map {self.name} is not defined at level {m}")
        self._levels[m] = f
        return f

    def __matmul__(self, other: "SimpMap") -> "SimpMap":
        return SimpMap(other.source, self.target, compute=lambda m: self.at(m) @ other.at(m),
                       name=f"{self.name}.{other.name}")


def extend_by_fillers(f: SimpMap, m: int, k: int = 0) -> Mat:
    """``f_m = mu^m_k (f_{m-1} d_i)_{i != k}``; right when the target is an (m-1)-groupoid."""
    U, W = f.source, f.target
    prev = f.at(m - 1)
    stack = Mat.vstack([prev @ U.d(m, i) for i in range(m + 1) if i != k], cols=U.dim(m))
    return moore_filler(W, m, k) @ stack


def identity_simp(V: SVS) -> SimpMap:
    return SimpMap(V, V, compute=lambda m: Mat.identity(V.dim(m)), name="id")


def zero_simp(U: SVS, W: SVS) -> SimpMap:
    return SimpMap(U, W, compute=lambda m: Mat(W.dim(m), U.dim(m)), name="0")


def validate_simp_map(f: SimpMap, up_to: int) -> list[str]:
    U, W = f.source, f.target
    bad = []
    for m in range(up_to + 1):
        fm = f.at(m)
        if fm.shape != (W.dim(m), U.dim(m)):
            bad.append(f"level {m} has shape {fm.shape}")
            continue
        if m == 0:
            continue
        prev = f.at(m - 1)
        for i in range(m + 1):
            if W.d(m, i) @ fm != prev @ U.d(m, i):
                bad.append(f"d_{i} fails at level {m}")
        for j in range(m):
            if fm @ U.s(m - 1, j) != W.s(m - 1, j) @ prev:
                bad.append(f"s_{j} fails into level {m}")
    return bad


def multiplicative_check(f: SimpMap, n: int, k: int = 0) -> bool:
    """``f_n(d_k w) = m_k((f_n d_i w)_{i != k})`` for all ``w`` in level ``n+1``."""
    U, W = f.source, f.target
    fn = f.at(n)
    stack = Mat.vstack([fn @ U.d(n + 1, i) for i in range(n + 2) if i != k], cols=U.dim(n + 1))
    return fn @ U.d(n + 1, k) == multiplication(W, n, k) @ stack


def normalized_map(f: SimpMap, up_to: int) -> ChainMap:
    """``N(f)`` restricted to the normalised complexes."""
    NU, NW = normalized(f.source, up_to), normalized(f.target, up_to)
    comps = {m: NW.inclusions[m].coords_of(f.at(m) @ NU.inclusions[m].basis) for m in range(up_to + 1)}
    return ChainMap(NU.complex, NW.complex, comps)


def homotopic_simplicial(f: SimpMap, g: SimpMap, up_to: int) -> bool:
    """Decided on normalised chains through degree ``up_to``."""
    return homotopic(normalized_map(f, up_to), normalized_map(g, up_to))


_TENSORS: dict = {}


def tensor_svs(V: SVS, W: SVS) -> Tensor:
    """Levelwise tensor product, shared per pair so its caches are reused."""
    key = (id(V), id(W))
    hit = _TENSORS.get(key)
    if hit is None or hit.V is not V or hit.W is not W:
        hit = Tensor(V, W)
        _TENSORS[key] = hit
    return hit


def tensor_map(f: SimpMap, g: SimpMap) -> SimpMap:
    return SimpMap(tensor_svs(f.source, g.source), tensor_svs(f.target, g.target),
                   compute=lambda m: f.at(m).kron(g.at(m)), name=f"{f.name}(x){g.name}")


# ---------------------------------------------------------------------------
# copowers with standard simplices

class Copower(SVS):
    """``V (x) Delta[m]``: level ``l`` is one copy of ``V_l`` per ``u`` in ``Delta[m]_l``."""

    def __init__(self, V: SVS, m: int):
        super().__init__()
        self.V, self.m = V, m
        self.name = f"{V.name}(x)D[{m}]"

    def _level(self, l: int) -> Level:
        V, m = self.V, self.m
        us = simplices(m, l)
        n = V.dim(l)
        faces = []
        if l:
            prev = {u: i for i, u in enumerate(simplices(m, l - 1))}
            np_ = V.dim(l - 1)
            for i in range(l + 1):
                blocks = {}
                for a, u in enumerate(us):
                    blocks[(prev[face(u, i)], a)] = V.d(l, i)
                faces.append(_block_matrix(len(prev), len(us), np_, n, blocks))
        degens = []
        if l:
            prev_us = simplices(m, l - 1)
            idx = {u: i for i, u in enumerate(us)}
            np_ = V.dim(l - 1)
            for j in range(l):
                blocks = {(idx[degen(u, j)], a): V.s(l - 1, j) for a, u in enumerate(prev_us)}
                degens.append(_block_matrix(len(us), len(prev_us), n, np_, blocks))
        return Level(len(us) * n, tuple(faces), tuple(degens))


def copower(V: SVS, m: int) -> Copower:
    return Copower(V, m)


def _block_matrix(R: int, C: int, r: int, c: int, blocks: dict[tuple[int, int], Mat]) -> Mat:
    ent = {}
    for (bi, bj), M in blocks.items():
        for i, j, v in M.nonzeros():
            ent[(bi * r + i, bj * c + j)] = v
    return Mat.from_sparse(R * r, C * c, ent)


# ---------------------------------------------------------------------------
# sparse equation assembly

class Layout:
    """Unknown blocks ``(l, u)``, each a ``rows x cols`` matrix flattened row-major."""

    def __init__(self, blocks: Sequence[tuple[tuple[int, Arrow], int, int]]):
        self.offset: dict[tuple[int, Arrow], int] = {}
        self.shape: dict[tuple[int, Arrow], tuple[int, int]] = {}
        o = 0
        for key, r, c in blocks:
            self.offset[key] = o
            self.shape[key] = (r, c)
            o += r * c
        self.size = o
        self.keys = [k for k, _, _ in blocks]

    def block(self, vec: Sequence, key) -> Mat:
        o = self.offset[key]
        r, c = self.shape[key]
        return Mat(r, c, [vec[o + a * c: o + (a + 1) * c] for a in range(r)])

    def pack(self, blocks: dict) -> list:
        vec = [0] * self.size
        for key, M in blocks.items():
            o = self.offset[key]
            c = self.shape[key][1]
            for i, j, v in M.nonzeros():
                vec[o + i * c + j] = v
        return vec


def add_term(eqs: dict, lay: Layout, key, A: Mat | None, B: Mat | None, coef: int = 1) -> None:
    """Accumulate ``coef * A X_key B`` into the equation table ``eqs[(p, q)]``.

    ``A`` or ``B`` set to None stands for an identity.
    """
    o = lay.offset[key]
    r, c = lay.shape[key]
    if r == 0 or c == 0:
        return
    if A is None:
        arows = [[(p, 1)] for p in range(r)]
    else:
        arows = [[(a, v) for a, v in enumerate(row) if v] for row in A.raw_rows()]
    if B is None:
        bcols = [[(q, 1)] for q in range(c)]
    else:
        bcols = [[] for _ in range(B.cols)]
        for b, q, v in B.nonzeros():
            bcols[q].append((b, v))
    for p, alist in enumerate(arows):
        if not alist:
            continue
        for q, blist in enumerate(bcols):
            if not blist:
                continue
            row = eqs.get((p, q))
            if row is None:
                row = eqs[(p, q)] = {}
            for a, av in alist:
                base = o + a * c
                for b, bv in blist:
                    var = base + b
                    nv = row.get(var, 0) + coef * av * bv
                    if nv:
                        row[var] = nv
                    else:
                        row.pop(var, None)


# ---------------------------------------------------------------------------
# internal homs

class MappingSpace(SVS):
    """``IHom(U, W)`` for a VS n-groupoid ``W``; levels are solved lazily."""

    def __init__(self, U: SVS, W: SVS, n: int | None = None, name: str | None = None):
        super().__init__()
        if n is None:
            n = W.groupoid_order
        if n is None:
            raise ContractError("target must be a VS n-groupoid with known n")
        self.U, self.W, self.n = U, W, n
        self.groupoid_order = n
        self.name = name or f"IHom({U.name},{W.name})"

    # layout and equations ------------------------------------------------
    def layout(self, m: int) -> Layout:
        def build():
            blocks = []
            for l in range(self.n + 1):
                for u in simplices(m, l):
                    blocks.append(((l, u), self.W.dim(l), self.U.dim(l)))
            return Layout(blocks)
        return self.memo(("layout", m), build)

    def equations(self, m: int) -> list[dict]:
        U, W, n = self.U, self.W, self.n
        lay = self.layout(m)
        rows: list[dict] = []
        for l in range(1, n + 1):
            for u in simplices(m, l):
                for i in range(l + 1):
                    eq: dict = {}
                    add_term(eq, lay, (l, u), W.d(l, i), None)
                    add_term(eq, lay, (l - 1, face(u, i)), None, U.d(l, i), -1)
                    rows.extend(eq.values())
        for l in range(n):
            for u in simplices(m, l):
                for j in range(l + 1):
                    eq = {}
                    add_term(eq, lay, (l, u), W.s(l, j), None)
                    add_term(eq, lay, (l + 1, degen(u, j)), None, U.s(l, j), -1)
                    rows.extend(eq.values())
        k = 0
        M = multiplication(W, n, k)
        wn = W.dim(n)
        slots = [i for i in range(n + 2) if i != k]
        Mi = {i: M.select_cols(range(p * wn, (p + 1) * wn)) for p, i in enumerate(slots)}
        for r in simplices(m, n + 1):
            eq = {}
            add_term(eq, lay, (n, face(r, k)), None, U.d(n + 1, k))
            for i in slots:
                add_term(eq, lay, (n, face(r, i)), Mi[i], U.d(n + 1, i), -1)
            rows.extend(eq.values())
        return rows

    def solution(self, m: int) -> Subspace:
        return self.memo(("solution", m), lambda: kernel_of_rows(self.equations(m), self.layout(m).size))

    # simplicial structure ---------------------------------------------------
    def _reindex(self, m_from: int, m_to: int, op: Callable[[Arrow], Arrow]) -> Mat:
        """Ambient matrix ``f -> (f^{op(u)})_u`` from level ``m_from`` to ``m_to``."""
        src, dst = self.layout(m_from), self.layout(m_to)
        ent = {}
        for key in dst.keys:
            l, u = key
            skey = (l, op(u))
            so, do = src.offset[skey], dst.offset[key]
            r, c = dst.shape[key]
            for t in range(r * c):
                ent[(do + t, so + t)] = 1
        return Mat.from_sparse(dst.size, src.size, ent)

    def _level(self, m: int) -> Level:
        S = self.solution(m)
        faces, degens = [], []
        if m:
            P = self.solution(m - 1)
            for i in range(m + 1):
                R = self._reindex(m, m - 1, lambda u, i=i: coface(i, u))
                faces.append(P.coords_of(R @ S.basis))
            for j in range(m):
                R = self._reindex(m - 1, m, lambda u, j=j: codegen(j, u))
                degens.append(S.coords_of(R @ P.basis))
        return Level(S.dim, tuple(faces), tuple(degens))

    # evaluating simplices -------------------------------------------------
    def ambient(self, m: int, coords: Sequence) -> list:
        return self.solution(m).basis.apply(list(coords))

    def component(self, m: int, vec: Sequence, l: int, u: Arrow) -> Mat:
        """``f^u_l : U_l -> W_l`` of the simplex with ambient vector ``vec``.

        For ``l > n`` the component comes from the target's fillers.
        """
        if l <= self.n:
            return self.layout(m).block(vec, (l, u))
        k = 0
        stack = Mat.vstack([self.component(m, vec, l - 1, face(u, i)) @ self.U.d(l, i)
                            for i in range(l + 1) if i != k], cols=self.U.dim(l))
        return moore_filler(self.W, l, k) @ stack

    def component_matrix(self, m: int, l: int, u: Arrow) -> Mat:
        """Stack of ``f^u_l`` over the basis of level ``m``: column block per basis vector
        would be awkward, so rows index ``W_l x U_l`` entries row-major."""
        def build():
            S = self.solution(m)
            cols = []
            for vec in S.vectors():
                F = self.component(m, vec, l, u)
                cols.append([x for row in F.raw_rows() for x in row])
            return Mat.from_columns(cols, self.W.dim(l) * self.U.dim(l)) if cols else \
                Mat(self.W.dim(l) * self.U.dim(l), 0)
        return self.memo(("compmat", m, l, u), build)


def mapping_space(U: SVS, W: SVS, m: int, n: int | None = None) -> Subspace:
    return MappingSpace(U, W, n).solution(m)


def element_from_map(H: MappingSpace, f: SimpMap) -> list:
    """Coordinates in ``IHom(U, W)_0`` of a simplicial map ``U -> W``."""
    lay = H.layout(0)
    vec = lay.pack({(l, (0,) * (l + 1)): f.at(l) for l in range(H.n + 1)})
    return H.solution(0).coords(vec)


def map_from_element(H: MappingSpace, coords: Sequence) -> SimpMap:
    """The simplicial map ``U -> W`` given by a vertex of ``IHom(U, W)``."""
    vec = H.ambient(0, coords)
    return SimpMap(H.U, H.W, compute=lambda l: H.component(0, vec, l, (0,) * (l + 1)), name="f")


# ---------------------------------------------------------------------------
# evaluation and the simplicial tensor-hom adjunction

def evaluation(H: MappingSpace) -> SimpMap:
    """``ev : IHom(U, W) (x) U -> W``, ``ev_l(f (x) x) = f^{E_l}_l(x)``."""
    U, W = H.U, H.W
    src = tensor_svs(H, U)

    def comp(l: int) -> Mat:
        C = H.component_matrix(l, l, identity(l))
        wl, ul = W.dim(l), U.dim(l)
        ent = {}
        for b in range(C.cols):
            col = C.raw_col(b)
            for w in range(wl):
                for x in range(ul):
                    v = col[w * ul + x]
                    if v:
                        ent[(w, b * ul + x)] = v
        return Mat.from_sparse(wl, H.dim(l) * ul, ent)
    return SimpMap(src, W, compute=comp, name="ev")


def adjunction_tau(outer: MappingSpace, m: int, g: Sequence) -> list:
    """``tau(g)_l(u, v, r) = g_l(v, r)(u, E_l)``.

    ``outer`` is ``IHom(V, IHom(U, W))`` and ``g`` an ambient vector at level
    ``m``; the result is an ambient vector of ``IHom(U (x) V, W)_m``.
    """
    inner = outer.W
    if not isinstance(inner, MappingSpace):
        raise ContractError("outer target must be a mapping space")
    U, V, W = inner.U, outer.U, inner.W
    flat = MappingSpace(tensor_svs(U, V), W, inner.n)
    lay = flat.layout(m)
    blocks = {}
    for l in range(flat.n + 1):
        C = inner.component_matrix(l, l, identity(l))  # (W_l*U_l) x dim inner_l
        for r in simplices(m, l):
            G = outer.component(m, g, l, r) if l <= outer.n else None
            if G is None:
                raise ContractError("outer order below inner order")
            # G: inner_l x V_l ; T = C G : (W_l*U_l) x V_l
            T = C @ G
            wl, ul, vl = W.dim(l), U.dim(l), V.dim(l)
            ent = {}
            for row, col, val in T.nonzeros():
                w, u = divmod(row, ul)
                ent[(w, u * vl + col)] = val
            blocks[(l, r)] = Mat.from_sparse(wl, ul * vl, ent)
    return flat, lay.pack(blocks)


def adjunction_rho(flat: MappingSpace, V: SVS, U: SVS, m: int, f: Sequence) -> tuple[MappingSpace, list]:
    """``rho(f)_l(v, r)`` has components ``(u, t) -> f_i(u, t^* v, t^* r)``.

    ``flat`` is ``IHom(U (x) V, W)``; returns ``IHom(V, IHom(U, W))`` and the
    ambient vector of ``rho(f)`` at level ``m``.
    """
    W = flat.W
    inner = MappingSpace(U, W, flat.n)
    outer = MappingSpace(V, inner, flat.n)
    lay = outer.layout(m)
    blocks = {}
    for l in range(outer.n + 1):
        S = inner.solution(l)
        ilay = inner.layout(l)
        for r in simplices(m, l):
            cols = []
            for b in range(V.dim(l)):
                amb = {}
                for i in range(inner.n + 1):
                    for t in simplices(l, i):
                        tv = V.arrow(t, l)
                        F = flat.component(m, f, i, tuple(r[x] for x in t))
                        ui, vi = U.dim(i), V.dim(i)
                        vcol = tv.raw_col(b)
                        ent = {}
                        for w in range(W.dim(i)):
                            for a in range(ui):
                                s = 0
                                for c in range(vi):
                                    x = vcol[c]
                                    if x:
                                        y = F.raw(w, a * vi + c)
                                        if y:
                                            s += x * y
                                if s:
                                    ent[(w, a)] = s
                        amb[(i, t)] = Mat.from_sparse(W.dim(i), ui, ent)
                cols.append(S.coords(ilay.pack(amb)))
            blocks[(l, r)] = Mat.from_columns(cols, S.dim) if cols else Mat(S.dim, 0)
    return outer, lay.pack(blocks)
