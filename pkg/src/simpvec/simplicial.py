"""Simplicial vector spaces evaluated level by level.

Level ``m`` of a space ``V`` is a :class:`Level` holding ``dim V_m``, the
faces ``d_i : V_m -> V_{m-1}`` and the degeneracies ``s_j : V_{m-1} -> V_m``.
Everything is lazy and memoised behind a re-entrant lock, so a space can be
shared between threads.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Sequence

from .linalg import ContractError, Mat, Subspace, kernel_basis
from .simplex import Arrow, factor_arrow


@dataclass(frozen=True)
class Level:
    dim: int
    faces: tuple[Mat, ...]
    degens: tuple[Mat, ...]


class SVS:
    """A simplicial vector space that can be evaluated at any level."""

    #: an ``n`` for which the space is known to be a VS n-groupoid, if any
    groupoid_order: int | None = None
    name: str = "svs"

    def __init__(self):
        self._levels: dict[int, Level] = {}
        self._memo: dict = {}
        self._lock = threading.RLock()

    def _level(self, m: int) -> Level:
        raise NotImplementedError

    def level(self, m: int) -> Level:
        if m < 0:
            raise ContractError("levels are non-negative")
        with self._lock:
            lv = self._levels.get(m)
            if lv is None:
                lv = self._level(m)
                if len(lv.faces) != (m + 1 if m else 0) or len(lv.degens) != m:
                    raise ContractError(f"{self.name}: malformed level {m}")
                self._levels[m] = lv
            return lv

    def memo(self, key, compute: Callable):
        with self._lock:
            if key not in self._memo:
                self._memo[key] = compute()
            return self._memo[key]

    def dim(self, m: int) -> int:
        return self.level(m).dim

    def d(self, m: int, i: int) -> Mat:
        """Face ``d_i : V_m -> V_{m-1}``."""
        return self.level(m).faces[i]

    def s(self, m: int, j: int) -> Mat:
        """Degeneracy ``s_j : V_m -> V_{m+1}``."""
        return self.level(m + 1).degens[j]

    def arrow(self, t: Arrow, source_level: int) -> Mat:
        """The operator ``V(t) : V_l -> V_n`` of an arrow ``t : [n] -> [l]``."""
        return self.memo(("arrow", t, source_level), lambda: _arrow_matrix(self, t, source_level))

    def __repr__(self) -> str:
        return self.name


def _arrow_matrix(V: SVS, t: Arrow, l: int) -> Mat:
    fac = factor_arrow(t, l)
    M = Mat.identity(V.dim(l))
    lev = l
    for j in reversed(fac.faces):
        M = V.d(lev, j) @ M
        lev -= 1
    for i in fac.degens:
        M = V.s(lev, i) @ M
        lev += 1
    return M


# ---------------------------------------------------------------------------
# horns, boundaries and fillers

@dataclass(frozen=True)
class HornSpace:
    """Horn (or full boundary when ``k`` is None) inside ``(V_{m-1})^r``."""

    m: int
    k: int | None
    block: int
    indices: tuple[int, ...]
    space: Subspace
    V: SVS

    @property
    def projection(self) -> Mat:
        """``p^m_k`` (or the full boundary map) from ``V_m`` to the ambient sum."""
        return self.V.memo(("proj", self.m, self.k), lambda: _stacked_faces(self.V, self.m, self.indices))

    @property
    def dim(self) -> int:
        return self.space.dim

    def slot(self, i: int) -> Mat:
        """Projection of the ambient sum onto the component with face index ``i``."""
        pos = self.indices.index(i)
        b = self.block
        return Mat.hstack([Mat.identity(b) if p == pos else Mat(b, b) for p in range(len(self.indices))], rows=b)


def _compat_space(V: SVS, m: int, indices: Sequence[int]) -> Subspace:
    b = V.dim(m - 1)
    r = len(indices)
    pos = {i: p for p, i in enumerate(indices)}
    blocks = []
    if m >= 2:
        c = V.dim(m - 2)
        for i in indices:
            for j in indices:
                if i < j:
                    row = [Mat(c, b)] * r
                    row = list(row)
                    row[pos[j]] = V.d(m - 1, i)
                    row[pos[i]] = -V.d(m - 1, j - 1)
                    blocks.append(Mat.hstack(row, rows=c))
    if not blocks:
        return Subspace.full(b * r)
    return kernel_basis(Mat.vstack(blocks, cols=b * r))


def _stacked_faces(V: SVS, m: int, indices: Sequence[int]) -> Mat:
    return Mat.vstack([V.d(m, i) for i in indices], cols=V.dim(m))


def horn_space(V: SVS, m: int, k: int) -> HornSpace:
    """The horn space ``Lambda^m_k(V)`` and the horn projection ``p^m_k``."""
    if not (m >= 1 and 0 <= k <= m):
        raise ContractError("need m >= 1 and 0 <= k <= m")

    def build():
        idx = tuple(i for i in range(m + 1) if i != k)
        return HornSpace(m, k, V.dim(m - 1), idx, _compat_space(V, m, idx), V)
    return V.memo(("horn", m, k), build)


def boundary_space(V: SVS, m: int) -> HornSpace:
    """All compatible ``(m+1)``-tuples in ``V_{m-1}``; the full boundary map."""
    if m < 1:
        raise ContractError("need m >= 1")

    def build():
        idx = tuple(range(m + 1))
        return HornSpace(m, None, V.dim(m - 1), idx, _compat_space(V, m, idx), V)
    return V.memo(("boundary", m), build)


def moore_filler(V: SVS, m: int, k: int) -> Mat:
    """Moore's linear filler ``mu^m_k`` from the ambient horn sum into ``V_m``.

    On horns it is a section of ``p^m_k``; on degenerate simplices it
    satisfies ``mu p s_j = s_j``.
    """
    if not (m >= 1 and 0 <= k <= m):
        raise ContractError("need m >= 1 and 0 <= k <= m")

    def build():
        H = horn_space(V, m, k)
        A = H.block * m
        s = [V.s(m - 1, i) for i in range(m)]
        d = [V.d(m, i) for i in range(m + 1)]
        P = {i: H.slot(i) for i in H.indices}
        w = Mat(V.dim(m), A)

        def step(w, si, di, i):
            return w - s[si] @ (d[di] @ w) + s[si] @ P[i]
        for i in range(k):
            w = step(w, i, i, i)
        if k < m:
            w = step(w, m - 1, m, m)
            for i in range(m - 1, k, -1):
                w = step(w, i - 1, i, i)
        return w
    return V.memo(("moore", m, k), build)


def multiplication(V: SVS, n: int, k: int) -> Mat:
    """``m_k = d_k mu^{n+1}_k`` on the ambient horn sum ``(V_n)^{n+1}``."""
    return V.memo(("mult", n, k), lambda: V.d(n + 1, k) @ moore_filler(V, n + 1, k))


def core_projection(V: SVS, n: int, k: int) -> Mat:
    """``gamma^n_k = 1 - mu^n_k p^n_k``, a projection onto ``ker p^n_k``."""
    def build():
        H = horn_space(V, n, k)
        return Mat.identity(V.dim(n)) - moore_filler(V, n, k) @ H.projection
    return V.memo(("core", n, k), build)


def horn_projection(V: SVS, m: int, k: int) -> Mat:
    return horn_space(V, m, k).projection


# ---------------------------------------------------------------------------
# normalised pieces used throughout

def normalized_basis(V: SVS, m: int) -> Subspace:
    """``N_m = intersection of ker d_i for i < m`` as a subspace of ``V_m``."""
    def build():
        if m == 0:
            return Subspace.full(V.dim(0))
        return kernel_basis(_stacked_faces(V, m, range(m)))
    return V.memo(("N", m), build)


def degenerate_subspace(V: SVS, m: int) -> Subspace:
    """``D_m``, the span of the images of the degeneracies into ``V_m``."""
    def build():
        if m == 0:
            return Subspace.zero(V.dim(0))
        return Subspace.column_span(Mat.hstack([V.s(m - 1, j) for j in range(m)], rows=V.dim(m)))
    return V.memo(("D", m), build)


def normalized_projection(V: SVS, m: int) -> Mat:
    """Coordinates in ``N_m`` of the projection ``V_m -> N_m`` along ``D_m``."""
    def build():
        from .linalg import inverse
        N, D = normalized_basis(V, m), degenerate_subspace(V, m)
        if N.dim + D.dim != V.dim(m):
            raise ContractError("V_m is not N_m + D_m")
        inv = inverse(Mat.hstack([N.basis, D.basis], rows=V.dim(m)))
        return inv.select_rows(range(N.dim))
    return V.memo(("piN", m), build)


# ---------------------------------------------------------------------------
# coskeleta and groupoid extensions

def coskeletal_level(V: SVS, m: int) -> tuple[Level, Subspace]:
    """Level ``m`` of the coskeleton of the ``(m-1)``-truncation of ``V``.

    Returns the level together with its embedding into ``(V_{m-1})^{m+1}``.
    """
    B = boundary_space(V, m)
    S = B.space
    b = B.block
    faces = tuple(B.slot(i) @ S.basis for i in range(m + 1))
    degens = []
    for j in range(m):
        comps = []
        for i in range(m + 1):
            if i < j:
                comps.append(V.s(m - 2, j - 1) @ V.d(m - 1, i))
            elif i in (j, j + 1):
                comps.append(Mat.identity(b))
            else:
                comps.append(V.s(m - 2, j) @ V.d(m - 1, i - 1))
        degens.append(S.coords_of(Mat.vstack(comps, cols=b)))
    return Level(S.dim, faces, tuple(degens)), S


class Truncated(SVS):
    """An ``L``-truncated simplicial vector space and its canonical extension.

    ``extension="coskeletal"`` continues by iterated coskeleta;
    ``extension="groupoid"`` first installs the horn level
    ``Lambda^{L+1}_k`` (so the result is a VS L-groupoid) and then
    continues coskeletally.
    """

    def __init__(self, dims: Sequence[int], faces: dict[int, Sequence[Mat]], degens: dict[int, Sequence[Mat]],
                 extension: str = "coskeletal", horn_k: int = 0, name: str = "truncated", check: bool = True):
        super().__init__()
        self.L = len(dims) - 1
        if self.L < 0:
            raise ContractError("need at least level 0")
        if extension not in ("coskeletal", "groupoid"):
            raise ContractError(f"unknown extension {extension!r}")
        self.dims = list(dims)
        self.extension = extension
        self.horn_k = horn_k
        self.name = name
        self._tfaces = {l: tuple(faces.get(l, ())) for l in range(1, self.L + 1)}
        # degens[l] are s^l_j : V_l -> V_{l+1}
        self._tdegens = {l: tuple(degens.get(l, ())) for l in range(self.L)}
        self._check_shapes()
        if extension == "groupoid":
            self.groupoid_order = self.L
        if check:
            bad = validate_identities(self, self.L)
            if bad:
                raise ContractError("simplicial identities fail: " + "; ".join(bad[:5]))

    def _check_shapes(self):
        for l in range(1, self.L + 1):
            fs = self._tfaces[l]
            if len(fs) != l + 1 or any(f.shape != (self.dims[l - 1], self.dims[l]) for f in fs):
                raise ContractError(f"faces out of level {l} have the wrong count or shape")
        for l in range(self.L):
            ss = self._tdegens[l]
            if len(ss) != l + 1 or any(s.shape != (self.dims[l + 1], self.dims[l]) for s in ss):
                raise ContractError(f"degeneracies out of level {l} have the wrong count or shape")

    def _level(self, m: int) -> Level:
        if m <= self.L:
            return Level(self.dims[m], self._tfaces.get(m, ()), self._tdegens.get(m - 1, ()) if m else ())
        lv, S = coskeletal_level(self, m)
        if self.extension == "groupoid" and m == self.L + 1:
            return self._horn_level(lv, S, m)
        return lv

    def _horn_level(self, cosk: Level, S: Subspace, m: int) -> Level:
        # realise Lambda^m_k as the image of the Moore filler inside the coskeleton
        k = self.horn_k
        C = _Frozen(cosk, self, m)
        H = horn_space(C, m, k)
        img = Subspace.column_span(moore_filler(C, m, k) @ H.space.basis)
        faces = tuple(f @ img.basis for f in cosk.faces)
        degens = tuple(img.coords_of(s) for s in cosk.degens)
        return Level(img.dim, faces, degens)

    def truncation(self) -> list[Level]:
        return [self.level(l) for l in range(self.L + 1)]


class _Frozen(SVS):
    """``V`` below level ``m`` with a prescribed level ``m``."""

    def __init__(self, top: Level, base: SVS, m: int):
        super().__init__()
        self._top, self._base, self._m = top, base, m

    def _level(self, l: int) -> Level:
        if l == self._m:
            return self._top
        if l < self._m:
            return self._base.level(l)
        raise ContractError("frozen space is only defined up to its top level")


class Coskeletal(SVS):
    """The coskeletal extension of the ``L``-truncation of ``V``."""

    def __init__(self, V: SVS, L: int):
        super().__init__()
        self.V, self.L = V, L
        self.name = f"cosk_{L}({V.name})"

    def _level(self, m: int) -> Level:
        if m <= self.L:
            return self.V.level(m)
        return coskeletal_level(self, m)[0]


def truncate(V: SVS, L: int, extension: str = "coskeletal", name: str | None = None) -> Truncated:
    levels = [V.level(l) for l in range(L + 1)]
    return Truncated([lv.dim for lv in levels],
                     {l: levels[l].faces for l in range(1, L + 1)},
                     {l: levels[l + 1].degens for l in range(L)},
                     extension=extension, name=name or f"tr_{L}({V.name})")


# ---------------------------------------------------------------------------
# basic generators

def _reindex(block: int, m_src: int, t: Arrow) -> Mat:
    """Vertex reindexing ``(x_0..x_m) -> (x_{t(0)}..x_{t(n)})`` on blocks of size ``block``."""
    ent = {}
    for pos, v in enumerate(t):
        for c in range(block):
            ent[(pos * block + c, v * block + c)] = 1
    return Mat.from_sparse(len(t) * block, (m_src + 1) * block, ent)


class Pair(SVS):
    """Nerve of the pair groupoid of ``Q^d``: level ``m`` is ``(Q^d)^{m+1}``."""

    groupoid_order = 1

    def __init__(self, d: int):
        super().__init__()
        self.width = d
        self.name = f"Pair({d})"

    def _level(self, m: int) -> Level:
        from .simplex import codegen, coface
        w = self.width
        faces = tuple(_reindex(w, m, coface(i, tuple(range(m)))) for i in range(m + 1)) if m else ()
        degens = tuple(_reindex(w, m - 1, codegen(j, tuple(range(m + 1)))) for j in range(m))
        return Level(w * (m + 1), faces, degens)


class Constant(SVS):
    """The constant simplicial vector space on ``Q^d``."""

    groupoid_order = 0

    def __init__(self, d: int):
        super().__init__()
        self.width = d
        self.name = f"Id({d})"

    def _level(self, m: int) -> Level:
        I = Mat.identity(self.width)
        return Level(self.width, (I,) * (m + 1) if m else (), (I,) * m)


class Zero(Constant):
    def __init__(self):
        super().__init__(0)
        self.name = "Zero"


class Tensor(SVS):
    """Levelwise tensor product; basis index ``(a, b) -> a * dim W_m + b``."""

    def __init__(self, V: SVS, W: SVS):
        super().__init__()
        self.V, self.W = V, W
        self.name = f"({V.name} (x) {W.name})"

    def _level(self, m: int) -> Level:
        a, b = self.V.level(m), self.W.level(m)
        return Level(a.dim * b.dim,
                     tuple(f.kron(g) for f, g in zip(a.faces, b.faces)),
                     tuple(f.kron(g) for f, g in zip(a.degens, b.degens)))


class Opposite(SVS):
    """Reversed face and degeneracy indexing."""

    def __init__(self, V: SVS):
        super().__init__()
        self.V = V
        self.groupoid_order = V.groupoid_order
        self.name = f"op({V.name})"

    def _level(self, m: int) -> Level:
        lv = self.V.level(m)
        return Level(lv.dim, tuple(reversed(lv.faces)), tuple(reversed(lv.degens)))


def opposite(V: SVS) -> SVS:
    return Opposite(V)


# ---------------------------------------------------------------------------
# checks

def validate_identities(V: SVS, up_to: int) -> list[str]:
    """Every failing simplicial identity between levels ``0..up_to``, by name."""
    bad = []
    for l in range(1, up_to + 1):
        d = [V.d(l, i) for i in range(l + 1)]
        for i in range(l + 1):
            for j in range(i + 1, l + 1):
                if l >= 2 and V.d(l - 1, i) @ d[j] != V.d(l - 1, j - 1) @ d[i]:
                    bad.append(f"d_{i} d_{j} = d_{j - 1} d_{i} at level {l}")
        for j in range(l):
            sj = V.s(l - 1, j)
            for i in range(l + 1):
                lhs = d[i] @ sj
                if i < j:
                    rhs = V.s(l - 2, j - 1) @ V.d(l - 1, i)
                elif i in (j, j + 1):
                    rhs = Mat.identity(V.dim(l - 1))
                else:
                    rhs = V.s(l - 2, j) @ V.d(l - 1, i - 1)
                if lhs != rhs:
                    bad.append(f"d_{i} s_{j} at level {l}")
        if l >= 1:
            for i in range(l):
                for j in range(i, l):
                    if l + 1 <= up_to and V.s(l, i) @ V.s(l - 1, j) != V.s(l, j + 1) @ V.s(l - 1, i):
                        bad.append(f"s_{i} s_{j} = s_{j + 1} s_{i} into level {l + 1}")
    return bad


@dataclass(frozen=True)
class OrderReport:
    bound: int
    normalized_dims: tuple[int, ...]
    order: int
    strict_kan: dict[int, bool]
    kan: bool

    def is_n_groupoid(self, n: int) -> bool:
        return self.strict_kan.get(n, False)


def order_up_to(V: SVS, bound: int) -> OrderReport:
    """Order of ``V`` as seen through level ``bound``.

    ``strict_kan[n]`` says whether every horn projection ``p^m_k`` with
    ``n < m <= bound`` is bijective.
    """
    ndims = tuple(normalized_basis(V, m).dim for m in range(bound + 1))
    order = max((m for m, x in enumerate(ndims) if x), default=0)
    bij = {}
    kan = True
    for m in range(1, bound + 1):
        ok = True
        for k in range(m + 1):
            H = horn_space(V, m, k)
            r = H.projection.rank()
            kan = kan and r == H.dim
            ok = ok and r == H.dim == V.dim(m)
        bij[m] = ok
    strict = {n: all(bij[m] for m in range(n + 1, bound + 1)) for n in range(bound + 1)}
    return OrderReport(bound, ndims, order, strict, kan)
