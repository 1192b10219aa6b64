"""Bounded chain complexes of finite-dimensional rational vector spaces.

Differentials lower degree.  A complex lives on degrees ``lo..hi`` and is
zero elsewhere; ``d(i) : C_i -> C_{i-1}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .linalg import ContractError, Mat, Subspace, image_basis, kernel_basis, quotient_reps, Echelon
from .simplicial import SVS, normalized_basis


@dataclass
class ChainCx:
    lo: int
    dims: list[int]
    diffs: dict[int, Mat] = field(default_factory=dict)
    name: str = "C"

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    def dim(self, i: int) -> int:
        if self.lo <= i <= self.hi:
            return self.dims[i - self.lo]
        return 0

    def d(self, i: int) -> Mat:
        m = self.diffs.get(i)
        if m is None:
            return Mat(self.dim(i - 1), self.dim(i))
        return m

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def validate(self) -> list[str]:
        bad = []
        for i, m in self.diffs.items():
            if m.shape != (self.dim(i - 1), self.dim(i)):
                bad.append(f"differential out of degree {i} has shape {m.shape}")
        for i in self.degrees():
            if not (self.d(i - 1) @ self.d(i)).is_zero():
                bad.append(f"d d != 0 at degree {i}")
        return bad

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainCx):
            return NotImplemented
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return all(self.dim(i) == other.dim(i) and self.d(i) == other.d(i) for i in range(lo, hi + 2))

    def __repr__(self) -> str:
        return f"ChainCx({self.name}, degrees {self.lo}..{self.hi}, dims {self.dims})"


def make_complex(dims: dict[int, int] | Sequence[int], diffs: dict[int, Mat] | None = None,
                 lo: int = 0, name: str = "C", check: bool = True) -> ChainCx:
    if isinstance(dims, dict):
        if dims:
            lo = min(dims)
            dims = [dims.get(i, 0) for i in range(lo, max(dims) + 1)]
        else:
            dims = [0]
    hi = lo + len(dims) - 1
    C = ChainCx(lo, list(dims), {i: m for i, m in (diffs or {}).items() if lo < i <= hi}, name)
    if check:
        bad = C.validate()
        if bad:
            raise ContractError("; ".join(bad))
    return C


def concentrated(n: int, dim: int = 1) -> ChainCx:
    """``Q^dim`` in degree ``n``."""
    return ChainCx(n, [dim], {}, f"Q[{-n}]" if dim == 1 else f"Q^{dim}[{-n}]")


@dataclass
class ChainMap:
    """A map ``C_i -> D_{i+shift}``; missing components are zero."""

    source: ChainCx
    target: ChainCx
    comps: dict[int, Mat]
    shift: int = 0

    def comp(self, i: int) -> Mat:
        m = self.comps.get(i)
        if m is None:
            return Mat(self.target.dim(i + self.shift), self.source.dim(i))
        return m

    def degrees(self) -> range:
        return self.source.degrees()

    def validate(self) -> list[str]:
        """Shape checks and the chain law ``d f = (-1)^shift f d``."""
        bad = []
        sign = -1 if self.shift % 2 else 1
        for i in self.degrees():
            f = self.comp(i)
            if f.shape != (self.target.dim(i + self.shift), self.source.dim(i)):
                bad.append(f"component {i} has shape {f.shape}")
                continue
            lhs = self.target.d(i + self.shift) @ f
            rhs = self.comp(i - 1) @ self.source.d(i)
            if lhs != rhs.scale(sign):
                bad.append(f"chain law fails at degree {i}")
        return bad

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composite ``self . other``."""
        comps = {i: self.comp(i + other.shift) @ other.comp(i) for i in other.degrees()}
        return ChainMap(other.source, self.target, comps, self.shift + other.shift)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {i: self.comp(i) - other.comp(i) for i in self.degrees()}, self.shift)

    def equals(self, other: "ChainMap") -> bool:
        return self.shift == other.shift and all(self.comp(i) == other.comp(i) for i in self.degrees())


def identity_map(C: ChainCx) -> ChainMap:
    return ChainMap(C, C, {i: Mat.identity(C.dim(i)) for i in C.degrees()})


def zero_map(C: ChainCx, D: ChainCx, shift: int = 0) -> ChainMap:
    return ChainMap(C, D, {}, shift)


# ---------------------------------------------------------------------------
# complexes from simplicial vector spaces

def moore_complex(V: SVS, up_to: int) -> ChainCx:
    """``C_m = V_m`` with ``d = sum (-1)^i d_i``, degrees ``0..up_to``."""
    diffs = {}
    for m in range(1, up_to + 1):
        acc = Mat(V.dim(m - 1), V.dim(m))
        for i in range(m + 1):
            acc = acc + (V.d(m, i) if i % 2 == 0 else -V.d(m, i))
        diffs[m] = acc
    return ChainCx(0, [V.dim(m) for m in range(up_to + 1)], diffs, f"C({V.name})")


@dataclass
class Normalized:
    """The normalised complex together with its inclusions into ``V_m``."""

    complex: ChainCx
    inclusions: dict[int, Subspace]


def normalized(V: SVS, up_to: int) -> Normalized:
    """``N_m = intersection of ker d_i (i < m)`` with ``d = (-1)^m d_m``."""
    def build():
        incl = {m: normalized_basis(V, m) for m in range(up_to + 1)}
        diffs = {}
        for m in range(1, up_to + 1):
            img = V.d(m, m) @ incl[m].basis
            c = incl[m - 1].coords_of(img)
            diffs[m] = c if m % 2 == 0 else -c
        return Normalized(ChainCx(0, [incl[m].dim for m in range(up_to + 1)], diffs, f"N({V.name})"), incl)
    return V.memo(("normalized", up_to), build)


def normalized_complex(V: SVS, up_to: int) -> ChainCx:
    return normalized(V, up_to).complex


# ---------------------------------------------------------------------------
# homology

@dataclass(frozen=True)
class HomologyDegree:
    dim: int
    cycles: Subspace
    boundaries: Subspace
    reps: Subspace


def homology_at(C: ChainCx, i: int) -> HomologyDegree:
    n = C.dim(i)
    Z = kernel_basis(C.d(i)) if n else Subspace.zero(0)
    B = image_basis(C.d(i + 1)) if n else Subspace.zero(0)
    R = quotient_reps(Z, B)
    return HomologyDegree(R.dim, Z, B, R)


def homology(C: ChainCx, degrees: Sequence[int] | None = None) -> dict[int, HomologyDegree]:
    """Homology in the given degrees (default: every degree of ``C``).

    Degrees at the top of a truncated complex are only meaningful when the
    truncation is high enough; callers pick ``degrees`` accordingly.
    """
    degs = C.degrees() if degrees is None else degrees
    return {i: homology_at(C, i) for i in degs}


def betti(C: ChainCx, degrees: Sequence[int] | None = None) -> dict[int, int]:
    return {i: h.dim for i, h in homology(C, degrees).items()}


def is_quasi_iso(f: ChainMap, degrees: Sequence[int]) -> bool:
    """Whether ``H_i(f)`` is bijective for every ``i`` in ``degrees``."""
    if f.shift:
        raise ContractError("quasi-isomorphisms have degree 0")
    for i in degrees:
        hs = homology_at(f.source, i)
        ht = homology_at(f.target, i)
        if hs.dim != ht.dim:
            return False
        if not hs.dim:
            continue
        E = Echelon(f.target.dim(i))
        for v in ht.boundaries.vectors():
            E.add((j, x) for j, x in enumerate(v) if x)
        img = f.comp(i) @ hs.reps.basis
        for col in img.columns():
            if not E.add((j, x) for j, x in enumerate(col) if x):
                return False
    return True


def induces_identity_on_homology(f: ChainMap, degrees: Sequence[int]) -> bool:
    """For an endomorphism: ``f(z) - z`` is a boundary for every cycle ``z``."""
    if f.shift or f.source != f.target:
        raise ContractError("expected a degree-0 endomorphism")
    for i in degrees:
        h = homology_at(f.source, i)
        if not h.dim:
            continue
        diff = f.comp(i) @ h.cycles.basis - h.cycles.basis
        if not h.boundaries.contains_all(diff):
            return False
    return True


def is_iso(f: ChainMap) -> bool:
    """Levelwise bijective chain map."""
    degs = sorted(set(f.source.degrees()) | set(f.target.degrees()))
    for i in degs:
        if f.source.dim(i) != f.target.dim(i + f.shift):
            return False
        if f.comp(i).rank() != f.source.dim(i):
            return False
    return not f.validate()


# ---------------------------------------------------------------------------
# shifts, duals, truncation

def shift(C: ChainCx, m: int) -> ChainCx:
    """``C[m]_i = C_{i+m}`` with differential ``(-1)^m d``."""
    sign = -1 if m % 2 else 1
    return ChainCx(C.lo - m, list(C.dims), {i - m: d.scale(sign) for i, d in C.diffs.items()},
                   f"{C.name}[{m}]")


def dual_shifted(C: ChainCx, n: int) -> ChainCx:
    """``C*[-n]``: degree ``i`` is ``(C_{n-i})*`` and ``d_i = (-1)^{i+1} d^T``."""
    lo = n - C.hi
    dims = [C.dim(n - i) for i in range(lo, n - C.lo + 1)]
    diffs = {}
    for i in range(lo + 1, n - C.lo + 1):
        dt = C.d(n - i + 1).T
        diffs[i] = dt if (i + 1) % 2 == 0 else -dt
    return ChainCx(lo, dims, diffs, f"{C.name}*[{-n}]")


@dataclass
class Truncation:
    complex: ChainCx
    cycles0: Subspace


def truncate_nonneg(C: ChainCx) -> Truncation:
    """Drop negative degrees and replace degree 0 by its cycles."""
    Z = kernel_basis(C.d(0)) if C.dim(0) else Subspace.zero(0)
    hi = max(C.hi, 0)
    dims = [Z.dim] + [C.dim(i) for i in range(1, hi + 1)]
    diffs = {i: C.d(i) for i in range(2, hi + 1)}
    if hi >= 1:
        diffs[1] = Z.coords_of(C.d(1))
    return Truncation(ChainCx(0, dims, diffs, f"t>=0({C.name})"), Z)


# ---------------------------------------------------------------------------
# tensor products and internal homs

@dataclass
class TensorCx:
    complex: ChainCx
    offsets: dict[int, dict[int, int]]
    left: ChainCx
    right: ChainCx

    def index(self, p: int, a: int, q: int, b: int) -> int:
        return self.offsets[p + q][p] + a * self.right.dim(q) + b


def tensor_complex(A: ChainCx, B: ChainCx) -> TensorCx:
    """Koszul tensor product; degree ``m`` summands ordered by the left degree."""
    lo, hi = A.lo + B.lo, A.hi + B.hi
    offsets: dict[int, dict[int, int]] = {}
    dims = []
    for m in range(lo, hi + 1):
        off, o = {}, 0
        for p in range(A.lo, A.hi + 1):
            q = m - p
            if B.lo <= q <= B.hi:
                off[p] = o
                o += A.dim(p) * B.dim(q)
        offsets[m] = off
        dims.append(o)
    diffs = {}
    for m in range(lo + 1, hi + 1):
        rows, cols = dims[m - 1 - lo], dims[m - lo]
        ent = {}
        for p, o in offsets[m].items():
            q = m - p
            da = A.d(p)
            db = B.d(q)
            sign = -1 if p % 2 else 1
            # d a (x) b
            if p - 1 in offsets[m - 1]:
                o2 = offsets[m - 1][p - 1]
                nb = B.dim(q)
                for i, j, v in da.nonzeros():
                    for b in range(nb):
                        key = (o2 + i * nb + b, o + j * nb + b)
                        ent[key] = ent.get(key, 0) + v
            # (-1)^p a (x) d b
            if p in offsets[m - 1]:
                o2 = offsets[m - 1][p]
                nb, nb2 = B.dim(q), B.dim(q - 1)
                for a in range(A.dim(p)):
                    for i, j, v in db.nonzeros():
                        key = (o2 + a * nb2 + i, o + a * nb + j)
                        ent[key] = ent.get(key, 0) + sign * v
        diffs[m] = Mat.from_sparse(rows, cols, {k: v for k, v in ent.items() if v})
    return TensorCx(ChainCx(lo, dims, diffs, f"{A.name}(x){B.name}"), offsets, A, B)


@dataclass
class HomCx:
    """``IHom(A, B)``: degree ``m`` is the sum of ``Hom(A_i, B_{i+m})``.

    A component ``f_i`` is flattened row-major at ``offsets[m][i]``.
    """

    complex: ChainCx
    offsets: dict[int, dict[int, int]]
    source: ChainCx
    target: ChainCx

    def pack(self, m: int, comps: dict[int, Mat]) -> list:
        vec = [0] * self.complex.dim(m)
        for i, o in self.offsets[m].items():
            f = comps.get(i)
            if f is None:
                continue
            c = f.cols
            for r, col, v in f.nonzeros():
                vec[o + r * c + col] = v
        return vec

    def unpack(self, m: int, vec: Sequence) -> dict[int, Mat]:
        out = {}
        for i, o in self.offsets[m].items():
            r, c = self.target.dim(i + m), self.source.dim(i)
            out[i] = Mat(r, c, [vec[o + a * c: o + (a + 1) * c] for a in range(r)])
        return out


def mapping_complex(A: ChainCx, B: ChainCx) -> HomCx:
    """``d f = d . f - (-1)^{|f|} f . d``."""
    lo, hi = B.lo - A.hi, B.hi - A.lo
    offsets, dims = {}, []
    for m in range(lo, hi + 1):
        off, o = {}, 0
        for i in range(A.lo, A.hi + 1):
            if B.lo <= i + m <= B.hi:
                off[i] = o
                o += A.dim(i) * B.dim(i + m)
        offsets[m] = off
        dims.append(o)
    H = HomCx(ChainCx(lo, dims, {}, f"IHom({A.name},{B.name})"), offsets, A, B)
    for m in range(lo + 1, hi + 1):
        cols = []
        sign = -1 if m % 2 else 1
        for i, o in offsets[m].items():
            r, c = B.dim(i + m), A.dim(i)
            for a in range(r):
                for b in range(c):
                    e = Mat.from_sparse(r, c, {(a, b): 1})
                    out = {}
                    out[i] = B.d(i + m) @ e
                    prev = out.get(i + 1, Mat(B.dim(i + m), A.dim(i + 1)))
                    out[i + 1] = prev - (e @ A.d(i + 1)).scale(sign)
                    cols.append(H.pack(m - 1, {k: v for k, v in out.items() if k in offsets[m - 1]}))
        H.complex.diffs[m] = Mat.from_columns(cols, dims[m - 1 - lo]) if cols else Mat(dims[m - 1 - lo], 0)
    return H


def mapping_complex_nonneg(A: ChainCx, B: ChainCx) -> tuple[HomCx, Truncation]:
    H = mapping_complex(A, B)
    return H, truncate_nonneg(H.complex)


def chain_map_as_element(H: HomCx, f: ChainMap) -> list:
    return H.pack(f.shift, {i: f.comp(i) for i in f.degrees()})


def homotopic(f: ChainMap, g: ChainMap) -> bool:
    """Whether ``f - g = d h + h d`` for some degree-1 ``h``."""
    if f.shift or g.shift:
        raise ContractError("homotopy test is for degree-0 maps")
    H = mapping_complex(f.source, f.target)
    diff = chain_map_as_element(H, f - g)
    if H.complex.dim(0) == 0:
        return True
    return image_basis(H.complex.d(1)).contains(diff)


# ---------------------------------------------------------------------------
# the tensor-hom adjunction on elements

def adjoint_rho(T: TensorCx, C: ChainCx, deg: int, f: dict[int, Mat]) -> tuple[HomCx, HomCx, dict[int, Mat]]:
    """``rho(f)(a)(b) = f(a (x) b)`` for ``f`` of degree ``deg`` in ``IHom(A (x) B, C)``.

    Returns the outer and inner hom complexes and the components of
    ``rho(f)`` in ``IHom(A, IHom(B, C))``.
    """
    A, B = T.left, T.right
    inner = mapping_complex(B, C)
    outer = mapping_complex(A, inner.complex)
    comps = {}
    for p in A.degrees():
        m = p + deg
        if m not in inner.offsets or p not in outer.offsets.get(deg, {}):
            continue
        cols = []
        for a in range(A.dim(p)):
            inner_comps = {}
            for q in B.degrees():
                if q not in inner.offsets[m]:
                    continue
                tgt = q + m
                fm = f.get(p + q)
                rows = C.dim(tgt)
                if fm is None or p not in T.offsets.get(p + q, {}):
                    inner_comps[q] = Mat(rows, B.dim(q))
                    continue
                idx = [T.index(p, a, q, b) for b in range(B.dim(q))]
                inner_comps[q] = fm.select_cols(idx)
            cols.append(inner.pack(m, inner_comps))
        comps[p] = Mat.from_columns(cols, inner.complex.dim(m)) if cols else Mat(inner.complex.dim(m), 0)
    return outer, inner, comps


def adjoint_tau(T: TensorCx, C: ChainCx, deg: int, g: dict[int, Mat]) -> dict[int, Mat]:
    """Inverse of :func:`adjoint_rho`: ``tau(g)(a (x) b) = g(a)(b)``."""
    A, B = T.left, T.right
    inner = mapping_complex(B, C)
    out = {}
    for n in T.complex.degrees():
        tgt = n + deg
        rows = C.dim(tgt)
        cols = [[0] * rows for _ in range(T.complex.dim(n))]
        for p, o in T.offsets[n].items():
            q = n - p
            gm = g.get(p)
            if gm is None:
                continue
            m = p + deg
            for a in range(A.dim(p)):
                inner_comps = inner.unpack(m, gm.raw_col(a))
                fq = inner_comps.get(q)
                if fq is None:
                    continue
                for b in range(B.dim(q)):
                    cols[T.index(p, a, q, b)] = list(fq.raw_col(b))
        out[n] = Mat.from_columns(cols, rows) if cols else Mat(rows, 0)
    return out


def adjoint_rho_left(T: TensorCx, C: ChainCx, deg: int, f: dict[int, Mat]) -> tuple[HomCx, HomCx, dict[int, Mat]]:
    """``rho^L(f)(b)(a) = (-1)^{|a||b|} f(a (x) b)`` in ``IHom(B, IHom(A, C))``."""
    A, B = T.left, T.right
    inner = mapping_complex(A, C)
    outer = mapping_complex(B, inner.complex)
    comps = {}
    for q in B.degrees():
        m = q + deg
        if m not in inner.offsets:
            continue
        cols = []
        for b in range(B.dim(q)):
            inner_comps = {}
            for p in A.degrees():
                if p not in inner.offsets[m]:
                    continue
                fm = f.get(p + q)
                rows = C.dim(p + m)
                if fm is None or p not in T.offsets.get(p + q, {}):
                    inner_comps[p] = Mat(rows, A.dim(p))
                    continue
                idx = [T.index(p, a, q, b) for a in range(A.dim(p))]
                blk = fm.select_cols(idx)
                inner_comps[p] = -blk if (p * q) % 2 else blk
            cols.append(inner.pack(m, inner_comps))
        comps[q] = Mat.from_columns(cols, inner.complex.dim(m)) if cols else Mat(inner.complex.dim(m), 0)
    return outer, inner, comps
