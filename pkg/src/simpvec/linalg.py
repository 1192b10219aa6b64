"""Exact dense linear algebra over the rationals.

Entries are stored as ``int`` when integral and ``Fraction`` otherwise; every
public accessor hands back ``Fraction``.  Row reduction runs on primitive
integer rows, which keeps the common 0/1/-1 matrices cheap.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence, Union

Rat = Fraction
Scalar = Union[int, Fraction]


class ContractError(ValueError):
    """Raised when an operation's precondition is violated."""


def _norm(x) -> Scalar:
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return _norm(Fraction(x))
    if isinstance(x, float):
        raise ContractError("floats are not exact; pass a Fraction or a 'p/q' string")
    return _norm(Fraction(x))


def to_rat(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to a Fraction."""
    return Fraction(_norm(x))


class Mat:
    """Immutable dense ``rows x cols`` matrix with exact entries."""

    __slots__ = ("rows", "cols", "_d", "_hash")

    def __init__(self, rows: int, cols: int, data: Iterable[Sequence] | None = None):
        if rows < 0 or cols < 0:
            raise ContractError("negative shape")
        self.rows = rows
        self.cols = cols
        self._hash = None
        if data is None:
            z = (0,) * cols
            self._d = tuple(z for _ in range(rows))
            return
        d = tuple(tuple(_norm(x) for x in r) for r in data)
        if len(d) != rows or any(len(r) != cols for r in d):
            raise ContractError(f"data does not match shape {rows}x{cols}")
        self._d = d

    @classmethod
    def _raw(cls, rows: int, cols: int, d: tuple) -> "Mat":
        m = cls.__new__(cls)
        m.rows, m.cols, m._d, m._hash = rows, cols, d, None
        return m

    # construction ----------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls._raw(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = list(rows)
        if cols is None:
            if not rows:
                raise ContractError("cannot infer column count of an empty row list")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Mat":
        columns = list(columns)
        for c in columns:
            if len(c) != rows:
                raise ContractError("column length mismatch")
        return cls(rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries: dict) -> "Mat":
        """Build from ``{(i, j): value}``; zero values are dropped."""
        d = [[0] * cols for _ in range(rows)]
        for (i, j), v in entries.items():
            d[i][j] = _norm(v)
        return cls._raw(rows, cols, tuple(tuple(r) for r in d))

    @classmethod
    def column(cls, vec: Sequence) -> "Mat":
        return cls(len(vec), 1, [[x] for x in vec])

    @classmethod
    def row_vector(cls, vec: Sequence) -> "Mat":
        return cls(1, len(vec), [list(vec)])

    @classmethod
    def hstack(cls, mats: Sequence["Mat"], rows: int | None = None) -> "Mat":
        mats = list(mats)
        if not mats:
            if rows is None:
                raise ContractError("hstack of nothing needs an explicit row count")
            return cls(rows, 0)
        r = mats[0].rows
        if any(m.rows != r for m in mats):
            raise ContractError("hstack row mismatch")
        return cls._raw(r, sum(m.cols for m in mats),
                        tuple(sum((m._d[i] for m in mats), ()) for i in range(r)))

    @classmethod
    def vstack(cls, mats: Sequence["Mat"], cols: int | None = None) -> "Mat":
        mats = list(mats)
        if not mats:
            if cols is None:
                raise ContractError("vstack of nothing needs an explicit column count")
            return cls(0, cols)
        c = mats[0].cols
        if any(m.cols != c for m in mats):
            raise ContractError("vstack column mismatch")
        return cls._raw(sum(m.rows for m in mats), c, sum((m._d for m in mats), ()))

    @classmethod
    def block_diag(cls, mats: Sequence["Mat"]) -> "Mat":
        mats = list(mats)
        R = sum(m.rows for m in mats)
        C = sum(m.cols for m in mats)
        out = []
        off = 0
        for m in mats:
            pre, post = (0,) * off, (0,) * (C - off - m.cols)
            out.extend(pre + r + post for r in m._d)
            off += m.cols
        return cls._raw(R, C, tuple(out))

    # access ----------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return Fraction(self._d[i][j])

    def raw(self, i: int, j: int) -> Scalar:
        return self._d[i][j]

    def row(self, i: int) -> list[Fraction]:
        return [Fraction(x) for x in self._d[i]]

    def col(self, j: int) -> list[Fraction]:
        return [Fraction(r[j]) for r in self._d]

    def raw_rows(self) -> tuple:
        return self._d

    def raw_col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._d)

    def columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self._d) for j in range(self.cols)]

    def to_lists(self) -> list[list[Fraction]]:
        return [[Fraction(x) for x in r] for r in self._d]

    def nonzeros(self) -> Iterator[tuple[int, int, Scalar]]:
        for i, r in enumerate(self._d):
            for j, x in enumerate(r):
                if x:
                    yield i, j, x

    def select_rows(self, idx: Sequence[int]) -> "Mat":
        return Mat._raw(len(idx), self.cols, tuple(self._d[i] for i in idx))

    def select_cols(self, idx: Sequence[int]) -> "Mat":
        return Mat._raw(self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self._d))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._d)

    # algebra ---------------------------------------------------------------
    @property
    def T(self) -> "Mat":
        return Mat._raw(self.cols, self.rows, tuple(zip(*self._d)) if self.rows else
                        tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: "Mat") -> "Mat":
        if not isinstance(other, Mat):
            return NotImplemented
        if self.cols != other.rows:
            raise ContractError(f"shape mismatch {self.shape} @ {other.shape}")
        osparse = [[(j, v) for j, v in enumerate(r) if v] for r in other._d]
        n = other.cols
        out = []
        for r in self._d:
            acc = [0] * n
            for k, a in enumerate(r):
                if a:
                    for j, b in osparse[k]:
                        acc[j] += a * b
            out.append(tuple(_norm(x) if isinstance(x, Fraction) else x for x in acc))
        return Mat._raw(self.rows, n, tuple(out))

    def apply(self, vec: Sequence) -> list[Scalar]:
        """Matrix times a column given as a plain sequence."""
        if len(vec) != self.cols:
            raise ContractError("vector length mismatch")
        nz = [(j, v) for j, v in enumerate(vec) if v]
        res = []
        for r in self._d:
            s = 0
            for j, v in nz:
                a = r[j]
                if a:
                    s += a * v
            res.append(_norm(s))
        return res

    def _zip(self, other: "Mat", op) -> "Mat":
        if not isinstance(other, Mat):
            return NotImplemented
        if self.shape != other.shape:
            raise ContractError(f"shape mismatch {self.shape} vs {other.shape}")
        return Mat._raw(self.rows, self.cols,
                        tuple(tuple(_norm(op(a, b)) for a, b in zip(r, s)) for r, s in zip(self._d, other._d)))

    def __add__(self, other: "Mat") -> "Mat":
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: "Mat") -> "Mat":
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> "Mat":
        return Mat._raw(self.rows, self.cols, tuple(tuple(-x for x in r) for r in self._d))

    def scale(self, c) -> "Mat":
        c = _norm(c)
        return Mat._raw(self.rows, self.cols, tuple(tuple(_norm(c * x) for x in r) for r in self._d))

    def __rmul__(self, c) -> "Mat":
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def kron(self, other: "Mat") -> "Mat":
        """Kronecker product; index ``(a, b)`` maps to ``a * other.dim + b``."""
        out = []
        for r in self._d:
            for s in other._d:
                out.append(tuple(_norm(a * b) if a and b else 0 for a in r for b in s))
        return Mat._raw(self.rows * other.rows, self.cols * other.cols, tuple(out))

    def rank(self) -> int:
        return len(rref(self)[1])

    # misc ------------------------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.shape == other.shape and self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._d))
        return self._hash

    def __repr__(self) -> str:
        if self.rows * self.cols > 64:
            return f"Mat({self.rows}x{self.cols}, nnz={sum(1 for _ in self.nonzeros())})"
        body = "; ".join(" ".join(str(x) for x in r) for r in self._d)
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    def to_strings(self) -> list[list[str]]:
        return [[str(Fraction(x)) for x in r] for r in self._d]


# ---------------------------------------------------------------------------
# row reduction on primitive integer rows

def _int_row(items: Iterable[tuple[int, Scalar]]) -> dict[int, int]:
    items = [(c, v) for c, v in items if v]
    if not items:
        return {}
    den = 1
    for _, v in items:
        if isinstance(v, Fraction):
            d = v.denominator
            den = den * d // gcd(den, d)
    row = {c: int(v * den) for c, v in items}
    return _primitive(row)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _eliminate(target: dict[int, int], piv: dict[int, int], col: int) -> dict[int, int]:
    """Return ``p*target - a*piv`` made primitive, clearing ``col``."""
    p, a = piv[col], target[col]
    g = gcd(p, a)
    pm, am = p // g, a // g
    if pm < 0:
        pm, am = -pm, -am
    out = {c: v * pm for c, v in target.items()} if pm != 1 else dict(target)
    for c, v in piv.items():
        nv = out.get(c, 0) - am * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return _primitive(out)


class Echelon:
    """Incrementally maintained reduced row echelon basis of a row space.

    Each stored row has its pivot at its smallest column and no other
    stored row has an entry in that column.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.piv: dict[int, dict[int, int]] = {}

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        hits = [c for c in row if c in self.piv]
        for c in hits:
            row = _eliminate(row, self.piv[c], c)
        return row

    def add(self, items: Iterable[tuple[int, Scalar]]) -> bool:
        """Insert a row; return True when it enlarged the row space."""
        row = self.reduce(_int_row(items))
        if not row:
            return False
        c0 = min(row)
        if row[c0] < 0:
            row = {c: -v for c, v in row.items()}
        for pc, P in list(self.piv.items()):
            if c0 in P:
                self.piv[pc] = _eliminate(P, row, c0)
        self.piv[c0] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.piv)

    def pivots(self) -> list[int]:
        return sorted(self.piv)

    def rows(self) -> list[list[Scalar]]:
        """Normalised RREF rows (pivot entry 1) in pivot order."""
        out = []
        for c in sorted(self.piv):
            P = self.piv[c]
            p = P[c]
            r = [0] * self.ncols
            for k, v in P.items():
                r[k] = _norm(Fraction(v, p))
            out.append(r)
        return out


def _echelon_of_rows(M: Mat) -> Echelon:
    E = Echelon(M.cols)
    for r in M.raw_rows():
        E.add((j, v) for j, v in enumerate(r) if v)
    return E


def rref(M: Mat) -> tuple[Mat, list[int]]:
    """Canonical reduced row echelon form and its pivot columns."""
    E = _echelon_of_rows(M)
    rows = E.rows()
    rows += [[0] * M.cols for _ in range(M.rows - len(rows))]
    return Mat(M.rows, M.cols, rows), E.pivots()


# ---------------------------------------------------------------------------
# subspaces

class Subspace:
    """A subspace of ``Q^n`` held by its canonical basis.

    The basis columns, read as rows, form a reduced row echelon matrix, so
    equal subspaces have identical bases and the coordinates of a member
    are just its entries at the pivot positions.
    """

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, basis: Mat, pivots: Sequence[int]):
        self.ambient = ambient
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def from_echelon(cls, E: Echelon) -> "Subspace":
        rows = E.rows()
        n = E.ncols
        basis = Mat(len(rows), n, rows).T if rows else Mat(n, 0)
        return cls(n, basis, E.pivots())

    @classmethod
    def span(cls, ambient: int, vectors: Iterable[Sequence]) -> "Subspace":
        E = Echelon(ambient)
        for v in vectors:
            if len(v) != ambient:
                raise ContractError("vector length does not match ambient dimension")
            E.add((j, x) for j, x in enumerate(v) if x)
        return cls.from_echelon(E)

    @classmethod
    def column_span(cls, M: Mat) -> "Subspace":
        return cls.span(M.rows, M.columns())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Mat.identity(n), range(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, Mat(n, 0), ())

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[tuple]:
        return self.basis.columns()

    def coords(self, vec: Sequence, check: bool = True) -> list[Scalar]:
        """Coordinates of a member in the canonical basis."""
        c = [_norm(vec[p]) for p in self.pivots]
        if check and list(map(_norm, vec)) != self.basis.apply(c):
            raise ContractError("vector is not in the subspace")
        return c

    def coords_of(self, M: Mat, check: bool = True) -> Mat:
        """Coordinates of every column of ``M``."""
        C = M.select_rows(self.pivots)
        if check and self.basis @ C != M:
            raise ContractError("columns are not in the subspace")
        return C

    def contains(self, vec: Sequence) -> bool:
        try:
            self.coords(vec)
        except ContractError:
            return False
        return True

    def contains_all(self, M: Mat) -> bool:
        return self.basis @ M.select_rows(self.pivots) == M

    def __le__(self, other: "Subspace") -> bool:
        return self.ambient == other.ambient and other.contains_all(self.basis)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ambient, self.vectors() + other.vectors())

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise ContractError("ambient mismatch")
        K = kernel_basis(Mat.hstack([self.basis, -other.basis], rows=self.ambient))
        return Subspace.column_span(self.basis @ K.basis.select_rows(range(self.dim)))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in Q^{self.ambient})"


# ---------------------------------------------------------------------------
# the usual operations

def kernel_basis(M: Mat) -> Subspace:
    """Null space of ``M`` in canonical form."""
    E = _echelon_of_rows(M)
    n = M.cols
    pivset = set(E.piv)
    free = [j for j in range(n) if j not in pivset]
    vecs = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for c, P in E.piv.items():
            a = P.get(f)
            if a:
                v[c] = _norm(Fraction(-a, P[c]))
        vecs.append(v)
    return Subspace.span(n, vecs)


def image_basis(M: Mat) -> Subspace:
    """Column space of ``M`` in canonical form."""
    return Subspace.column_span(M)


def solve(M: Mat, b: Sequence) -> tuple[list[Fraction], Subspace] | None:
    """Solve ``M x = b``: a particular solution and the kernel, or None."""
    if len(b) != M.rows:
        raise ContractError("right-hand side length mismatch")
    n = M.cols
    E = Echelon(n + 1)
    for r, bi in zip(M.raw_rows(), b):
        items = [(j, v) for j, v in enumerate(r) if v]
        bi = _norm(bi)
        if bi:
            items.append((n, bi))
        E.add(items)
    if n in E.piv:
        return None
    x = [Fraction(0)] * n
    for c, P in E.piv.items():
        x[c] = Fraction(P.get(n, 0), P[c])
    return x, kernel_basis(M)


def solve_matrix(A: Mat, B: Mat) -> Mat:
    """The unique ``X`` with ``A X = B``, requiring ``A`` of full column rank."""
    if A.rows != B.rows:
        raise ContractError("row mismatch")
    n = A.cols
    E = Echelon(n + B.cols)
    for r, s in zip(A.raw_rows(), B.raw_rows()):
        E.add([(j, v) for j, v in enumerate(r) if v] + [(n + j, v) for j, v in enumerate(s) if v])
    piv = E.pivots()
    if any(p >= n for p in piv):
        raise ContractError("system is inconsistent")
    if len(piv) != n:
        raise ContractError("matrix does not have full column rank")
    rows = E.rows()
    return Mat(n, B.cols, [r[n:] for r in rows[:n]])


def inverse(A: Mat) -> Mat:
    if A.rows != A.cols:
        raise ContractError("only square matrices are invertible")
    return solve_matrix(A, Mat.identity(A.rows))


def annihilator(S: Subspace) -> Subspace:
    """Functionals vanishing on ``S``, in dual coordinates of ``Q^n``."""
    return kernel_basis(S.basis.T) if S.dim else Subspace.full(S.ambient)


def quotient_reps(ker: Subspace, im: Subspace) -> Subspace:
    """A complement of ``im`` inside ``ker`` (requires ``im <= ker``)."""
    if not im <= ker:
        raise ContractError("image is not contained in the kernel")
    E = Echelon(ker.ambient)
    for v in im.vectors():
        E.add((j, x) for j, x in enumerate(v) if x)
    reps = []
    for v in ker.vectors():
        if E.add((j, x) for j, x in enumerate(v) if x):
            reps.append(v)
    return Subspace.span(ker.ambient, reps)


def fiber_product(f: Mat, g: Mat) -> Subspace:
    """Pairs ``(x, y)`` with ``f x = g y``, as the kernel of ``[f | -g]``."""
    if f.rows != g.rows:
        raise ContractError("maps must share a codomain")
    return kernel_basis(Mat.hstack([f, -g], rows=f.rows))


def coordinate_matrix(target: Subspace, M: Mat) -> Mat:
    """Express the columns of ``M`` in ``target``'s basis."""
    return target.coords_of(M)


def kernel_of_rows(rows: Iterable[dict], ncols: int) -> Subspace:
    """Null space of the sparse system whose rows are ``{col: coeff}`` dicts."""
    E = Echelon(ncols)
    for r in rows:
        if r:
            E.add(r.items())
    pivset = set(E.piv)
    vecs = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = 1
        for c, P in E.piv.items():
            a = P.get(f)
            if a:
                v[c] = _norm(Fraction(-a, P[c]))
        vecs.append(v)
    return Subspace.span(ncols, vecs)
