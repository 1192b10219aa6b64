"""Standard fixtures and seeded random generators for tests and the CLI."""
from __future__ import annotations

import random
from typing import Sequence

from .chains import ChainCx
from .doldkan import DK, bnr
from .linalg import Mat, inverse
from .simplicial import SVS, Constant, Level, Pair, Truncated, Zero, truncate


def standard_fixtures() -> dict[str, SVS]:
    return {"Zero": Zero(), "Id(1)": Constant(1), "Id(2)": Constant(2), "Id(3)": Constant(3),
            "Pair(1)": Pair(1), "Pair(2)": Pair(2), "B1": bnr(1), "B2": bnr(2)}


def random_matrix(rng: random.Random, rows: int, cols: int, lo: int = -2, hi: int = 2) -> Mat:
    return Mat(rows, cols, [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)])


def random_invertible(rng: random.Random, n: int) -> Mat:
    """Unimodular: a product of a random unit lower and a random unit upper triangle."""
    L = Mat(n, n, [[1 if i == j else (rng.randint(-2, 2) if j < i else 0) for j in range(n)] for i in range(n)])
    U = Mat(n, n, [[1 if i == j else (rng.randint(-1, 1) if j > i else 0) for j in range(n)] for i in range(n)])
    P = list(range(n))
    rng.shuffle(P)
    Pm = Mat.from_sparse(n, n, {(i, P[i]): 1 for i in range(n)})
    return Pm @ L @ U


class Conjugated(SVS):
    """``V`` with the basis of level ``m`` changed by ``G_m`` (identity when absent)."""

    def __init__(self, V: SVS, G: dict[int, Mat], name: str | None = None):
        super().__init__()
        self.V, self.G = V, G
        self.Ginv = {m: inverse(g) for m, g in G.items()}
        self.groupoid_order = V.groupoid_order
        self.name = name or f"conj({V.name})"

    def _g(self, m):
        return self.G.get(m), self.Ginv.get(m)

    def _level(self, m: int) -> Level:
        lv = self.V.level(m)
        g, gi = self._g(m)
        gp, gpi = self._g(m - 1) if m else (None, None)

        def conj(M, left, right):
            if left is not None:
                M = left @ M
            if right is not None:
                M = M @ right
            return M
        faces = tuple(conj(f, gp, gi) for f in lv.faces)
        degens = tuple(conj(s, g, gpi) for s in lv.degens)
        return Level(lv.dim, faces, degens)


def random_complex(rng: random.Random, amplitude: int, max_dim: int = 2, lo: int = 0) -> ChainCx:
    """Random bounded complex on degrees ``lo..lo+amplitude`` with random homology."""
    degs = list(range(lo, lo + amplitude + 1))
    h = {k: rng.randint(0, max_dim) for k in degs}
    b = {k: (rng.randint(0, max_dim) if k < degs[-1] else 0) for k in degs}
    dims = {k: h[k] + b[k] + (b[k - 1] if k > lo else 0) for k in degs}
    G = {k: random_invertible(rng, dims[k]) for k in degs}
    diffs = {}
    for k in degs[1:]:
        # block layout of A_k: (homology, boundary, chain mapping onto boundaries of k-1)
        ent = {}
        rows = dims[k - 1]
        off_b = h[k - 1]
        off_c = h[k] + b[k]
        for t in range(b[k - 1]):
            ent[(off_b + t, off_c + t)] = 1
        D = Mat.from_sparse(rows, dims[k], ent)
        diffs[k] = G[k - 1] @ D @ inverse(G[k])
    return ChainCx(lo, [dims[k] for k in degs], diffs, "A")


def _level_dims(A: Sequence[int], L: int) -> list[int]:
    from math import comb
    return [sum(comb(m, k) * a for k, a in enumerate(A)) for m in range(L + 1)]


def random_groupoid(rng: random.Random, order: int, max_ndim: int = 2, conj_levels: int = 4,
                    cap: int | None = None) -> SVS:
    """A random VS groupoid of order at most ``order``: a conjugated ``DK`` of a random complex.

    ``cap`` bounds every degree of the underlying complex by resampling.
    """
    while True:
        A = random_complex(rng, order, max_ndim)
        if cap is None or max(A.dims) <= cap:
            break
    V = DK(A)
    G = {m: random_invertible(rng, V.dim(m)) for m in range(conj_levels + 1) if V.dim(m)}
    W = Conjugated(V, G, name=f"rand{order}")
    W.groupoid_order = order
    return W


def random_truncated(rng: random.Random, L: int | None = None, max_dim: int = 3) -> Truncated:
    """A random ``L``-truncated simplicial vector space with level dims at most ``max_dim``."""
    if L is None:
        L = rng.randint(0, 3)
    if L <= 1 and rng.random() < 0.6:
        return _random_1_truncated(rng, L, max_dim)
    profiles = []
    for a0 in range(max_dim + 1):
        for a1 in range(max_dim + 1):
            for a2 in range(max_dim + 1):
                for a3 in range(max_dim + 1):
                    A = [a0, a1, a2, a3][: L + 1]
                    if len(A) == L + 1 and max(_level_dims(A, L)) <= max_dim and any(A):
                        profiles.append(tuple(A))
    A = rng.choice(sorted(set(profiles)))
    # random differentials compatible with the chosen dims
    diffs = {}
    for k in range(1, len(A)):
        if A[k] and A[k - 1]:
            M = random_matrix(rng, A[k - 1], A[k], -1, 1)
            diffs[k] = M
    C = ChainCx(0, list(A), {}, "A")
    # keep d d = 0 by zeroing the later differential when needed
    for k in sorted(diffs):
        prev = C.diffs.get(k - 1)
        if prev is not None and not (prev @ diffs[k]).is_zero():
            continue
        C.diffs[k] = diffs[k]
    V = DK(C)
    G = {m: random_invertible(rng, V.dim(m)) for m in range(L + 1) if V.dim(m)}
    W = Conjugated(V, G)
    return truncate(W, L, name=f"rtr{L}")


def _random_1_truncated(rng: random.Random, L: int, max_dim: int) -> Truncated:
    a = rng.randint(1, max_dim)
    if L == 0:
        return Truncated([a], {}, {}, name="rtr0")
    b = rng.randint(a, max_dim)
    G = random_invertible(rng, b)
    Gi = inverse(G)
    s0 = G.select_cols(range(a))
    faces = []
    for _ in range(2):
        R = random_matrix(rng, a, b - a, -1, 1)
        top = Mat.hstack([Mat.identity(a), R], rows=a)
        faces.append(top @ Gi)
    return Truncated([a, b], {1: faces}, {0: [s0]}, name="rtr1")
