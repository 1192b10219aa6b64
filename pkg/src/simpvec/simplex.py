"""Combinatorics of the simplex category.

An arrow ``[n] -> [m]`` is stored as the tuple of its values, so a simplex
of the standard simplex ``Delta[m]`` in level ``n`` is a weakly increasing
tuple of length ``n + 1`` with entries in ``0..m``.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import NamedTuple

Arrow = tuple[int, ...]


@lru_cache(maxsize=None)
def simplices(m: int, n: int) -> tuple[Arrow, ...]:
    """Level ``n`` of ``Delta[m]`` in lexicographic order."""
    if n < 0 or m < 0:
        return ()
    return tuple(combinations_with_replacement(range(m + 1), n + 1))


@lru_cache(maxsize=None)
def simplex_index(m: int, n: int) -> dict[Arrow, int]:
    return {u: i for i, u in enumerate(simplices(m, n))}


def identity(n: int) -> Arrow:
    return tuple(range(n + 1))


def face(u: Arrow, i: int) -> Arrow:
    """``d_i u``: delete position ``i``."""
    return u[:i] + u[i + 1:]


def degen(u: Arrow, i: int) -> Arrow:
    """``s_i u``: repeat position ``i``."""
    return u[:i + 1] + u[i:]


def coface(i: int, u: Arrow) -> Arrow:
    """Post-compose with the coface ``delta^i`` skipping ``i``."""
    return tuple(v if v < i else v + 1 for v in u)


def codegen(i: int, u: Arrow) -> Arrow:
    """Post-compose with the codegeneracy ``sigma^i`` hitting ``i`` twice."""
    return tuple(v if v <= i else v - 1 for v in u)


def compose(t: Arrow, u: Arrow) -> Arrow:
    """``t . u`` where ``u`` is applied first."""
    return tuple(t[v] for v in u)


def is_surjection(u: Arrow, m: int) -> bool:
    return set(u) == set(range(m + 1))


class Factorization(NamedTuple):
    """``t = s_I d_J E_l``: apply the faces ``J`` (largest first), then the
    degeneracies ``I`` (smallest first)."""

    degens: tuple[int, ...]
    faces: tuple[int, ...]
    surjection: Arrow
    injection: Arrow


def factor_arrow(t: Arrow, target: int | None = None) -> Factorization:
    """Epi-mono factorization of a monotone arrow ``t: [n] -> [l]``."""
    if any(a > b for a, b in zip(t, t[1:])):
        raise ValueError("arrow is not monotone")
    if target is None:
        target = t[-1] if t else 0
    image = sorted(set(t))
    faces = tuple(j for j in range(target + 1) if j not in set(image))
    pos = {v: k for k, v in enumerate(image)}
    surj = tuple(pos[v] for v in t)
    degens = tuple(i for i in range(len(t) - 1) if t[i] == t[i + 1])
    return Factorization(degens, faces, surj, tuple(image))


@lru_cache(maxsize=None)
def surjections(m: int, k: int) -> tuple[Arrow, ...]:
    """All surjections ``[m] ->> [k]`` in lexicographic order."""
    if k > m or k < 0:
        return ()
    out = []
    for cut in combinations(range(1, m + 1), k):
        cuts = set(cut)
        u, v = [], 0
        for i in range(m + 1):
            if i in cuts:
                v += 1
            u.append(v)
        out.append(tuple(u))
    return tuple(sorted(out))


def perm_sign(p) -> int:
    p = list(p)
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def shuffles(p: int, q: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    """All ``(p, q)``-shuffles ``(mu, nu, sign)`` of ``0..p+q-1``.

    ``sign`` is the sign of the permutation listing ``mu`` then ``nu``.
    """
    out = []
    for mu in combinations(range(p + q), p):
        ms = set(mu)
        nu = tuple(i for i in range(p + q) if i not in ms)
        out.append((mu, nu, perm_sign(mu + nu)))
    return tuple(out)
