"""Strictly increasing multi-indices and the sign bookkeeping behind wedge and star.

A degree-q multi-index over ambient dimension n is a strictly increasing
tuple ``I = (i_1, ..., i_q)`` with entries in ``1..n``; it labels the basis
form ``dx_I = dx_{i_1} ^ ... ^ dx_{i_q}``.  All coefficient vectors and
matrices in this package enumerate multi-indices in lexicographic order.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

MultiIndex = tuple[int, ...]


@lru_cache(maxsize=None)
def indices(n: int, q: int) -> tuple[MultiIndex, ...]:
    """All degree-q multi-indices over ``1..n`` in lexicographic order."""
    if q < 0 or q > n:
        return ()
    return tuple(combinations(range(1, n + 1), q))


@lru_cache(maxsize=None)
def index_position(n: int, q: int) -> dict[MultiIndex, int]:
    """Map multi-index -> lexicographic position."""
    return {I: k for k, I in enumerate(indices(n, q))}


def count(n: int, q: int) -> int:
    """k_q = binomial(n, q), the number of degree-q multi-indices."""
    if q < 0 or q > n:
        return 0
    return comb(n, q)


def _inversions(seq: MultiIndex) -> int:
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return inv


@lru_cache(maxsize=None)
def merge_sign(I: MultiIndex, J: MultiIndex) -> tuple[int, MultiIndex | None]:
    """Antisymmetry sign and sorted merge for ``dx_I ^ dx_J``.

    Returns ``(0, None)`` when the indices overlap (repeated differential),
    else ``(sign, K)`` with ``dx_I ^ dx_J = sign * dx_K`` and K increasing.
    """
    if set(I) & set(J):
        return 0, None
    merged = I + J
    return (-1) ** _inversions(merged), tuple(sorted(merged))


@lru_cache(maxsize=None)
def insert_sign(j: int, I: MultiIndex) -> tuple[int, MultiIndex | None]:
    """Sign and target index for ``dx_j ^ dx_I`` (used by the differential)."""
    return merge_sign((j,), I)


@lru_cache(maxsize=None)
def complement(I: MultiIndex, n: int) -> MultiIndex:
    """Increasing complement of I in ``1..n``."""
    inside = set(I)
    return tuple(i for i in range(1, n + 1) if i not in inside)


@lru_cache(maxsize=None)
def star_sign(I: MultiIndex, n: int) -> int:
    """Sign eps with ``star dx_I = eps * dx_{I^c}``.

    Fixed by the defining property ``u ^ star v = (sum_I u_I v_I) dx`` with
    the standard orientation ``dx = dx_1 ^ ... ^ dx_n``: eps is the sign of
    the permutation ``(I, I^c)`` of ``(1, ..., n)``.
    """
    return (-1) ** _inversions(I + complement(I, n))
