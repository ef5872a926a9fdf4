"""Counting, ranking and unranking of bounded compositions.

A *length vector* is a sequence of ``d`` integers, each in ``[1..k]``.  For a
fixed inner sum ``v`` the vectors are ordered lexicographically and identified
by their 0-based position in that order (the *rank*).

>>> psi(3, 3, 6)
7
>>> table = build_psi_table(3, 3)
>>> vector_to_index((2, 2, 2), table)
3
>>> index_to_vector(table, 6, 3)
(2, 2, 2)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationTooLargeError, InvalidRankError

#: Counts are held in signed 64-bit integers.
COUNT_LIMIT = 2**63 - 1
MAX_K = 16
MAX_D = 16
ENUMERATE_GUARD = 10**7


def _check_kd(k: int, d: int) -> None:
    if k < 1 or d < 1:
        raise ValueError(f"k and d must be >= 1 (got k={k}, d={d})")


def psi(k: int, d: int, v: int) -> int:
    """Number of ``d``-dimensional vectors with entries in [1..k] summing to ``v``.

    Returns 0 for sums outside ``[d, k*d]``.  Raises
    :class:`ConfigurationTooLargeError` when the count does not fit in 64 bits.
    """
    _check_kd(k, d)
    if v < d or v > k * d:
        return 0
    if d == 1 or v == d or v == k * d:
        return 1
    if v == d + 1:
        return d
    # row[s] = count for the current number of dimensions and sum s
    row = [0] * (v + 1)
    for s in range(1, min(k, v) + 1):
        row[s] = 1
    for dims in range(2, d + 1):
        nxt = [0] * (v + 1)
        for s in range(dims, min(k * dims, v) + 1):
            lo = max(1, s - k * (dims - 1))
            hi = min(k, s - dims + 1)
            nxt[s] = sum(row[s - i] for i in range(lo, hi + 1))
        row = nxt
    if row[v] > COUNT_LIMIT:
        raise ConfigurationTooLargeError(f"psi({k}, {d}, {v}) exceeds 64 bits")
    return row[v]


@dataclass(frozen=True)
class PsiTable:
    """Precomputed ``psi(k, d', v')`` for every ``d' <= d``.

    ``counts[d', v']`` is stored densely for ``0 <= d' <= d`` and
    ``0 <= v' <= k*d``; ``counts[0, 0] == 1`` is the empty-vector convention that
    lets the last position of a vector fall out of the ranking sums naturally.

    ``prefix[d', s, e]`` is ``sum(psi(k, d', s - i) for i in 1..e-1)``: the
    number of vectors that precede any vector whose current entry is ``e`` when
    ``d'`` positions follow and ``s`` is the remaining sum.
    """

    k: int
    d: int
    counts: np.ndarray = field(repr=False)
    prefix: np.ndarray = field(repr=False)

    def lookup(self, dims: int, v: int) -> int:
        if dims < 0 or dims > self.d or v < 0 or v > self.k * self.d:
            return 0
        return int(self.counts[dims, v])

    @property
    def max_sum(self) -> int:
        return self.k * self.d


def build_psi_table(k: int, d: int) -> PsiTable:
    """Iterative table of ``psi`` for one ``(k, d)`` configuration."""
    if not (1 <= k <= MAX_K and 1 <= d <= MAX_D):
        raise ValueError(f"need 1 <= k <= {MAX_K} and 1 <= d <= {MAX_D} (got k={k}, d={d})")
    width = k * d + 1
    # exact Python ints first so overflow is caught before anything is stored
    rows = [[0] * width for _ in range(d + 1)]
    rows[0][0] = 1
    for dims in range(1, d + 1):
        prev, cur = rows[dims - 1], rows[dims]
        for s in range(dims, k * dims + 1):
            total = 0
            for i in range(max(1, s - k * (dims - 1)), min(k, s - dims + 1) + 1):
                total += prev[s - i]
            if total > COUNT_LIMIT:
                raise ConfigurationTooLargeError(
                    f"psi({k}, {dims}, {s}) exceeds 64 bits; reduce k or d"
                )
            cur[s] = total
    counts = np.array(rows, dtype=np.int64)

    prefix = np.zeros((d, width, k + 1), dtype=np.int64)
    for dims in range(d):
        for s in range(width):
            acc = 0
            for e in range(1, k + 1):
                prefix[dims, s, e] = acc
                if 0 <= s - e:
                    acc += rows[dims][s - e]
    counts.flags.writeable = False
    prefix.flags.writeable = False
    return PsiTable(k=k, d=d, counts=counts, prefix=prefix)


def _check_vector(vec, k: int, d: int) -> None:
    if len(vec) != d:
        raise ValueError(f"vector has {len(vec)} entries, expected {d}")
    for e in vec:
        if not 1 <= e <= k:
            raise ValueError(f"entry {e} outside [1..{k}]")


def vector_to_index(vec, table: PsiTable) -> int:
    """0-based lexicographic rank of ``vec`` among vectors with the same sum."""
    k, d = table.k, table.d
    _check_vector(vec, k, d)
    remaining = sum(vec)
    rank = 0
    for j, value in enumerate(vec):
        after = d - j - 1
        for i in range(1, value):
            rank += table.lookup(after, remaining - i)
        remaining -= value
    return rank


def index_to_vector(table: PsiTable, v: int, rank: int) -> tuple[int, ...]:
    """Inverse of :func:`vector_to_index` for inner sum ``v``."""
    k, d = table.k, table.d
    if not d <= v <= k * d:
        raise InvalidRankError(f"inner sum {v} outside [{d}, {k * d}]")
    if not 0 <= rank < table.lookup(d, v):
        raise InvalidRankError(f"rank {rank} outside [0, {table.lookup(d, v)}) for sum {v}")
    out = []
    remaining = v
    for j in range(d - 1):
        after = d - j - 1
        value = 1
        while True:
            z = table.lookup(after, remaining - value)
            if z > rank:
                break
            rank -= z
            value += 1
        out.append(value)
        remaining -= value
    out.append(remaining)
    return tuple(out)


def enumerate_all(k: int, d: int, v: int) -> list[tuple[int, ...]]:
    """Every vector with sum ``v``, lexicographically ascending (brute force)."""
    _check_kd(k, d)
    if k**d > ENUMERATE_GUARD:
        raise ValueError(f"refusing to enumerate {k}^{d} candidates")
    return [vec for vec in itertools.product(range(1, k + 1), repeat=d) if sum(vec) == v]


def rank_blocks(lengths: np.ndarray, table: PsiTable) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``(p, q)`` for each row of an ``(r, d)`` array of lengths."""
    lengths = np.asarray(lengths, dtype=np.int64)
    r, d = lengths.shape
    if d != table.d:
        raise ValueError(f"blocks have {d} columns, table is for d={table.d}")
    p = lengths.sum(axis=1)
    q = np.zeros(r, dtype=np.int64)
    remaining = p.copy()
    for j in range(d):
        col = lengths[:, j]
        q += table.prefix[d - 1 - j][remaining, col]
        remaining -= col
    return p, q


def unrank_blocks(p: np.ndarray, q: np.ndarray, table: PsiTable) -> np.ndarray:
    """Vectorised inverse of :func:`rank_blocks`; returns an ``(r, d)`` array."""
    k, d = table.k, table.d
    p = np.asarray(p, dtype=np.int64)
    q = np.array(q, dtype=np.int64)
    if p.size and (p.min() < d or p.max() > k * d):
        raise InvalidRankError(f"inner sum outside [{d}, {k * d}]")
    if q.size and (q.min() < 0 or np.any(q >= table.counts[d][p])):
        raise InvalidRankError("rank outside the range of its inner sum")
    out = np.empty((p.size, d), dtype=np.int64)
    remaining = p.copy()
    for j in range(d):
        tab = table.prefix[d - 1 - j]
        col = np.ones(p.size, dtype=np.int64)
        for e in range(2, k + 1):
            col += tab[remaining, e] <= q
        q -= tab[remaining, col]
        remaining -= col
        out[:, j] = col
    return out
