"""Frequency-ordered non-prefix-free codebook and the raw codeword bitstream.

The rank-``j`` symbol (1-based, most frequent first) gets the codeword
``MBR(j + 1)``: the binary form of ``j + 1`` without its leading one.  So the
first two symbols get one bit, the next four get two bits, and so on.  The
codeword stream is not self-delimiting; the block boundary streams built in
:mod:`npfcodec.pipeline` carry the lengths.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CorruptStreamError, EmptyInputError, TruncatedStreamError


def mbr(i: int) -> tuple[int, int]:
    """Minimal binary representation of ``i >= 2`` as ``(value, bit_length)``.

    >>> mbr(13)
    (5, 3)
    """
    if i < 2:
        raise ValueError(f"MBR is defined for i >= 2 (got {i})")
    length = i.bit_length() - 1
    return i - (1 << length), length


def max_code_length(sigma: int) -> int:
    """``floor(log2(sigma + 1))``, the longest codeword for ``sigma`` symbols."""
    if sigma < 1:
        raise ValueError("sigma must be >= 1")
    return (sigma + 1).bit_length() - 1


def byte_counts(data) -> np.ndarray:
    return np.bincount(_as_array(data), minlength=256).astype(np.int64)


@dataclass(frozen=True)
class Codebook:
    """Symbol to codeword mapping.  Index ``j`` below is the 0-based rank."""

    alphabet: bytes
    code_len: np.ndarray = field(repr=False)
    code_bits: np.ndarray = field(repr=False)
    rank_of: np.ndarray = field(repr=False)

    @classmethod
    def from_alphabet(cls, alphabet: bytes) -> "Codebook":
        alphabet = bytes(alphabet)
        if not alphabet:
            raise EmptyInputError("codebook needs at least one symbol")
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet contains repeated symbols")
        codes = [mbr(j + 2) for j in range(len(alphabet))]
        rank_of = np.full(256, -1, dtype=np.int64)
        rank_of[np.frombuffer(alphabet, dtype=np.uint8)] = np.arange(len(alphabet))
        return cls(
            alphabet=alphabet,
            code_len=np.array([n for _, n in codes], dtype=np.int64),
            code_bits=np.array([v for v, _ in codes], dtype=np.int64),
            rank_of=rank_of,
        )

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    @property
    def k(self) -> int:
        return max_code_length(self.sigma)

    def codeword(self, symbol: int) -> str:
        j = int(self.rank_of[symbol])
        if j < 0:
            raise ValueError(f"symbol {symbol!r} not in codebook")
        return format(int(self.code_bits[j]), f"0{int(self.code_len[j])}b")

    def kraft_sum(self) -> float:
        return float(np.sum(2.0 ** -self.code_len))


def build_codebook(frequencies) -> Codebook:
    """Codebook over the bytes with positive count.

    Order is descending count, ties by ascending byte value.
    """
    counts = np.asarray(frequencies, dtype=np.int64)
    if counts.shape != (256,):
        raise ValueError("expected 256 per-byte counts")
    present = np.flatnonzero(counts > 0)
    if present.size == 0:
        raise EmptyInputError("no symbol has a positive count")
    order = present[np.lexsort((present, -counts[present]))]
    return Codebook.from_alphabet(bytes(order.astype(np.uint8)))


@dataclass(frozen=True)
class CodewordBitstream:
    """Concatenated codewords, MSB-first within each byte."""

    data: bytes
    bit_count: int

    def reader(self) -> "BitReader":
        return BitReader(self.data, self.bit_count)


class BitReader:
    """Sequential MSB-first cursor over a :class:`CodewordBitstream`."""

    def __init__(self, data: bytes, bit_count: int):
        self._data = data
        self._bits = bit_count
        self.pos = 0

    @property
    def remaining(self) -> int:
        return self._bits - self.pos

    def read(self, n: int) -> int:
        if n > self.remaining:
            raise TruncatedStreamError(f"need {n} bits, {self.remaining} left")
        value = 0
        for _ in range(n):
            byte = self._data[self.pos >> 3]
            value = (value << 1) | ((byte >> (7 - (self.pos & 7))) & 1)
            self.pos += 1
        return value


def _as_array(symbols) -> np.ndarray:
    if isinstance(symbols, np.ndarray):
        return symbols.astype(np.uint8, copy=False)
    return np.frombuffer(bytes(symbols), dtype=np.uint8)


def encode_symbols(symbols, cb: Codebook) -> tuple[CodewordBitstream, np.ndarray]:
    """Replace each byte by its codeword; also return the per-symbol lengths."""
    arr = _as_array(symbols)
    ranks = cb.rank_of[arr]
    if ranks.size and ranks.min() < 0:
        bad = int(arr[np.argmax(ranks < 0)])
        raise ValueError(f"symbol {bad} not in codebook")
    lengths = cb.code_len[ranks]
    values = cb.code_bits[ranks]
    ends = np.cumsum(lengths)
    total = int(ends[-1]) if ends.size else 0
    starts = ends - lengths
    bits = np.zeros(total, dtype=np.uint8)
    for j in range(cb.k):
        m = lengths > j
        bits[starts[m] + j] = (values[m] >> (lengths[m] - 1 - j)) & 1
    return CodewordBitstream(np.packbits(bits).tobytes(), total), lengths


def decode_next(reader: BitReader, length: int, cb: Codebook) -> int:
    """Read one ``length``-bit codeword and return its byte symbol."""
    if not 1 <= length <= cb.k:
        raise ValueError(f"codeword length {length} outside [1..{cb.k}]")
    value = reader.read(length)
    rank = (1 << length) + value - 2
    if rank >= cb.sigma:
        raise CorruptStreamError(f"codeword rank {rank + 1} exceeds sigma={cb.sigma}")
    return cb.alphabet[rank]


def decode_symbols(stream: CodewordBitstream, lengths: np.ndarray, cb: Codebook) -> np.ndarray:
    """Vectorised :func:`decode_next` along a whole length sequence.

    The lengths must consume the stream exactly.
    """
    lengths = np.asarray(lengths, dtype=np.int64)
    ends = np.cumsum(lengths)
    total = int(ends[-1]) if ends.size else 0
    if total > stream.bit_count or stream.bit_count > 8 * len(stream.data):
        raise TruncatedStreamError(f"codeword stream has {stream.bit_count} bits, need {total}")
    if total != stream.bit_count:
        raise CorruptStreamError(f"boundaries cover {total} bits of {stream.bit_count}")
    starts = ends - lengths
    bits = np.unpackbits(np.frombuffer(stream.data, dtype=np.uint8), count=total).astype(np.int64)
    values = np.zeros(lengths.size, dtype=np.int64)
    for j in range(int(lengths.max()) if lengths.size else 0):
        m = lengths > j
        values[m] = (values[m] << 1) | bits[starts[m] + j]
    ranks = (np.int64(1) << lengths) + values - 2
    if ranks.size and ranks.max() >= cb.sigma:
        raise CorruptStreamError(f"codeword rank exceeds sigma={cb.sigma}")
    return np.frombuffer(cb.alphabet, dtype=np.uint8)[ranks]


def npf_size_bits(frequencies, cb: Codebook) -> int:
    """Total codeword bits for the given per-byte counts."""
    counts = np.asarray(frequencies, dtype=np.int64)
    ranked = counts[np.frombuffer(cb.alphabet, dtype=np.uint8)]
    return int(np.dot(ranked, cb.code_len))
