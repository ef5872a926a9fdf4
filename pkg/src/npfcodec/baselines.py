"""Reference numbers for benchmarking: order-0 entropy, static Huffman, adaptive AC."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .codebook import byte_counts
from .entropy import decode_sequence, encode_sequence
from .errors import EmptyInputError, UndefinedEntropyError


@dataclass(frozen=True)
class CompressionReport:
    """Sizes for one method on one input.

    ``side_bits`` is model information a real decoder would need (code
    lengths, for instance); ``payload_bits`` is everything else.
    """

    method: str
    input_size: int
    payload_bits: int
    side_bits: int = 0

    @property
    def compressed_size(self) -> int:
        return (self.payload_bits + self.side_bits + 7) // 8

    @property
    def bits_per_symbol(self) -> float:
        if self.input_size == 0:
            return 0.0
        return 8 * self.compressed_size / self.input_size

    @property
    def payload_bps(self) -> float:
        if self.input_size == 0:
            return 0.0
        return self.payload_bits / self.input_size


def order0_entropy(data) -> float:
    """Empirical order-0 entropy in bits per byte."""
    counts = byte_counts(data)
    n = int(counts.sum())
    if n == 0:
        raise UndefinedEntropyError("entropy of an empty sequence is undefined")
    probs = counts[counts > 0] / n
    return float(max(0.0, -np.sum(probs * np.log2(probs))))


def huffman_code_lengths(counts) -> dict[int, int]:
    """Code length per symbol of a Huffman tree over the positive counts.

    A lone symbol gets length 0: with one symbol there is nothing to transmit.
    """
    heap = [(int(c), sym, (sym,)) for sym, c in enumerate(counts) if c > 0]
    if not heap:
        raise EmptyInputError("no symbols to build a Huffman code from")
    depth = {sym: 0 for _, sym, _ in heap}
    heapq.heapify(heap)
    while len(heap) > 1:
        w1, t1, s1 = heapq.heappop(heap)
        w2, t2, s2 = heapq.heappop(heap)
        for sym in s1 + s2:
            depth[sym] += 1
        heapq.heappush(heap, (w1 + w2, min(t1, t2), s1 + s2))
    return depth


def huffman_static_size(data) -> CompressionReport:
    counts = byte_counts(data)
    n = int(counts.sum())
    if n == 0:
        raise EmptyInputError("Huffman coding needs a nonempty input")
    lengths = huffman_code_lengths(counts)
    payload = sum(int(counts[sym]) * length for sym, length in lengths.items())
    # one byte of code length per symbol present
    side = 8 * len(lengths)
    return CompressionReport("huffman_static", n, payload, side)


def adaptive_ac_compress(data) -> bytes:
    arr = np.frombuffer(bytes(data), dtype=np.uint8)
    return encode_sequence(arr, 256)


def adaptive_ac_decompress(payload: bytes, n: int) -> bytes:
    return decode_sequence(payload, n, 256).astype(np.uint8).tobytes()


def adaptive_ac_size(data) -> CompressionReport:
    payload = adaptive_ac_compress(data)
    return CompressionReport("adaptive_ac", len(bytes(data)), 8 * len(payload))


def entropy_bound_bits(data) -> float:
    """``n * H0``, the order-0 lower bound in bits."""
    n = len(bytes(data))
    return n * order0_entropy(data) if n else 0.0

