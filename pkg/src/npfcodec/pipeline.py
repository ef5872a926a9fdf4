"""Block-wise codec: NPF codewords plus enumeratively coded boundaries.

The input is cut into blocks of ``d`` symbols (the tail padded with the most
frequent symbol).  For each block the codeword lengths form a vector whose sum
``p`` goes to the Pstream and whose rank ``q`` among all vectors with that sum
goes to the Qstream, coded under a model chosen by ``p``.  Blocks of all
one-bit or all ``k``-bit codewords have a single possible vector, so no ``q``
is written for them.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels as K
from .codebook import (
    Codebook,
    CodewordBitstream,
    build_codebook,
    byte_counts,
    decode_symbols,
    encode_symbols,
)
from .container import Container
from .entropy import raise_for_status
from .enumeration import MAX_D, PsiTable, build_psi_table, rank_blocks, unrank_blocks
from .errors import ChecksumMismatchError

DEFAULT_D = 6


@lru_cache(maxsize=64)
def _config(k: int, d: int) -> tuple[PsiTable, np.ndarray, np.ndarray]:
    """Psi table plus per-``p`` model sizes and raw-bit splits for the Qstream."""
    table = build_psi_table(k, d)
    alpha = np.zeros(k * d + 1, np.int64)
    shift = np.zeros(k * d + 1, np.int64)
    for p in range(d + 1, k * d):
        count = table.lookup(d, p)
        s = 0
        while (count + (1 << s) - 1) >> s > K.QMODEL_LIMIT:
            s += 1
        alpha[p] = (count + (1 << s) - 1) >> s
        shift[p] = s
    alpha.flags.writeable = False
    shift.flags.writeable = False
    return table, alpha, shift


def _check_d(d: int) -> None:
    if not 1 <= d <= MAX_D:
        raise ValueError(f"block size d must be in [1, {MAX_D}] (got {d})")


@dataclass(frozen=True)
class Blocks:
    """Intermediate encoder state, exposed for statistics."""

    codebook: Codebook
    d: int
    n: int
    stream: CodewordBitstream
    p: np.ndarray
    q: np.ndarray

    @property
    def k(self) -> int:
        return self.codebook.k

    @property
    def has_q(self) -> np.ndarray:
        return (self.p != self.d) & (self.p != self.k * self.d)


def block_tuples(data, d: int = DEFAULT_D, codebook: Codebook | None = None) -> Blocks:
    """Codebook, codeword stream and ``(p, q)`` per block for nonempty ``data``.

    ``codebook`` overrides the frequency-ordered one; it must cover every byte
    of ``data``.
    """
    _check_d(d)
    arr = np.frombuffer(bytes(data), dtype=np.uint8)
    cb = codebook if codebook is not None else build_codebook(byte_counts(arr))
    r = -(-arr.size // d)
    pad = r * d - arr.size
    if pad:
        arr = np.concatenate([arr, np.full(pad, cb.alphabet[0], np.uint8)])
    stream, lengths = encode_symbols(arr, cb)
    table, _, _ = _config(cb.k, d)
    p, q = rank_blocks(lengths.reshape(r, d), table)
    return Blocks(cb, d, r * d - pad, stream, p, q)


def encode(data, d: int = DEFAULT_D, codebook: Codebook | None = None) -> Container:
    """Compress ``data`` with block size ``d``."""
    _check_d(d)
    data = bytes(data)
    crc = zlib.crc32(data)
    if not data:
        return Container(0, d, b"", crc, 0, b"", b"", b"")
    blocks = block_tuples(data, d, codebook)
    k = blocks.k
    _, alpha, shift = _config(k, d)
    pstream, qstream = K.encode_blocks(blocks.p, blocks.q, d, k, alpha, shift)
    return Container(
        n=len(data),
        d=d,
        alphabet=blocks.codebook.alphabet,
        crc32=crc,
        b_bits=blocks.stream.bit_count,
        b=blocks.stream.data,
        pstream=pstream.tobytes(),
        qstream=qstream.tobytes(),
    )


def decode_tuples(c: Container) -> tuple[np.ndarray, np.ndarray]:
    """Recover the per-block ``(p, q)`` arrays from the boundary streams."""
    c.require_complete()
    if c.n == 0:
        empty = np.empty(0, np.int64)
        _, _, status = K.decode_blocks(
            np.frombuffer(c.pstream, np.uint8), np.frombuffer(c.qstream, np.uint8),
            0, c.d, 1, empty, empty,
        )
        raise_for_status(int(status), "boundary streams")
        return empty, empty
    _, alpha, shift = _config(c.k, c.d)
    p, q, status = K.decode_blocks(
        np.frombuffer(c.pstream, np.uint8),
        np.frombuffer(c.qstream, np.uint8),
        c.blocks, c.d, c.k, alpha, shift,
    )
    raise_for_status(int(status), "boundary streams")
    return p, q


def decode(c: Container) -> bytes:
    """Restore the original bytes; raises a :class:`NPFError` subclass on bad data."""
    p, q = decode_tuples(c)
    if c.n == 0:
        out = b""
    else:
        table, _, _ = _config(c.k, c.d)
        lengths = unrank_blocks(p, q, table).ravel()
        cb = Codebook.from_alphabet(c.alphabet)
        symbols = decode_symbols(CodewordBitstream(c.b, c.b_bits), lengths, cb)
        out = symbols[: c.n].tobytes()
    if zlib.crc32(out) != c.crc32:
        raise ChecksumMismatchError("decoded bytes fail the CRC-32 check")
    return out


@dataclass(frozen=True)
class StreamBreakdown:
    """Bits per input symbol spent on each part of a container.

    ``codeword_stream_bps`` counts only the codewords of the real input, so it
    does not depend on ``d``.  Padding symbols and the byte rounding of B are
    framing: they appear in ``total_bps`` (the actual container size) but in no
    component.
    """

    n: int
    d: int
    codeword_stream_bps: float
    pstream_bps: float
    qstream_bps: float
    header_bps: float
    total_bps: float


def stream_breakdown(c: Container) -> StreamBreakdown:
    if c.n == 0:
        return StreamBreakdown(0, c.d, 0.0, 0.0, 0.0, 0.0, 0.0)
    n = c.n
    # every padding symbol is the rank-1 symbol, whose codeword is one bit
    pad_bits = c.blocks * c.d - n
    total_bytes = c.header_size + (c.b_bits + 7) // 8 + c.p_len + c.q_len
    return StreamBreakdown(
        n=n,
        d=c.d,
        codeword_stream_bps=(c.b_bits - pad_bits) / n,
        pstream_bps=8 * c.p_len / n,
        qstream_bps=8 * c.q_len / n,
        header_bps=8 * c.header_size / n,
        total_bps=8 * total_bytes / n,
    )
