"""On-disk format.

Every blob starts with the same little-endian header::

    magic      4s   b"NPFE"
    version    u8   1
    part       u8   0 = whole, 1 = codeword half (.npfb), 2 = boundary half (.npfk)
    d          u8   block size, 1..16
    sigma      u16  alphabet size (0 only for empty input)
    n          u64  original length in bytes
    crc32      u32  of the original bytes
    b_bits     u64  codeword stream length in bits
    p_len      u64  Pstream bytes
    q_len      u64  Qstream bytes
    alphabet   sigma bytes, most frequent first

followed by the payloads the part carries: whole = B, P, Q; codeword half = B;
boundary half = P, Q.  B occupies ``ceil(b_bits / 8)`` bytes.  The header is
repeated in both halves of a split pair, so either file describes itself.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, replace
from pathlib import Path

from .codebook import max_code_length
from .enumeration import MAX_D
from .errors import (
    BadMagicError,
    HeaderMalformedError,
    LengthMismatchError,
    MissingBoundaryStreamError,
    MissingCodewordStreamError,
    TruncatedStreamError,
    VersionMismatchError,
)

MAGIC = b"NPFE"
VERSION = 1
PART_WHOLE, PART_CODEWORDS, PART_BOUNDARIES = 0, 1, 2
_HEADER = struct.Struct("<4sBBBHQIQQQ")
HEADER_SIZE = _HEADER.size

SUFFIX = ".npf"
CODEWORD_SUFFIX = ".npfb"
BOUNDARY_SUFFIX = ".npfk"


@dataclass(frozen=True)
class Container:
    """Everything needed to restore one input.

    ``b`` is ``None`` when only the boundary half was loaded; ``pstream`` and
    ``qstream`` are ``None`` when only the codeword half was loaded.
    """

    n: int
    d: int
    alphabet: bytes
    crc32: int
    b_bits: int
    b: bytes | None
    pstream: bytes | None
    qstream: bytes | None
    p_len: int = -1
    q_len: int = -1

    def __post_init__(self):
        # declared lengths default to the payloads when those are present
        if self.p_len < 0:
            object.__setattr__(self, "p_len", len(self.pstream or b""))
        if self.q_len < 0:
            object.__setattr__(self, "q_len", len(self.qstream or b""))

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    @property
    def k(self) -> int:
        return max_code_length(self.sigma) if self.sigma else 0

    @property
    def blocks(self) -> int:
        return -(-self.n // self.d)

    @property
    def header_size(self) -> int:
        return HEADER_SIZE + self.sigma

    @property
    def has_codewords(self) -> bool:
        return self.b is not None

    @property
    def has_boundaries(self) -> bool:
        return self.pstream is not None and self.qstream is not None

    def require_complete(self) -> None:
        if not self.has_boundaries:
            raise MissingBoundaryStreamError(
                "Pstream/Qstream missing: the codeword stream alone cannot be decoded"
            )
        if not self.has_codewords:
            raise MissingCodewordStreamError("codeword stream missing")

    def total_size(self) -> int:
        return len(to_bytes(self))


def _header(c: Container, part: int) -> bytes:
    return _HEADER.pack(
        MAGIC, VERSION, part, c.d, c.sigma, c.n, c.crc32, c.b_bits, c.p_len, c.q_len
    ) + c.alphabet


def to_bytes(c: Container) -> bytes:
    c.require_complete()
    return _header(c, PART_WHOLE) + c.b + c.pstream + c.qstream


def to_split_bytes(c: Container) -> tuple[bytes, bytes]:
    """``(codeword half, boundary half)``."""
    c.require_complete()
    return (
        _header(c, PART_CODEWORDS) + c.b,
        _header(c, PART_BOUNDARIES) + c.pstream + c.qstream,
    )


def _validate(n, d, sigma, alphabet, b_bits) -> None:
    if not 1 <= d <= MAX_D:
        raise HeaderMalformedError(f"block size {d} outside [1, {MAX_D}]")
    if sigma > 256:
        raise HeaderMalformedError(f"sigma {sigma} exceeds 256")
    if (sigma == 0) != (n == 0):
        raise HeaderMalformedError(f"sigma={sigma} inconsistent with n={n}")
    if len(set(alphabet)) != len(alphabet):
        raise HeaderMalformedError("alphabet repeats a symbol")
    if n == 0:
        if b_bits:
            raise HeaderMalformedError("empty input with a nonempty codeword stream")
        return
    symbols = -(-n // d) * d
    k = max_code_length(sigma)
    if not symbols <= b_bits <= k * symbols:
        raise HeaderMalformedError(
            f"{b_bits} codeword bits impossible for {symbols} symbols with k={k}"
        )


def from_bytes(blob: bytes) -> Container:
    """Parse one blob (whole file or either half of a split pair)."""
    blob = bytes(blob)
    if len(blob) < 4:
        raise TruncatedStreamError(f"only {len(blob)} bytes; not a container")
    if blob[:4] != MAGIC:
        raise BadMagicError(f"bad magic {blob[:4]!r}")
    if len(blob) < HEADER_SIZE:
        raise TruncatedStreamError("header cut short")
    magic, version, part, d, sigma, n, crc, b_bits, p_len, q_len = _HEADER.unpack_from(blob)
    if version != VERSION:
        raise VersionMismatchError(f"version {version}, expected {VERSION}")
    if part not in (PART_WHOLE, PART_CODEWORDS, PART_BOUNDARIES):
        raise HeaderMalformedError(f"unknown part tag {part}")
    pos = HEADER_SIZE
    if len(blob) < pos + sigma:
        raise TruncatedStreamError("alphabet cut short")
    alphabet = blob[pos : pos + sigma]
    pos += sigma
    _validate(n, d, sigma, alphabet, b_bits)

    b_len = (b_bits + 7) // 8
    sizes = {
        PART_WHOLE: (b_len, p_len, q_len),
        PART_CODEWORDS: (b_len, 0, 0),
        PART_BOUNDARIES: (0, p_len, q_len),
    }[part]
    expected = pos + sum(sizes)
    if len(blob) < expected:
        raise TruncatedStreamError(f"payload needs {expected} bytes, got {len(blob)}")
    if len(blob) > expected:
        raise LengthMismatchError(f"{len(blob) - expected} bytes beyond the declared payloads")

    b = p = q = None
    if part != PART_BOUNDARIES:
        b = blob[pos : pos + b_len]
        pos += b_len
    if part != PART_CODEWORDS:
        p = blob[pos : pos + p_len]
        q = blob[pos + p_len : pos + p_len + q_len]
    return Container(n, d, alphabet, crc, b_bits, b, p, q, p_len, q_len)


def combine(first: Container, second: Container) -> Container:
    """Reunite the two halves of a split pair (in either order)."""
    keys = ("n", "d", "alphabet", "crc32", "b_bits", "p_len", "q_len")
    if any(getattr(first, key) != getattr(second, key) for key in keys):
        raise HeaderMalformedError("split halves come from different containers")
    codewords = first if first.has_codewords else second
    boundaries = first if first.has_boundaries else second
    if not codewords.has_codewords:
        raise MissingCodewordStreamError("neither half carries the codeword stream")
    if not boundaries.has_boundaries:
        raise MissingBoundaryStreamError("neither half carries Pstream/Qstream")
    return replace(codewords, pstream=boundaries.pstream, qstream=boundaries.qstream)


def split_paths(base: str | Path) -> tuple[Path, Path]:
    base = Path(base)
    if base.suffix in (SUFFIX, CODEWORD_SUFFIX, BOUNDARY_SUFFIX):
        base = base.with_suffix("")
    return (
        base.with_name(base.name + CODEWORD_SUFFIX),
        base.with_name(base.name + BOUNDARY_SUFFIX),
    )


def write(c: Container, path: str | Path, split: bool = False) -> list[Path]:
    """Write ``c`` to disk; returns the files created."""
    if not split:
        path = Path(path)
        _write_file(path, to_bytes(c))
        return [path]
    bpath, kpath = split_paths(path)
    bblob, kblob = to_split_bytes(c)
    _write_file(bpath, bblob)
    _write_file(kpath, kblob)
    return [bpath, kpath]


def _write_file(path: Path, data: bytes) -> None:
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _read_file(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc


def read(*paths: str | Path) -> Container:
    """Load a whole container, or the halves of a split pair.

    Given a single ``.npfb`` or ``.npfk`` path the companion file is looked for
    next to it; if absent the partial container is returned and decoding it
    raises the matching missing-stream error.
    """
    if not 1 <= len(paths) <= 2:
        raise ValueError("expected one or two paths")
    parts = [from_bytes(_read_file(Path(p))) for p in paths]
    if len(parts) == 2:
        return combine(*parts)
    only = parts[0]
    if only.has_codewords and only.has_boundaries:
        return only
    bpath, kpath = split_paths(paths[0])
    companion = kpath if only.has_codewords else bpath
    if companion.exists():
        return combine(only, from_bytes(_read_file(companion)))
    return only
