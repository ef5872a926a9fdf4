"""Lossless compression with non-prefix-free codes and enumerated block boundaries."""

from .codebook import Codebook, build_codebook, encode_symbols, mbr, npf_size_bits
from .container import Container, from_bytes, to_bytes
from .entropy import AdaptiveModel, RangeDecoder, RangeEncoder, decode_sequence, encode_sequence
from .enumeration import build_psi_table, index_to_vector, psi, vector_to_index
from .errors import NPFError
from .pipeline import decode, encode, stream_breakdown

__all__ = [
    "AdaptiveModel",
    "Codebook",
    "Container",
    "NPFError",
    "RangeDecoder",
    "RangeEncoder",
    "build_codebook",
    "build_psi_table",
    "decode",
    "decode_sequence",
    "encode",
    "encode_sequence",
    "encode_symbols",
    "from_bytes",
    "index_to_vector",
    "mbr",
    "npf_size_bits",
    "psi",
    "stream_breakdown",
    "to_bytes",
    "vector_to_index",
]
