"""Adaptive range coding.

Two ways in: the incremental objects (:class:`AdaptiveModel`,
:class:`RangeEncoder`, :class:`RangeDecoder`) for symbol-at-a-time use, and
:func:`encode_sequence` / :func:`decode_sequence` for whole arrays under one
model.  Both drive the same compiled kernels, so their output is identical.

>>> payload = encode_sequence([2, 0, 1], 3)
>>> decode_sequence(payload, 3, 3).tolist()
[2, 0, 1]
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .errors import CorruptStreamError, TruncatedStreamError

MAX_TOTAL = K.MAX_TOTAL
INCREMENT = K.INCREMENT
MAX_ALPHABET = 1 << 16


def raise_for_status(status: int, what: str) -> None:
    if status == K.OK:
        return
    if status == K.ERR_TRUNCATED:
        raise TruncatedStreamError(f"{what}: input ended early")
    if status == K.ERR_TRAILING:
        raise CorruptStreamError(f"{what}: unconsumed bytes after the last symbol")
    raise CorruptStreamError(f"{what}: code value outside the model range")


class AdaptiveModel:
    """Order-0 frequency model: counts start at 1, grow by ``INCREMENT``.

    When the total passes its limit every count is halved, rounding up, so no
    symbol ever reaches zero probability.
    """

    def __init__(self, alphabet_size: int):
        if not 1 <= alphabet_size <= MAX_ALPHABET:
            raise ValueError(f"alphabet_size must be in [1, {MAX_ALPHABET}]")
        self.alphabet_size = alphabet_size
        self._freq = np.empty(alphabet_size + 1, np.int64)
        self._tree = np.empty(alphabet_size + 1, np.int64)
        K.model_reset(self._freq, self._tree, 0, alphabet_size)
        self.total = alphabet_size
        self.limit = int(K.model_limit(alphabet_size))
        self._top = int(K.top_power(alphabet_size))

    @property
    def freq(self) -> np.ndarray:
        return self._freq[: self.alphabet_size].copy()

    def interval(self, sym: int) -> tuple[int, int]:
        """Cumulative ``[low, high)`` of ``sym`` under the current counts."""
        low = int(K.model_prefix(self._tree, 0, sym))
        return low, low + int(self._freq[sym])

    def find(self, target: int) -> int:
        return int(K.model_find(self._tree, 0, self.alphabet_size, self._top, target)[0])

    def _check(self, sym: int) -> None:
        if not 0 <= sym < self.alphabet_size:
            raise ValueError(f"symbol {sym} outside [0, {self.alphabet_size})")


class RangeEncoder:
    def __init__(self):
        self._state = K.enc_state()
        self._out = np.empty(256, np.uint8)
        self._done = False

    def encode(self, model: AdaptiveModel, sym: int) -> None:
        model._check(sym)
        self._out, model.total = K.enc_model(
            self._state, self._out, model._freq, model._tree, 0,
            model.alphabet_size, sym, model.total, model.limit,
        )

    def finish(self) -> bytes:
        """Flush the registers; the encoder cannot be used afterwards."""
        if self._done:
            raise ValueError("encoder already finished")
        self._done = True
        return K.enc_finish(self._state, self._out).tobytes()


class RangeDecoder:
    def __init__(self, data: bytes):
        self._data = np.frombuffer(bytes(data), dtype=np.uint8)
        self._state = K.dec_state(self._data)

    def decode(self, model: AdaptiveModel) -> int:
        raise_for_status(int(self._state[K.D_ERR]), "range decoder")
        sym, model.total = K.dec_model(
            self._state, self._data, model._freq, model._tree, 0,
            model.alphabet_size, model._top, model.total, model.limit,
        )
        raise_for_status(int(self._state[K.D_ERR]), "range decoder")
        return int(sym)

    def close(self) -> None:
        """Check that the payload was consumed exactly."""
        raise_for_status(int(K.dec_status(self._state, self._data)), "range decoder")


def encode_sequence(symbols, alphabet_size: int) -> bytes:
    arr = np.asarray(symbols, dtype=np.int64)
    if not 1 <= alphabet_size <= MAX_ALPHABET:
        raise ValueError(f"alphabet_size must be in [1, {MAX_ALPHABET}]")
    if arr.size and (arr.min() < 0 or arr.max() >= alphabet_size):
        raise ValueError("symbol outside the alphabet")
    return K.encode_sequence(arr, alphabet_size).tobytes()


def decode_sequence(payload: bytes, count: int, alphabet_size: int) -> np.ndarray:
    if not 1 <= alphabet_size <= MAX_ALPHABET:
        raise ValueError(f"alphabet_size must be in [1, {MAX_ALPHABET}]")
    data = np.frombuffer(bytes(payload), dtype=np.uint8)
    symbols, status = K.decode_sequence(data, count, alphabet_size)
    raise_for_status(int(status), "range decoder")
    return symbols
