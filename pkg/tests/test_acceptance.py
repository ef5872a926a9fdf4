"""Acceptance suite.  Each test carries ``criterion(number, title)``; the
terminal summary prints one PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import itertools
import math
import os
import time
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from npfcodec import container
from npfcodec.codebook import Codebook, build_codebook, byte_counts, encode_symbols
from npfcodec.entropy import encode_sequence
from npfcodec.enumeration import (
    build_psi_table,
    enumerate_all,
    index_to_vector,
    psi,
    vector_to_index,
)
from npfcodec.errors import NPFError
from npfcodec.pipeline import decode, encode, stream_breakdown
from npfcodec.baselines import order0_entropy

criterion = pytest.mark.criterion

WORD = b"NONPREFIXFREE"
GOLDEN_BITS = "01110100010001000100100"
GOLDEN_LENGTHS = [2, 2, 2, 3, 1, 1, 2, 2, 3, 2, 1, 1, 1]


def report(number, message):
    print(f"[criterion {number}] {message}")


# 1 -------------------------------------------------------------------------

@criterion(1, "enumeration matches brute force for k, d <= 5")
def test_enumeration_oracle():
    start = time.perf_counter()
    for k in range(1, 6):
        for d in range(1, 6):
            table = build_psi_table(k, d)
            by_sum = {}
            for vec in itertools.product(range(1, k + 1), repeat=d):
                by_sum.setdefault(sum(vec), []).append(vec)
            assert sum(psi(k, d, v) for v in range(d, k * d + 1)) == k**d
            for v in range(d, k * d + 1):
                listed = by_sum.get(v, [])
                assert psi(k, d, v) == len(listed)
                assert enumerate_all(k, d, v) == listed
                for i, vec in enumerate(listed):
                    assert vector_to_index(vec, table) == i
                    assert index_to_vector(table, v, i) == vec
    elapsed = time.perf_counter() - start
    report(1, f"exact over all 25 configurations in {elapsed:.2f}s")
    assert elapsed < 10


# 2 -------------------------------------------------------------------------

@criterion(2, "worked examples")
def test_worked_examples():
    table = build_psi_table(3, 3)
    assert psi(3, 3, 6) == 7
    assert psi(3, 3, 5) == 6
    assert vector_to_index((2, 2, 2), table) == 3
    assert vector_to_index((3, 1, 1), table) == 5


@criterion(2, "worked examples")
def test_psi_seven_six_fifteen_as_stated():
    value = psi(7, 6, 15)
    brute = sum(1 for t in itertools.product(range(1, 8), repeat=6) if sum(t) == 15)
    report(2, f"psi(7,6,15) = {value}, brute force = {brute}, stated value = 1875")
    assert value == 1875


# 3 -------------------------------------------------------------------------

@criterion(3, "golden bitstream for the worked word")
def test_golden_bits():
    cb = Codebook.from_alphabet(b"ERFNIOPX")
    stream, lengths = encode_symbols(WORD, cb)
    bits = "".join(format(b, "08b") for b in stream.data)[: stream.bit_count]
    assert bits == GOLDEN_BITS
    assert lengths.tolist() == GOLDEN_LENGTHS


@criterion(3, "golden bitstream for the worked word")
def test_golden_lengths_with_library_tie_break():
    cb = build_codebook(byte_counts(WORD))
    stream, lengths = encode_symbols(WORD, cb)
    assert stream.bit_count == 23
    assert Counter(lengths.tolist()) == Counter(GOLDEN_LENGTHS)
    worked = Codebook.from_alphabet(b"ERFNIOPX")
    counts = byte_counts(WORD)
    # symbols of equal frequency may swap codewords, but each frequency
    # class must receive the same multiset of lengths
    for count in set(counts[counts > 0].tolist()):
        members = np.flatnonzero(counts == count)
        ours = sorted(int(cb.code_len[cb.rank_of[m]]) for m in members)
        theirs = sorted(int(worked.code_len[worked.rank_of[m]]) for m in members)
        assert ours == theirs
    report(3, f"library alphabet {cb.alphabet.decode()}: 23 bits, lengths {lengths.tolist()}")


# 4 -------------------------------------------------------------------------

ROUND_TRIP_INPUTS = 10_000
ROUND_TRIP_DS = (1, 2, 4, 6, 16)
MAX_LENGTH = 10**5


def random_input(rng, index):
    if index < 3:
        n = (0, 1, MAX_LENGTH)[index]
    else:
        n = int(math.exp(rng.uniform(0, math.log(MAX_LENGTH + 1)))) - 1
    sigma = int(rng.integers(1, 257))
    symbols = rng.choice(256, size=sigma, replace=False).astype(np.uint8)
    if rng.random() < 0.5:
        idx = rng.integers(0, sigma, n)
    else:
        weights = 1.0 / np.arange(1, sigma + 1) ** rng.uniform(0.5, 2.5)
        idx = rng.choice(sigma, size=n, p=weights / weights.sum())
    return symbols[idx].tobytes()


@pytest.mark.slow
@criterion(4, "lossless round trip, 10^4 inputs x 5 block sizes")
def test_round_trip():
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    failures = []
    trips = split_trips = 0
    for i in range(ROUND_TRIP_INPUTS):
        data = random_input(rng, i)
        for d in ROUND_TRIP_DS:
            c = encode(data, d)
            if trips % 5 == 0:
                bblob, kblob = container.to_split_bytes(c)
                restored = container.combine(container.from_bytes(bblob),
                                             container.from_bytes(kblob))
                split_trips += 1
            else:
                restored = container.from_bytes(container.to_bytes(c))
            if decode(restored) != data:
                failures.append((i, d, len(data)))
            trips += 1
    elapsed = time.perf_counter() - start
    report(4, f"{trips} round trips ({split_trips} split), {len(failures)} failures, {elapsed:.1f}s")
    assert not failures
    assert elapsed < 300


# 5, 6 ----------------------------------------------------------------------

@pytest.fixture(scope="module")
def english_breakdowns(english_text):
    start = time.perf_counter()
    result = {d: stream_breakdown(encode(english_text, d)) for d in (2, 4, 6)}
    return result, time.perf_counter() - start


@criterion(5, "total size approaches order-0 entropy on English text")
def test_entropy_gap(english_text, english_breakdowns):
    breakdowns, elapsed = english_breakdowns
    assert len(english_text) >= 5 * 10**6
    h0 = order0_entropy(english_text)
    total = {d: s.total_bps for d, s in breakdowns.items()}
    report(5, f"n={len(english_text)} H0={h0:.4f} total d2={total[2]:.4f} "
              f"d4={total[4]:.4f} d6={total[6]:.4f} gap={total[6] - h0:.4f} ({elapsed:.1f}s)")
    assert abs(total[6] - h0) <= 0.15
    assert total[6] <= total[4] <= total[2]
    assert elapsed < 120


@criterion(6, "stream trends across block sizes")
def test_stream_trends(english_breakdowns):
    breakdowns, elapsed = english_breakdowns
    p = [breakdowns[d].pstream_bps for d in (2, 4, 6)]
    q = [breakdowns[d].qstream_bps for d in (2, 4, 6)]
    b = [breakdowns[d].codeword_stream_bps for d in (2, 4, 6)]
    report(6, "pstream " + " ".join(f"{x:.4f}" for x in p)
           + " | qstream " + " ".join(f"{x:.4f}" for x in q)
           + " | codewords " + " ".join(f"{x:.4f}" for x in b))
    assert p[0] > p[1] > p[2]
    assert q[0] < q[1] < q[2]
    assert b[0] == b[1] == b[2]
    assert elapsed < 120


# 7 -------------------------------------------------------------------------

PUBLISHED_D6 = {"sprot34.dat": 4.698, "etext99": 4.553, "rfc": 4.463}


@criterion(7, "optional corpus comparison (reported, not asserted)")
def test_optional_corpus():
    root = os.environ.get("NPF_CORPUS_DIR")
    if not root:
        pytest.skip("set NPF_CORPUS_DIR to a directory holding sprot34.dat, etext99, rfc")
    found = 0
    for name, published in PUBLISHED_D6.items():
        path = Path(root) / name
        if not path.exists():
            report(7, f"{name}: not found")
            continue
        found += 1
        data = path.read_bytes()
        ours = stream_breakdown(encode(data, 6)).total_bps
        delta = ours - published
        verdict = "within" if abs(delta) <= 0.05 else "OUTSIDE"
        report(7, f"{name}: {ours:.3f} vs {published:.3f} (delta {delta:+.3f}, {verdict} 0.05)")
    if not found:
        pytest.skip(f"none of {sorted(PUBLISHED_D6)} in {root}")


# 8 -------------------------------------------------------------------------

@criterion(8, "coder redundancy on uniform data")
def test_coder_redundancy():
    rng = np.random.default_rng(8)
    n = 10**6
    start = time.perf_counter()
    for alphabet in (2, 16, 256):
        symbols = rng.integers(0, alphabet, n)
        bps = 8 * len(encode_sequence(symbols, alphabet)) / n
        excess = bps - math.log2(alphabet)
        report(8, f"alphabet {alphabet}: {bps:.4f} bps, excess {excess:.4f}")
        assert excess <= 0.05
    assert time.perf_counter() - start < 60


# 9 -------------------------------------------------------------------------

FUZZ_MUTATIONS = 10_000


def fuzz_corpus():
    rng = np.random.default_rng(99)
    cases = [b"", b"x", WORD, b"abracadabra" * 40, bytes(range(256)) * 3]
    for _ in range(5):
        sigma = int(rng.integers(2, 120))
        cases.append(rng.integers(0, sigma, int(rng.integers(50, 3000))).astype(np.uint8).tobytes())
    blobs = []
    for i, data in enumerate(cases):
        c = encode(data, (1, 2, 4, 6, 16)[i % 5])
        blobs.append((data, container.to_bytes(c), None))
        bblob, kblob = container.to_split_bytes(c)
        blobs.append((data, bblob, kblob))
        blobs.append((data, kblob, bblob))
    return blobs


def mutate(rng, blob):
    out = bytearray(blob)
    kind = rng.integers(0, 6)
    if kind == 0 and out:
        pos = int(rng.integers(0, len(out)))
        out[pos] ^= 1 << int(rng.integers(0, 8))
    elif kind == 1 and out:
        pos = int(rng.integers(0, len(out)))
        out[pos] = int(rng.integers(0, 256))
    elif kind == 2:
        del out[int(rng.integers(0, len(out) + 1)):]
    elif kind == 3:
        pos = int(rng.integers(0, len(out) + 1))
        out[pos:pos] = rng.integers(0, 256, int(rng.integers(1, 9))).astype(np.uint8).tobytes()
    elif kind == 4 and out:
        pos = int(rng.integers(0, len(out)))
        del out[pos : pos + int(rng.integers(1, 9))]
    else:
        # header fields are where a careless reader allocates or indexes
        pos = int(rng.integers(0, min(len(out), container.HEADER_SIZE) or 1))
        if out:
            out[pos % len(out)] = int(rng.choice([0, 1, 0x7F, 0x80, 0xFF]))
    return bytes(out)


@criterion(9, "container fuzzing never crashes or silently corrupts")
def test_fuzzing():
    rng = np.random.default_rng(4242)
    blobs = fuzz_corpus()
    start = time.perf_counter()
    outcomes = Counter()
    bad = []
    for i in range(FUZZ_MUTATIONS):
        data, blob, companion = blobs[i % len(blobs)]
        mutated = mutate(rng, blob)
        try:
            c = container.from_bytes(mutated)
            if companion is not None:
                c = container.combine(c, container.from_bytes(companion))
            restored = decode(c)
        except NPFError as exc:
            outcomes[type(exc).__name__] += 1
            continue
        except Exception as exc:  # anything unstructured is a failure
            bad.append((i, f"{type(exc).__name__}: {exc}"))
            continue
        if restored == data:
            outcomes["exact"] += 1
        else:
            bad.append((i, "decoded to different bytes"))
    elapsed = time.perf_counter() - start
    report(9, f"{FUZZ_MUTATIONS} mutations in {elapsed:.1f}s: {dict(outcomes.most_common())}")
    assert not bad, bad[:10]
    assert elapsed < 300
