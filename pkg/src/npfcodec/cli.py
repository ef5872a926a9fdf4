"""Command-line front end.

    npfcodec compress INPUT [-o OUTPUT] [--d N] [--split]
    npfcodec decompress INPUT [COMPANION] -o OUTPUT
    npfcodec bench FILE... [--d 2,4,6] [--jobs N]
    npfcodec stats FILE [--d N] [--context P]

``bench`` and ``stats`` write CSV to standard output.
"""

from __future__ import annotations

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import container
from .baselines import adaptive_ac_size, huffman_static_size, order0_entropy
from .codebook import max_code_length
from .enumeration import MAX_D, build_psi_table
from .errors import NPFError
from .pipeline import DEFAULT_D, block_tuples, decode, encode, stream_breakdown

EXIT_DATA_ERROR = 1
EXIT_USAGE = 2


def _block_size(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 1 <= d <= MAX_D:
        raise argparse.ArgumentTypeError(f"block size must be in [1, {MAX_D}]")
    return d


def _block_sizes(text: str) -> list[int]:
    return [_block_size(part) for part in text.split(",") if part.strip()]


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def cmd_compress(args) -> int:
    data = Path(args.input).read_bytes()
    c = encode(data, args.d)
    out = args.output or args.input + container.SUFFIX
    written = container.write(c, out, split=args.split)
    size = sum(p.stat().st_size for p in written)
    bps = 8 * size / len(data) if data else 0.0
    names = ", ".join(str(p) for p in written)
    print(f"{args.input}: {len(data)} -> {size} bytes, {bps:.4f} bits/symbol (d={args.d}) [{names}]")
    return 0


def cmd_decompress(args) -> int:
    c = container.read(*args.inputs)
    data = decode(c)
    out = args.output
    if out is None:
        first = Path(args.inputs[0])
        out = first.with_suffix("") if first.suffix in (
            container.SUFFIX, container.CODEWORD_SUFFIX, container.BOUNDARY_SUFFIX
        ) else first.with_name(first.name + ".out")
    Path(out).write_bytes(data)
    print(f"{args.inputs[0]}: restored {len(data)} bytes to {out}")
    return 0


def bench_columns(ds: list[int]) -> list[str]:
    cols = ["file", "size", "sigma", "k", "entropy", "huffman_bps", "huffman_payload_bps",
            "adaptive_ac_bps"]
    for d in ds:
        cols += [f"npf_d{d}_bps", f"codeword_d{d}_bps", f"pstream_d{d}_bps",
                 f"qstream_d{d}_bps", f"header_d{d}_bps"]
    return cols


def bench_row(path: str, ds: list[int]) -> dict[str, str]:
    data = Path(path).read_bytes()
    row = {"file": path, "size": str(len(data))}
    sigma = len(set(data))
    row["sigma"] = str(sigma)
    row["k"] = str(max_code_length(sigma)) if sigma else "0"
    if data:
        huff = huffman_static_size(data)
        row["entropy"] = _fmt(order0_entropy(data))
        row["huffman_bps"] = _fmt(huff.bits_per_symbol)
        row["huffman_payload_bps"] = _fmt(huff.payload_bps)
    else:
        row.update(entropy=_fmt(0.0), huffman_bps=_fmt(0.0), huffman_payload_bps=_fmt(0.0))
    row["adaptive_ac_bps"] = _fmt(adaptive_ac_size(data).bits_per_symbol)
    for d in ds:
        s = stream_breakdown(encode(data, d))
        row[f"npf_d{d}_bps"] = _fmt(s.total_bps)
        row[f"codeword_d{d}_bps"] = _fmt(s.codeword_stream_bps)
        row[f"pstream_d{d}_bps"] = _fmt(s.pstream_bps)
        row[f"qstream_d{d}_bps"] = _fmt(s.qstream_bps)
        row[f"header_d{d}_bps"] = _fmt(s.header_bps)
    return row


def _safe_bench_row(path: str, ds: list[int]):
    try:
        return bench_row(path, ds), None
    except (OSError, NPFError, MemoryError) as exc:
        return None, f"{path}: {exc}"


def cmd_bench(args) -> int:
    writer = csv.DictWriter(sys.stdout, fieldnames=bench_columns(args.d), lineterminator="\n")
    writer.writeheader()
    failed = 0
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_safe_bench_row, args.files, [args.d] * len(args.files)))
    else:
        results = (_safe_bench_row(path, args.d) for path in args.files)
    for row, error in results:
        if error:
            print(f"error: {error}", file=sys.stderr)
            failed += 1
        else:
            writer.writerow(row)
            sys.stdout.flush()
    return EXIT_DATA_ERROR if failed else 0


STATS_COLUMNS = ["histogram", "value", "count", "distinct_vectors"]


def cmd_stats(args) -> int:
    data = Path(args.input).read_bytes()
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(STATS_COLUMNS)
    if not data:
        if args.context is not None:
            print("error: --context needs a nonempty input", file=sys.stderr)
            return EXIT_USAGE
        return 0
    blocks = block_tuples(data, args.d)
    k, d = blocks.k, args.d
    if args.context is not None and not d <= args.context <= k * d:
        print(f"error: --context must be in [{d}, {k * d}] for this input (k={k})", file=sys.stderr)
        return EXIT_USAGE
    table = build_psi_table(k, d)
    p_counts = np.bincount(blocks.p, minlength=k * d + 1)
    for p in range(d, k * d + 1):
        writer.writerow(["p", p, int(p_counts[p]), table.lookup(d, p)])
    if args.context is not None:
        qs = blocks.q[blocks.p == args.context]
        values, counts = np.unique(qs, return_counts=True)
        domain = table.lookup(d, args.context)
        for value, count in zip(values.tolist(), counts.tolist()):
            writer.writerow(["q", value, count, domain])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="npfcodec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="compress one file")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="output path (default INPUT.npf)")
    p.add_argument("--d", type=_block_size, default=DEFAULT_D, help="block size (default 6)")
    p.add_argument("--split", action="store_true",
                   help="write codewords (.npfb) and boundaries (.npfk) to separate files")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="restore a compressed file")
    p.add_argument("inputs", nargs="+", metavar="INPUT",
                   help="a .npf file, or the .npfb/.npfk halves of a split pair")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("bench", help="bits/symbol comparison as CSV")
    p.add_argument("files", nargs="+")
    p.add_argument("--d", type=_block_sizes, default=[2, 4, 6], help="comma list (default 2,4,6)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="p histogram (and q histogram for one p) as CSV")
    p.add_argument("input")
    p.add_argument("--d", type=_block_size, default=DEFAULT_D)
    p.add_argument("--context", type=int, help="inner sum whose q histogram to emit")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "inputs", None) is not None and len(args.inputs) > 2:
        parser.error("decompress takes at most two inputs")
    try:
        return args.func(args)
    except NPFError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
