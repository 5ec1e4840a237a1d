#!/usr/bin/env python3
"""Benchmark the pure-Python scanner against the compiled one, and the effect
on whole-file parsing.

Usage: python benchmarks/bench_tokenize.py [--repeat N] [--scale K]
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from cddlint.syntax import _scan_py, scanner
from cddlint.syntax.parser import parse_unit

try:
    from cddlint.syntax import _scan_c
except ImportError:
    _scan_c = None

FIXTURES = Path(__file__).parent.parent / "tests" / "fixtures"


def load_corpus(scale: int) -> list[bytes]:
    files = sorted(FIXTURES.rglob("*.java"))
    blobs = [p.read_bytes() for p in files]
    return blobs * scale


def time_scan(backend, corpus: list[bytes], repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        for blob in corpus:
            backend.scan(blob)
        best = min(best, time.perf_counter() - started)
    return best


def time_parse(backend, corpus: list[bytes], repeat: int) -> float:
    saved = scanner._backend
    scanner._backend = backend
    try:
        best = float("inf")
        for _ in range(repeat):
            started = time.perf_counter()
            for blob in corpus:
                parse_unit(blob.decode("utf-8"))
            best = min(best, time.perf_counter() - started)
        return best
    finally:
        scanner._backend = saved


def mb_per_s(total_bytes: int, seconds: float) -> float:
    return total_bytes / seconds / 1e6


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--scale", type=int, default=40,
                        help="corpus replication factor")
    args = parser.parse_args()

    corpus = load_corpus(args.scale)
    total = sum(len(b) for b in corpus)
    print(f"corpus: {len(corpus)} files, {total / 1e6:.2f} MB "
          f"(best of {args.repeat} runs)\n")

    pure = time_scan(_scan_py, corpus, args.repeat)
    print(f"tokenize pure-python : {pure * 1e3:8.1f} ms  "
          f"{mb_per_s(total, pure):7.1f} MB/s")
    if _scan_c is None:
        print("tokenize compiled    : not built (pip install -e . "
              "--no-build-isolation)")
        return 0
    compiled = time_scan(_scan_c, corpus, args.repeat)
    print(f"tokenize compiled    : {compiled * 1e3:8.1f} ms  "
          f"{mb_per_s(total, compiled):7.1f} MB/s")
    print(f"tokenize speedup     : {pure / compiled:8.2f} x\n")

    parse_pure = time_parse(_scan_py, corpus, args.repeat)
    parse_compiled = time_parse(_scan_c, corpus, args.repeat)
    print(f"parse with pure scan : {parse_pure * 1e3:8.1f} ms")
    print(f"parse with compiled  : {parse_compiled * 1e3:8.1f} ms")
    print(f"parse speedup        : {parse_pure / parse_compiled:8.2f} x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
