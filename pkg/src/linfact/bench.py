"""Timing harness: input generators and the pipeline benchmark behind ``linfact bench``."""
from __future__ import annotations

import gc
import re
import statistics
import time
from dataclasses import dataclass

import numpy as np

from ._impl import AVAILABLE, DEFAULT_IMPL
from .lz78 import factorize
from .text import encode_text

KINDS = ("random", "unary", "ab", "debruijn")


def parse_sizes(sizes: str) -> list[int]:
    """``2^20..2^23`` (doubling range), ``1024,4096`` or a mix of both."""
    def one(tok):
        tok = tok.strip()
        m = re.fullmatch(r"(\d+)\^(\d+)", tok)
        return int(m.group(1)) ** int(m.group(2)) if m else int(tok)

    out = []
    for part in sizes.split(","):
        if ".." in part:
            lo, hi = map(one, part.split(".."))
            if lo < 1 or hi < lo:
                raise ValueError(f"bad size range {part!r}")
            while lo <= hi:
                out.append(lo)
                lo *= 2
        elif part.strip():
            out.append(one(part))
    if not out or min(out) < 0:
        raise ValueError(f"bad size list {sizes!r}")
    return out


def _de_bruijn(k: int, order: int) -> list[int]:
    a = [0] * (k * order)
    seq = []

    def db(t, p):
        if t > order:
            if order % p == 0:
                seq.extend(a[1 : p + 1])
        else:
            a[t] = a[t - p]
            db(t + 1, p)
            for j in range(a[t - p] + 1, k):
                a[t] = j
                db(t + 1, t)

    db(1, 1)
    return seq


def generate(kind: str, n: int, alphabet: int = 2, seed: int = 0) -> bytes:
    """Benchmark input of length n; ``random`` is uniform over ``alphabet`` byte values."""
    if kind == "random":
        if not 1 <= alphabet <= 256:
            raise ValueError("alphabet size must be in 1..256")
        rng = np.random.default_rng(seed)
        return rng.integers(0, alphabet, n, dtype=np.uint8).tobytes()
    if kind == "unary":
        return b"a" * n
    if kind == "ab":
        return (b"ab" * (n // 2 + 1))[:n]
    if kind == "debruijn":
        k = max(2, min(alphabet, 16))
        order = 1
        while k ** order < min(n, 1 << 16):
            order += 1
        cycle = bytes(97 + c for c in _de_bruijn(k, order))
        return (cycle * (n // len(cycle) + 1))[:n]
    raise ValueError(f"unknown input kind {kind!r}")


def time_pipeline(data: bytes, backend="accelerated", impl=None) -> float:
    """Wall time of text encoding, suffix tree construction and factorization."""
    gc.collect()
    t0 = time.perf_counter()
    factorize(encode_text(data), nma_backend=backend, impl=impl, debug=False)
    return time.perf_counter() - t0


@dataclass
class BenchRow:
    kind: str
    sigma: int
    n: int
    backend: str
    impl: str
    median_s: float
    ratio: float | None  # against the previous size of the same configuration

    @property
    def ns_per_symbol(self) -> float:
        return 1e9 * self.median_s / max(self.n, 1)


def run_bench(sizes, kinds=("random",), alphabet=2, seed=0, backends=("accelerated",),
              impls=None, repeat=5, progress=None) -> list[BenchRow]:
    impls = impls or (DEFAULT_IMPL,)
    for impl in impls:
        if impl not in AVAILABLE:
            raise ValueError(f"implementation {impl!r} is not available")
    rows = []
    for kind in kinds:
        sigma = alphabet if kind in ("random", "debruijn") else (1 if kind == "unary" else 2)
        for impl in impls:
            for backend in backends:
                inputs = [generate(kind, n, alphabet, seed) for n in sizes]
                times = [[] for _ in sizes]
                # sizes take turns within each round so machine-load drift hits all alike
                for _ in range(repeat):
                    for k, data in enumerate(inputs):
                        times[k].append(time_pipeline(data, backend, impl))
                prev = None
                for n, ts in zip(sizes, times):
                    med = statistics.median(ts)
                    row = BenchRow(kind, sigma, n, backend, impl, med, med / prev if prev else None)
                    rows.append(row)
                    prev = med
                    if progress:
                        progress(row)
    return rows


TSV_HEADER = "kind\tsigma\tn\tbackend\timpl\tmedian_s\tns_per_symbol\tratio"


def format_row(r: BenchRow) -> str:
    ratio = "" if r.ratio is None else f"{r.ratio:.3f}"
    return (
        f"{r.kind}\t{r.sigma}\t{r.n}\t{r.backend}\t{r.impl}\t{r.median_s:.6f}"
        f"\t{r.ns_per_symbol:.1f}\t{ratio}"
    )


def format_table(rows) -> str:
    return "\n".join([TSV_HEADER, *map(format_row, rows)]) + "\n"
