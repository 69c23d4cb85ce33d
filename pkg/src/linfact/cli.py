"""``linfact`` command line: encode, decode, pheap, bench, verify.

Exit status is 0 on success, 1 when input fails validation or verification and 2 on
I/O errors. Inputs named ``-`` (the default) are read from stdin.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bench as _bench
from ._impl import AVAILABLE, DEFAULT_IMPL
from .cst import cst_from_strings, parse_cst
from .errors import LinfactError
from .io_formats import read_factors, write_factors, write_heap, write_trie_dot
from .lz78 import check_factorization, decode, factorize, naive_factorize
from .marked_ancestor import BACKENDS
from .position_heap import build_position_heap, naive_build, verify_heap
from .text import encode_text

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class _Failure(Exception):
    pass


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _emit(data, out: str | None) -> None:
    if isinstance(data, str):
        data = data.encode()
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def _split_lines(raw: bytes) -> list[bytes]:
    lines = raw.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    return [ln[:-1] if ln.endswith(b"\r") else ln for ln in lines]


def _load_cst(args):
    if args.cst is not None:
        return parse_cst(_read_bytes(args.cst).decode("latin-1"))
    return cst_from_strings(_split_lines(_read_bytes(args.strings)))


def cmd_encode(args) -> int:
    f = factorize(encode_text(_read_bytes(args.input)), nma_backend=args.backend, impl=args.impl)
    _emit(write_factors(f, args.format), args.out)
    return EXIT_OK


def cmd_decode(args) -> int:
    f = read_factors(_read_bytes(args.input).decode("latin-1"))
    _emit(decode(f), args.out)
    return EXIT_OK


def cmd_pheap(args) -> int:
    c = _load_cst(args)
    h = build_position_heap(c, backend=args.backend, impl=args.impl)
    _emit(write_heap(h, args.format), args.out)
    if args.dot:
        _emit(write_trie_dot(h), args.dot)
    return EXIT_OK


def cmd_bench(args) -> int:
    backends = BACKENDS if args.backend == "both" else (args.backend,)
    impls = AVAILABLE if args.impl == "both" else (args.impl or DEFAULT_IMPL,)
    kinds = _bench.KINDS if args.kind == "all" else (args.kind,)
    sizes = _bench.parse_sizes(args.sizes)
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w")
    try:
        print(_bench.TSV_HEADER, file=out, flush=True)
        _bench.run_bench(
            sizes, kinds, args.alphabet, args.seed, backends, impls, args.repeat,
            progress=lambda r: print(_bench.format_row(r), file=out, flush=True),
        )
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _verify_text(data: bytes, report) -> None:
    t = encode_text(data)
    ref = naive_factorize(t)
    for impl in AVAILABLE:
        for backend in BACKENDS:
            f = factorize(t, nma_backend=backend, impl=impl, debug=True)
            if f != ref:
                raise _Failure(f"factorization differs from the oracle ({impl}/{backend})")
    check_factorization(ref, t)
    if decode(ref) != data:
        raise _Failure("decoding does not restore the input")
    report(f"ok lz78 n={len(data)} factors={ref.m}")


def _verify_cst(c, report) -> None:
    ref = naive_build(c)
    for impl in AVAILABLE:
        for backend in BACKENDS:
            h = build_position_heap(c, backend=backend, impl=impl, debug=True)
            if h != ref:
                raise _Failure(f"position heap differs from the oracle ({impl}/{backend})")
    rep = verify_heap(ref, c)
    if not rep.ok:
        raise _Failure(rep.violation)
    report(f"ok heap nodes={c.node_count}")


def _random_params(tokens) -> dict:
    params = {"n": 2000, "iters": 100}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in params or not val.isdigit():
            raise ValueError(f"bad --random parameter {tok!r}; use n=N iters=K")
        params[key] = int(val)
    return params


def cmd_verify(args) -> int:
    def report(line):
        print(line, flush=True)

    try:
        if args.random is not None:
            p = _random_params(args.random)
            rng = np.random.default_rng(args.seed)
            for it in range(p["iters"]):
                sigma = (2, 3, 16, 255)[it % 4]
                n = int(rng.integers(0, p["n"] + 1))
                _verify_text(rng.integers(0, sigma, n, dtype=np.uint8).tobytes(), report)
                k = int(rng.integers(1, 9))
                words = [
                    rng.integers(97, 97 + min(sigma, 4), int(rng.integers(0, 25)), dtype=np.uint8).tobytes()
                    for _ in range(k)
                ]
                _verify_cst(cst_from_strings(words), report)
        if args.cst is not None or args.strings is not None:
            _verify_cst(_load_cst(args), report)
        if args.input is not None:
            _verify_text(_read_bytes(args.input), report)
        if args.random is None and args.input is None and args.cst is None and args.strings is None:
            _verify_text(_read_bytes("-"), report)
    except (_Failure, AssertionError) as e:
        print(f"FAIL {e}", file=sys.stderr)
        return EXIT_INVALID
    print("PASS")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="linfact", description="LZ78 factorization and position heaps")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmts=("tsv", "json", "dot"), default="tsv"):
        p.add_argument("--backend", choices=BACKENDS, default="reference")
        p.add_argument("--impl", choices=AVAILABLE, default=None)
        p.add_argument("--format", choices=fmts, default=default)
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("encode", help="LZ78-factorize a byte stream")
    p.add_argument("input", nargs="?", default="-")
    common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="rebuild bytes from a factor stream (TSV or JSON)")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("pheap", help="position heap of a trie file or a list of strings")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--cst", metavar="FILE")
    src.add_argument("--strings", metavar="FILE", help="one string per line")
    common(p)
    p.add_argument("--dot", metavar="FILE", help="also write a DOT drawing here")
    p.set_defaults(func=cmd_pheap)

    p = sub.add_parser("bench", help="time the factorization pipeline over growing sizes")
    p.add_argument("--sizes", default="2^16..2^20")
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=(*BACKENDS, "both"), default="accelerated")
    p.add_argument("--impl", choices=(*AVAILABLE, "both"), default=None)
    p.add_argument("--kind", choices=(*_bench.KINDS, "all"), default="random")
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="compare engines against the oracles")
    p.add_argument("input", nargs="?", default=None)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--cst", metavar="FILE")
    src.add_argument("--strings", metavar="FILE")
    p.add_argument("--random", nargs="*", metavar="KEY=VAL", help="random self-test, e.g. n=2000 iters=100")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as e:
        print(f"linfact: {e}", file=sys.stderr)
        return EXIT_IO
    except (LinfactError, ValueError) as e:
        print(f"linfact: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
