"""Text serializations: factor streams (TSV/JSON), heaps, trie files and DOT drawings.

Every writer is deterministic. Symbols are shown one token each: ``$`` is the sentinel,
printable ASCII stands for itself and any other byte (including a literal ``$``) is
written ``\\x{hh}``.
"""
from __future__ import annotations

import json

import numpy as np

from .cst import CommonSuffixTrie, order_suffixes, parse_cst
from .errors import FormatError, MalformedFactorization
from .lz78 import LZ78Factorization, LZ78Trie, extract_trie
from .position_heap import PositionHeap
from .text import SENTINEL, byte_ranks, byte_token, parse_byte_token

FORMAT_TAG = "linfact/1"
FACTOR_HEADER = "id\tparent\tsymbol\tend_pos"
HEAP_HEADER = "label\tparent\tsymbol\tstring"


def symbol_token(s: int, alphabet: bytes) -> str:
    """Token of internal symbol ``s``."""
    if s == SENTINEL:
        return "$"
    return byte_token(alphabet[s - 2])


def render_symbols(symbols, alphabet: bytes) -> str:
    return "".join(symbol_token(int(s), alphabet) for s in symbols)


# factors


def factor_records(f: LZ78Factorization) -> list[dict]:
    a = f.alphabet
    return [
        {"id": i + 1, "parent": int(p), "symbol": symbol_token(int(s), a), "end_pos": int(e)}
        for i, (p, s, e) in enumerate(zip(f.parents, f.symbols, f.end_pos))
    ]


def write_factors(f: LZ78Factorization, fmt: str = "tsv") -> str:
    recs = factor_records(f)
    if fmt == "tsv":
        rows = [FACTOR_HEADER]
        rows += [f"{r['id']}\t{r['parent']}\t{r['symbol']}\t{r['end_pos']}" for r in recs]
        return "\n".join(rows) + "\n"
    if fmt == "json":
        return json.dumps({"format": FORMAT_TAG, "factors": recs}, separators=(",", ":")) + "\n"
    if fmt == "dot":
        return write_trie_dot(f)
    raise ValueError(f"unknown factor format {fmt!r}")


def _tsv_records(text: str) -> list[tuple[int, dict]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r")
        if not line.strip() or line.startswith("#") or line == FACTOR_HEADER:
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise FormatError("expected 4 tab-separated columns", lineno)
        try:
            rec = {"id": int(cols[0]), "parent": int(cols[1]), "symbol": cols[2], "end_pos": int(cols[3])}
        except ValueError:
            raise FormatError("id, parent and end_pos must be integers", lineno) from None
        out.append((lineno, rec))
    return out


def _json_records(text: str) -> list[tuple[int, dict]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, e.lineno) from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG or not isinstance(doc.get("factors"), list):
        raise FormatError(f"expected an object with format {FORMAT_TAG!r} and a factors list", 1)
    out = []
    for k, rec in enumerate(doc["factors"], 1):
        if not isinstance(rec, dict) or not all(
            isinstance(rec.get(key), int) for key in ("id", "parent", "end_pos")
        ) or not isinstance(rec.get("symbol"), str):
            raise FormatError(f"factor record {k} is malformed", 1)
        out.append((1, rec))
    return out


def read_factors(text: str, fmt: str | None = None) -> LZ78Factorization:
    """Parse a factor stream; ``fmt`` is guessed from the first character when omitted."""
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "tsv"
    recs = _json_records(text) if fmt == "json" else _tsv_records(text)
    syms = []
    for k, (lineno, r) in enumerate(recs, 1):
        if r["id"] != k:
            raise FormatError(f"expected factor id {k}, got {r['id']}", lineno)
        try:
            syms.append(parse_byte_token(r["symbol"]))
        except ValueError as e:
            raise FormatError(str(e), lineno) from None
    table, alphabet = byte_ranks(bytes(b for b in syms if b is not None))
    parents = np.array([r["parent"] for _, r in recs], dtype=np.int32)
    symbols = np.array([SENTINEL if b is None else table[b] for b in syms], dtype=np.int32)
    ends = np.array([r["end_pos"] for _, r in recs], dtype=np.int32)
    f = LZ78Factorization(parents, symbols, ends, alphabet)
    _check_stream(f, recs)
    return f


def _check_stream(f: LZ78Factorization, recs) -> None:
    pos = 0
    for i in range(f.m):
        p = int(f.parents[i])
        lineno = recs[i][0]
        if not 0 <= p <= i:
            raise MalformedFactorization(f"factor {i + 1} (line {lineno}) has parent {p}")
        if f.symbols[i] == SENTINEL and i != f.m - 1:
            raise MalformedFactorization(f"sentinel before the last factor (line {lineno})")
    depth = f.factor_lengths()
    for i in range(f.m):
        pos += int(depth[i + 1])
        if int(f.end_pos[i]) != pos:
            raise MalformedFactorization(
                f"factor {i + 1} (line {recs[i][0]}) ends at {int(f.end_pos[i])}, expected {pos}"
            )


# heaps


def heap_records(h: PositionHeap) -> list[dict]:
    a = h.alphabet
    out = []
    for i in range(1, h.node_count + 1):
        out.append({
            "label": i,
            "parent": int(h.parent[i]),
            "symbol": None if i == 1 else symbol_token(int(h.symbol[i]), a),
            "string": render_symbols(h.path(i), a),
        })
    return out


def write_heap(h: PositionHeap, fmt: str = "tsv") -> str:
    """One row per heap node in label order; ``string`` is the root-to-node path."""
    recs = heap_records(h)
    if fmt == "tsv":
        rows = [HEAP_HEADER]
        rows += [f"{r['label']}\t{r['parent']}\t{r['symbol'] or ''}\t{r['string']}" for r in recs]
        return "\n".join(rows) + "\n"
    if fmt == "json":
        return json.dumps({"format": FORMAT_TAG, "heap": recs}, separators=(",", ":")) + "\n"
    if fmt == "dot":
        return write_trie_dot(h)
    raise ValueError(f"unknown heap format {fmt!r}")


# tries


def write_cst(c: CommonSuffixTrie) -> str:
    """Trie file with nodes renumbered by suffix order, so parents precede children."""
    o = order_suffixes(c)
    rows = [f"CST {c.node_count}"]
    for r in range(2, c.node_count + 1):
        v = o.node(r)
        rows.append(f"{r} {int(o.id[c.parent[v]])} {symbol_token(int(c.label[v]), c.alphabet)}")
    return "\n".join(rows) + "\n"


def read_cst(text: str) -> CommonSuffixTrie:
    return parse_cst(text)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot(name: str, nodes, edges) -> str:
    out = [f"digraph {name} {{", "  node [shape=circle];"]
    out += [f"  n{v} [label={_dot_quote(lab)}];" for v, lab in nodes]
    out += [f"  n{u} -> n{v} [label={_dot_quote(tok)}];" for u, v, tok in edges]
    out.append("}")
    return "\n".join(out) + "\n"


def write_trie_dot(obj) -> str:
    """DOT drawing of an LZ78 trie (or factorization), a position heap or a CST."""
    if isinstance(obj, LZ78Factorization):
        obj = extract_trie(obj)
    if isinstance(obj, LZ78Trie):
        a = obj.alphabet
        nodes = [(v, str(v)) for v in range(obj.node_count)]
        edges = [(p, c, symbol_token(s, a)) for p, s, c in obj.edges()]
        return _dot("lz78", nodes, edges)
    if isinstance(obj, PositionHeap):
        nodes = [(i, str(i)) for i in range(1, obj.node_count + 1)]
        edges = [
            (int(obj.parent[i]), i, symbol_token(int(obj.symbol[i]), obj.alphabet))
            for i in range(2, obj.node_count + 1)
        ]
        return _dot("heap", nodes, edges)
    if isinstance(obj, CommonSuffixTrie):
        # edges point from child to parent, the direction strings are read
        nodes = [(v + 1, str(v + 1)) for v in range(obj.node_count)]
        edges = [
            (v + 1, int(obj.parent[v]) + 1, symbol_token(int(obj.label[v]), obj.alphabet))
            for v in range(1, obj.node_count)
        ]
        return _dot("cst", nodes, edges)
    raise TypeError(f"cannot draw {type(obj).__name__}")
