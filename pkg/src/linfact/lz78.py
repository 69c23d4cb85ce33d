"""LZ78 factorization in linear time via nearest marked ancestors on the suffix tree."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._impl import debug_enabled, kernels
from .errors import InvariantViolation, MalformedFactorization
from .suffix_index import build_suffix_tree
from .superimpose import TrieSuperimposition, check_marked_nodes
from .text import SENTINEL, Text, encode_text


@dataclass(frozen=True, eq=False)
class LZ78Factorization:
    """Factors ``1..m`` as (parent factor, symbol) pairs; factor 0 is the empty string.

    ``end_pos[i-1]`` is the 1-based text position where factor i ends. Symbols are
    internal ids; ``alphabet[s - 2]`` is the byte of symbol s and 1 is the sentinel.
    """

    parents: np.ndarray
    symbols: np.ndarray
    end_pos: np.ndarray
    alphabet: bytes = b""
    _depth: list = field(default_factory=list, repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.parents)

    def __len__(self) -> int:
        return self.m

    def __eq__(self, other):
        if not isinstance(other, LZ78Factorization):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and np.array_equal(self.parents, other.parents)
            and np.array_equal(self.symbols, other.symbols)
            and np.array_equal(self.end_pos, other.end_pos)
        )

    def factor_lengths(self) -> np.ndarray:
        """Length of factor i at index i (index 0 is the empty factor)."""
        if not self._depth:
            depth = np.zeros(self.m + 1, dtype=np.int64)
            par = self.parents
            for i in range(self.m):
                depth[i + 1] = depth[par[i]] + 1
            self._depth.append(depth)
        return self._depth[0]

    def factor_symbols(self, i: int) -> list[int]:
        out = []
        while i:
            out.append(int(self.symbols[i - 1]))
            i = int(self.parents[i - 1])
        return out[::-1]

    def id_parents(self) -> np.ndarray:
        """Parent of each factor id, index 0 (the empty factor) pointing to itself."""
        return np.concatenate([[0], self.parents]).astype(np.int64)


def factorize(t: Text, st=None, la=None, nma_backend="reference", impl=None, debug=None,
              return_engine=False):
    """LZ78 factorization of ``t`` through its suffix tree.

    With debug assertions on, every insertion is checked as it happens and the final
    edge ledger is verified for contiguity.
    """
    debug = debug_enabled(debug)
    if st is None:
        st = build_suffix_tree(t, impl=impl)
    eng = TrieSuperimposition(st, nma_backend, root_payload=0, la=la, impl=impl, debug=debug)
    parents, symbols, ends = eng.kernels.lz78_loop(eng.core, st.leaf_of, len(st.text))
    f = LZ78Factorization(parents, symbols, ends, t.byte_for_symbol)
    if debug:
        depth = f.factor_lengths()
        eng.ledger().check(eng.nma, f.id_parents(), depth)
        check_marked_nodes(st, eng.nma, depth)
        check_factorization(f, t)
    return (f, eng) if return_engine else f


def factorize_bytes(data: bytes, backend="reference", impl=None, debug=None) -> LZ78Factorization:
    return factorize(encode_text(data), nma_backend=backend, impl=impl, debug=debug)


def naive_factorize(t: Text) -> LZ78Factorization:
    """Direct greedy parse with an explicit trie of per-node symbol maps."""
    s = t.symbols.tolist() if isinstance(t, Text) else list(t)
    n = len(s)
    children = [{}]
    parents, symbols, ends = [], [], []
    p = 0
    while p < n:
        node = 0
        q = p
        while q < n and s[q] in children[node]:
            node = children[node][s[q]]
            q += 1
        if q == n:
            raise MalformedFactorization("text must end with a unique sentinel")
        children.append({})
        children[node][s[q]] = len(children) - 1
        parents.append(node)
        symbols.append(s[q])
        ends.append(q + 1)
        p = q + 1
    alphabet = t.byte_for_symbol if isinstance(t, Text) else b""
    return LZ78Factorization(
        np.asarray(parents, dtype=np.int32),
        np.asarray(symbols, dtype=np.int32),
        np.asarray(ends, dtype=np.int32),
        alphabet,
    )


def _validate(f: LZ78Factorization, nsym: int) -> None:
    par = np.asarray(f.parents, dtype=np.int64)
    sym = np.asarray(f.symbols, dtype=np.int64)
    if len(par) != len(sym):
        raise MalformedFactorization("parents and symbols differ in length")
    ids = np.arange(1, len(par) + 1)
    bad = np.flatnonzero((par < 0) | (par >= ids))
    if len(bad):
        i = int(bad[0]) + 1
        raise MalformedFactorization(f"factor {i} refers to parent {int(par[i - 1])}")
    bad = np.flatnonzero((sym < 1) | (sym > nsym + 1))
    if len(bad):
        raise MalformedFactorization(f"factor {int(bad[0]) + 1} has unknown symbol {int(sym[bad[0]])}")
    sent = np.flatnonzero(sym == SENTINEL)
    if len(sent) and (len(sent) > 1 or sent[0] != len(sym) - 1):
        raise MalformedFactorization("the sentinel may only end the last factor")


def decode(f: LZ78Factorization, byte_map: bytes | None = None) -> bytes:
    """Rebuild the text from parent chains, copying each parent factor's earlier occurrence."""
    alphabet = f.alphabet if byte_map is None else bytes(byte_map)
    _validate(f, len(alphabet))
    lut = np.zeros(len(alphabet) + 2, dtype=np.uint8)
    lut[2:] = np.frombuffer(alphabet, dtype=np.uint8)
    sym = f.symbols.tolist()
    par = f.parents.tolist()
    m = len(sym)
    start = [0] * (m + 1)
    length = [0] * (m + 1)
    out = bytearray()
    for i in range(1, m + 1):
        p = par[i - 1]
        pos = len(out)
        if p:
            out += out[start[p] : start[p] + length[p]]
        s = sym[i - 1]
        if s != SENTINEL:
            out.append(int(lut[s]))
        start[i] = pos
        length[i] = length[p] + 1
    return bytes(out)


@dataclass(frozen=True)
class LZ78Trie:
    """Root 0 (empty factor) plus one node per factor; ``symbol[v]`` labels the edge into v."""

    parent: tuple
    symbol: tuple
    alphabet: bytes = b""

    @property
    def node_count(self) -> int:
        return len(self.parent)

    def children(self, v: int) -> list[tuple[int, int]]:
        return sorted((self.symbol[c], c) for c in range(1, len(self.parent)) if self.parent[c] == v)

    def edges(self) -> list[tuple[int, int, int]]:
        return [(self.parent[c], self.symbol[c], c) for c in range(1, len(self.parent))]

    def path(self, v: int) -> list[int]:
        out = []
        while v:
            out.append(self.symbol[v])
            v = self.parent[v]
        return out[::-1]


def extract_trie(f: LZ78Factorization) -> LZ78Trie:
    return LZ78Trie((-1, *map(int, f.parents)), (0, *map(int, f.symbols)), f.alphabet)


def check_factorization(f: LZ78Factorization, t: Text) -> None:
    """Concatenation, dictionary/prefix-closedness and trie properties; raises on failure."""
    s = np.asarray(t.symbols)
    par = f.parents.tolist()
    sym = f.symbols.tolist()
    depth = f.factor_lengths()
    ends = f.end_pos.tolist()
    pos = 0
    seen = set()
    for i in range(1, f.m + 1):
        p = par[i - 1]
        if not 0 <= p < i:
            raise InvariantViolation(f"factor {i} has parent {p}")
        key = (p, sym[i - 1])
        if key in seen:
            raise InvariantViolation(f"factor {i} duplicates a trie edge")
        seen.add(key)
        length = int(depth[i])
        if ends[i - 1] != pos + length:
            raise InvariantViolation(f"factor {i} ends at {ends[i - 1]}, expected {pos + length}")
        if p and not np.array_equal(s[pos : pos + length - 1], s[ends[p - 1] - int(depth[p]) : ends[p - 1]]):
            raise InvariantViolation(f"factor {i} does not extend factor {p}")
        if s[pos + length - 1] != sym[i - 1]:
            raise InvariantViolation(f"factor {i} symbol mismatch")
        pos += length
    if pos != len(s):
        raise InvariantViolation("factors do not cover the text")
