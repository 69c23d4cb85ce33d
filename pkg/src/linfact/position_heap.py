"""Position heaps of string sets given as common-suffix tries.

The heap is built by inserting the trie's strings in suffix order; the engine locates
each insertion point with a nearest-marked-ancestor query on the generalized suffix tree.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._impl import debug_enabled
from .cst import CommonSuffixTrie, SuffixOrder, gst_bridge, order_suffixes
from .errors import InvariantViolation
from .superimpose import TrieSuperimposition, check_marked_nodes


@dataclass(frozen=True, eq=False)
class PositionHeap:
    """Arrays indexed by label ``1..ℓ`` (slot 0 unused); label 1 is the root.

    ``symbol[i]`` labels the edge from ``parent[i]`` to i and ``cst_node[i]`` is the
    trie node whose string is the i-th in suffix order.
    """

    parent: np.ndarray
    symbol: np.ndarray
    cst_node: np.ndarray
    alphabet: bytes = b""
    _depth: list = field(default_factory=list, repr=False)

    @property
    def node_count(self) -> int:
        return len(self.parent) - 1

    def __len__(self) -> int:
        return self.node_count

    def __eq__(self, other):
        if not isinstance(other, PositionHeap):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and np.array_equal(self.parent, other.parent)
            and np.array_equal(self.symbol, other.symbol)
            and np.array_equal(self.cst_node, other.cst_node)
        )

    @property
    def depth(self) -> np.ndarray:
        if not self._depth:
            d = np.zeros(len(self.parent), dtype=np.int64)
            par = self.parent
            for i in range(2, len(par)):
                d[i] = d[par[i]] + 1
            self._depth.append(d)
        return self._depth[0]

    def children(self, i: int) -> list[tuple[int, int]]:
        return sorted(
            (int(self.symbol[j]), j) for j in range(2, len(self.parent)) if self.parent[j] == i
        )

    def path(self, i: int) -> list[int]:
        out = []
        while i > 1:
            out.append(int(self.symbol[i]))
            i = int(self.parent[i])
        return out[::-1]

    def restrict(self, i: int) -> "PositionHeap":
        """The heap of the first i strings: labels are insertion times, so a prefix."""
        return PositionHeap(
            self.parent[: i + 1].copy(), self.symbol[: i + 1].copy(),
            self.cst_node[: i + 1].copy(), self.alphabet,
        )


def _assemble(parents, symbols, order: SuffixOrder, alphabet) -> PositionHeap:
    ell = len(order.node_of)
    parent = np.zeros(ell + 1, dtype=np.int32)
    symbol = np.zeros(ell + 1, dtype=np.int32)
    parent[2:] = parents
    symbol[2:] = symbols
    cst_node = np.empty(ell + 1, dtype=np.int32)
    cst_node[0] = -1
    cst_node[1:] = order.node_of
    return PositionHeap(parent, symbol, cst_node, alphabet)


def build_position_heap(c: CommonSuffixTrie, backend="reference", impl=None, debug=None,
                        return_engine=False):
    """Insert the i-th string (i >= 2) below the deepest heap node on its suffix-tree path."""
    debug = debug_enabled(debug)
    order = order_suffixes(c)
    br = gst_bridge(c, impl=impl)
    eng = TrieSuperimposition(br.tree, backend, root_payload=1, impl=impl, debug=debug)
    nodes = order.node_of[1:]
    leaves = br.cst_to_leaf[nodes]
    starts = br.rep_pos[nodes]
    parents, symbols = eng.kernels.heap_loop(eng.core, leaves, starts, 2)
    h = _assemble(parents, symbols, order, c.alphabet)
    if debug:
        id_parent = h.parent.astype(np.int64)
        eng.ledger().check(eng.nma, id_parent, h.depth)
        check_marked_nodes(br.tree, eng.nma, h.depth)
        report = verify_heap(h, c, order)
        if not report.ok:
            raise InvariantViolation(report.violation)
    return (h, eng) if return_engine else h


def naive_build(c: CommonSuffixTrie, upto: int | None = None) -> PositionHeap:
    """Plain trie insertion of the first ``upto`` strings in suffix order."""
    order = order_suffixes(c)
    ell = c.node_count if upto is None else upto
    sub = SuffixOrder(order.id, order.node_of[:ell])
    kids = [None, {}] + [{} for _ in range(2, ell + 1)]
    parents, symbols = [], []
    for i in range(2, ell + 1):
        s = c.node_symbols(int(order.node_of[i - 1]))
        v = 1
        k = 0
        while s[k] in kids[v]:
            v = kids[v][s[k]]
            k += 1
        kids[v][s[k]] = i
        parents.append(v)
        symbols.append(s[k])
    return _assemble(parents, symbols, sub, c.alphabet)


@dataclass(frozen=True)
class HeapReport:
    ok: bool
    violation: str | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def verify_heap(h: PositionHeap, c: CommonSuffixTrie, order: SuffixOrder | None = None) -> HeapReport:
    """Check node count and labelling, heap order, the path property and distinct sibling
    symbols; stops at the first violation."""
    if order is None:
        order = order_suffixes(c)
    ell = c.node_count
    if h.node_count != ell:
        return HeapReport(False, f"heap has {h.node_count} nodes, expected {ell}")
    if not np.array_equal(h.cst_node[1:], order.node_of):
        return HeapReport(False, "labels do not follow the suffix order")
    par = h.parent.tolist()
    sym = h.symbol.tolist()
    for i in range(2, ell + 1):
        if not 1 <= par[i] < i:
            return HeapReport(False, f"heap order broken: node {i} has parent {par[i]}", i - 2)
    paths = [None, []]
    for i in range(2, ell + 1):
        p = paths[par[i]] + [sym[i]]
        paths.append(p)
        s = c.node_symbols(int(order.node_of[i - 1]))
        if s[: len(p)] != p:
            return HeapReport(False, f"path to node {i} is not a prefix of its string", ell - 1)
    seen = set()
    for i in range(2, ell + 1):
        if (par[i], sym[i]) in seen:
            return HeapReport(False, f"node {i} repeats a sibling symbol", 2 * ell - 2)
        seen.add((par[i], sym[i]))
    return HeapReport(True, None, 3 * (ell - 1))
