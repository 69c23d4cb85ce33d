"""Common-suffix tries: parsing, construction from strings, suffix order, GST bridge.

A CST stores a string set reversed: each node's string is read from the node up to the
root, so the root is the empty string and its only child is the sentinel. Nodes are
0-based internally; file and display ids are ``index + 1``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import (
    CSTSyntaxError,
    CycleDetected,
    DuplicateSiblingLabel,
    EmptySet,
    MisplacedSentinel,
    NonSentinelRootEdge,
    OrphanNode,
)
from .suffix_index import SuffixTree, generalized_tree_of_text
from .text import SENTINEL, byte_ranks, parse_byte_token


@dataclass(frozen=True, eq=False)
class CommonSuffixTrie:
    parent: np.ndarray  # parent[0] == -1
    label: np.ndarray  # internal symbol of the edge toward the parent; 1 is the sentinel
    depth: np.ndarray
    alphabet: bytes
    child_start: np.ndarray = field(repr=False)
    child_list: np.ndarray = field(repr=False)
    _order: list = field(default_factory=list, repr=False)

    @classmethod
    def from_arrays(cls, parent, label, alphabet: bytes) -> "CommonSuffixTrie":
        """Arrays must already describe a valid trie rooted at index 0."""
        parent = np.asarray(parent, dtype=np.int32)
        label = np.asarray(label, dtype=np.int32)
        n = len(parent)
        kids = np.arange(1, n, dtype=np.int32)
        kids = kids[np.lexsort((label[1:], parent[1:]))]
        start = np.zeros(n + 1, dtype=np.int32)
        np.cumsum(np.bincount(parent[1:], minlength=n), out=start[1:])
        depth = np.zeros(n, dtype=np.int32)
        # parents are reached before children in breadth-first order
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for c in kids[start[v] : start[v + 1]]:
                depth[c] = depth[v] + 1
                queue.append(int(c))
        for a in (parent, label, depth, start, kids):
            a.flags.writeable = False
        return cls(parent, label, depth, bytes(alphabet), start, kids)

    @property
    def node_count(self) -> int:
        return len(self.parent)

    def __len__(self) -> int:
        return self.node_count

    def children(self, v: int) -> list[tuple[int, int]]:
        """(label, child) pairs in ascending label order."""
        kids = self.child_list[self.child_start[v] : self.child_start[v + 1]]
        return [(int(self.label[c]), int(c)) for c in kids]

    @property
    def leaves(self) -> np.ndarray:
        return np.flatnonzero(np.diff(self.child_start) == 0)

    @property
    def total_length(self) -> int:
        """Sum of the leaf string lengths, sentinels included."""
        return int(self.depth[self.leaves].sum())

    def node_symbols(self, v: int) -> list[int]:
        """String of node v, read from v up to the root."""
        out = []
        while v > 0:
            out.append(int(self.label[v]))
            v = int(self.parent[v])
        return out

    def node_bytes(self, v: int) -> bytes:
        """String of node v without its trailing sentinel."""
        a = self.alphabet
        return bytes(a[s - 2] for s in self.node_symbols(v) if s != SENTINEL)

    def strings(self) -> list[bytes]:
        """The represented set: one string per leaf."""
        return [self.node_bytes(int(v)) for v in self.leaves]

    def order(self) -> "SuffixOrder":
        if not self._order:
            self._order.append(order_suffixes(self))
        return self._order[0]

    def canonical(self) -> tuple:
        """Parent ranks and labels listed in suffix order; equal iff same string set."""
        o = self.order()
        nodes = o.node_of
        par = np.where(nodes == 0, 0, o.id[self.parent[nodes]])
        return self.alphabet, par.tolist(), self.label[nodes].tolist()

    def __eq__(self, other):
        if not isinstance(other, CommonSuffixTrie):
            return NotImplemented
        return self.canonical() == other.canonical()


def parse_cst(source: str | bytes | Iterable[str]) -> CommonSuffixTrie:
    """Read the line-oriented trie format: a ``CST <count>`` header, then one
    ``<node> <parent> <label>`` line per non-root node; node 1 is the root."""
    if isinstance(source, bytes):
        source = source.decode("ascii", errors="replace")
    lines = source.splitlines() if isinstance(source, str) else list(source)
    ell = None
    par = lab = where = None
    last = 0
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        last = lineno
        parts = line.split()
        if ell is None:
            if len(parts) != 2 or parts[0] != "CST" or not parts[1].isdigit() or int(parts[1]) < 1:
                raise CSTSyntaxError("expected header 'CST <node count>'", line=lineno)
            ell = int(parts[1])
            par = [0] * (ell + 1)
            lab = [None] * (ell + 1)
            where = [0] * (ell + 1)
            continue
        if len(parts) != 3:
            raise CSTSyntaxError("expected '<node> <parent> <label>'", line=lineno)
        try:
            node, p = int(parts[0]), int(parts[1])
        except ValueError:
            raise CSTSyntaxError("node and parent ids must be integers", line=lineno) from None
        if not 2 <= node <= ell:
            raise CSTSyntaxError(f"node id {node} outside 2..{ell}", line=lineno)
        if where[node]:
            raise CSTSyntaxError(f"node {node} already defined on line {where[node]}", line=lineno)
        try:
            lab[node] = parse_byte_token(parts[2])
        except ValueError as e:
            raise CSTSyntaxError(str(e), line=lineno) from None
        par[node] = p
        where[node] = lineno
    if ell is None:
        raise CSTSyntaxError("missing 'CST <node count>' header", line=last or 1)
    for v in range(2, ell + 1):
        if not where[v]:
            raise CSTSyntaxError(f"node {v} is never defined", line=last + 1)
    if ell == 1:
        raise EmptySet("trie has no non-empty strings")

    seen = {}
    for v in sorted(range(2, ell + 1), key=where.__getitem__):
        p, c, ln = par[v], lab[v], where[v]
        if p == v:
            raise CycleDetected(f"node {v} is its own parent", line=ln)
        if not 1 <= p <= ell:
            raise OrphanNode(f"parent {p} of node {v} does not exist", line=ln)
        if p == 1 and c is not None:
            raise NonSentinelRootEdge(f"edge into the root from node {v} is not '$'", line=ln)
        if p != 1 and c is None:
            raise MisplacedSentinel(f"'$' on edge {v}->{p} away from the root", line=ln)
        if (p, c) in seen:
            raise DuplicateSiblingLabel(
                f"nodes {seen[p, c]} and {v} share parent {p} and a label", line=ln
            )
        seen[p, c] = v

    kids = [[] for _ in range(ell + 1)]
    for v in range(2, ell + 1):
        kids[par[v]].append(v)
    reached = [False] * (ell + 1)
    reached[1] = True
    stack = [1]
    while stack:
        for c in kids[stack.pop()]:
            reached[c] = True
            stack.append(c)
    stray = [v for v in range(2, ell + 1) if not reached[v]]
    if stray:
        v = min(stray, key=where.__getitem__)
        raise CycleDetected(f"node {v} is not connected to the root", line=where[v])

    table, alphabet = byte_ranks(bytes(c for c in lab[2:] if c is not None))
    parent = [-1] + [p - 1 for p in par[2:]]
    label = [0] + [SENTINEL if c is None else int(table[c]) for c in lab[2:]]
    return CommonSuffixTrie.from_arrays(parent, label, alphabet)


def cst_from_strings(strings: Iterable[bytes | str]) -> CommonSuffixTrie:
    """Insert each string reversed, behind the shared sentinel edge."""
    ws = [w.encode() if isinstance(w, str) else bytes(w) for w in strings]
    if not ws:
        raise EmptySet("no strings given")
    table, alphabet = byte_ranks(b"".join(ws))
    parent = [-1, 0]
    label = [0, SENTINEL]
    kids = [{}, {}]
    for w in ws:
        v = 1
        for s in table[np.frombuffer(w, dtype=np.uint8)][::-1].tolist():
            c = kids[v].get(s)
            if c is None:
                c = len(parent)
                kids[v][s] = c
                kids.append({})
                parent.append(v)
                label.append(s)
            v = c
    return CommonSuffixTrie.from_arrays(parent, label, alphabet)


@dataclass(frozen=True, eq=False)
class SuffixOrder:
    """``id[v]`` is the 1-based rank of node v's string; ``node_of[r - 1]`` inverts it."""

    id: np.ndarray
    node_of: np.ndarray

    def node(self, rank: int) -> int:
        return int(self.node_of[rank - 1])

    def __eq__(self, other):
        return isinstance(other, SuffixOrder) and np.array_equal(self.id, other.id)


def order_suffixes(c: CommonSuffixTrie) -> SuffixOrder:
    """Rank nodes by string length, then by reversed string.

    A node's reversed string is its root-to-node label path, so among equal depths the
    order is preorder with children visited by ascending label; a stable sort by depth
    of that preorder gives the full order.
    """
    n = c.node_count
    pre = np.empty(n, dtype=np.int32)
    start, kids = c.child_start, c.child_list
    stack = [0]
    k = 0
    while stack:
        v = stack.pop()
        pre[k] = v
        k += 1
        stack.extend(kids[start[v] : start[v + 1]][::-1].tolist())
    node_of = pre[np.argsort(c.depth[pre], kind="stable")]
    rank = np.empty(n, dtype=np.int32)
    rank[node_of] = np.arange(1, n + 1, dtype=np.int32)
    return SuffixOrder(rank, node_of)


def naive_suffix_order(c: CommonSuffixTrie) -> SuffixOrder:
    key = {v: (int(c.depth[v]), c.node_symbols(v)[::-1]) for v in range(c.node_count)}
    node_of = np.array(sorted(key, key=key.__getitem__), dtype=np.int32)
    rank = np.empty(len(node_of), dtype=np.int32)
    rank[node_of] = np.arange(1, len(node_of) + 1)
    return SuffixOrder(rank, node_of)


@dataclass(frozen=True, eq=False)
class GSTBridge:
    """Generalized suffix tree of the leaf strings plus the leaf <-> CST node bijection.

    ``rep_pos[v]`` is a text position where node v's string starts (-1 for the root).
    The root of the CST maps to the root of the tree.
    """

    tree: SuffixTree
    leaf_to_cst: np.ndarray  # -1 on internal tree nodes
    cst_to_leaf: np.ndarray
    rep_pos: np.ndarray


def gst_bridge(c: CommonSuffixTrie, impl=None) -> GSTBridge:
    leaves = c.leaves
    lens = c.depth[leaves].astype(np.int64)
    starts = np.zeros(len(leaves), dtype=np.int64)
    np.cumsum(lens[:-1], out=starts[1:])
    total = int(lens.sum())
    text = np.empty(total, dtype=np.int32)
    node_at = np.empty(total, dtype=np.int32)
    parent, label = c.parent, c.label
    for s, v in zip(starts.tolist(), leaves.tolist()):
        p = s
        while v > 0:
            text[p] = label[v]
            node_at[p] = v
            v = int(parent[v])
            p += 1
    tree = generalized_tree_of_text(text, starts, impl=impl)
    n = c.node_count
    cst_to_leaf = np.full(n, -1, dtype=np.int32)
    rep_pos = np.full(n, -1, dtype=np.int64)
    leaf_to_cst = np.full(tree.node_count, -1, dtype=np.int32)
    leaf_of = np.asarray(tree.leaf_of)
    # later writes win; any occurrence is a valid representative
    rep_pos[node_at] = np.arange(total)
    cst_to_leaf[node_at] = leaf_of
    leaf_to_cst[leaf_of] = node_at
    cst_to_leaf[0] = tree.root
    leaf_to_cst[tree.root] = 0
    return GSTBridge(tree, leaf_to_cst, cst_to_leaf, rep_pos)
