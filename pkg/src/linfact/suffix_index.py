"""Suffix arrays (SA-IS), LCP arrays (Kasai) and suffix trees built from them.

Positions are 0-based throughout. A generalized tree is built over the concatenation
of sentinel-terminated strings that share sentinel symbol 1; each suffix is cut at its
first sentinel and suffixes that become equal share a single leaf.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._impl import kernels
from .text import SENTINEL, Text


def _symbols(t) -> np.ndarray:
    return np.ascontiguousarray(t.symbols if isinstance(t, Text) else t, dtype=np.int32)


def build_suffix_array(t, impl=None) -> np.ndarray:
    """0-based suffix array of ``t`` (a Text or an integer sequence)."""
    return kernels(impl).sais(_symbols(t))


def build_lcp(t, sa, impl=None) -> np.ndarray:
    """``lcp[i]`` is the longest common prefix of suffixes ``sa[i]`` and ``sa[i+1]``."""
    return kernels(impl).kasai(_symbols(t), sa)


def effective_lengths(symbols: np.ndarray) -> np.ndarray:
    """Length of each suffix up to and including its first sentinel."""
    n = len(symbols)
    idx = np.arange(n, dtype=np.int64)
    nxt = np.where(symbols == SENTINEL, idx, n)
    nxt = np.minimum.accumulate(nxt[::-1])[::-1]
    eff = np.where(nxt < n, nxt - idx + 1, n - idx)
    return eff.astype(np.int32)


@dataclass(eq=False)
class SuffixTree:
    """Array-based suffix tree, nodes numbered in preorder (root 0).

    ``rep[v]`` is the start of a suffix below v, so the edge into v spells
    ``text[rep[v] + str_depth[parent[v]] : rep[v] + str_depth[v]]``.
    ``leaf_of[p]`` is the leaf of the suffix starting at text position p.
    """

    text: np.ndarray
    parent: np.ndarray
    str_depth: np.ndarray
    edge_depth: np.ndarray
    rep: np.ndarray
    is_leaf: np.ndarray
    leaf_of: np.ndarray
    generalized: bool = False
    string_starts: np.ndarray | None = None
    _children: tuple | None = field(default=None, repr=False)

    @property
    def node_count(self) -> int:
        return len(self.parent)

    @property
    def leaf_count(self) -> int:
        return int(self.is_leaf.sum())

    @property
    def root(self) -> int:
        return 0

    def edge_label(self, v: int) -> tuple[int, int]:
        """Half-open text interval spelled by the edge into ``v``."""
        if v == 0:
            raise ValueError("the root has no incoming edge")
        start = int(self.rep[v] + self.str_depth[self.parent[v]])
        return start, int(self.rep[v] + self.str_depth[v])

    def path_label(self, v: int) -> np.ndarray:
        r = int(self.rep[v])
        return self.text[r : r + int(self.str_depth[v])]

    def _child_index(self):
        if self._children is None:
            par = self.parent[1:]
            order = np.argsort(par, kind="stable").astype(np.int32) + 1
            ptr = np.zeros(self.node_count + 1, dtype=np.int64)
            np.add.at(ptr, par + 1, 1)
            self._children = (np.cumsum(ptr), order)
        return self._children

    def children(self, v: int) -> list[tuple[int, int]]:
        """``(first symbol, child)`` pairs of ``v`` in ascending symbol order."""
        ptr, order = self._child_index()
        out = []
        base = int(self.str_depth[v])
        for c in order[ptr[v] : ptr[v + 1]]:
            out.append((int(self.text[self.rep[c] + base]), int(c)))
        return out

    def leaf_suffix(self, leaf: int) -> tuple[int, int]:
        """``(string index, start within string)`` of a leaf's representative suffix."""
        pos = int(self.rep[leaf])
        if self.string_starts is None:
            return 0, pos
        k = int(np.searchsorted(self.string_starts, pos, side="right") - 1)
        return k, pos - int(self.string_starts[k])


def build_suffix_tree(t, sa=None, lcp=None, impl=None) -> SuffixTree:
    """Suffix tree of a sentinel-terminated text from its suffix and LCP arrays."""
    k = kernels(impl)
    s = _symbols(t)
    if sa is None:
        sa = k.sais(s)
    if lcp is None:
        lcp = k.kasai(s, sa)
    parent, sd, ed, rep, leaf, leaf_of = k.build_tree(sa, lcp)
    return SuffixTree(s, parent, sd, ed, rep, leaf.view(bool), leaf_of)


def concatenate(strings: Sequence) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate sentinel-terminated integer strings; returns (text, start offsets)."""
    parts = [_symbols(w) for w in strings]
    for i, w in enumerate(parts):
        if len(w) == 0 or w[-1] != SENTINEL or (w[:-1] == SENTINEL).any():
            raise ValueError(f"string {i} must end with the sentinel and contain it only there")
    starts = np.zeros(len(parts), dtype=np.int64)
    if parts:
        starts[1:] = np.cumsum([len(w) for w in parts])[:-1]
        text = np.concatenate(parts).astype(np.int32)
    else:
        text = np.zeros(0, dtype=np.int32)
    return text, starts


def build_generalized_suffix_tree(strings: Sequence, impl=None) -> SuffixTree:
    """One leaf per distinct non-empty suffix of the (sentinel-terminated) strings."""
    text, starts = concatenate(strings)
    return generalized_tree_of_text(text, starts, impl=impl)


def generalized_tree_of_text(text: np.ndarray, starts: np.ndarray, impl=None) -> SuffixTree:
    k = kernels(impl)
    sa = k.sais(text)
    lcp = k.kasai(text, sa)
    eff = effective_lengths(text)
    parent, sd, ed, rep, leaf, leaf_of = k.build_tree(sa, lcp, eff)
    return SuffixTree(
        text, parent, sd, ed, rep, leaf.view(bool), leaf_of, True, np.asarray(starts)
    )
